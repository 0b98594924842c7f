// Copyright 2026 The abx Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "abx/model_io.h"

#include "abx/binary_io.h"
#include "abx/errors.h"

namespace abx {

std::string SerializeModel(const ClassifierModel &model) {
  ByteWriter w;
  w.Bytes("DCBM");
  w.U32(kModelFormatVersion);
  w.U8(static_cast<uint8_t>(model.provider));
  w.ShortString(model.abbreviation);
  w.U64(model.seed);
  const FfnParams &ffn = model.params.ffn;
  w.U32(static_cast<uint32_t>(model.input_dim()));
  w.U32(static_cast<uint32_t>(model.hidden_dim()));
  w.U32(static_cast<uint32_t>(model.num_labels()));
  w.U32(static_cast<uint32_t>(ffn.hidden_w.size()));
  for (const auto &hw : ffn.hidden_w) w.U32(static_cast<uint32_t>(hw.rows()));
  for (const std::string &label : model.labels) w.String(label);
  w.U32(static_cast<uint32_t>(model.vocab.tokens().size()));
  for (const std::string &t : model.vocab.tokens()) w.String(t);

  uint32_t blocks = 0;
  VisitBlocks(model.params, [&blocks](const std::string &, const double *,
                                      Eigen::Index, Eigen::Index) { ++blocks; });
  w.U32(blocks);
  VisitBlocks(model.params, [&w](const std::string &name, const double *data,
                                 Eigen::Index rows, Eigen::Index cols) {
    w.ShortString(name);
    w.U32(static_cast<uint32_t>(rows));
    w.U32(static_cast<uint32_t>(cols));
    for (Eigen::Index i = 0; i < rows * cols; ++i) w.F64(data[i]);
  });
  const uint64_t checksum = Fnv1a64(w.buffer());
  w.U64(checksum);
  return w.Release();
}

ClassifierModel ParseModel(std::string_view bytes) {
  ByteReader r(bytes);
  if (r.remaining() < 4 || r.Bytes(4) != "DCBM") {
    throw FormatError("bad model file magic", 0);
  }
  size_t at = r.offset();
  const uint32_t version = r.U32();
  if (version != kModelFormatVersion) {
    throw FormatError("unsupported model version " + std::to_string(version),
                      at);
  }
  at = r.offset();
  const uint8_t tag = r.U8();
  if (tag > static_cast<uint8_t>(Provider::kDecbae)) {
    throw FormatError("unknown provider tag " + std::to_string(tag), at);
  }
  const auto provider = static_cast<Provider>(tag);
  std::string abbreviation = r.ShortString();
  const uint64_t seed = r.U64();
  const uint32_t input_dim = r.U32();
  const uint32_t hidden_dim = r.U32();
  at = r.offset();
  const uint32_t k = r.U32();
  if (k == 0) throw FormatError("model has no labels", at);
  const uint32_t layers = r.U32();
  if (layers > r.remaining() / 4) {
    throw FormatError("hidden-layer count exceeds file size", r.offset() - 4);
  }
  ModelShape shape;
  shape.provider = provider;
  shape.input_dim = input_dim;
  shape.hidden_dim = hidden_dim;
  shape.ffn_widths.clear();
  for (uint32_t l = 0; l < layers; ++l) {
    at = r.offset();
    const uint32_t width = r.U32();
    if (width == 0) throw FormatError("zero FFN width", at);
    shape.ffn_widths.push_back(width);
  }
  std::vector<std::string> labels;
  for (uint32_t i = 0; i < k; ++i) labels.push_back(r.String());
  at = r.offset();
  const uint32_t vocab_size = r.U32();
  if (vocab_size > r.remaining() / 4) {
    throw FormatError("vocabulary size exceeds file size", at);
  }
  std::vector<std::string> tokens;
  tokens.reserve(vocab_size);
  for (uint32_t i = 0; i < vocab_size; ++i) tokens.push_back(r.String());
  Vocabulary vocab(tokens);
  if (vocab.tokens().size() != vocab_size) {
    throw FormatError("vocabulary has duplicate tokens", at);
  }
  if (provider == Provider::kBow && input_dim != vocab.size()) {
    throw FormatError("bag-of-words input dimension does not match vocabulary",
                      at);
  }
  if (UsesLstm(provider) != (hidden_dim > 0)) {
    throw FormatError("hidden dimension inconsistent with provider", at);
  }

  // Expected layout; values are overwritten block by block below.
  ClassifierModel model;
  try {
    model = InitModel(std::move(abbreviation), shape, std::move(labels),
                      std::move(vocab), seed);
  } catch (const DataError &e) {
    throw FormatError(std::string("invalid model dimensions: ") + e.what(), at);
  }

  at = r.offset();
  uint32_t expected_blocks = 0;
  VisitBlocks(model.params, [&](const std::string &, const double *,
                                Eigen::Index, Eigen::Index) { ++expected_blocks; });
  const uint32_t blocks = r.U32();
  if (blocks != expected_blocks) {
    throw FormatError("expected " + std::to_string(expected_blocks) +
                          " parameter blocks, found " + std::to_string(blocks),
                      at);
  }
  VisitBlocks(model.params, [&r](const std::string &name, double *data,
                                 Eigen::Index rows, Eigen::Index cols) {
    const size_t block_at = r.offset();
    const std::string got = r.ShortString();
    if (got != name) {
      throw FormatError("expected block '" + name + "', found '" + got + "'",
                        block_at);
    }
    const uint32_t got_rows = r.U32();
    const uint32_t got_cols = r.U32();
    if (got_rows != rows || got_cols != cols) {
      throw FormatError("block '" + name + "' has shape " +
                            std::to_string(got_rows) + "x" +
                            std::to_string(got_cols) + ", expected " +
                            std::to_string(rows) + "x" + std::to_string(cols),
                        block_at);
    }
    if (r.remaining() / 8 < static_cast<size_t>(rows * cols)) {
      throw FormatError("truncated block '" + name + "'", block_at);
    }
    for (Eigen::Index i = 0; i < rows * cols; ++i) data[i] = r.F64();
  });
  const size_t body_end = r.offset();
  const uint64_t stored = r.U64();
  if (stored != Fnv1a64(bytes.substr(0, body_end))) {
    throw FormatError("model checksum mismatch", body_end);
  }
  if (!r.done()) throw FormatError("trailing bytes after model", r.offset());
  return model;
}

void SaveModel(const ClassifierModel &model, const std::string &path) {
  AtomicWriteFile(path, SerializeModel(model));
}

ClassifierModel LoadModel(const std::string &path) {
  return ParseModel(ReadFileBytes(path));
}

}  // namespace abx
