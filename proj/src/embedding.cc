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

#include "abx/embedding.h"

#include <algorithm>
#include <set>

#include "abx/binary_io.h"
#include "abx/errors.h"

namespace abx {

Vocabulary::Vocabulary(std::span<const std::string> tokens) {
  for (const std::string &t : tokens) {
    if (t == kUnknown) continue;
    if (index_.emplace(t, static_cast<int>(tokens_.size())).second) {
      tokens_.push_back(t);
    }
  }
}

Vocabulary Vocabulary::FromSentences(
    std::span<const std::vector<std::string>> sentences) {
  std::set<std::string> distinct;
  for (const auto &s : sentences) distinct.insert(s.begin(), s.end());
  std::vector<std::string> sorted(distinct.begin(), distinct.end());
  return Vocabulary(sorted);
}

int Vocabulary::Index(std::string_view token) const {
  auto it = index_.find(std::string(token));
  return it == index_.end() ? unknown_index() : it->second;
}

Eigen::VectorXd BowVector(std::span<const std::string> tokens,
                          const Vocabulary &vocab) {
  Eigen::VectorXd counts = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(vocab.size()));
  for (const std::string &t : tokens) counts[vocab.Index(t)] += 1.0;
  return counts;
}

EmbeddingSequence EmbedStatic(std::span<const std::string> tokens,
                              const Vocabulary &vocab,
                              const Eigen::MatrixXd &table) {
  if (table.rows() != static_cast<Eigen::Index>(vocab.size())) {
    throw DataError("embedding table has " + std::to_string(table.rows()) +
                    " rows, vocabulary has " + std::to_string(vocab.size()));
  }
  EmbeddingSequence e(static_cast<Eigen::Index>(tokens.size()), table.cols());
  for (size_t i = 0; i < tokens.size(); ++i) {
    e.row(static_cast<Eigen::Index>(i)) = table.row(vocab.Index(tokens[i]));
  }
  return e;
}

Eigen::Vector3d Softmax3(const Eigen::Vector3d &raw) {
  const Eigen::Vector3d z = (raw.array() - raw.maxCoeff()).exp();
  return z / z.sum();
}

EmbeddingSequence MixLayers(const ContextualLayerRecord &record,
                            const MixingParams &mix) {
  const auto &l = record.layers;
  for (int j = 1; j < 3; ++j) {
    if (l[j].rows() != l[0].rows() || l[j].cols() != l[0].cols()) {
      throw DataError("contextual record '" + record.key +
                      "': layer shapes differ");
    }
  }
  const Eigen::Vector3d s = Softmax3(mix.raw);
  EmbeddingSequence e = s[0] * l[0].cast<double>();
  e += s[1] * l[1].cast<double>();
  e += s[2] * l[2].cast<double>();
  return mix.gamma * e;
}

void ContextualStore::Add(ContextualLayerRecord record) {
  for (const auto &layer : record.layers) {
    if (layer.rows() != record.length() || layer.cols() != record.dim()) {
      throw DataError("contextual record '" + record.key +
                      "': layer shapes differ");
    }
  }
  if (record.dim() != static_cast<Eigen::Index>(dim_)) {
    throw DataError("contextual record '" + record.key + "' has dimension " +
                    std::to_string(record.dim()) + ", store expects " +
                    std::to_string(dim_));
  }
  if (records_.count(record.key)) {
    throw DataError("duplicate contextual record key '" + record.key + "'");
  }
  order_.push_back(record.key);
  std::string key = record.key;
  records_.emplace(std::move(key), std::move(record));
}

const ContextualLayerRecord *ContextualStore::Find(const std::string &key) const {
  auto it = records_.find(key);
  return it == records_.end() ? nullptr : &it->second;
}

std::string ContextualStore::Serialize() const {
  ByteWriter w;
  w.Bytes("CTXE");
  w.U32(kVersion);
  w.U32(dim_);
  for (const std::string &key : order_) {
    const ContextualLayerRecord &r = records_.at(key);
    w.ShortString(r.key);
    w.U32(static_cast<uint32_t>(r.length()));
    for (const auto &layer : r.layers) {
      for (Eigen::Index i = 0; i < layer.rows(); ++i) {
        for (Eigen::Index d = 0; d < layer.cols(); ++d) w.F32(layer(i, d));
      }
    }
  }
  return w.Release();
}

void ContextualStore::Save(const std::string &path) const {
  AtomicWriteFile(path, Serialize());
}

ContextualStore ContextualStore::Parse(std::string_view bytes) {
  ByteReader r(bytes);
  if (r.remaining() < 4 || r.Bytes(4) != "CTXE") {
    throw FormatError("bad contextual file magic", 0);
  }
  const size_t version_at = r.offset();
  const uint32_t version = r.U32();
  if (version != kVersion) {
    throw FormatError("unsupported contextual file version " +
                          std::to_string(version),
                      version_at);
  }
  const uint32_t dim = r.U32();
  if (dim == 0) throw FormatError("contextual dimension is zero", r.offset() - 4);
  ContextualStore store(dim);
  while (!r.done()) {
    const size_t record_at = r.offset();
    ContextualLayerRecord rec;
    rec.key = r.ShortString();
    const uint32_t len = r.U32();
    const uint64_t floats = 3ULL * len * dim;
    if (r.remaining() < floats * 4) {
      throw FormatError("truncated contextual record '" + rec.key + "'",
                        record_at);
    }
    for (auto &layer : rec.layers) {
      layer.resize(len, dim);
      for (uint32_t i = 0; i < len; ++i) {
        for (uint32_t d = 0; d < dim; ++d) layer(i, d) = r.F32();
      }
    }
    if (store.Find(rec.key)) {
      throw FormatError("duplicate contextual record key '" + rec.key + "'",
                        record_at);
    }
    store.Add(std::move(rec));
  }
  return store;
}

ContextualStore ContextualStore::Load(const std::string &path) {
  return Parse(ReadFileBytes(path));
}

}  // namespace abx
