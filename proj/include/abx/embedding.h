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

#ifndef ABX_EMBEDDING_H_
#define ABX_EMBEDDING_H_

#include <Eigen/Dense>
#include <array>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

namespace abx {

// L x D token representation; row i embeds token i.
using EmbeddingSequence = Eigen::MatrixXd;

// Token -> index. Known tokens occupy 0..n-1 in the given order and the
// unknown token takes the last index n.
class Vocabulary {
 public:
  static constexpr std::string_view kUnknown = "<unk>";

  Vocabulary() = default;
  // Duplicates and the literal unknown marker are dropped.
  explicit Vocabulary(std::span<const std::string> tokens);

  // Sorted distinct tokens of `sentences`.
  static Vocabulary FromSentences(
      std::span<const std::vector<std::string>> sentences);

  int Index(std::string_view token) const;
  int unknown_index() const { return static_cast<int>(tokens_.size()); }
  size_t size() const { return tokens_.size() + 1; }
  // Known tokens in index order, without the unknown marker.
  const std::vector<std::string> &tokens() const { return tokens_; }

  bool operator==(const Vocabulary &other) const {
    return tokens_ == other.tokens_;
  }

 private:
  std::vector<std::string> tokens_;
  std::unordered_map<std::string, int> index_;
};

// Count vector over the vocabulary; OOV tokens count toward the unknown slot.
Eigen::VectorXd BowVector(std::span<const std::string> tokens,
                          const Vocabulary &vocab);

// Row i = table row of tokens[i] (unknown row for OOV).
EmbeddingSequence EmbedStatic(std::span<const std::string> tokens,
                              const Vocabulary &vocab,
                              const Eigen::MatrixXd &table);

struct MixingParams {
  Eigen::Vector3d raw = Eigen::Vector3d::Zero();
  double gamma = 1.0;
};

Eigen::Vector3d Softmax3(const Eigen::Vector3d &raw);

// Three precomputed contextual layers for one sentence.
struct ContextualLayerRecord {
  std::string key;
  std::array<Eigen::MatrixXf, 3> layers;

  Eigen::Index length() const { return layers[0].rows(); }
  Eigen::Index dim() const { return layers[0].cols(); }
};

// gamma * sum_j softmax(raw)_j * layer_j. Throws DataError if the three
// layers disagree in shape.
EmbeddingSequence MixLayers(const ContextualLayerRecord &record,
                            const MixingParams &mix);

// Keyed collection of contextual records backed by the CTXE file format:
//   "CTXE", u32 version=1, u32 D, then per record
//   u16 key length, key bytes, u32 L, 3*L*D little-endian f32
//   (layer-major, row-major within a layer).
// Read-only after loading; safe for concurrent lookups.
class ContextualStore {
 public:
  static constexpr uint32_t kVersion = 1;

  explicit ContextualStore(uint32_t dim = 0) : dim_(dim) {}

  static ContextualStore Parse(std::string_view bytes);
  static ContextualStore Load(const std::string &path);

  // Throws DataError on a key collision or a shape mismatch.
  void Add(ContextualLayerRecord record);
  const ContextualLayerRecord *Find(const std::string &key) const;

  std::string Serialize() const;
  void Save(const std::string &path) const;

  uint32_t dim() const { return dim_; }
  size_t size() const { return order_.size(); }
  // Records in insertion order.
  const std::vector<std::string> &keys() const { return order_; }

 private:
  uint32_t dim_;
  std::unordered_map<std::string, ContextualLayerRecord> records_;
  std::vector<std::string> order_;
};

}  // namespace abx

#endif  // ABX_EMBEDDING_H_
