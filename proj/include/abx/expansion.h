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

#ifndef ABX_EXPANSION_H_
#define ABX_EXPANSION_H_

#include <Eigen/Dense>
#include <future>
#include <list>
#include <map>
#include <memory>
#include <mutex>
#include <set>
#include <span>
#include <string>
#include <unordered_map>
#include <vector>

#include "abx/classifier.h"

namespace abx {

// The ambiguous-abbreviation vocabulary plus a read-through cache of the
// trained models behind it. Thread-safe: concurrent Get() calls for the same
// abbreviation share a single load.
class ModelRegistry {
 public:
  // capacity == 0 means unbounded; otherwise least-recently-used eviction.
  ModelRegistry(std::set<std::string> vocabulary,
                std::map<std::string, std::string> locators,
                size_t capacity = 0);

  const std::set<std::string> &vocabulary() const { return vocabulary_; }
  bool HasModel(const std::string &abbreviation) const {
    return locators_.count(abbreviation) > 0;
  }

  // nullptr when the abbreviation has no model file. Load failures throw.
  std::shared_ptr<const ClassifierModel> Get(const std::string &abbreviation);

  size_t loads() const;
  size_t cached() const;

 private:
  using ModelPtr = std::shared_ptr<const ClassifierModel>;

  std::set<std::string> vocabulary_;
  std::map<std::string, std::string> locators_;
  size_t capacity_;

  mutable std::mutex mu_;
  std::list<std::string> lru_;  // front = most recent
  struct Entry {
    ModelPtr model;
    std::list<std::string>::iterator lru_pos;
  };
  std::unordered_map<std::string, Entry> cache_;
  std::unordered_map<std::string, std::shared_future<ModelPtr>> inflight_;
  size_t loads_ = 0;
};

// Positions j with tokens[j] in the vocabulary, ascending; exact match.
std::vector<std::pair<int, std::string>> FindAmbiguous(
    std::span<const std::string> tokens, const std::set<std::string> &vocabulary);

struct Expansion {
  std::string abbreviation;
  int position = 0;
  std::string definition;  // canonical label at the argmax
  int label = 0;
  Eigen::VectorXd probabilities;
};

struct SkippedMention {
  std::string abbreviation;
  int position = 0;
  std::string reason;
};

struct ExpansionResult {
  std::vector<Expansion> expansions;
  std::vector<SkippedMention> skipped;
};

// Classifies every vocabulary hit. Hits without a model are reported in
// `skipped`. Throws DataError if a model's provider needs contextual input
// that `inputs` cannot supply, and FormatError for a corrupt model file.
ExpansionResult ExpandSentence(std::span<const std::string> tokens,
                               ModelRegistry &registry,
                               const ProviderInputs &inputs);

}  // namespace abx

#endif  // ABX_EXPANSION_H_
