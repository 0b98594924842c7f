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

#ifndef ABX_DATASET_H_
#define ABX_DATASET_H_

#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <vector>

#include "abx/extraction.h"
#include "abx/grouping.h"

namespace abx {

struct LabeledInstance {
  std::string abbreviation;
  std::vector<std::string> tokens;
  int position = 0;
  int label = 0;

  // Sentence key shared with contextual embedding records: the tokens
  // joined by single spaces.
  std::string Key() const;

  bool operator==(const LabeledInstance &) const = default;
};

std::string JoinTokens(std::span<const std::string> tokens);

struct AmbiguityDecision {
  bool keep = false;
  std::string reason;
};

// Keep iff >= 2 groups, dominant share < 0.99 and not denylisted.
// Allowlisted abbreviations skip the dominance test only.
AmbiguityDecision AmbiguityFilter(const SenseInventory &inventory,
                                  const std::set<std::string> *allowlist,
                                  const std::set<std::string> *denylist);

struct SplitSizes {
  size_t train = 0, dev = 0, test = 0;
};

// dev = test = 1000 when n > 10000, else floor(n / 10) each. n < 10 throws.
SplitSizes SplitSizesFor(size_t n);

struct Splits {
  std::vector<LabeledInstance> train, dev, test;
};

// Seeded shuffle, then dev and test are taken from the front and the rest
// is train.
Splits SplitInstances(std::vector<LabeledInstance> instances, uint64_t seed);

struct AbbrevDataset {
  std::string abbreviation;
  SenseInventory inventory;
  std::vector<LabeledInstance> train, dev, test;
  uint64_t seed = 0;

  size_t size() const { return train.size() + dev.size() + test.size(); }
  // Inventory labels seen in dev/test but never in train.
  std::vector<int> LabelsMissingFromTrain() const;
};

struct FilterRecord {
  std::string abbreviation;
  AmbiguityDecision decision;
  size_t instances = 0;
  std::vector<int> labels_missing_from_train;
};

struct BuildResult {
  std::vector<AbbrevDataset> datasets;  // sorted by abbreviation
  std::vector<FilterRecord> report;     // one row per inventory
  size_t unmapped_instances = 0;        // raw definitions not in any group
};

struct BuildOptions {
  uint64_t seed = 0;
  const std::set<std::string> *allowlist = nullptr;
  const std::set<std::string> *denylist = nullptr;
};

// Recounts every inventory from `raw`, filters, labels and splits.
// Abbreviations that pass the filter but have fewer than 10 instances are
// dropped with reason "too few instances to split".
BuildResult BuildDatasets(std::span<const RawLabeledInstance> raw,
                          std::vector<SenseInventory> inventories,
                          const BuildOptions &options);

// Per-abbreviation seed derived from the run seed.
uint64_t DatasetSeed(uint64_t run_seed, const std::string &abbreviation);

struct DatasetStats {
  size_t n_abbreviations = 0;
  double avg_instances = 0;
  double avg_definitions = 0;
  double avg_dominant_pct = 0;
};

// Means over datasets of instance count, group count and dominant-group
// percentage (from inventory counts). Empty input throws.
DatasetStats ComputeStats(std::span<const AbbrevDataset> datasets);

}  // namespace abx

#endif  // ABX_DATASET_H_
