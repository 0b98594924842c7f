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

#include "abx/dataset.h"

#include <algorithm>
#include <numeric>

#include "abx/binary_io.h"
#include "abx/errors.h"
#include "abx/random.h"

namespace abx {

std::string JoinTokens(std::span<const std::string> tokens) {
  std::string out;
  for (size_t i = 0; i < tokens.size(); ++i) {
    if (i) out.push_back(' ');
    out += tokens[i];
  }
  return out;
}

std::string LabeledInstance::Key() const { return JoinTokens(tokens); }

AmbiguityDecision AmbiguityFilter(const SenseInventory &inventory,
                                  const std::set<std::string> *allowlist,
                                  const std::set<std::string> *denylist) {
  const std::string &abbr = inventory.abbreviation;
  if (denylist && denylist->count(abbr)) return {false, "denylisted"};
  if (inventory.size() < 2) return {false, "not ambiguous"};
  if (allowlist && allowlist->count(abbr)) return {true, "allowlisted"};
  int64_t dominant = 0;
  for (const SenseGroup &g : inventory.groups) dominant = std::max(dominant, g.count);
  const int64_t total = inventory.total();
  // dominant / total >= 0.99 without rounding.
  if (total <= 0 || dominant * 100 >= total * 99) {
    return {false, "dominant >= 99%"};
  }
  return {true, "ambiguous"};
}

SplitSizes SplitSizesFor(size_t n) {
  if (n < 10) throw DataError("too few instances to split");
  const size_t held = n > 10000 ? 1000 : n / 10;
  return {n - 2 * held, held, held};
}

Splits SplitInstances(std::vector<LabeledInstance> instances, uint64_t seed) {
  const SplitSizes sizes = SplitSizesFor(instances.size());
  Rng rng(seed);
  Shuffle(instances, rng);
  Splits out;
  auto begin = std::make_move_iterator(instances.begin());
  out.dev.assign(begin, begin + static_cast<long>(sizes.dev));
  out.test.assign(begin + static_cast<long>(sizes.dev),
                  begin + static_cast<long>(sizes.dev + sizes.test));
  out.train.assign(begin + static_cast<long>(sizes.dev + sizes.test),
                   std::make_move_iterator(instances.end()));
  return out;
}

std::vector<int> AbbrevDataset::LabelsMissingFromTrain() const {
  std::set<int> in_train;
  for (const auto &x : train) in_train.insert(x.label);
  std::set<int> missing;
  for (const auto *split : {&dev, &test}) {
    for (const auto &x : *split) {
      if (!in_train.count(x.label)) missing.insert(x.label);
    }
  }
  return {missing.begin(), missing.end()};
}

uint64_t DatasetSeed(uint64_t run_seed, const std::string &abbreviation) {
  // splitmix64 finalizer over the run seed mixed with the name hash.
  uint64_t z = run_seed + 0x9e3779b97f4a7c15ULL * (Fnv1a64(abbreviation) | 1);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

BuildResult BuildDatasets(std::span<const RawLabeledInstance> raw,
                          std::vector<SenseInventory> inventories,
                          const BuildOptions &options) {
  std::sort(inventories.begin(), inventories.end(),
            [](const SenseInventory &a, const SenseInventory &b) {
              return a.abbreviation < b.abbreviation;
            });
  std::map<std::string, size_t> index;
  for (size_t i = 0; i < inventories.size(); ++i) {
    if (!index.emplace(inventories[i].abbreviation, i).second) {
      throw DataError("duplicate inventory for abbreviation '" +
                      inventories[i].abbreviation + "'");
    }
    for (SenseGroup &g : inventories[i].groups) g.count = 0;
  }

  BuildResult result;
  std::vector<std::vector<LabeledInstance>> labeled(inventories.size());
  for (const RawLabeledInstance &r : raw) {
    auto it = index.find(r.abbreviation);
    if (it == index.end()) {
      ++result.unmapped_instances;
      continue;
    }
    SenseInventory &inv = inventories[it->second];
    const std::optional<int> group = inv.GroupOf(r.raw_definition);
    if (!group) {
      ++result.unmapped_instances;
      continue;
    }
    ++inv.groups[static_cast<size_t>(*group)].count;
    labeled[it->second].push_back({r.abbreviation, r.tokens, r.position, *group});
  }

  for (size_t i = 0; i < inventories.size(); ++i) {
    SenseInventory &inv = inventories[i];
    FilterRecord record{inv.abbreviation,
                        AmbiguityFilter(inv, options.allowlist, options.denylist),
                        labeled[i].size(),
                        {}};
    if (record.decision.keep && labeled[i].size() < 10) {
      record.decision = {false, "too few instances to split"};
    }
    if (record.decision.keep) {
      AbbrevDataset ds;
      ds.abbreviation = inv.abbreviation;
      ds.seed = DatasetSeed(options.seed, inv.abbreviation);
      Splits splits = SplitInstances(std::move(labeled[i]), ds.seed);
      ds.train = std::move(splits.train);
      ds.dev = std::move(splits.dev);
      ds.test = std::move(splits.test);
      ds.inventory = inv;
      record.labels_missing_from_train = ds.LabelsMissingFromTrain();
      result.datasets.push_back(std::move(ds));
    }
    result.report.push_back(std::move(record));
  }
  return result;
}

DatasetStats ComputeStats(std::span<const AbbrevDataset> datasets) {
  if (datasets.empty()) throw DataError("no datasets to summarize");
  DatasetStats stats;
  stats.n_abbreviations = datasets.size();
  for (const AbbrevDataset &ds : datasets) {
    int64_t dominant = 0;
    for (const SenseGroup &g : ds.inventory.groups) {
      dominant = std::max(dominant, g.count);
    }
    const int64_t total = ds.inventory.total();
    stats.avg_instances += static_cast<double>(ds.size());
    stats.avg_definitions += static_cast<double>(ds.inventory.size());
    stats.avg_dominant_pct +=
        total > 0 ? 100.0 * static_cast<double>(dominant) / static_cast<double>(total)
                  : 0.0;
  }
  const double n = static_cast<double>(datasets.size());
  stats.avg_instances /= n;
  stats.avg_definitions /= n;
  stats.avg_dominant_pct /= n;
  return stats;
}

}  // namespace abx
