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

#include "abx/pipeline.h"

#include <algorithm>
#include <atomic>
#include <exception>
#include <thread>

namespace abx {

void ParallelFor(size_t n, size_t jobs, const std::function<void(size_t)> &fn) {
  jobs = std::max<size_t>(1, std::min(jobs, n));
  if (jobs == 1) {
    for (size_t i = 0; i < n; ++i) fn(i);
    return;
  }
  std::vector<std::exception_ptr> errors(n);
  std::atomic<size_t> next{0};
  {
    std::vector<std::jthread> workers;
    for (size_t w = 0; w < jobs; ++w) {
      workers.emplace_back([&] {
        for (size_t i = next++; i < n; i = next++) {
          try {
            fn(i);
          } catch (...) {
            errors[i] = std::current_exception();
          }
        }
      });
    }
  }
  for (auto &e : errors) {
    if (e) std::rethrow_exception(e);
  }
}

std::vector<RawLabeledInstance> ExtractInstances(
    std::span<const AbstractRecord> records, size_t jobs) {
  std::vector<std::vector<RawLabeledInstance>> per(records.size());
  ParallelFor(records.size(), jobs, [&](size_t i) {
    per[i] = LabelAbstract(TokenizeAbstract(records[i]));
  });
  std::vector<RawLabeledInstance> out;
  for (auto &v : per) {
    out.insert(out.end(), std::make_move_iterator(v.begin()),
               std::make_move_iterator(v.end()));
  }
  return out;
}

std::map<std::string, std::map<std::string, int64_t>> CountSurfaces(
    std::span<const RawLabeledInstance> raw) {
  std::map<std::string, std::map<std::string, int64_t>> counts;
  for (const RawLabeledInstance &r : raw) ++counts[r.abbreviation][r.raw_definition];
  return counts;
}

std::vector<SenseInventory> GroupInstances(
    std::span<const RawLabeledInstance> raw, const MeshFeatureMap &mesh,
    const GroupingThresholds &thresholds, size_t jobs) {
  const auto counts = CountSurfaces(raw);
  std::vector<const std::pair<const std::string,
                              std::map<std::string, int64_t>> *> entries;
  for (const auto &e : counts) entries.push_back(&e);
  std::vector<SenseInventory> out(entries.size());
  ParallelFor(entries.size(), jobs, [&](size_t i) {
    out[i] = GroupDefinitions(entries[i]->first, entries[i]->second, mesh,
                              thresholds);
  });
  return out;
}

}  // namespace abx
