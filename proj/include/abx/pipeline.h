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

#ifndef ABX_PIPELINE_H_
#define ABX_PIPELINE_H_

#include <cstddef>
#include <functional>
#include <map>
#include <span>
#include <vector>

#include "abx/corpus.h"
#include "abx/extraction.h"
#include "abx/grouping.h"

namespace abx {

// Runs fn(i) for i in [0, n) on up to `jobs` threads. Exceptions are
// rethrown on the caller's thread (the one from the lowest index wins).
void ParallelFor(size_t n, size_t jobs, const std::function<void(size_t)> &fn);

// Tokenizes and labels every abstract; output is in corpus order.
std::vector<RawLabeledInstance> ExtractInstances(
    std::span<const AbstractRecord> records, size_t jobs = 1);

// Surface counts per abbreviation.
std::map<std::string, std::map<std::string, int64_t>> CountSurfaces(
    std::span<const RawLabeledInstance> raw);

// One inventory per abbreviation, sorted by abbreviation.
std::vector<SenseInventory> GroupInstances(
    std::span<const RawLabeledInstance> raw, const MeshFeatureMap &mesh,
    const GroupingThresholds &thresholds, size_t jobs = 1);

}  // namespace abx

#endif  // ABX_PIPELINE_H_
