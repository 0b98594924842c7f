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

#ifndef ABX_GROUPING_H_
#define ABX_GROUPING_H_

#include <cstdint>
#include <istream>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

namespace abx {

using MeshSet = std::set<std::string>;

// Definition surface -> MeSH descriptor ids. Keys are matched after
// lowercasing and collapsing whitespace runs.
class MeshFeatureMap {
 public:
  static std::string NormalizeKey(std::string_view surface);

  void Add(std::string_view surface, MeshSet descriptors);

  // Empty set for unmapped surfaces.
  const MeshSet &Lookup(std::string_view surface) const;

  size_t size() const { return map_.size(); }

  // TSV: surface<TAB>comma-separated descriptor ids. Blank lines and '#'
  // comments are skipped; a line without a tab throws DataError.
  static MeshFeatureMap Parse(std::istream &in);

 private:
  std::unordered_map<std::string, MeshSet> map_;
};

// |a ∩ b| / sqrt(|a| |b|); 0 when either set is empty.
double MeshSimilarity(const MeshSet &a, const MeshSet &b);

// Plain Levenshtein distance over bytes.
size_t Levenshtein(std::string_view a, std::string_view b);

// Levenshtein of the ASCII-lowercased strings over the longer length; 0 for
// two empty strings.
double NormalizedEditDistance(std::string_view a, std::string_view b);

struct SenseGroup {
  int group_id = 0;
  std::string canonical;
  std::set<std::string> members;
  int64_t count = 0;

  bool operator==(const SenseGroup &) const = default;
};

// The label space of one abbreviation.
struct SenseInventory {
  std::string abbreviation;
  std::vector<SenseGroup> groups;

  size_t size() const { return groups.size(); }
  int64_t total() const;
  // Group holding `surface`, if any.
  std::optional<int> GroupOf(const std::string &surface) const;
  std::vector<std::string> Canonicals() const;

  bool operator==(const SenseInventory &) const = default;
};

struct GroupingThresholds {
  double mesh = 0.5;  // merge when similarity >= this
  double edit = 0.2;  // or when normalized edit distance <= this
};

// Connected components over distinct surfaces with an edge whenever either
// threshold is met. Canonical = most frequent member (ties: smallest
// string); group ids by descending count (ties: canonical string).
SenseInventory GroupDefinitions(std::string_view abbreviation,
                                const std::map<std::string, int64_t> &surface_counts,
                                const MeshFeatureMap &mesh,
                                const GroupingThresholds &thresholds);

}  // namespace abx

#endif  // ABX_GROUPING_H_
