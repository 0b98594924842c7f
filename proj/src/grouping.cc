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

#include "abx/grouping.h"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <numeric>
#include <sstream>

#include "abx/errors.h"

namespace abx {
namespace {

std::string AsciiLower(std::string_view s) {
  std::string out(s);
  std::transform(out.begin(), out.end(), out.begin(),
                 [](unsigned char c) { return std::tolower(c); });
  return out;
}

class DisjointSets {
 public:
  explicit DisjointSets(size_t n) : parent_(n) {
    std::iota(parent_.begin(), parent_.end(), size_t{0});
  }

  size_t Find(size_t x) {
    while (parent_[x] != x) {
      parent_[x] = parent_[parent_[x]];
      x = parent_[x];
    }
    return x;
  }

  // The smaller root wins, so the result does not depend on edge order.
  void Unite(size_t a, size_t b) {
    a = Find(a);
    b = Find(b);
    if (a == b) return;
    if (a < b) {
      parent_[b] = a;
    } else {
      parent_[a] = b;
    }
  }

 private:
  std::vector<size_t> parent_;
};

}  // namespace

std::string MeshFeatureMap::NormalizeKey(std::string_view surface) {
  std::string out;
  bool pending_space = false;
  for (char c : surface) {
    if (std::isspace(static_cast<unsigned char>(c))) {
      pending_space = !out.empty();
      continue;
    }
    if (pending_space) out.push_back(' ');
    pending_space = false;
    out.push_back(static_cast<char>(std::tolower(static_cast<unsigned char>(c))));
  }
  return out;
}

void MeshFeatureMap::Add(std::string_view surface, MeshSet descriptors) {
  MeshSet &slot = map_[NormalizeKey(surface)];
  slot.insert(descriptors.begin(), descriptors.end());
}

const MeshSet &MeshFeatureMap::Lookup(std::string_view surface) const {
  static const MeshSet kEmpty;
  auto it = map_.find(NormalizeKey(surface));
  return it == map_.end() ? kEmpty : it->second;
}

MeshFeatureMap MeshFeatureMap::Parse(std::istream &in) {
  MeshFeatureMap map;
  std::string line;
  size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty() || line[0] == '#') continue;
    const size_t tab = line.find('\t');
    if (tab == std::string::npos) {
      throw DataError("MeSH map line " + std::to_string(line_no) +
                      ": expected surface<TAB>descriptors");
    }
    MeshSet ids;
    std::stringstream ss(line.substr(tab + 1));
    std::string id;
    while (std::getline(ss, id, ',')) {
      const auto b = id.find_first_not_of(" \t");
      if (b == std::string::npos) continue;
      const auto e = id.find_last_not_of(" \t");
      ids.insert(id.substr(b, e - b + 1));
    }
    map.Add(line.substr(0, tab), std::move(ids));
  }
  return map;
}

double MeshSimilarity(const MeshSet &a, const MeshSet &b) {
  if (a.empty() || b.empty()) return 0.0;
  size_t common = 0;
  auto ia = a.begin();
  auto ib = b.begin();
  while (ia != a.end() && ib != b.end()) {
    if (*ia < *ib) {
      ++ia;
    } else if (*ib < *ia) {
      ++ib;
    } else {
      ++common;
      ++ia;
      ++ib;
    }
  }
  return static_cast<double>(common) /
         std::sqrt(static_cast<double>(a.size()) * static_cast<double>(b.size()));
}

size_t Levenshtein(std::string_view a, std::string_view b) {
  if (a.size() < b.size()) std::swap(a, b);
  std::vector<size_t> row(b.size() + 1);
  std::iota(row.begin(), row.end(), size_t{0});
  for (size_t i = 1; i <= a.size(); ++i) {
    size_t diag = row[0];
    row[0] = i;
    for (size_t j = 1; j <= b.size(); ++j) {
      const size_t up = row[j];
      row[j] = std::min({row[j] + 1, row[j - 1] + 1,
                         diag + (a[i - 1] == b[j - 1] ? 0 : 1)});
      diag = up;
    }
  }
  return row[b.size()];
}

double NormalizedEditDistance(std::string_view a, std::string_view b) {
  const size_t longest = std::max(a.size(), b.size());
  if (longest == 0) return 0.0;
  return static_cast<double>(Levenshtein(AsciiLower(a), AsciiLower(b))) /
         static_cast<double>(longest);
}

int64_t SenseInventory::total() const {
  int64_t t = 0;
  for (const SenseGroup &g : groups) t += g.count;
  return t;
}

std::optional<int> SenseInventory::GroupOf(const std::string &surface) const {
  for (const SenseGroup &g : groups) {
    if (g.members.count(surface)) return g.group_id;
  }
  return std::nullopt;
}

std::vector<std::string> SenseInventory::Canonicals() const {
  std::vector<std::string> out;
  out.reserve(groups.size());
  for (const SenseGroup &g : groups) out.push_back(g.canonical);
  return out;
}

SenseInventory GroupDefinitions(std::string_view abbreviation,
                                const std::map<std::string, int64_t> &surface_counts,
                                const MeshFeatureMap &mesh,
                                const GroupingThresholds &thresholds) {
  // std::map gives a sorted, insertion-order independent node numbering.
  std::vector<const std::string *> surfaces;
  std::vector<int64_t> counts;
  for (const auto &[surface, count] : surface_counts) {
    surfaces.push_back(&surface);
    counts.push_back(count);
  }
  const size_t n = surfaces.size();

  DisjointSets sets(n);
  for (size_t i = 0; i < n; ++i) {
    const MeshSet &mi = mesh.Lookup(*surfaces[i]);
    for (size_t j = i + 1; j < n; ++j) {
      if (sets.Find(i) == sets.Find(j)) continue;
      const MeshSet &mj = mesh.Lookup(*surfaces[j]);
      // Unmapped surfaces rely on edit distance alone.
      const bool mesh_close = !mi.empty() && !mj.empty() &&
                              MeshSimilarity(mi, mj) >= thresholds.mesh;
      if (mesh_close ||
          NormalizedEditDistance(*surfaces[i], *surfaces[j]) <= thresholds.edit) {
        sets.Unite(i, j);
      }
    }
  }

  std::map<size_t, SenseGroup> by_root;
  for (size_t i = 0; i < n; ++i) {
    SenseGroup &g = by_root[sets.Find(i)];
    g.members.insert(*surfaces[i]);
    g.count += counts[i];
    const int64_t best =
        g.canonical.empty() ? -1 : surface_counts.at(g.canonical);
    // Members arrive in ascending string order, so strict > keeps the
    // lexicographically smallest among equally frequent surfaces.
    if (counts[i] > best) g.canonical = *surfaces[i];
  }

  SenseInventory inventory;
  inventory.abbreviation = std::string(abbreviation);
  for (auto &[root, group] : by_root) inventory.groups.push_back(std::move(group));
  std::sort(inventory.groups.begin(), inventory.groups.end(),
            [](const SenseGroup &a, const SenseGroup &b) {
              if (a.count != b.count) return a.count > b.count;
              return a.canonical < b.canonical;
            });
  for (size_t i = 0; i < inventory.groups.size(); ++i) {
    inventory.groups[i].group_id = static_cast<int>(i);
  }
  return inventory;
}

}  // namespace abx
