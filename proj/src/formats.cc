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

#include "abx/formats.h"

#include <cinttypes>
#include <cstdio>
#include <filesystem>
#include <iomanip>
#include <sstream>

#include "abx/errors.h"

namespace abx {
namespace {

std::vector<std::string> SplitTabs(const std::string &line) {
  std::vector<std::string> fields;
  size_t start = 0;
  while (true) {
    const size_t tab = line.find('\t', start);
    if (tab == std::string::npos) {
      fields.push_back(line.substr(start));
      return fields;
    }
    fields.push_back(line.substr(start, tab - start));
    start = tab + 1;
  }
}

std::vector<std::string> SplitSpaces(const std::string &s) {
  std::vector<std::string> out;
  std::istringstream ss(s);
  std::string t;
  while (ss >> t) out.push_back(t);
  return out;
}

// Calls fn(line_no, fields) for each data line.
template <typename F>
void ForEachRecord(std::istream &in, F &&fn) {
  std::string line;
  size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty() || line[0] == '#') continue;
    fn(line_no, SplitTabs(line));
  }
}

[[noreturn]] void Malformed(const char *what, size_t line_no,
                            const std::string &why) {
  throw DataError(std::string(what) + " line " + std::to_string(line_no) +
                  ": " + why);
}

void ExpectFields(const char *what, size_t line_no,
                  const std::vector<std::string> &f, size_t n) {
  if (f.size() != n) {
    Malformed(what, line_no,
              "expected " + std::to_string(n) + " fields, found " +
                  std::to_string(f.size()));
  }
}

int ParseInt(const char *what, size_t line_no, const std::string &s) {
  try {
    size_t used = 0;
    const long v = std::stol(s, &used);
    if (used != s.size() || v < INT32_MIN || v > INT32_MAX) throw 0;
    return static_cast<int>(v);
  } catch (...) {
    Malformed(what, line_no, "not an integer: '" + s + "'");
  }
}

std::string EscapeMember(const std::string &s) {
  std::string out;
  for (char c : s) {
    if (c == '|' || c == '\\') out.push_back('\\');
    out.push_back(c);
  }
  return out;
}

std::vector<std::string> SplitMembers(const std::string &s) {
  std::vector<std::string> out(1);
  for (size_t i = 0; i < s.size(); ++i) {
    if (s[i] == '\\' && i + 1 < s.size()) {
      out.back().push_back(s[++i]);
    } else if (s[i] == '|') {
      out.emplace_back();
    } else {
      out.back().push_back(s[i]);
    }
  }
  return out;
}

void CheckInstance(const char *what, size_t line_no, const LabeledInstance &x) {
  if (x.tokens.empty()) Malformed(what, line_no, "no tokens");
  if (x.position < 0 || static_cast<size_t>(x.position) >= x.tokens.size()) {
    Malformed(what, line_no, "position out of range");
  }
  if (x.tokens[static_cast<size_t>(x.position)] != x.abbreviation) {
    Malformed(what, line_no, "token at position is not the abbreviation");
  }
  if (x.label < 0) Malformed(what, line_no, "negative label");
}

}  // namespace

std::string FormatReal(double v, int precision) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.*f", precision, v);
  return buf;
}

std::string FileStem(const std::string &abbreviation) {
  std::string out;
  for (char c : abbreviation) {
    const bool safe = (c >= 'A' && c <= 'Z') || (c >= 'a' && c <= 'z') ||
                      (c >= '0' && c <= '9') || c == '-';
    if (safe) {
      out.push_back(c);
    } else {
      char hex[4];
      std::snprintf(hex, sizeof(hex), "_%02X", static_cast<unsigned char>(c));
      out += hex;
    }
  }
  return out;
}

std::string FormatRawInstances(std::span<const RawLabeledInstance> raw) {
  std::ostringstream out;
  for (const RawLabeledInstance &r : raw) {
    out << r.abbreviation << '\t' << r.raw_definition << '\t' << r.abstract_id
        << '\t' << r.sentence_index << '\t' << r.defining_sentence_index << '\t'
        << r.position << '\t' << JoinTokens(r.tokens) << '\n';
  }
  return out.str();
}

std::vector<RawLabeledInstance> ParseRawInstances(std::istream &in) {
  static const char *kWhat = "raw instance";
  std::vector<RawLabeledInstance> out;
  ForEachRecord(in, [&](size_t line_no, const std::vector<std::string> &f) {
    ExpectFields(kWhat, line_no, f, 7);
    RawLabeledInstance r;
    r.abbreviation = f[0];
    r.raw_definition = f[1];
    r.abstract_id = f[2];
    r.sentence_index = ParseInt(kWhat, line_no, f[3]);
    r.defining_sentence_index = ParseInt(kWhat, line_no, f[4]);
    r.position = ParseInt(kWhat, line_no, f[5]);
    r.tokens = SplitSpaces(f[6]);
    if (r.position < 0 || static_cast<size_t>(r.position) >= r.tokens.size() ||
        r.tokens[static_cast<size_t>(r.position)] != r.abbreviation) {
      Malformed(kWhat, line_no, "token at position is not the abbreviation");
    }
    out.push_back(std::move(r));
  });
  return out;
}

std::string FormatInventories(std::span<const SenseInventory> inventories) {
  std::ostringstream out;
  for (const SenseInventory &inv : inventories) {
    for (const SenseGroup &g : inv.groups) {
      out << inv.abbreviation << '\t' << g.group_id << '\t' << g.canonical << '\t';
      bool first = true;
      for (const std::string &m : g.members) {
        if (!first) out << '|';
        out << EscapeMember(m);
        first = false;
      }
      out << '\n';
    }
  }
  return out.str();
}

std::vector<SenseInventory> ParseInventories(std::istream &in) {
  static const char *kWhat = "inventory";
  std::map<std::string, SenseInventory> by_abbr;
  ForEachRecord(in, [&](size_t line_no, const std::vector<std::string> &f) {
    ExpectFields(kWhat, line_no, f, 4);
    SenseInventory &inv = by_abbr[f[0]];
    inv.abbreviation = f[0];
    SenseGroup g;
    g.group_id = ParseInt(kWhat, line_no, f[1]);
    if (g.group_id != static_cast<int>(inv.groups.size())) {
      Malformed(kWhat, line_no, "group ids must be contiguous from 0");
    }
    g.canonical = f[2];
    for (std::string &m : SplitMembers(f[3])) g.members.insert(std::move(m));
    if (!g.members.count(g.canonical)) {
      Malformed(kWhat, line_no, "canonical is not a member");
    }
    for (const SenseGroup &other : inv.groups) {
      for (const std::string &m : g.members) {
        if (other.members.count(m)) {
          Malformed(kWhat, line_no, "member '" + m + "' is in two groups");
        }
      }
    }
    inv.groups.push_back(std::move(g));
  });
  std::vector<SenseInventory> out;
  for (auto &[abbr, inv] : by_abbr) out.push_back(std::move(inv));
  return out;
}

std::string FormatInstances(std::span<const LabeledInstance> instances) {
  std::ostringstream out;
  for (const LabeledInstance &x : instances) {
    out << x.abbreviation << '\t' << x.label << '\t' << x.position << '\t'
        << JoinTokens(x.tokens) << '\n';
  }
  return out.str();
}

std::string FormatSplits(std::span<const AbbrevDataset> datasets) {
  std::ostringstream out;
  for (const AbbrevDataset &ds : datasets) {
    for (const auto &[name, split] :
         {std::pair{"train", &ds.train}, {"dev", &ds.dev}, {"test", &ds.test}}) {
      for (const LabeledInstance &x : *split) {
        out << name << '\t' << x.abbreviation << '\t' << x.label << '\t'
            << x.position << '\t' << JoinTokens(x.tokens) << '\n';
      }
    }
  }
  return out.str();
}

std::vector<SplitRow> ParseInstanceRows(std::istream &in) {
  static const char *kWhat = "instance";
  std::vector<SplitRow> out;
  ForEachRecord(in, [&](size_t line_no, const std::vector<std::string> &f) {
    SplitRow row;
    size_t base = 0;
    if (f.size() == 5) {
      row.split = f[0];
      if (row.split != "train" && row.split != "dev" && row.split != "test") {
        Malformed(kWhat, line_no, "unknown split '" + row.split + "'");
      }
      base = 1;
    } else if (f.size() != 4) {
      Malformed(kWhat, line_no,
                "expected 4 or 5 fields, found " + std::to_string(f.size()));
    }
    row.instance.abbreviation = f[base];
    row.instance.label = ParseInt(kWhat, line_no, f[base + 1]);
    row.instance.position = ParseInt(kWhat, line_no, f[base + 2]);
    row.instance.tokens = SplitSpaces(f[base + 3]);
    CheckInstance(kWhat, line_no, row.instance);
    out.push_back(std::move(row));
  });
  return out;
}

std::vector<AbbrevDataset> AssembleDatasets(
    std::span<const SplitRow> rows, std::span<const SenseInventory> inventories) {
  std::map<std::string, AbbrevDataset> by_abbr;
  std::map<std::string, const SenseInventory *> inv_index;
  for (const SenseInventory &inv : inventories) inv_index[inv.abbreviation] = &inv;
  for (const SplitRow &row : rows) {
    const std::string &abbr = row.instance.abbreviation;
    auto inv = inv_index.find(abbr);
    if (inv == inv_index.end()) {
      throw DataError("no inventory for abbreviation '" + abbr + "'");
    }
    AbbrevDataset &ds = by_abbr[abbr];
    if (ds.abbreviation.empty()) {
      ds.abbreviation = abbr;
      ds.inventory = *inv->second;
      for (SenseGroup &g : ds.inventory.groups) g.count = 0;
    }
    if (row.instance.label >= static_cast<int>(ds.inventory.size())) {
      throw DataError("label " + std::to_string(row.instance.label) +
                      " outside the inventory of '" + abbr + "'");
    }
    ++ds.inventory.groups[static_cast<size_t>(row.instance.label)].count;
    if (row.split == "dev") {
      ds.dev.push_back(row.instance);
    } else if (row.split == "test") {
      ds.test.push_back(row.instance);
    } else {
      ds.train.push_back(row.instance);
    }
  }
  std::vector<AbbrevDataset> out;
  for (auto &[abbr, ds] : by_abbr) out.push_back(std::move(ds));
  return out;
}

std::set<std::string> ParseWordList(std::istream &in) {
  std::set<std::string> out;
  std::string line;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    const auto b = line.find_first_not_of(" \t");
    if (b == std::string::npos || line[b] == '#') continue;
    const auto e = line.find_last_not_of(" \t");
    out.insert(line.substr(b, e - b + 1));
  }
  return out;
}

std::map<std::string, std::string> ParseManifest(std::istream &in,
                                                 const std::string &base_dir) {
  std::map<std::string, std::string> out;
  ForEachRecord(in, [&](size_t line_no, const std::vector<std::string> &f) {
    ExpectFields("manifest", line_no, f, 2);
    std::filesystem::path p(f[1]);
    if (p.is_relative() && !base_dir.empty()) p = std::filesystem::path(base_dir) / p;
    if (!out.emplace(f[0], p.string()).second) {
      Malformed("manifest", line_no, "duplicate abbreviation '" + f[0] + "'");
    }
  });
  return out;
}

std::string FormatManifest(const std::map<std::string, std::string> &entries) {
  std::ostringstream out;
  for (const auto &[abbr, path] : entries) out << abbr << '\t' << path << '\n';
  return out.str();
}

std::string FormatTrainingLog(std::span<const EpochLog> log) {
  std::ostringstream out;
  out << "epoch\ttrain_loss\tdev_accuracy\n";
  for (const EpochLog &e : log) {
    out << e.epoch << '\t' << FormatReal(e.train_loss, 8) << '\t'
        << FormatReal(e.dev_accuracy, 6) << '\n';
  }
  return out.str();
}

std::string FormatMetricsReport(std::span<const NamedReport> reports) {
  std::ostringstream out;
  out << "abbreviation\tn\taccuracy\tmacro_f1\tkappa\texpected_agreement\n";
  std::vector<MetricsReport> all;
  for (const NamedReport &r : reports) {
    out << r.abbreviation << '\t' << r.report.n << '\t'
        << FormatReal(r.report.accuracy) << '\t' << FormatReal(r.report.macro_f1)
        << '\t' << FormatReal(r.report.kappa) << '\t'
        << FormatReal(r.report.expected_agreement) << '\n';
    all.push_back(r.report);
  }
  const AggregateReport agg = Aggregate(all);
  out << "MEAN\t" << agg.n_abbreviations << '\t' << FormatReal(agg.accuracy.mean)
      << '\t' << FormatReal(agg.macro_f1.mean) << '\t'
      << FormatReal(agg.kappa.mean) << "\t-\n";
  out << "STDDEV\t" << agg.n_abbreviations << '\t'
      << FormatReal(agg.accuracy.stddev) << '\t'
      << FormatReal(agg.macro_f1.stddev) << '\t' << FormatReal(agg.kappa.stddev)
      << "\t-\n";
  return out.str();
}

std::string FormatConfusion(const ConfusionMatrix &cm,
                            std::span<const std::string> labels) {
  std::ostringstream out;
  out << "truth\\predicted";
  for (size_t c = 0; c < cm.size(); ++c) {
    out << '\t' << (c < labels.size() ? labels[c] : std::to_string(c));
  }
  out << '\n';
  for (size_t i = 0; i < cm.size(); ++i) {
    out << (i < labels.size() ? labels[i] : std::to_string(i));
    for (size_t j = 0; j < cm.size(); ++j) out << '\t' << cm.at(i, j);
    out << '\n';
  }
  return out.str();
}

std::string FormatExpansionRow(const std::string &sentence_id,
                               const Expansion &e) {
  std::ostringstream out;
  out << sentence_id << '\t' << e.position << '\t' << e.abbreviation << '\t'
      << e.definition << '\t' << FormatReal(e.probabilities.maxCoeff()) << '\t';
  for (Eigen::Index k = 0; k < e.probabilities.size(); ++k) {
    if (k) out << ',';
    out << FormatReal(e.probabilities[k]);
  }
  out << '\n';
  return out.str();
}

std::string FormatFilterReport(std::span<const FilterRecord> report) {
  std::ostringstream out;
  out << "abbreviation\tinstances\tdecision\treason\tlabels_missing_from_train\n";
  for (const FilterRecord &r : report) {
    out << r.abbreviation << '\t' << r.instances << '\t'
        << (r.decision.keep ? "keep" : "drop") << '\t' << r.decision.reason
        << '\t';
    for (size_t i = 0; i < r.labels_missing_from_train.size(); ++i) {
      if (i) out << ',';
      out << r.labels_missing_from_train[i];
    }
    out << '\n';
  }
  return out.str();
}

std::string FormatStatsTsv(const DatasetStats &s) {
  std::ostringstream out;
  out << "statistic\tvalue\n"
      << "n_abbreviations\t" << s.n_abbreviations << '\n'
      << "avg_instances\t" << FormatReal(s.avg_instances, 1) << '\n'
      << "avg_definitions\t" << FormatReal(s.avg_definitions, 1) << '\n'
      << "avg_dominant_pct\t" << FormatReal(s.avg_dominant_pct, 1) << '\n';
  return out.str();
}

std::string FormatStatsText(const DatasetStats &s) {
  std::ostringstream out;
  auto row = [&out](const char *name, const std::string &value) {
    out << std::left << std::setw(36) << name << std::right << std::setw(10)
        << value << '\n';
  };
  row("# of all abbreviations", std::to_string(s.n_abbreviations));
  row("Average # of instances", FormatReal(s.avg_instances, 1));
  row("Average # of possible definitions", FormatReal(s.avg_definitions, 1));
  row("Average % of dominant definition", FormatReal(s.avg_dominant_pct, 1));
  return out.str();
}

}  // namespace abx
