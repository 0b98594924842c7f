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

#ifndef ABX_FORMATS_H_
#define ABX_FORMATS_H_

#include <istream>
#include <map>
#include <set>
#include <span>
#include <string>
#include <vector>

#include "abx/classifier.h"
#include "abx/corpus.h"
#include "abx/dataset.h"
#include "abx/expansion.h"
#include "abx/extraction.h"
#include "abx/grouping.h"
#include "abx/metrics.h"

namespace abx {

// Text formats. All are UTF-8, tab-separated, one record per line; readers
// skip blank lines and lines starting with '#', and throw DataError naming
// the line on malformed input.

// Raw instances:
//   abbreviation, raw definition, abstract id, sentence index,
//   defining sentence index, position, space-joined tokens
std::string FormatRawInstances(std::span<const RawLabeledInstance> raw);
std::vector<RawLabeledInstance> ParseRawInstances(std::istream &in);

// Sense inventories: abbreviation, group id, canonical, members joined by
// '|' ('|' and '\' inside a member are backslash-escaped). Counts are not
// stored; BuildDatasets recomputes them.
std::string FormatInventories(std::span<const SenseInventory> inventories);
std::vector<SenseInventory> ParseInventories(std::istream &in);

// Instances: abbreviation, label, position, space-joined tokens.
// Split files prepend a split column (train, dev or test).
std::string FormatInstances(std::span<const LabeledInstance> instances);
std::string FormatSplits(std::span<const AbbrevDataset> datasets);

struct SplitRow {
  std::string split;  // empty for 4-column instance files
  LabeledInstance instance;
};
// Accepts both layouts.
std::vector<SplitRow> ParseInstanceRows(std::istream &in);

// Reassembles datasets from split rows and inventories. Inventory counts are
// recomputed from the rows. Rows whose abbreviation has no inventory throw.
std::vector<AbbrevDataset> AssembleDatasets(
    std::span<const SplitRow> rows, std::span<const SenseInventory> inventories);

// One entry per line (vocabulary, allowlist, denylist).
std::set<std::string> ParseWordList(std::istream &in);

// Manifest: abbreviation, model path. Relative paths resolve against
// `base_dir`.
std::map<std::string, std::string> ParseManifest(std::istream &in,
                                                 const std::string &base_dir);
std::string FormatManifest(const std::map<std::string, std::string> &entries);

std::string FormatTrainingLog(std::span<const EpochLog> log);

struct NamedReport {
  std::string abbreviation;
  MetricsReport report;
};
// One row per abbreviation plus MEAN and STDDEV rows.
std::string FormatMetricsReport(std::span<const NamedReport> reports);
std::string FormatConfusion(const ConfusionMatrix &cm,
                            std::span<const std::string> labels);

// sentence id, position, abbreviation, definition, max probability,
// comma-separated probabilities in inventory order.
std::string FormatExpansionRow(const std::string &sentence_id,
                               const Expansion &expansion);

std::string FormatFilterReport(std::span<const FilterRecord> report);

std::string FormatStatsTsv(const DatasetStats &stats);
std::string FormatStatsText(const DatasetStats &stats);

// Fixed-precision decimal used in every text output.
std::string FormatReal(double v, int precision = 6);

// Turns an abbreviation into a file-name stem.
std::string FileStem(const std::string &abbreviation);

}  // namespace abx

#endif  // ABX_FORMATS_H_
