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

// Command-line driver for the abbreviation expansion pipeline:
//
//   abx extract  --corpus c.tsv --out raw.tsv
//   abx group    --raw raw.tsv [--mesh mesh.tsv] --out inventory.tsv
//   abx build    --raw raw.tsv --inventory inventory.tsv --seed N --out-dir data
//   abx train    --data data/splits.tsv --inventory data/inventory.tsv
//                --seed N --out-dir models [--provider P] [--contextual f]
//   abx evaluate --manifest models/manifest.tsv --test data/splits.tsv --out r.tsv
//   abx expand   --manifest models/manifest.tsv --input text.tsv --out e.tsv
//   abx stats    --data data/splits.tsv --inventory data/inventory.tsv --out s.tsv
//
// Every subcommand accepts --config FILE, a TSV of flag-name<TAB>value lines;
// flags given on the command line take precedence. Outputs are written
// atomically. The last stdout line is a JSON summary. Exit status is 0 on
// success, 1 on usage errors and 2 on data errors.

#include <algorithm>
#include <filesystem>
#include <iostream>
#include <map>
#include <memory>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"

#include "abx/binary_io.h"
#include "abx/classifier.h"
#include "abx/corpus.h"
#include "abx/dataset.h"
#include "abx/embedding.h"
#include "abx/errors.h"
#include "abx/expansion.h"
#include "abx/formats.h"
#include "abx/grouping.h"
#include "abx/metrics.h"
#include "abx/model_io.h"
#include "abx/pipeline.h"

namespace abx {
namespace {

namespace fs = std::filesystem;
using Json = nlohmann::ordered_json;

constexpr int kOk = 0;
constexpr int kUsageError = 1;
constexpr int kDataError = 2;

constexpr char kToolkitVersion[] = "1.0.0";

std::string VersionString() {
  return std::string("abx ") + kToolkitVersion + " (model format " +
         std::to_string(kModelFormatVersion) + ", contextual format " +
         std::to_string(ContextualStore::kVersion) + ")";
}

std::istringstream OpenText(const std::string &path);

// Expands "--config FILE" into flags. The file holds flag-name<TAB>value
// lines (repeat a name to pass several values); names already given on the
// command line are left alone.
std::vector<std::string> ApplyConfig(std::vector<std::string> args) {
  std::string path;
  std::set<std::string> given;
  for (size_t i = 0; i < args.size(); ++i) {
    const std::string &a = args[i];
    if (a.rfind("--", 0) != 0) continue;
    const size_t eq = a.find('=');
    const std::string name = a.substr(2, eq == std::string::npos ? std::string::npos : eq - 2);
    if (name == "config") {
      if (eq != std::string::npos) {
        path = a.substr(eq + 1);
      } else if (i + 1 < args.size()) {
        path = args[i + 1];
      }
    }
    given.insert(name);
  }
  if (path.empty()) return args;

  auto in = OpenText(path);
  std::string line;
  int number = 0;
  while (std::getline(in, line)) {
    ++number;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty() || line[0] == '#') continue;
    const size_t tab = line.find('\t');
    if (tab == std::string::npos || tab == 0) {
      throw DataError(path + ":" + std::to_string(number) + ": expected name<TAB>value");
    }
    std::string name = line.substr(0, tab);
    if (name.rfind("--", 0) == 0) name.erase(0, 2);
    if (name == "config") throw DataError(path + ": nested --config is not supported");
    if (given.count(name)) continue;
    args.push_back("--" + name);
    args.push_back(line.substr(tab + 1));
  }
  return args;
}

std::istringstream OpenText(const std::string &path) {
  return std::istringstream(ReadFileBytes(path));
}

std::set<std::string> ReadWordList(const std::string &path) {
  auto in = OpenText(path);
  return ParseWordList(in);
}

std::vector<SenseInventory> ReadInventories(const std::string &path) {
  auto in = OpenText(path);
  return ParseInventories(in);
}

std::vector<SplitRow> ReadRows(const std::string &path) {
  auto in = OpenText(path);
  return ParseInstanceRows(in);
}

std::map<std::string, std::string> ReadManifest(const std::string &path) {
  auto in = OpenText(path);
  return ParseManifest(in, fs::path(path).parent_path().string());
}

void EnsureDir(const std::string &dir) {
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec || !fs::is_directory(dir)) {
    throw DataError("cannot create output directory " + dir);
  }
}

std::string InDir(const std::string &dir, const std::string &name) {
  return (fs::path(dir) / name).string();
}

void Log(const std::string &message) { std::cerr << "abx: " << message << "\n"; }

// ---- extract ---------------------------------------------------------------

struct ExtractArgs {
  std::string corpus, out;
  size_t jobs = 1;
};

Json RunExtract(const ExtractArgs &a) {
  auto in = OpenText(a.corpus);
  CorpusParseResult corpus = ParseCorpus(in);
  for (const LineError &e : corpus.errors) {
    Log(a.corpus + ":" + std::to_string(e.line) + ": skipped: " + e.message);
  }
  const auto raw = ExtractInstances(corpus.records, a.jobs);
  AtomicWriteFile(a.out, FormatRawInstances(raw));
  std::set<std::string> abbrs;
  for (const auto &r : raw) abbrs.insert(r.abbreviation);
  return {{"abstracts", corpus.records.size()},
          {"skipped_lines", corpus.errors.size()},
          {"instances", raw.size()},
          {"abbreviations", abbrs.size()},
          {"out", a.out}};
}

// ---- group -----------------------------------------------------------------

struct GroupArgs {
  std::string raw, mesh, out;
  double theta_mesh = 0.5, theta_edit = 0.2;
  size_t jobs = 1;
};

Json RunGroup(const GroupArgs &a) {
  auto in = OpenText(a.raw);
  const auto raw = ParseRawInstances(in);
  MeshFeatureMap mesh;
  if (!a.mesh.empty()) {
    auto mesh_in = OpenText(a.mesh);
    mesh = MeshFeatureMap::Parse(mesh_in);
  }
  const auto inventories =
      GroupInstances(raw, mesh, {a.theta_mesh, a.theta_edit}, a.jobs);
  AtomicWriteFile(a.out, FormatInventories(inventories));
  size_t groups = 0;
  for (const auto &inv : inventories) groups += inv.size();
  return {{"abbreviations", inventories.size()},
          {"groups", groups},
          {"mesh_entries", mesh.size()},
          {"out", a.out}};
}

// ---- build -----------------------------------------------------------------

struct BuildArgs {
  std::string raw, inventory, out_dir, allowlist, denylist;
  uint64_t seed = 0;
};

Json RunBuild(const BuildArgs &a) {
  auto in = OpenText(a.raw);
  const auto raw = ParseRawInstances(in);
  auto inventories = ReadInventories(a.inventory);
  std::optional<std::set<std::string>> allow, deny;
  if (!a.allowlist.empty()) allow = ReadWordList(a.allowlist);
  if (!a.denylist.empty()) deny = ReadWordList(a.denylist);
  const BuildResult result =
      BuildDatasets(raw, std::move(inventories),
                    {a.seed, allow ? &*allow : nullptr, deny ? &*deny : nullptr});
  for (const FilterRecord &r : result.report) {
    if (!r.labels_missing_from_train.empty()) {
      Log(r.abbreviation + ": " + std::to_string(r.labels_missing_from_train.size()) +
          " label(s) appear in dev/test but not in train");
    }
  }

  std::vector<SenseInventory> kept;
  for (const auto &ds : result.datasets) kept.push_back(ds.inventory);
  EnsureDir(a.out_dir);
  AtomicWriteFile(InDir(a.out_dir, "splits.tsv"), FormatSplits(result.datasets));
  AtomicWriteFile(InDir(a.out_dir, "inventory.tsv"), FormatInventories(kept));
  AtomicWriteFile(InDir(a.out_dir, "filter.tsv"), FormatFilterReport(result.report));
  Json summary = {{"kept", result.datasets.size()},
                  {"dropped", result.report.size() - result.datasets.size()},
                  {"unmapped_instances", result.unmapped_instances},
                  {"out_dir", a.out_dir}};
  if (!result.datasets.empty()) {
    const DatasetStats stats = ComputeStats(result.datasets);
    AtomicWriteFile(InDir(a.out_dir, "stats.tsv"), FormatStatsTsv(stats));
    AtomicWriteFile(InDir(a.out_dir, "stats.txt"), FormatStatsText(stats));
    size_t n = 0;
    for (const auto &ds : result.datasets) n += ds.size();
    summary["instances"] = n;
  } else {
    Log("no abbreviation passed the filter");
  }
  return summary;
}

// ---- train -----------------------------------------------------------------

struct TrainArgs {
  std::string data, inventory, out_dir, provider = "decbae", contextual;
  std::vector<std::string> abbrevs;
  uint64_t seed = 0;
  int hidden = 64, ffn_width = 64, ffn_layers = 1, embed_dim = 50;
  double lr = 1e-3, clip_norm = 5.0;
  int batch_size = 32, max_epochs = 50, patience = 5;
  size_t jobs = 1;
};

Json RunTrain(const TrainArgs &a) {
  const std::optional<Provider> provider = ParseProvider(a.provider);
  if (!provider) throw CLI::ValidationError("--provider", "unknown provider " + a.provider);
  std::optional<ContextualStore> store;
  if (UsesContextual(*provider)) {
    if (a.contextual.empty()) {
      throw DataError("provider " + a.provider +
                      " needs --contextual (or choose --provider bow|static-bilstm)");
    }
    store = ContextualStore::Load(a.contextual);
  }
  const ProviderInputs inputs{store ? &*store : nullptr};

  std::vector<AbbrevDataset> datasets =
      AssembleDatasets(ReadRows(a.data), ReadInventories(a.inventory));
  if (!a.abbrevs.empty()) {
    const std::set<std::string> wanted(a.abbrevs.begin(), a.abbrevs.end());
    std::erase_if(datasets, [&](const AbbrevDataset &ds) {
      return wanted.count(ds.abbreviation) == 0;
    });
    for (const auto &w : wanted) {
      if (std::none_of(datasets.begin(), datasets.end(),
                       [&](const AbbrevDataset &ds) { return ds.abbreviation == w; })) {
        throw DataError("no data for abbreviation " + w + " in " + a.data);
      }
    }
  }
  if (datasets.empty()) throw DataError("no datasets in " + a.data);

  std::vector<TrainResult> results(datasets.size());
  ParallelFor(datasets.size(), a.jobs, [&](size_t i) {
    TrainConfig cfg;
    cfg.provider = *provider;
    cfg.hidden_dim = a.hidden;
    cfg.ffn_width = a.ffn_width;
    cfg.ffn_layers = a.ffn_layers;
    cfg.embed_dim = a.embed_dim;
    cfg.adam.alpha = a.lr;
    cfg.batch_size = a.batch_size;
    cfg.max_epochs = a.max_epochs;
    cfg.patience = a.patience;
    cfg.clip_norm = a.clip_norm;
    cfg.seed = DatasetSeed(a.seed, datasets[i].abbreviation);
    results[i] = TrainClassifier(datasets[i], cfg, inputs);
  });

  EnsureDir(a.out_dir);
  std::map<std::string, std::string> manifest;
  Json models = Json::array();
  for (size_t i = 0; i < datasets.size(); ++i) {
    const std::string stem = FileStem(datasets[i].abbreviation);
    SaveModel(results[i].model, InDir(a.out_dir, stem + ".dcbm"));
    AtomicWriteFile(InDir(a.out_dir, stem + ".log.tsv"), FormatTrainingLog(results[i].log));
    manifest[datasets[i].abbreviation] = stem + ".dcbm";
    const auto &best = results[i].log[static_cast<size_t>(results[i].best_epoch - 1)];
    models.push_back({{"abbreviation", datasets[i].abbreviation},
                      {"epochs", results[i].log.size()},
                      {"best_epoch", results[i].best_epoch},
                      {"dev_accuracy", best.dev_accuracy}});
  }
  // Written last so a manifest never points at a missing model.
  AtomicWriteFile(InDir(a.out_dir, "manifest.tsv"), FormatManifest(manifest));
  return {{"provider", a.provider}, {"models", models}, {"out_dir", a.out_dir}};
}

// ---- evaluate --------------------------------------------------------------

struct EvaluateArgs {
  std::string model, manifest, test, baseline, data, inventory, contextual, out,
      confusion_dir;
  size_t jobs = 1;
};

// Test rows per abbreviation: the "test" split of a split file, or every row
// of a plain instance file.
std::map<std::string, std::vector<LabeledInstance>> TestRows(const std::string &path) {
  std::map<std::string, std::vector<LabeledInstance>> out;
  for (SplitRow &row : ReadRows(path)) {
    if (row.split.empty() || row.split == "test") {
      out[row.instance.abbreviation].push_back(std::move(row.instance));
    }
  }
  return out;
}

struct EvalJob {
  std::string abbreviation;
  std::vector<std::string> labels;
  std::vector<LabeledInstance> test;
  Predictor predictor;
  Evaluation result;
};

Json RunEvaluate(const EvaluateArgs &a) {
  const int modes = !a.model.empty() + !a.manifest.empty() + !a.baseline.empty();
  if (modes != 1) {
    throw CLI::ValidationError("evaluate",
                               "give exactly one of --model, --manifest or --baseline");
  }
  if (!a.baseline.empty() && a.baseline != "majority") {
    throw CLI::ValidationError("--baseline", "only 'majority' is available");
  }
  if (a.baseline.empty() && a.test.empty()) {
    throw CLI::ValidationError("--test", "required with --model or --manifest");
  }
  if (!a.baseline.empty() && a.data.empty()) {
    throw CLI::ValidationError("--data", "required with --baseline");
  }

  std::optional<ContextualStore> store;
  if (!a.contextual.empty()) store = ContextualStore::Load(a.contextual);
  const ProviderInputs inputs{store ? &*store : nullptr};

  std::vector<EvalJob> jobs;
  std::vector<std::shared_ptr<const ClassifierModel>> models;
  if (!a.baseline.empty()) {
    std::map<std::string, std::vector<int>> train_labels;
    std::map<std::string, std::vector<LabeledInstance>> test;
    for (SplitRow &row : ReadRows(a.data)) {
      if (row.split == "train") {
        train_labels[row.instance.abbreviation].push_back(row.instance.label);
      } else if (row.split == "test") {
        test[row.instance.abbreviation].push_back(std::move(row.instance));
      }
    }
    std::map<std::string, std::vector<std::string>> label_names;
    if (!a.inventory.empty()) {
      for (const auto &inv : ReadInventories(a.inventory)) {
        label_names[inv.abbreviation] = inv.Canonicals();
      }
    }
    for (auto &[abbr, rows] : test) {
      auto it = train_labels.find(abbr);
      if (it == train_labels.end()) throw DataError(abbr + ": no train rows in " + a.data);
      const MajorityBaseline majority = MajorityBaseline::Fit(it->second);
      std::vector<std::string> labels = label_names[abbr];
      if (labels.empty()) {
        int k = 0;
        for (int l : it->second) k = std::max(k, l + 1);
        for (const auto &x : rows) k = std::max(k, x.label + 1);
        for (int i = 0; i < k; ++i) labels.push_back("label" + std::to_string(i));
      }
      EvalJob &job = jobs.emplace_back();
      job.abbreviation = abbr;
      job.labels = std::move(labels);
      job.test = std::move(rows);
      job.predictor = [majority](const LabeledInstance &x) { return majority.Predict(x); };
    }
  } else {
    std::map<std::string, std::string> locators;
    if (!a.model.empty()) {
      auto model = std::make_shared<const ClassifierModel>(LoadModel(a.model));
      locators[model->abbreviation] = a.model;
      models.push_back(model);
    } else {
      locators = ReadManifest(a.manifest);
      for (const auto &[abbr, path] : locators) {
        auto model = std::make_shared<const ClassifierModel>(LoadModel(path));
        if (model->abbreviation != abbr) {
          throw DataError(path + " holds a model for " + model->abbreviation +
                          ", not " + abbr);
        }
        models.push_back(model);
      }
    }
    auto test = TestRows(a.test);
    for (const auto &model : models) {
      auto it = test.find(model->abbreviation);
      if (it == test.end()) {
        if (!a.model.empty()) {
          throw DataError("no test rows for " + model->abbreviation + " in " + a.test);
        }
        Log(model->abbreviation + ": no test rows, skipped");
        continue;
      }
      if (UsesContextual(model->provider) && !store) {
        throw DataError(model->abbreviation + ": provider " +
                        std::string(ProviderName(model->provider)) + " needs --contextual");
      }
      const ClassifierModel *m = model.get();
      EvalJob &job = jobs.emplace_back();
      job.abbreviation = model->abbreviation;
      job.labels = model->labels;
      job.test = std::move(it->second);
      job.predictor = [m, &inputs](const LabeledInstance &x) {
        return Predict(*m, x.tokens, x.position, inputs).label;
      };
    }
  }
  if (jobs.empty()) throw DataError("nothing to evaluate");

  ParallelFor(jobs.size(), a.jobs, [&](size_t i) {
    jobs[i].result = Evaluate(jobs[i].predictor, jobs[i].test, jobs[i].labels.size());
  });

  std::vector<NamedReport> reports;
  for (const auto &job : jobs) reports.push_back({job.abbreviation, job.result.report});
  if (!a.confusion_dir.empty()) {
    EnsureDir(a.confusion_dir);
    for (const auto &job : jobs) {
      AtomicWriteFile(InDir(a.confusion_dir, FileStem(job.abbreviation) + ".confusion.tsv"),
                      FormatConfusion(job.result.confusion, job.labels));
    }
  }
  AtomicWriteFile(a.out, FormatMetricsReport(reports));

  std::vector<MetricsReport> plain;
  for (const auto &r : reports) plain.push_back(r.report);
  const AggregateReport agg = Aggregate(plain);
  return {{"abbreviations", agg.n_abbreviations},
          {"accuracy_mean", agg.accuracy.mean},
          {"macro_f1_mean", agg.macro_f1.mean},
          {"kappa_mean", agg.kappa.mean},
          {"out", a.out}};
}

// ---- expand ----------------------------------------------------------------

struct ExpandArgs {
  std::string manifest, vocabulary, input, contextual, out;
  size_t cache_capacity = 0;
};

Json RunExpand(const ExpandArgs &a) {
  std::map<std::string, std::string> locators = ReadManifest(a.manifest);
  std::set<std::string> vocab;
  if (a.vocabulary.empty()) {
    for (const auto &[abbr, path] : locators) vocab.insert(abbr);
  } else {
    vocab = ReadWordList(a.vocabulary);
  }
  std::optional<ContextualStore> store;
  if (!a.contextual.empty()) store = ContextualStore::Load(a.contextual);
  const ProviderInputs inputs{store ? &*store : nullptr};
  ModelRegistry registry(std::move(vocab), std::move(locators), a.cache_capacity);

  auto in = OpenText(a.input);
  CorpusParseResult corpus = ParseCorpus(in);
  for (const LineError &e : corpus.errors) {
    Log(a.input + ":" + std::to_string(e.line) + ": skipped: " + e.message);
  }
  std::string out;
  size_t sentences = 0, expansions = 0, skipped = 0;
  for (const AbstractRecord &record : corpus.records) {
    for (const TokenizedSentence &s : TokenizeAbstract(record)) {
      ++sentences;
      const std::string id = record.id + ":" + std::to_string(s.sentence_index);
      const ExpansionResult r = ExpandSentence(s.tokens, registry, inputs);
      for (const Expansion &e : r.expansions) out += FormatExpansionRow(id, e);
      for (const SkippedMention &m : r.skipped) {
        Log(id + ": " + m.abbreviation + " at " + std::to_string(m.position) +
            " skipped: " + m.reason);
      }
      expansions += r.expansions.size();
      skipped += r.skipped.size();
    }
  }
  AtomicWriteFile(a.out, out);
  return {{"sentences", sentences},
          {"expansions", expansions},
          {"skipped", skipped},
          {"models_loaded", registry.loads()},
          {"out", a.out}};
}

// ---- stats -----------------------------------------------------------------

struct StatsArgs {
  std::string data, inventory, out, text;
};

Json RunStats(const StatsArgs &a) {
  const auto datasets = AssembleDatasets(ReadRows(a.data), ReadInventories(a.inventory));
  const DatasetStats stats = ComputeStats(datasets);
  const std::string text = FormatStatsText(stats);
  AtomicWriteFile(a.out, FormatStatsTsv(stats));
  if (!a.text.empty()) {
    AtomicWriteFile(a.text, text);
  } else {
    std::cout << text;
  }
  return {{"n_abbreviations", stats.n_abbreviations},
          {"avg_instances", stats.avg_instances},
          {"avg_definitions", stats.avg_definitions},
          {"avg_dominant_pct", stats.avg_dominant_pct},
          {"out", a.out}};
}

// ---- wiring ----------------------------------------------------------------

CLI::App *AddCommand(CLI::App &app, const std::string &name, const std::string &help,
                     std::string *config_path) {
  CLI::App *sub = app.add_subcommand(name, help);
  // Expanded by ApplyConfig before parsing; declared for --help and so the
  // flag itself parses.
  sub->add_option("--config", *config_path, "TSV of flag<TAB>value defaults");
  return sub;
}

void PrintSummary(const std::string &command, const std::string &status, Json details) {
  Json line = {{"command", command}, {"status", status}};
  line.update(details);
  std::cout << line.dump() << std::endl;
}

int Main(int argc, char **argv) {
  CLI::App app{"Abbreviation expansion toolkit: extraction, sense grouping, "
               "per-abbreviation classifiers and inference."};
  app.set_version_flag("--version", VersionString());
  app.require_subcommand(1);
  std::string config_path;

  ExtractArgs ex;
  CLI::App *extract = AddCommand(app, "extract",
                                 "Harvest labeled instances from abstracts", &config_path);
  extract->add_option("--corpus", ex.corpus, "Corpus TSV: id<TAB>text")->required();
  extract->add_option("--out", ex.out, "Raw instance TSV")->required();
  extract->add_option("--jobs", ex.jobs, "Worker threads")->check(CLI::PositiveNumber);

  GroupArgs gr;
  CLI::App *group = AddCommand(app, "group",
                               "Merge definition variants into sense groups", &config_path);
  group->add_option("--raw", gr.raw, "Raw instance TSV")->required();
  group->add_option("--mesh", gr.mesh, "MeSH map TSV: surface<TAB>ids");
  group->add_option("--out", gr.out, "Sense inventory TSV")->required();
  group->add_option("--theta-mesh", gr.theta_mesh, "Merge at MeSH similarity >= this")
      ->check(CLI::Range(0.0, 1.0))->capture_default_str();
  group->add_option("--theta-edit", gr.theta_edit, "Merge at edit distance <= this")
      ->check(CLI::Range(0.0, 1.0))->capture_default_str();
  group->add_option("--jobs", gr.jobs, "Worker threads")->check(CLI::PositiveNumber);

  BuildArgs bu;
  CLI::App *build = AddCommand(app, "build",
                               "Filter ambiguous abbreviations and split", &config_path);
  build->add_option("--raw", bu.raw, "Raw instance TSV")->required();
  build->add_option("--inventory", bu.inventory, "Sense inventory TSV")->required();
  build->add_option("--seed", bu.seed, "Split seed")->required();
  build->add_option("--out-dir", bu.out_dir, "Output directory")->required();
  build->add_option("--allowlist", bu.allowlist, "Abbreviations exempt from the 99% test");
  build->add_option("--denylist", bu.denylist, "Abbreviations always dropped");

  TrainArgs tr;
  CLI::App *train = AddCommand(app, "train", "Train one classifier per abbreviation", &config_path);
  train->add_option("--data", tr.data, "Split TSV from build")->required();
  train->add_option("--inventory", tr.inventory, "Sense inventory TSV")->required();
  train->add_option("--out-dir", tr.out_dir, "Model directory")->required();
  train->add_option("--seed", tr.seed, "Training seed")->required();
  train->add_option("--provider", tr.provider, "bow|static-bilstm|contextual-ffn|decbae")
      ->check(CLI::IsMember({"bow", "static-bilstm", "contextual-ffn", "decbae"}))
      ->capture_default_str();
  train->add_option("--contextual", tr.contextual, "Contextual embedding file");
  train->add_option("--abbrev", tr.abbrevs, "Train only these abbreviations");
  train->add_option("--hidden", tr.hidden, "LSTM hidden size H")
      ->check(CLI::Range(1, 4096))->capture_default_str();
  train->add_option("--ffn-width", tr.ffn_width, "FFN hidden width")
      ->check(CLI::Range(1, 4096))->capture_default_str();
  train->add_option("--ffn-layers", tr.ffn_layers, "FFN hidden layers")
      ->check(CLI::Range(0, 8))->capture_default_str();
  train->add_option("--embed-dim", tr.embed_dim, "Static embedding width")
      ->check(CLI::Range(1, 4096))->capture_default_str();
  train->add_option("--lr", tr.lr, "Adam step size")
      ->check(CLI::Range(1e-8, 10.0))->capture_default_str();
  train->add_option("--batch-size", tr.batch_size, "Minibatch size")
      ->check(CLI::Range(1, 1 << 20))->capture_default_str();
  train->add_option("--max-epochs", tr.max_epochs, "Epoch limit")
      ->check(CLI::Range(1, 100000))->capture_default_str();
  train->add_option("--patience", tr.patience, "Epochs without dev gain before stopping")
      ->check(CLI::Range(1, 100000))->capture_default_str();
  train->add_option("--clip-norm", tr.clip_norm, "Global gradient norm cap, 0 disables")
      ->check(CLI::Range(0.0, 1e6))->capture_default_str();
  train->add_option("--jobs", tr.jobs, "Abbreviations trained in parallel")
      ->check(CLI::PositiveNumber);

  EvaluateArgs ev;
  CLI::App *evaluate = AddCommand(app, "evaluate",
                                  "Score models or the majority baseline", &config_path);
  evaluate->add_option("--model", ev.model, "Single model file");
  evaluate->add_option("--manifest", ev.manifest, "Model manifest TSV");
  evaluate->add_option("--test", ev.test, "Instance or split TSV (test rows used)");
  evaluate->add_option("--baseline", ev.baseline, "Baseline predictor: majority");
  evaluate->add_option("--data", ev.data, "Split TSV for the baseline");
  evaluate->add_option("--inventory", ev.inventory, "Inventory for baseline label names");
  evaluate->add_option("--contextual", ev.contextual, "Contextual embedding file");
  evaluate->add_option("--out", ev.out, "Metrics report TSV")->required();
  evaluate->add_option("--confusion-dir", ev.confusion_dir, "Write confusion matrices here");
  evaluate->add_option("--jobs", ev.jobs, "Worker threads")->check(CLI::PositiveNumber);

  ExpandArgs xp;
  CLI::App *expand = AddCommand(app, "expand",
                                "Expand ambiguous abbreviations in text", &config_path);
  expand->add_option("--manifest", xp.manifest, "Model manifest TSV")->required();
  expand->add_option("--vocabulary", xp.vocabulary, "Ambiguous abbreviations, one per line");
  expand->add_option("--input", xp.input, "Text TSV: id<TAB>text")->required();
  expand->add_option("--contextual", xp.contextual, "Contextual embedding file");
  expand->add_option("--out", xp.out, "Expansion TSV")->required();
  expand->add_option("--cache-capacity", xp.cache_capacity, "Models kept loaded, 0 = all");

  StatsArgs st;
  CLI::App *stats = AddCommand(app, "stats", "Dataset statistics", &config_path);
  stats->add_option("--data", st.data, "Split TSV")->required();
  stats->add_option("--inventory", st.inventory, "Sense inventory TSV")->required();
  stats->add_option("--out", st.out, "Stats TSV")->required();
  stats->add_option("--text", st.text, "Aligned text copy (default: stdout)");

  const std::vector<CLI::App *> commands = {extract, group, build, train,
                                            evaluate, expand, stats};
  auto usage = [&](const std::string &message) {
    std::cerr << "abx: " << message << "\n\n";
    const CLI::App *active = &app;
    for (const CLI::App *c : commands) {
      if (c->parsed()) active = c;
    }
    std::cerr << active->help();
    return kUsageError;
  };

  std::vector<std::string> args;
  try {
    args = ApplyConfig(std::vector<std::string>(argv + 1, argv + argc));
  } catch (const std::exception &e) {
    Log("error: " + std::string(e.what()));
    PrintSummary("", "error", {{"message", e.what()}});
    return kDataError;
  }
  std::reverse(args.begin(), args.end());  // CLI11 consumes from the back
  try {
    app.parse(args);
  } catch (const CLI::CallForHelp &e) {
    return app.exit(e);
  } catch (const CLI::CallForVersion &e) {
    return app.exit(e);
  } catch (const CLI::ParseError &e) {
    return usage(e.what());
  }

  std::string name;
  try {
    Json details;
    if (extract->parsed()) {
      name = "extract";
      details = RunExtract(ex);
    } else if (group->parsed()) {
      name = "group";
      details = RunGroup(gr);
    } else if (build->parsed()) {
      name = "build";
      details = RunBuild(bu);
    } else if (train->parsed()) {
      name = "train";
      details = RunTrain(tr);
    } else if (evaluate->parsed()) {
      name = "evaluate";
      details = RunEvaluate(ev);
    } else if (expand->parsed()) {
      name = "expand";
      details = RunExpand(xp);
    } else {
      name = "stats";
      details = RunStats(st);
    }
    PrintSummary(name, "ok", std::move(details));
    return kOk;
  } catch (const CLI::ValidationError &e) {
    return usage(e.what());
  } catch (const std::exception &e) {
    Log("error: " + std::string(e.what()));
    PrintSummary(name, "error", {{"message", e.what()}});
    return kDataError;
  }
}

}  // namespace
}  // namespace abx

int main(int argc, char **argv) { return abx::Main(argc, argv); }
