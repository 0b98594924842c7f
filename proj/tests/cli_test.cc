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


// Runs the abx binary end to end in scratch directories.

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <unistd.h>
#include <vector>

#include "doctest.h"
#include "synthetic.h"

namespace abx {
namespace {

namespace fs = std::filesystem;

struct TempDir {
  fs::path path;
  TempDir() {
    path = fs::temp_directory_path() /
           ("abx_cli_" + std::to_string(::getpid()) + "_" + std::to_string(counter++));
    fs::create_directories(path);
  }
  ~TempDir() { fs::remove_all(path); }
  std::string File(const std::string &name) const { return (path / name).string(); }
  static inline int counter = 0;
};

std::string Slurp(const std::string &path) {
  std::ifstream in(path, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::vector<std::string> Lines(const std::string &path) {
  std::vector<std::string> out;
  std::ifstream in(path);
  std::string line;
  while (std::getline(in, line)) out.push_back(line);
  return out;
}

void Write(const std::string &path, const std::string &text) {
  std::ofstream(path, std::ios::binary) << text;
}

struct RunResult {
  int code = -1;
  std::string out, err;
};

// Runs `abx args` from `dir` and captures both streams.
RunResult Run(const TempDir &dir, const std::string &args) {
  const std::string out = dir.File("stdout.txt"), err = dir.File("stderr.txt");
  const std::string cmd = "cd '" + dir.path.string() + "' && '" + ABX_CLI_PATH + "' " + args +
                          " >'" + out + "' 2>'" + err + "'";
  const int status = std::system(cmd.c_str());
  RunResult r;
  r.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  r.out = Slurp(out);
  r.err = Slurp(err);
  return r;
}

std::string CorpusText(size_t n, uint64_t seed) {
  std::string text;
  for (const auto &r : testing::SyntheticCorpus(n, seed)) text += r.id + "\t" + r.text + "\n";
  return text;
}

// extract -> group -> build on a small planted corpus.
void BuildData(const TempDir &dir) {
  Write(dir.File("corpus.tsv"), CorpusText(60, 5));
  REQUIRE(Run(dir, "extract --corpus corpus.tsv --out raw.tsv").code == 0);
  REQUIRE(Run(dir, "group --raw raw.tsv --out inventory.tsv").code == 0);
  REQUIRE(Run(dir, "build --raw raw.tsv --inventory inventory.tsv --seed 3 --out-dir data")
              .code == 0);
}

const char *kSmallTrain =
    "--provider static-bilstm --hidden 8 --ffn-width 8 --embed-dim 8 --lr 0.01"
    " --max-epochs 4";

}  // namespace

TEST_CASE("version and usage errors") {
  TempDir dir;
  RunResult r = Run(dir, "--version");
  CHECK(r.code == 0);
  CHECK(r.out.find("abx 1.0.0") != std::string::npos);

  CHECK(Run(dir, "").code == 1);
  r = Run(dir, "extract --bogus 1");
  CHECK(r.code == 1);
  CHECK(r.err.find("--corpus") != std::string::npos);  // subcommand help
  CHECK(Run(dir, "extract --out x.tsv").code == 1);    // missing required flag
  CHECK(Run(dir, "group --raw r --out o --theta-edit 3").code == 1);
  CHECK(Run(dir, "train --data d --inventory i --out-dir m --seed 1 --provider elmo").code == 1);
}

TEST_CASE("data errors exit 2 and name the file") {
  TempDir dir;
  RunResult r = Run(dir, "extract --corpus missing.tsv --out raw.tsv");
  CHECK(r.code == 2);
  CHECK(r.err.find("missing.tsv") != std::string::npos);
  CHECK(r.out.find("\"status\":\"error\"") != std::string::npos);
  CHECK_FALSE(fs::exists(dir.File("raw.tsv")));

  Write(dir.File("dup.tsv"), "A1\tFoo bar (FB) x.\nA1\tAgain.\n");
  r = Run(dir, "extract --corpus dup.tsv --out raw.tsv");
  CHECK(r.code == 2);
  CHECK(r.err.find("A1") != std::string::npos);
  CHECK_FALSE(fs::exists(dir.File("raw.tsv")));
}

TEST_CASE("extract writes one row per labeled mention and skips bad lines") {
  TempDir dir;
  Write(dir.File("corpus.tsv"),
        "A1\tThe endoplasmic reticulum (ER) is large. ER stress rose. The ER folds.\n"
        "broken line without a tab\n"
        "A2\tNo abbreviations here (P < 0.01).\n"
        "A3\tComputed tomography (CT) was done. CT was normal.\n");
  const RunResult r = Run(dir, "extract --corpus corpus.tsv --out raw.tsv --jobs 2");
  REQUIRE(r.code == 0);
  CHECK(r.err.find(":2: skipped") != std::string::npos);
  CHECK(r.out.find("\"command\":\"extract\"") != std::string::npos);
  const auto rows = Lines(dir.File("raw.tsv"));
  REQUIRE(rows.size() == 3);
  CHECK(rows[0].rfind("ER\tendoplasmic reticulum\tA1\t1\t0\t0\t", 0) == 0);
  CHECK(rows[2].rfind("CT\tComputed tomography\tA3\t1\t0\t0\t", 0) == 0);
}

TEST_CASE("pipeline outputs, training determinism and evaluation") {
  TempDir dir;
  BuildData(dir);
  for (const char *f : {"data/splits.tsv", "data/inventory.tsv", "data/filter.tsv",
                        "data/stats.tsv", "data/stats.txt"}) {
    CHECK(fs::exists(dir.File(f)));
  }
  CHECK(Lines(dir.File("data/filter.tsv")).size() == 4);  // header + 3 abbreviations

  const std::string train = std::string("train --data data/splits.tsv --inventory "
                                        "data/inventory.tsv --seed 9 ") + kSmallTrain;
  REQUIRE(Run(dir, train + " --out-dir m1 --jobs 1").code == 0);
  REQUIRE(Run(dir, train + " --out-dir m2 --jobs 3").code == 0);
  for (const char *abbr : {"CT", "DAT", "ER"}) {
    CAPTURE(abbr);
    const std::string a = Slurp(dir.File(std::string("m1/") + abbr + ".dcbm"));
    CHECK_FALSE(a.empty());
    CHECK(a == Slurp(dir.File(std::string("m2/") + abbr + ".dcbm")));
  }
  CHECK(Lines(dir.File("m1/manifest.tsv")).size() == 3);

  // Model evaluation against the majority baseline on the same test rows.
  REQUIRE(Run(dir, "evaluate --manifest m1/manifest.tsv --test data/splits.tsv --out model.tsv"
                   " --confusion-dir confusion").code == 0);
  REQUIRE(Run(dir, "evaluate --baseline majority --data data/splits.tsv --out major.tsv").code ==
          0);
  const auto model = Lines(dir.File("model.tsv"));
  const auto major = Lines(dir.File("major.tsv"));
  REQUIRE(model.size() == 6);  // header, 3 rows, MEAN, STDDEV
  REQUIRE(major.size() == 6);
  CHECK(model[0] == "abbreviation\tn\taccuracy\tmacro_f1\tkappa\texpected_agreement");
  CHECK(model[4].rfind("MEAN\t3\t", 0) == 0);
  for (int i = 1; i <= 3; ++i) {
    std::istringstream row(major[static_cast<size_t>(i)]);
    std::string abbr, n, acc, f1, kappa;
    std::getline(row, abbr, '\t');
    std::getline(row, n, '\t');
    std::getline(row, acc, '\t');
    std::getline(row, f1, '\t');
    std::getline(row, kappa, '\t');
    CHECK(std::stod(kappa) == 0.0);
  }
  CHECK(fs::exists(dir.File("confusion/ER.confusion.tsv")));

  // Exactly one predictor source.
  CHECK(Run(dir, "evaluate --model m1/ER.dcbm --baseline majority --data data/splits.tsv"
                 " --out x.tsv").code == 1);
  CHECK_FALSE(fs::exists(dir.File("x.tsv")));

  // A single model evaluated on its own rows.
  REQUIRE(Run(dir, "evaluate --model m1/CT.dcbm --test data/splits.tsv --out ct.tsv").code == 0);
  CHECK(Lines(dir.File("ct.tsv")).size() == 4);

  // Stats mirror the build step's own summary.
  REQUIRE(Run(dir, "stats --data data/splits.tsv --inventory data/inventory.tsv"
                   " --out stats.tsv").code == 0);
  CHECK(Slurp(dir.File("stats.tsv")) == Slurp(dir.File("data/stats.tsv")));
}

TEST_CASE("expand labels vocabulary mentions and logs the rest") {
  TempDir dir;
  BuildData(dir);
  REQUIRE(Run(dir, std::string("train --data data/splits.tsv --inventory data/inventory.tsv"
                               " --seed 2 --out-dir m --abbrev ER ") + kSmallTrain).code == 0);
  CHECK(Lines(dir.File("m/manifest.tsv")).size() == 1);
  Write(dir.File("text.tsv"),
        "T1\tThe ER was busy with triage. Then CT scans followed.\n"
        "T2\tNothing to expand here.\n");
  Write(dir.File("vocab.txt"), "ER\nCT\n");
  const RunResult r = Run(dir, "expand --manifest m/manifest.tsv --vocabulary vocab.txt"
                               " --input text.tsv --out expanded.tsv --cache-capacity 1");
  REQUIRE(r.code == 0);
  const auto rows = Lines(dir.File("expanded.tsv"));
  REQUIRE(rows.size() == 1);
  CHECK(rows[0].rfind("T1:0\t1\tER\t", 0) == 0);
  CHECK(r.err.find("CT") != std::string::npos);  // no model: logged, not expanded
}

TEST_CASE("config files supply defaults and explicit flags win") {
  TempDir dir;
  Write(dir.File("corpus.tsv"), "A1\tComputed tomography (CT) was done. CT was normal.\n");
  Write(dir.File("run.cfg"), "# defaults\ncorpus\tcorpus.tsv\nout\tfrom_config.tsv\n");
  REQUIRE(Run(dir, "extract --config run.cfg").code == 0);
  CHECK(Lines(dir.File("from_config.tsv")).size() == 1);
  REQUIRE(Run(dir, "extract --config run.cfg --out explicit.tsv").code == 0);
  CHECK(fs::exists(dir.File("explicit.tsv")));

  Write(dir.File("bad.cfg"), "corpus\n");
  CHECK(Run(dir, "extract --config bad.cfg --out y.tsv").code == 2);
  CHECK(Run(dir, "extract --config absent.cfg").code == 2);
}

TEST_CASE("failed commands leave no partial outputs") {
  TempDir dir;
  BuildData(dir);
  // decbae needs contextual embeddings: nothing may be written.
  RunResult r = Run(dir, "train --data data/splits.tsv --inventory data/inventory.tsv --seed 1"
                         " --out-dir m --provider decbae --max-epochs 1");
  CHECK(r.code == 2);
  CHECK_FALSE(fs::exists(dir.File("m/manifest.tsv")));

  // A build with an unreadable inventory writes no splits.
  r = Run(dir, "build --raw raw.tsv --inventory nope.tsv --seed 1 --out-dir out");
  CHECK(r.code == 2);
  CHECK_FALSE(fs::exists(dir.File("out/splits.tsv")));

  // No temporary files are left next to outputs.
  for (const auto &entry : fs::recursive_directory_iterator(dir.path)) {
    CHECK(entry.path().filename().string().find(".tmp") == std::string::npos);
  }
}

}  // namespace abx
