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

#ifndef ABX_METRICS_H_
#define ABX_METRICS_H_

#include <cstdint>
#include <functional>
#include <span>
#include <string>
#include <vector>

#include "abx/dataset.h"

namespace abx {

// K x K counts; rows are ground truth, columns are predictions.
class ConfusionMatrix {
 public:
  explicit ConfusionMatrix(size_t k = 0) : k_(k), counts_(k * k, 0) {}

  // Throws DataError if lengths differ or a label is outside [0, k).
  static ConfusionMatrix FromPairs(std::span<const int> truth,
                                   std::span<const int> predicted, size_t k);

  void Add(int truth, int predicted);
  int64_t at(size_t truth, size_t predicted) const {
    return counts_[truth * k_ + predicted];
  }
  size_t size() const { return k_; }
  int64_t total() const;
  int64_t trace() const;
  int64_t RowSum(size_t c) const;
  int64_t ColSum(size_t c) const;

  bool operator==(const ConfusionMatrix &) const = default;

 private:
  size_t k_;
  std::vector<int64_t> counts_;
};

// The following throw DataError on an empty matrix.
double Accuracy(const ConfusionMatrix &cm);
// Unweighted mean of per-class F1; a class with P + R = 0 (including one
// with neither true nor predicted instances) contributes 0.
double MacroF1(const ConfusionMatrix &cm);
// (p_o - p_e) / (1 - p_e). When p_e = 1: 1 if p_o = 1, else 0.
double CohensKappa(const ConfusionMatrix &cm);

struct MetricsReport {
  double accuracy = 0;
  double macro_f1 = 0;
  double kappa = 0;
  double expected_agreement = 0;
  std::vector<double> precision, recall, f1;
  std::vector<double> truth_share;      // p_c
  std::vector<double> predicted_share;  // p̂_c
  int64_t n = 0;
};

MetricsReport Report(const ConfusionMatrix &cm);

// Constant predictor of the most frequent training label (ties: smallest).
class MajorityBaseline {
 public:
  // Throws DataError on empty input.
  static MajorityBaseline Fit(std::span<const int> train_labels);

  int label() const { return label_; }
  int Predict(const LabeledInstance &) const { return label_; }

 private:
  explicit MajorityBaseline(int label) : label_(label) {}
  int label_;
};

using Predictor = std::function<int(const LabeledInstance &)>;

struct Evaluation {
  MetricsReport report;
  ConfusionMatrix confusion;
};

// Runs `predictor` over `test` with K = num_labels. Throws DataError on an
// empty test set or any truth/predicted label outside [0, K).
Evaluation Evaluate(const Predictor &predictor,
                    std::span<const LabeledInstance> test, size_t num_labels);

struct MeanStd {
  double mean = 0;
  double stddev = 0;  // sample standard deviation; 0 for one value
};

MeanStd Summarize(std::span<const double> values);

struct AggregateReport {
  size_t n_abbreviations = 0;
  MeanStd accuracy, macro_f1, kappa;
};

AggregateReport Aggregate(std::span<const MetricsReport> reports);

}  // namespace abx

#endif  // ABX_METRICS_H_
