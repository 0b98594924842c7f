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

#include "abx/metrics.h"

#include <cmath>

#include "abx/errors.h"

namespace abx {
namespace {

void RequireNonEmpty(const ConfusionMatrix &cm) {
  if (cm.total() <= 0) throw DataError("metrics of an empty confusion matrix");
}

struct ClassScores {
  double precision = 0, recall = 0, f1 = 0;
};

ClassScores ScoreClass(const ConfusionMatrix &cm, size_t c) {
  const auto tp = static_cast<double>(cm.at(c, c));
  const auto predicted = static_cast<double>(cm.ColSum(c));
  const auto actual = static_cast<double>(cm.RowSum(c));
  ClassScores s;
  s.precision = predicted > 0 ? tp / predicted : 0.0;
  s.recall = actual > 0 ? tp / actual : 0.0;
  const double denom = s.precision + s.recall;
  s.f1 = denom > 0 ? 2.0 * s.precision * s.recall / denom : 0.0;
  return s;
}

double ExpectedAgreement(const ConfusionMatrix &cm) {
  const auto n = static_cast<double>(cm.total());
  double pe = 0.0;
  for (size_t c = 0; c < cm.size(); ++c) {
    pe += (static_cast<double>(cm.RowSum(c)) / n) *
          (static_cast<double>(cm.ColSum(c)) / n);
  }
  return pe;
}

}  // namespace

ConfusionMatrix ConfusionMatrix::FromPairs(std::span<const int> truth,
                                           std::span<const int> predicted,
                                           size_t k) {
  if (truth.size() != predicted.size()) {
    throw DataError("truth and prediction lists differ in length");
  }
  ConfusionMatrix cm(k);
  for (size_t i = 0; i < truth.size(); ++i) cm.Add(truth[i], predicted[i]);
  return cm;
}

void ConfusionMatrix::Add(int truth, int predicted) {
  const auto k = static_cast<int>(k_);
  if (truth < 0 || truth >= k || predicted < 0 || predicted >= k) {
    throw DataError("label pair (" + std::to_string(truth) + ", " +
                    std::to_string(predicted) + ") outside [0," +
                    std::to_string(k_) + ")");
  }
  ++counts_[static_cast<size_t>(truth) * k_ + static_cast<size_t>(predicted)];
}

int64_t ConfusionMatrix::total() const {
  int64_t t = 0;
  for (int64_t c : counts_) t += c;
  return t;
}

int64_t ConfusionMatrix::trace() const {
  int64_t t = 0;
  for (size_t c = 0; c < k_; ++c) t += at(c, c);
  return t;
}

int64_t ConfusionMatrix::RowSum(size_t c) const {
  int64_t s = 0;
  for (size_t j = 0; j < k_; ++j) s += at(c, j);
  return s;
}

int64_t ConfusionMatrix::ColSum(size_t c) const {
  int64_t s = 0;
  for (size_t i = 0; i < k_; ++i) s += at(i, c);
  return s;
}

double Accuracy(const ConfusionMatrix &cm) {
  RequireNonEmpty(cm);
  return static_cast<double>(cm.trace()) / static_cast<double>(cm.total());
}

double MacroF1(const ConfusionMatrix &cm) {
  RequireNonEmpty(cm);
  double sum = 0.0;
  for (size_t c = 0; c < cm.size(); ++c) sum += ScoreClass(cm, c).f1;
  return sum / static_cast<double>(cm.size());
}

double CohensKappa(const ConfusionMatrix &cm) {
  RequireNonEmpty(cm);
  const double po = Accuracy(cm);
  const double pe = ExpectedAgreement(cm);
  if (pe >= 1.0) return po >= 1.0 ? 1.0 : 0.0;
  return (po - pe) / (1.0 - pe);
}

MetricsReport Report(const ConfusionMatrix &cm) {
  RequireNonEmpty(cm);
  MetricsReport r;
  r.n = cm.total();
  r.accuracy = Accuracy(cm);
  r.macro_f1 = MacroF1(cm);
  r.kappa = CohensKappa(cm);
  r.expected_agreement = ExpectedAgreement(cm);
  const auto n = static_cast<double>(r.n);
  for (size_t c = 0; c < cm.size(); ++c) {
    const ClassScores s = ScoreClass(cm, c);
    r.precision.push_back(s.precision);
    r.recall.push_back(s.recall);
    r.f1.push_back(s.f1);
    r.truth_share.push_back(static_cast<double>(cm.RowSum(c)) / n);
    r.predicted_share.push_back(static_cast<double>(cm.ColSum(c)) / n);
  }
  return r;
}

MajorityBaseline MajorityBaseline::Fit(std::span<const int> train_labels) {
  if (train_labels.empty()) throw DataError("majority baseline needs labels");
  std::vector<int64_t> counts;
  for (int label : train_labels) {
    if (label < 0) throw DataError("negative label");
    if (static_cast<size_t>(label) >= counts.size()) {
      counts.resize(static_cast<size_t>(label) + 1, 0);
    }
    ++counts[static_cast<size_t>(label)];
  }
  int best = 0;
  for (size_t c = 1; c < counts.size(); ++c) {
    if (counts[c] > counts[static_cast<size_t>(best)]) best = static_cast<int>(c);
  }
  return MajorityBaseline(best);
}

Evaluation Evaluate(const Predictor &predictor,
                    std::span<const LabeledInstance> test, size_t num_labels) {
  if (test.empty()) throw DataError("empty test set");
  ConfusionMatrix cm(num_labels);
  for (const LabeledInstance &x : test) cm.Add(x.label, predictor(x));
  return {Report(cm), std::move(cm)};
}

MeanStd Summarize(std::span<const double> values) {
  MeanStd out;
  if (values.empty()) return out;
  for (double v : values) out.mean += v;
  out.mean /= static_cast<double>(values.size());
  if (values.size() > 1) {
    double ss = 0.0;
    for (double v : values) ss += (v - out.mean) * (v - out.mean);
    out.stddev = std::sqrt(ss / static_cast<double>(values.size() - 1));
  }
  return out;
}

AggregateReport Aggregate(std::span<const MetricsReport> reports) {
  AggregateReport agg;
  agg.n_abbreviations = reports.size();
  std::vector<double> acc, f1, kappa;
  for (const MetricsReport &r : reports) {
    acc.push_back(r.accuracy);
    f1.push_back(r.macro_f1);
    kappa.push_back(r.kappa);
  }
  agg.accuracy = Summarize(acc);
  agg.macro_f1 = Summarize(f1);
  agg.kappa = Summarize(kappa);
  return agg;
}

}  // namespace abx
