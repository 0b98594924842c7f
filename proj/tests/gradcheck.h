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

// Finite-difference gradient check on a tiny classifier: D=2, H=3, K=2,
// sentences of length 4.

#ifndef ABX_TESTS_GRADCHECK_H_
#define ABX_TESTS_GRADCHECK_H_

#include <algorithm>
#include <cmath>
#include <string>
#include <vector>

#include "abx/classifier.h"
#include "abx/dataset.h"
#include "abx/embedding.h"
#include "abx/random.h"

namespace abx::testing {

struct TinySetup {
  ClassifierModel model;
  ContextualStore store{2};
  std::vector<LabeledInstance> batch;
};

inline TinySetup MakeTiny(Provider provider, uint64_t seed) {
  TinySetup s;
  Rng rng(seed);
  for (int i = 0; i < 3; ++i) {
    std::vector<std::string> tokens = {"w" + std::to_string(UniformIndex(rng, 3)), "AB",
                                       "x" + std::to_string(i), "y"};
    std::swap(tokens[1], tokens[static_cast<size_t>(i) % 4]);
    const int pos = static_cast<int>(std::find(tokens.begin(), tokens.end(), "AB") - tokens.begin());
    s.batch.push_back({"AB", tokens, pos, i % 2});
  }
  std::vector<std::vector<std::string>> sentences;
  for (const auto &x : s.batch) sentences.push_back(x.tokens);
  sentences.pop_back();  // leave some tokens out of vocabulary
  ModelShape shape{provider, 2, 3, {3}};
  s.model = InitModel("AB", shape, {"alpha beta", "a bee"},
                      UsesVocabulary(provider) ? Vocabulary::FromSentences(sentences)
                                               : Vocabulary(),
                      seed);
  // Move mixing off its symmetric start so every gradient is informative.
  if (s.model.params.has_mix) {
    s.model.params.mix.raw = Eigen::Vector3d(0.3, -0.2, 0.1);
    s.model.params.mix.gamma = 1.3;
  }
  for (const auto &x : s.batch) {
    if (!s.store.Find(x.Key())) {
      ContextualLayerRecord r;
      r.key = x.Key();
      for (auto &layer : r.layers) {
        layer.resize(4, 2);
        for (int i = 0; i < 8; ++i) layer.data()[i] = static_cast<float>(UniformRange(rng, -1, 1));
      }
      s.store.Add(std::move(r));
    }
  }
  return s;
}

// Largest relative error between analytic and central-difference gradients
// over every trainable coordinate; *coords receives the coordinate count.
inline double MaxGradientError(Provider provider, uint64_t seed, int *coords) {
  TinySetup s = MakeTiny(provider, seed);
  const ProviderInputs inputs{&s.store};
  ModelParams grads;
  LossAndGrads(s.model, s.batch, inputs, &grads);

  std::vector<double> analytic;
  VisitBlocks(grads, [&](const std::string &, double *d, Eigen::Index r, Eigen::Index c) {
    analytic.insert(analytic.end(), d, d + r * c);
  });
  std::vector<double *> slots;
  VisitBlocks(s.model.params, [&](const std::string &, double *d, Eigen::Index r, Eigen::Index c) {
    for (Eigen::Index i = 0; i < r * c; ++i) slots.push_back(d + i);
  });
  if (slots.size() != analytic.size()) return INFINITY;
  ModelParams scratch;
  const double step = 1e-5;
  double worst = 0.0;
  for (size_t i = 0; i < slots.size(); ++i) {
    const double saved = *slots[i];
    *slots[i] = saved + step;
    const double up = LossAndGrads(s.model, s.batch, inputs, &scratch);
    *slots[i] = saved - step;
    const double down = LossAndGrads(s.model, s.batch, inputs, &scratch);
    *slots[i] = saved;
    const double numeric = (up - down) / (2 * step);
    const double diff = std::abs(numeric - analytic[i]);
    // Relative error against the larger magnitude, floored for coordinates
    // that are zero in both (e.g. embedding rows no sentence uses).
    const double scale = std::max({std::abs(numeric), std::abs(analytic[i]), 1e-6});
    worst = std::max(worst, diff / scale);
  }
  *coords = static_cast<int>(slots.size());
  return worst;
}

}  // namespace abx::testing

#endif  // ABX_TESTS_GRADCHECK_H_
