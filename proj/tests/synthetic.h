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

// Synthetic data shared by the tests: a cue-token disambiguation task and
// deterministic pseudo-contextual vectors for its sentences.

#ifndef ABX_TESTS_SYNTHETIC_H_
#define ABX_TESTS_SYNTHETIC_H_

#include <cctype>
#include <sstream>
#include <string>
#include <vector>

#include "abx/binary_io.h"
#include "abx/classifier.h"
#include "abx/corpus.h"
#include "abx/dataset.h"
#include "abx/embedding.h"
#include "abx/random.h"

namespace abx::testing {

inline const std::vector<std::string> &Fillers() {
  static const std::vector<std::string> words = {
      "the", "of", "patients", "levels", "were", "in", "and", "a", "with",
      "study", "cells", "increased", "after", "treatment", "was", "for",
      "significant", "group", "response", "observed"};
  return words;
}

inline std::string CueToken(const std::string &abbr, int label) {
  return "cue" + abbr + std::to_string(label);
}

// Filler sentence with the abbreviation at a random position and the
// label's cue token somewhere else. The label is recoverable only from the
// cue.
inline LabeledInstance CueInstance(const std::string &abbr, int label, Rng &rng) {
  const size_t len = 6 + UniformIndex(rng, 6);
  std::vector<std::string> tokens(len);
  for (auto &t : tokens) t = Fillers()[UniformIndex(rng, Fillers().size())];
  const size_t pos = UniformIndex(rng, len);
  size_t cue = UniformIndex(rng, len - 1);
  if (cue >= pos) ++cue;
  tokens[pos] = abbr;
  tokens[cue] = CueToken(abbr, label);
  return {abbr, tokens, static_cast<int>(pos), label};
}

inline std::vector<LabeledInstance> CueInstances(const std::string &abbr, size_t n,
                                                 int num_labels, uint64_t seed) {
  Rng rng(seed);
  std::vector<LabeledInstance> out;
  for (size_t i = 0; i < n; ++i) {
    out.push_back(CueInstance(abbr, static_cast<int>(UniformIndex(rng, num_labels)), rng));
  }
  return out;
}

inline SenseInventory CueInventory(const std::string &abbr, int num_labels) {
  SenseInventory inv{abbr, {}};
  for (int k = 0; k < num_labels; ++k) {
    const std::string name = abbr + " sense " + std::to_string(k);
    inv.groups.push_back({k, name, {name}, 1});
  }
  return inv;
}

inline AbbrevDataset CueDataset(const std::string &abbr, size_t n, int num_labels,
                                uint64_t seed) {
  AbbrevDataset ds;
  ds.abbreviation = abbr;
  ds.inventory = CueInventory(abbr, num_labels);
  Splits s = SplitInstances(CueInstances(abbr, n, num_labels, seed), seed);
  ds.train = std::move(s.train);
  ds.dev = std::move(s.dev);
  ds.test = std::move(s.test);
  ds.seed = seed;
  return ds;
}

// Fixed pseudo-random vector per (token, layer); the same token always maps
// to the same vector, like a context-free encoder with layer-specific noise.
inline Eigen::RowVectorXf TokenVector(const std::string &token, int layer, int dim) {
  Rng rng(Fnv1a64(token) ^ (0x9e3779b97f4a7c15ULL * static_cast<uint64_t>(layer + 1)));
  Eigen::RowVectorXf v(dim);
  for (int j = 0; j < dim; ++j) v[j] = static_cast<float>(UniformRange(rng, -1.0, 1.0));
  return v;
}

inline ContextualLayerRecord PseudoContextual(const std::vector<std::string> &tokens,
                                              int dim) {
  ContextualLayerRecord r;
  r.key = JoinTokens(tokens);
  for (int layer = 0; layer < 3; ++layer) {
    r.layers[layer].resize(static_cast<Eigen::Index>(tokens.size()), dim);
    for (size_t i = 0; i < tokens.size(); ++i) {
      r.layers[layer].row(static_cast<Eigen::Index>(i)) = TokenVector(tokens[i], layer, dim);
    }
  }
  return r;
}

// Adds a record for every distinct sentence not already present.
// Closer to a real contextual model: layer 0 depends on the token alone,
// layers 1 and 2 blend the token with the sentence average of that layer.
inline ContextualLayerRecord ContextualStandIn(const std::vector<std::string> &tokens,
                                               int dim) {
  ContextualLayerRecord r = PseudoContextual(tokens, dim);
  for (int layer = 1; layer < 3; ++layer) {
    const Eigen::RowVectorXf mean = r.layers[layer].colwise().mean();
    r.layers[layer] = (0.5f * r.layers[layer]).rowwise() + 0.5f * mean;
  }
  return r;
}

inline void AddPseudoContextual(ContextualStore &store,
                                const std::vector<LabeledInstance> &instances) {
  for (const auto &x : instances) {
    if (!store.Find(x.Key())) {
      store.Add(PseudoContextual(x.tokens, static_cast<int>(store.dim())));
    }
  }
}

// Abstracts that define one planted abbreviation in their first sentence
// and mention it in later sentences next to cue words of the chosen sense.
struct Sense {
  std::string definition;
  std::vector<std::string> cues;
};

struct Planted {
  std::string abbreviation;
  std::vector<Sense> senses;
};

inline const std::vector<Planted> &PlantedAbbreviations() {
  static const std::vector<Planted> planted = {
      {"DAT",
       {{"dopamine transporter", {"striatal", "dopaminergic", "parkinsonism"}},
        {"direct antiglobulin test", {"hemolysis", "erythrocytes", "transfusion"}},
        {"dementia of Alzheimer type", {"amyloid", "memory", "neuropsychological"}},
        {"drug abuse treatment", {"addiction", "methadone", "relapse"}}}},
      {"ER",
       {{"endoplasmic reticulum", {"lumen", "chaperones", "unfolded"}},
        {"emergency room", {"triage", "ambulance", "admissions"}},
        {"estrogen receptor", {"tamoxifen", "mammary", "hormonal"}}}},
      {"CT",
       {{"computed tomography", {"scans", "radiation", "contrast"}},
        {"cognitive therapy", {"depression", "sessions", "counseling"}}}},
  };
  return planted;
}

template <typename T>
inline const T &Pick(const std::vector<T> &v, Rng &rng) {
  return v[UniformIndex(rng, v.size())];
}

inline std::string DefinitionVariant(std::string def, bool sentence_start, Rng &rng) {
  if (def.back() != 'y' && UniformUnit(rng) < 0.2) def += 's';
  if (sentence_start || UniformUnit(rng) < 0.15) def[0] = static_cast<char>(std::toupper(def[0]));
  return def;
}

inline std::string SyntheticAbstract(const Planted &p, const Sense &s, Rng &rng) {
  std::ostringstream out;
  switch (UniformIndex(rng, 3)) {
    case 0:
      out << DefinitionVariant(s.definition, true, rng) << " (" << p.abbreviation
          << ") was examined in this study.";
      break;
    case 1:
      out << "We investigated the " << DefinitionVariant(s.definition, false, rng) << " ("
          << p.abbreviation << ") in " << 10 + UniformIndex(rng, 90) << " patients.";
      break;
    default:
      out << "Here the role of " << DefinitionVariant(s.definition, false, rng) << " ("
          << p.abbreviation << ") was assessed.";
      break;
  }
  static const std::vector<std::string> starters = {"The", "These", "In", "Overall",
                                                    "Moreover", "Notably"};
  const size_t mentions = 6 + UniformIndex(rng, 5);
  for (size_t m = 0; m < mentions; ++m) {
    std::vector<std::string> words(5 + UniformIndex(rng, 5));
    for (auto &w : words) w = Pick(Fillers(), rng);
    auto insert = [&](const std::string &w) {
      words.insert(words.begin() + static_cast<long>(UniformIndex(rng, words.size() + 1)), w);
    };
    insert(p.abbreviation);
    const size_t cues = 1 + UniformIndex(rng, 2);
    for (size_t c = 0; c < cues; ++c) insert(Pick(s.cues, rng));
    out << ' ' << Pick(starters, rng);
    for (const auto &w : words) out << ' ' << w;
    out << '.';
  }
  return out.str();
}

inline std::vector<AbstractRecord> SyntheticCorpus(size_t n, uint64_t seed) {
  Rng rng(seed);
  std::vector<AbstractRecord> out;
  const auto &planted = PlantedAbbreviations();
  for (size_t i = 0; i < n; ++i) {
    const Planted &p = planted[i % planted.size()];
    const Sense &s = Pick(p.senses, rng);
    out.push_back({"S" + std::to_string(1000 + i), SyntheticAbstract(p, s, rng)});
  }
  return out;
}

}  // namespace abx::testing

#endif  // ABX_TESTS_SYNTHETIC_H_
