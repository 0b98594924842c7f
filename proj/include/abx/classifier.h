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

#ifndef ABX_CLASSIFIER_H_
#define ABX_CLASSIFIER_H_

#include <Eigen/Dense>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "abx/dataset.h"
#include "abx/embedding.h"

namespace abx {

// Which representation feeds the FFN head.
//   bow            count vector over the training vocabulary -> FFN
//   static-bilstm  trainable embedding table -> biLSTM -> h_a -> FFN
//   contextual-ffn mixed contextual layers, row a -> FFN
//   decbae         mixed contextual layers -> biLSTM -> h_a -> FFN
enum class Provider : uint8_t {
  kBow = 0,
  kStaticBiLstm = 1,
  kContextualFfn = 2,
  kDecbae = 3,
};

std::string_view ProviderName(Provider provider);
std::optional<Provider> ParseProvider(std::string_view name);
bool UsesContextual(Provider provider);
bool UsesLstm(Provider provider);
bool UsesVocabulary(Provider provider);

// One LSTM direction. Gate blocks are stacked in the order input, forget,
// cell, output: rows [0,H) are the input gate, [H,2H) the forget gate, etc.
struct LstmCell {
  Eigen::MatrixXd w_input;      // 4H x D
  Eigen::MatrixXd w_recurrent;  // 4H x H
  Eigen::VectorXd bias;         // 4H

  Eigen::Index hidden_dim() const { return w_recurrent.cols(); }
  Eigen::Index input_dim() const { return w_input.cols(); }
};

struct BiLstmParams {
  LstmCell forward;
  LstmCell backward;

  Eigen::Index hidden_dim() const { return forward.hidden_dim(); }
  Eigen::Index input_dim() const { return forward.input_dim(); }
};

// L x 2H; row t = [forward state at t ; backward state at t].
using BiLstmStates = Eigen::MatrixXd;

// Zero initial states in both directions. Throws DataError if E's width
// does not match the cells or E is empty.
BiLstmStates BiLstmForward(const EmbeddingSequence &embeddings,
                           const BiLstmParams &params);

// ReLU hidden layers followed by the K-way output layer.
struct FfnParams {
  std::vector<Eigen::MatrixXd> hidden_w;
  std::vector<Eigen::VectorXd> hidden_b;
  Eigen::MatrixXd out_w;  // K x width of the last hidden layer
  Eigen::VectorXd out_b;  // K

  Eigen::Index input_dim() const {
    return hidden_w.empty() ? out_w.cols() : hidden_w.front().cols();
  }
  Eigen::Index num_labels() const { return out_w.rows(); }
};

Eigen::VectorXd FfnLogits(const Eigen::VectorXd &features, const FfnParams &ffn);

// Numerically stable softmax.
Eigen::VectorXd Softmax(const Eigen::VectorXd &logits);

// p_k proportional to exp(w_k . FFN(h_a) + b_k).
Eigen::VectorXd Classify(const Eigen::VectorXd &features, const FfnParams &ffn);

// Every trainable block of a classifier. Blocks the provider does not use
// stay empty.
struct ModelParams {
  bool has_mix = false;
  MixingParams mix;
  Eigen::MatrixXd embedding;  // |V| x D for static-bilstm
  bool has_lstm = false;
  BiLstmParams lstm;
  FfnParams ffn;

  // Same shapes, all zeros.
  ModelParams ZerosLike() const;
  size_t NumParameters() const;
  bool operator==(const ModelParams &other) const;
};

// Calls f(name, data, rows, cols) for each present block, in a fixed order.
// Data is column-major.
template <typename Params, typename F>
void VisitBlocks(Params &p, F &&f) {
  if (p.has_mix) {
    f("mix.raw", p.mix.raw.data(), Eigen::Index{3}, Eigen::Index{1});
    f("mix.gamma", &p.mix.gamma, Eigen::Index{1}, Eigen::Index{1});
  }
  if (p.embedding.size() > 0) {
    f("embedding", p.embedding.data(), p.embedding.rows(), p.embedding.cols());
  }
  if (p.has_lstm) {
    auto cell = [&f](const char *prefix, auto &c) {
      const std::string base(prefix);
      f(base + ".w_input", c.w_input.data(), c.w_input.rows(), c.w_input.cols());
      f(base + ".w_recurrent", c.w_recurrent.data(), c.w_recurrent.rows(),
        c.w_recurrent.cols());
      f(base + ".bias", c.bias.data(), c.bias.rows(), Eigen::Index{1});
    };
    cell("lstm.forward", p.lstm.forward);
    cell("lstm.backward", p.lstm.backward);
  }
  for (size_t l = 0; l < p.ffn.hidden_w.size(); ++l) {
    const std::string base = "ffn.hidden" + std::to_string(l);
    auto &w = p.ffn.hidden_w[l];
    auto &b = p.ffn.hidden_b[l];
    f(base + ".w", w.data(), w.rows(), w.cols());
    f(base + ".b", b.data(), b.rows(), Eigen::Index{1});
  }
  f("ffn.out.w", p.ffn.out_w.data(), p.ffn.out_w.rows(), p.ffn.out_w.cols());
  f("ffn.out.b", p.ffn.out_b.data(), p.ffn.out_b.rows(), Eigen::Index{1});
}

// A trained (or initialized) per-abbreviation classifier.
struct ClassifierModel {
  std::string abbreviation;
  Provider provider = Provider::kDecbae;
  std::vector<std::string> labels;  // canonical definitions by group id
  Vocabulary vocab;                 // bow and static-bilstm only
  uint64_t seed = 0;
  ModelParams params;

  size_t num_labels() const { return labels.size(); }
  // Width of the provider's token representation (|V| for bow).
  Eigen::Index input_dim() const;
  Eigen::Index hidden_dim() const;

  bool operator==(const ClassifierModel &other) const;
};

struct ModelShape {
  Provider provider = Provider::kDecbae;
  Eigen::Index input_dim = 0;  // D; ignored for bow (|V| is used)
  Eigen::Index hidden_dim = 64;
  std::vector<Eigen::Index> ffn_widths = {64};
};

// Random initialization: LSTM weights U(-1/sqrt(H), 1/sqrt(H)) with forget
// bias 1, FFN weights Glorot-uniform with zero biases, embedding table
// U(-0.1, 0.1), mixing raw weights 0 and gamma 1.
ClassifierModel InitModel(std::string abbreviation, const ModelShape &shape,
                          std::vector<std::string> labels, Vocabulary vocab,
                          uint64_t seed);

// What a provider needs besides the tokens.
struct ProviderInputs {
  const ContextualStore *contextual = nullptr;
};

// Token representation E for one sentence under `model`'s provider (not
// defined for bow). Throws DataError if a contextual record is missing or
// its length does not match the tokens.
EmbeddingSequence Embed(const ClassifierModel &model,
                        std::span<const std::string> tokens,
                        const ProviderInputs &inputs);

// The FFN input for the token at `position`.
Eigen::VectorXd Features(const ClassifierModel &model,
                         std::span<const std::string> tokens, int position,
                         const ProviderInputs &inputs);

struct PredictionResult {
  Eigen::VectorXd probabilities;
  int label = 0;  // argmax, smallest index on ties
};

// Throws DataError if position is out of range or tokens[position] is not
// the model's abbreviation.
PredictionResult Predict(const ClassifierModel &model,
                         std::span<const std::string> tokens, int position,
                         const ProviderInputs &inputs);

int ArgMax(const Eigen::VectorXd &v);

// Mean cross-entropy over the batch and its gradient with respect to every
// block in model.params (written into *grads, which is resized).
// Throws NumericError naming the instance if a loss is not finite.
double LossAndGrads(const ClassifierModel &model,
                    std::span<const LabeledInstance> batch,
                    const ProviderInputs &inputs, ModelParams *grads);

// Scales grads so their global L2 norm is at most max_norm; returns the
// norm before clipping.
double ClipGlobalNorm(ModelParams &grads, double max_norm);

struct AdamConfig {
  double alpha = 1e-3;
  double beta1 = 0.9;
  double beta2 = 0.999;
  double epsilon = 1e-8;
};

struct AdamState {
  AdamConfig config;
  ModelParams m;
  ModelParams v;
  int64_t step = 0;

  AdamState() = default;
  AdamState(const ModelParams &like, AdamConfig cfg)
      : config(cfg), m(like.ZerosLike()), v(like.ZerosLike()) {}
};

// One bias-corrected Adam update.
void AdamStep(ModelParams &params, const ModelParams &grads, AdamState &state);

struct TrainConfig {
  Provider provider = Provider::kDecbae;
  Eigen::Index hidden_dim = 64;
  Eigen::Index ffn_width = 64;
  int ffn_layers = 1;
  Eigen::Index embed_dim = 50;  // static-bilstm table width
  AdamConfig adam;
  int batch_size = 32;
  int max_epochs = 50;
  int patience = 5;
  double clip_norm = 5.0;  // <= 0 disables clipping
  uint64_t seed = 0;
};

struct EpochLog {
  int epoch = 0;
  double train_loss = 0;
  double dev_accuracy = 0;
};

struct TrainResult {
  ClassifierModel model;  // parameters from the best dev epoch
  std::vector<EpochLog> log;
  int best_epoch = 0;
};

// Seeded minibatch Adam with early stopping on dev accuracy. When the
// dataset has no dev instances, train accuracy stands in for it.
TrainResult TrainClassifier(const AbbrevDataset &dataset,
                            const TrainConfig &config,
                            const ProviderInputs &inputs);

double Accuracy(const ClassifierModel &model,
                std::span<const LabeledInstance> instances,
                const ProviderInputs &inputs);

}  // namespace abx

#endif  // ABX_CLASSIFIER_H_
