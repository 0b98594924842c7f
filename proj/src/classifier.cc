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

#include "abx/classifier.h"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "abx/errors.h"
#include "abx/random.h"

namespace abx {
namespace {

using Eigen::Index;
using Eigen::MatrixXd;
using Eigen::VectorXd;

double Sigmoid(double x) { return 1.0 / (1.0 + std::exp(-x)); }

// Per-step activations of one LSTM direction, columns indexed by token.
struct LstmTrace {
  MatrixXd gates;   // 4H x L, post-activation (i, f, g, o)
  MatrixXd cell;    // H x L
  MatrixXd tanh_c;  // H x L
  MatrixXd hidden;  // H x L
};

// Runs the cell over columns of `inputs` (D x L) left to right, or right to
// left when `reverse`, stopping after column `stop` has been computed.
LstmTrace RunLstm(const LstmCell &cell, const MatrixXd &inputs, bool reverse,
                  Index stop) {
  const Index h = cell.hidden_dim();
  const Index len = inputs.cols();
  LstmTrace tr{MatrixXd::Zero(4 * h, len), MatrixXd::Zero(h, len),
               MatrixXd::Zero(h, len), MatrixXd::Zero(h, len)};
  VectorXd h_prev = VectorXd::Zero(h);
  VectorXd c_prev = VectorXd::Zero(h);
  const Index step = reverse ? -1 : 1;
  for (Index t = reverse ? len - 1 : 0;; t += step) {
    VectorXd a = cell.bias + cell.w_input * inputs.col(t) +
                 cell.w_recurrent * h_prev;
    for (Index k = 0; k < h; ++k) {
      a[k] = Sigmoid(a[k]);
      a[h + k] = Sigmoid(a[h + k]);
      a[2 * h + k] = std::tanh(a[2 * h + k]);
      a[3 * h + k] = Sigmoid(a[3 * h + k]);
    }
    const VectorXd c = a.segment(h, h).cwiseProduct(c_prev) +
                       a.segment(0, h).cwiseProduct(a.segment(2 * h, h));
    const VectorXd tc = c.array().tanh().matrix();
    const VectorXd hid = a.segment(3 * h, h).cwiseProduct(tc);
    tr.gates.col(t) = a;
    tr.cell.col(t) = c;
    tr.tanh_c.col(t) = tc;
    tr.hidden.col(t) = hid;
    h_prev = hid;
    c_prev = c;
    if (t == stop) break;
  }
  return tr;
}

// Backpropagates dL/dh at column `target` through the steps that produced
// it. Accumulates into `grad` and, when given, into `d_inputs` (D x L).
void BackpropLstm(const LstmCell &cell, const MatrixXd &inputs,
                  const LstmTrace &tr, bool reverse, Index target,
                  const VectorXd &d_target, LstmCell &grad,
                  MatrixXd *d_inputs) {
  const Index h = cell.hidden_dim();
  const Index len = inputs.cols();
  VectorXd dh = d_target;
  VectorXd dc_next = VectorXd::Zero(h);
  VectorXd da(4 * h);
  const Index back = reverse ? 1 : -1;  // direction of earlier steps
  for (Index t = target; t >= 0 && t < len; t += back) {
    const Index prev = t + back;
    const bool has_prev = prev >= 0 && prev < len;
    const auto g = tr.gates.col(t);
    const auto i_gate = g.segment(0, h);
    const auto f_gate = g.segment(h, h);
    const auto c_gate = g.segment(2 * h, h);
    const auto o_gate = g.segment(3 * h, h);
    const auto tc = tr.tanh_c.col(t);

    const VectorXd dc =
        dc_next + (dh.array() * o_gate.array() * (1.0 - tc.array().square()))
                      .matrix();
    const VectorXd c_prev = has_prev ? VectorXd(tr.cell.col(prev))
                                     : VectorXd::Zero(h);
    const VectorXd h_prev = has_prev ? VectorXd(tr.hidden.col(prev))
                                     : VectorXd::Zero(h);
    da.segment(0, h) = (dc.array() * c_gate.array() * i_gate.array() *
                        (1.0 - i_gate.array())).matrix();
    da.segment(h, h) = (dc.array() * c_prev.array() * f_gate.array() *
                        (1.0 - f_gate.array())).matrix();
    da.segment(2 * h, h) = (dc.array() * i_gate.array() *
                            (1.0 - c_gate.array().square())).matrix();
    da.segment(3 * h, h) = (dh.array() * tc.array() * o_gate.array() *
                            (1.0 - o_gate.array())).matrix();

    grad.w_input.noalias() += da * inputs.col(t).transpose();
    if (has_prev) grad.w_recurrent.noalias() += da * h_prev.transpose();
    grad.bias += da;
    if (d_inputs) d_inputs->col(t).noalias() += cell.w_input.transpose() * da;

    dh.noalias() = cell.w_recurrent.transpose() * da;
    dc_next = dc.cwiseProduct(f_gate);
  }
}

void InitUniform(MatrixXd &m, Index rows, Index cols, double bound, Rng &rng) {
  m.resize(rows, cols);
  for (Index j = 0; j < cols; ++j) {
    for (Index i = 0; i < rows; ++i) m(i, j) = UniformRange(rng, -bound, bound);
  }
}

LstmCell InitCell(Index input_dim, Index hidden_dim, Rng &rng) {
  LstmCell c;
  const double bound = 1.0 / std::sqrt(static_cast<double>(hidden_dim));
  InitUniform(c.w_input, 4 * hidden_dim, input_dim, bound, rng);
  InitUniform(c.w_recurrent, 4 * hidden_dim, hidden_dim, bound, rng);
  c.bias = VectorXd::Zero(4 * hidden_dim);
  c.bias.segment(hidden_dim, hidden_dim).setOnes();
  return c;
}

double GlorotBound(Index fan_in, Index fan_out) {
  return std::sqrt(6.0 / static_cast<double>(fan_in + fan_out));
}

// Forward state needed to backpropagate one instance.
struct InstanceTrace {
  EmbeddingSequence embeddings;  // L x D; empty for bow
  MatrixXd inputs;               // D x L transposed embeddings (lstm only)
  LstmTrace forward, backward;
  VectorXd features;
  std::vector<VectorXd> hidden_pre;  // FFN pre-activations
  std::vector<VectorXd> hidden_out;  // FFN activations
  VectorXd logits;
  const ContextualLayerRecord *record = nullptr;
  std::vector<int> token_ids;  // static-bilstm
};

const ContextualLayerRecord &RequireRecord(std::span<const std::string> tokens,
                                           const ProviderInputs &inputs) {
  if (!inputs.contextual) {
    throw DataError("provider needs contextual embeddings but none were given");
  }
  const std::string key = JoinTokens(tokens);
  const ContextualLayerRecord *rec = inputs.contextual->Find(key);
  if (!rec) throw DataError("no contextual record for sentence '" + key + "'");
  if (rec->length() != static_cast<Index>(tokens.size())) {
    throw DataError("contextual record for '" + key + "' has " +
                    std::to_string(rec->length()) + " rows, sentence has " +
                    std::to_string(tokens.size()) + " tokens");
  }
  return *rec;
}

void CheckPosition(const ClassifierModel &model,
                   std::span<const std::string> tokens, int position) {
  if (position < 0 || static_cast<size_t>(position) >= tokens.size()) {
    throw DataError("position " + std::to_string(position) +
                    " out of range for a sentence of " +
                    std::to_string(tokens.size()) + " tokens");
  }
  if (tokens[static_cast<size_t>(position)] != model.abbreviation) {
    throw DataError("token '" + tokens[static_cast<size_t>(position)] +
                    "' at position " + std::to_string(position) +
                    " is not the model abbreviation '" + model.abbreviation +
                    "'");
  }
}

void RunFfn(const FfnParams &ffn, InstanceTrace &tr) {
  tr.hidden_pre.clear();
  tr.hidden_out.clear();
  VectorXd z = tr.features;
  for (size_t l = 0; l < ffn.hidden_w.size(); ++l) {
    VectorXd a = ffn.hidden_b[l] + ffn.hidden_w[l] * z;
    z = a.cwiseMax(0.0);
    tr.hidden_pre.push_back(std::move(a));
    tr.hidden_out.push_back(z);
  }
  tr.logits = ffn.out_b + ffn.out_w * z;
}

InstanceTrace ForwardTrace(const ClassifierModel &model,
                           std::span<const std::string> tokens, int position,
                           const ProviderInputs &inputs) {
  InstanceTrace tr;
  const ModelParams &p = model.params;
  const Index a = position;
  switch (model.provider) {
    case Provider::kBow:
      tr.features = BowVector(tokens, model.vocab);
      break;
    case Provider::kStaticBiLstm:
      tr.token_ids.reserve(tokens.size());
      for (const auto &t : tokens) tr.token_ids.push_back(model.vocab.Index(t));
      tr.embeddings = EmbedStatic(tokens, model.vocab, p.embedding);
      break;
    case Provider::kContextualFfn:
    case Provider::kDecbae:
      tr.record = &RequireRecord(tokens, inputs);
      if (tr.record->dim() != model.input_dim()) {
        throw DataError("contextual dimension " +
                        std::to_string(tr.record->dim()) +
                        " does not match model dimension " +
                        std::to_string(model.input_dim()));
      }
      tr.embeddings = MixLayers(*tr.record, p.mix);
      if (model.provider == Provider::kContextualFfn) {
        tr.features = tr.embeddings.row(a).transpose();
      }
      break;
  }
  if (UsesLstm(model.provider)) {
    tr.inputs = tr.embeddings.transpose();
    tr.forward = RunLstm(p.lstm.forward, tr.inputs, false, a);
    tr.backward = RunLstm(p.lstm.backward, tr.inputs, true, a);
    const Index h = p.lstm.hidden_dim();
    tr.features.resize(2 * h);
    tr.features.head(h) = tr.forward.hidden.col(a);
    tr.features.tail(h) = tr.backward.hidden.col(a);
  }
  RunFfn(p.ffn, tr);
  return tr;
}

// Accumulates dLoss/dparams into g given dLoss/dlogits.
void BackwardTrace(const ClassifierModel &model, const InstanceTrace &tr,
                   int position, const VectorXd &d_logits, ModelParams &g) {
  const ModelParams &p = model.params;
  const FfnParams &ffn = p.ffn;
  const VectorXd &last =
      tr.hidden_out.empty() ? tr.features : tr.hidden_out.back();
  g.ffn.out_w.noalias() += d_logits * last.transpose();
  g.ffn.out_b += d_logits;
  VectorXd dz = ffn.out_w.transpose() * d_logits;
  for (size_t l = ffn.hidden_w.size(); l-- > 0;) {
    const VectorXd da =
        (tr.hidden_pre[l].array() > 0.0).select(dz, VectorXd::Zero(dz.size()));
    const VectorXd &below = l == 0 ? tr.features : tr.hidden_out[l - 1];
    g.ffn.hidden_w[l].noalias() += da * below.transpose();
    g.ffn.hidden_b[l] += da;
    dz.noalias() = ffn.hidden_w[l].transpose() * da;
  }
  if (model.provider == Provider::kBow) return;

  const Index a = position;
  MatrixXd d_embed;  // L x D
  if (UsesLstm(model.provider)) {
    const Index h = p.lstm.hidden_dim();
    MatrixXd d_inputs = MatrixXd::Zero(tr.inputs.rows(), tr.inputs.cols());
    BackpropLstm(p.lstm.forward, tr.inputs, tr.forward, false, a, dz.head(h),
                 g.lstm.forward, &d_inputs);
    BackpropLstm(p.lstm.backward, tr.inputs, tr.backward, true, a, dz.tail(h),
                 g.lstm.backward, &d_inputs);
    d_embed = d_inputs.transpose();
  } else {
    d_embed = MatrixXd::Zero(tr.embeddings.rows(), tr.embeddings.cols());
    d_embed.row(a) = dz.transpose();
  }

  if (model.provider == Provider::kStaticBiLstm) {
    for (size_t t = 0; t < tr.token_ids.size(); ++t) {
      g.embedding.row(tr.token_ids[t]) += d_embed.row(static_cast<Index>(t));
    }
    return;
  }

  // E = gamma * sum_j s_j L_j with s = softmax(raw).
  const Eigen::Vector3d s = Softmax3(p.mix.raw);
  Eigen::Vector3d ds;
  double d_gamma = 0.0;
  for (int j = 0; j < 3; ++j) {
    const double dot =
        (d_embed.array() * tr.record->layers[j].cast<double>().array()).sum();
    ds[j] = p.mix.gamma * dot;
    d_gamma += s[j] * dot;
  }
  g.mix.gamma += d_gamma;
  g.mix.raw += (s.array() * (ds.array() - s.dot(ds))).matrix();
}

}  // namespace

std::string_view ProviderName(Provider provider) {
  switch (provider) {
    case Provider::kBow:
      return "bow";
    case Provider::kStaticBiLstm:
      return "static-bilstm";
    case Provider::kContextualFfn:
      return "contextual-ffn";
    case Provider::kDecbae:
      return "decbae";
  }
  return "unknown";
}

std::optional<Provider> ParseProvider(std::string_view name) {
  for (Provider p : {Provider::kBow, Provider::kStaticBiLstm,
                     Provider::kContextualFfn, Provider::kDecbae}) {
    if (ProviderName(p) == name) return p;
  }
  return std::nullopt;
}

bool UsesContextual(Provider provider) {
  return provider == Provider::kContextualFfn || provider == Provider::kDecbae;
}

bool UsesLstm(Provider provider) {
  return provider == Provider::kStaticBiLstm || provider == Provider::kDecbae;
}

bool UsesVocabulary(Provider provider) {
  return provider == Provider::kBow || provider == Provider::kStaticBiLstm;
}

BiLstmStates BiLstmForward(const EmbeddingSequence &embeddings,
                           const BiLstmParams &params) {
  if (embeddings.rows() < 1) throw DataError("biLSTM input has no tokens");
  if (embeddings.cols() != params.input_dim() ||
      params.backward.input_dim() != params.input_dim()) {
    throw DataError("biLSTM input width " + std::to_string(embeddings.cols()) +
                    " does not match parameter width " +
                    std::to_string(params.input_dim()));
  }
  const MatrixXd inputs = embeddings.transpose();
  const Index len = inputs.cols();
  const LstmTrace fwd = RunLstm(params.forward, inputs, false, len - 1);
  const LstmTrace bwd = RunLstm(params.backward, inputs, true, 0);
  const Index h = params.hidden_dim();
  BiLstmStates states(len, 2 * h);
  states.leftCols(h) = fwd.hidden.transpose();
  states.rightCols(h) = bwd.hidden.transpose();
  return states;
}

VectorXd FfnLogits(const VectorXd &features, const FfnParams &ffn) {
  VectorXd z = features;
  for (size_t l = 0; l < ffn.hidden_w.size(); ++l) {
    z = (ffn.hidden_b[l] + ffn.hidden_w[l] * z).cwiseMax(0.0);
  }
  return ffn.out_b + ffn.out_w * z;
}

VectorXd Softmax(const VectorXd &logits) {
  const VectorXd z = (logits.array() - logits.maxCoeff()).exp().matrix();
  return z / z.sum();
}

VectorXd Classify(const VectorXd &features, const FfnParams &ffn) {
  return Softmax(FfnLogits(features, ffn));
}

ModelParams ModelParams::ZerosLike() const {
  ModelParams z = *this;
  VisitBlocks(z, [](const std::string &, double *data, Index rows, Index cols) {
    std::fill(data, data + rows * cols, 0.0);
  });
  return z;
}

size_t ModelParams::NumParameters() const {
  size_t n = 0;
  VisitBlocks(*this, [&n](const std::string &, const double *, Index rows,
                          Index cols) { n += static_cast<size_t>(rows * cols); });
  return n;
}

bool ModelParams::operator==(const ModelParams &other) const {
  std::vector<std::pair<std::string, std::vector<double>>> mine, theirs;
  auto collect = [](auto &out) {
    return [&out](const std::string &name, const double *data, Index rows,
                  Index cols) {
      out.emplace_back(name + "#" + std::to_string(rows) + "x" +
                           std::to_string(cols),
                       std::vector<double>(data, data + rows * cols));
    };
  };
  VisitBlocks(*this, collect(mine));
  VisitBlocks(other, collect(theirs));
  return mine == theirs;
}

Index ClassifierModel::input_dim() const {
  switch (provider) {
    case Provider::kBow:
      return static_cast<Index>(vocab.size());
    case Provider::kStaticBiLstm:
      return params.embedding.cols();
    case Provider::kContextualFfn:
      return params.ffn.input_dim();
    case Provider::kDecbae:
      return params.lstm.input_dim();
  }
  return 0;
}

Index ClassifierModel::hidden_dim() const {
  return params.has_lstm ? params.lstm.hidden_dim() : 0;
}

bool ClassifierModel::operator==(const ClassifierModel &other) const {
  return abbreviation == other.abbreviation && provider == other.provider &&
         labels == other.labels && vocab == other.vocab &&
         seed == other.seed && params == other.params;
}

ClassifierModel InitModel(std::string abbreviation, const ModelShape &shape,
                          std::vector<std::string> labels, Vocabulary vocab,
                          uint64_t seed) {
  if (labels.empty()) throw DataError("model needs at least one label");
  ClassifierModel m;
  m.abbreviation = std::move(abbreviation);
  m.provider = shape.provider;
  m.labels = std::move(labels);
  m.vocab = std::move(vocab);
  m.seed = seed;
  Rng rng(seed);
  ModelParams &p = m.params;

  const Index d = shape.provider == Provider::kBow
                      ? static_cast<Index>(m.vocab.size())
                      : shape.input_dim;
  if (d < 1) throw DataError("model input dimension must be positive");
  if (UsesContextual(shape.provider)) p.has_mix = true;
  if (shape.provider == Provider::kStaticBiLstm) {
    InitUniform(p.embedding, static_cast<Index>(m.vocab.size()), d, 0.1, rng);
  }
  Index width = d;
  if (UsesLstm(shape.provider)) {
    if (shape.hidden_dim < 1) throw DataError("hidden size must be positive");
    p.has_lstm = true;
    p.lstm.forward = InitCell(d, shape.hidden_dim, rng);
    p.lstm.backward = InitCell(d, shape.hidden_dim, rng);
    width = 2 * shape.hidden_dim;
  }
  for (Index w : shape.ffn_widths) {
    if (w < 1) throw DataError("FFN width must be positive");
    MatrixXd weights;
    InitUniform(weights, w, width, GlorotBound(width, w), rng);
    p.ffn.hidden_w.push_back(std::move(weights));
    p.ffn.hidden_b.push_back(VectorXd::Zero(w));
    width = w;
  }
  const Index k = static_cast<Index>(m.labels.size());
  InitUniform(p.ffn.out_w, k, width, GlorotBound(width, k), rng);
  p.ffn.out_b = VectorXd::Zero(k);
  return m;
}

EmbeddingSequence Embed(const ClassifierModel &model,
                        std::span<const std::string> tokens,
                        const ProviderInputs &inputs) {
  switch (model.provider) {
    case Provider::kBow:
      throw DataError("bag-of-words models have no token embeddings");
    case Provider::kStaticBiLstm:
      return EmbedStatic(tokens, model.vocab, model.params.embedding);
    case Provider::kContextualFfn:
    case Provider::kDecbae:
      return MixLayers(RequireRecord(tokens, inputs), model.params.mix);
  }
  return {};
}

VectorXd Features(const ClassifierModel &model,
                  std::span<const std::string> tokens, int position,
                  const ProviderInputs &inputs) {
  CheckPosition(model, tokens, position);
  return ForwardTrace(model, tokens, position, inputs).features;
}

int ArgMax(const VectorXd &v) {
  int best = 0;
  for (Index k = 1; k < v.size(); ++k) {
    if (v[k] > v[best]) best = static_cast<int>(k);
  }
  return best;
}

PredictionResult Predict(const ClassifierModel &model,
                         std::span<const std::string> tokens, int position,
                         const ProviderInputs &inputs) {
  CheckPosition(model, tokens, position);
  InstanceTrace tr = ForwardTrace(model, tokens, position, inputs);
  PredictionResult out;
  out.probabilities = Softmax(tr.logits);
  out.label = ArgMax(tr.logits);
  return out;
}

double LossAndGrads(const ClassifierModel &model,
                    std::span<const LabeledInstance> batch,
                    const ProviderInputs &inputs, ModelParams *grads) {
  if (batch.empty()) throw DataError("empty batch");
  *grads = model.params.ZerosLike();
  const double scale = 1.0 / static_cast<double>(batch.size());
  const Index k = static_cast<Index>(model.num_labels());
  double total = 0.0;
  for (const LabeledInstance &x : batch) {
    if (x.label < 0 || x.label >= k) {
      throw DataError("label " + std::to_string(x.label) + " outside [0," +
                      std::to_string(k) + ") for '" + x.Key() + "'");
    }
    CheckPosition(model, x.tokens, x.position);
    InstanceTrace tr = ForwardTrace(model, x.tokens, x.position, inputs);
    const double m = tr.logits.maxCoeff();
    const double lse = m + std::log((tr.logits.array() - m).exp().sum());
    const double loss = lse - tr.logits[x.label];
    if (!std::isfinite(loss)) {
      throw NumericError("non-finite loss for instance '" + x.Key() +
                         "' at position " + std::to_string(x.position));
    }
    total += loss;
    VectorXd d_logits = (tr.logits.array() - lse).exp().matrix();
    d_logits[x.label] -= 1.0;
    d_logits *= scale;
    BackwardTrace(model, tr, x.position, d_logits, *grads);
  }
  return total * scale;
}

double ClipGlobalNorm(ModelParams &grads, double max_norm) {
  double sq = 0.0;
  VisitBlocks(grads, [&sq](const std::string &, const double *data, Index rows,
                           Index cols) {
    for (Index i = 0; i < rows * cols; ++i) sq += data[i] * data[i];
  });
  const double norm = std::sqrt(sq);
  if (max_norm > 0.0 && norm > max_norm) {
    const double f = max_norm / norm;
    VisitBlocks(grads, [f](const std::string &, double *data, Index rows,
                           Index cols) {
      for (Index i = 0; i < rows * cols; ++i) data[i] *= f;
    });
  }
  return norm;
}

void AdamStep(ModelParams &params, const ModelParams &grads, AdamState &state) {
  struct Block {
    double *data;
    Index size;
  };
  std::vector<Block> p, m, v;
  std::vector<const double *> g;
  auto into = [](std::vector<Block> &out) {
    return [&out](const std::string &, double *data, Index rows, Index cols) {
      out.push_back({data, rows * cols});
    };
  };
  VisitBlocks(params, into(p));
  VisitBlocks(state.m, into(m));
  VisitBlocks(state.v, into(v));
  std::vector<Index> gsize;
  VisitBlocks(grads, [&](const std::string &, const double *data, Index rows,
                         Index cols) {
    g.push_back(data);
    gsize.push_back(rows * cols);
  });
  if (p.size() != g.size() || p.size() != m.size() || p.size() != v.size()) {
    throw DataError("Adam: parameter, gradient and moment blocks differ");
  }
  for (size_t b = 0; b < p.size(); ++b) {
    if (p[b].size != gsize[b] || p[b].size != m[b].size ||
        p[b].size != v[b].size) {
      throw DataError("Adam: block shapes differ");
    }
  }

  const AdamConfig &c = state.config;
  ++state.step;
  const double t = static_cast<double>(state.step);
  const double bc1 = 1.0 - std::pow(c.beta1, t);
  const double bc2 = 1.0 - std::pow(c.beta2, t);
  for (size_t b = 0; b < p.size(); ++b) {
    for (Index i = 0; i < p[b].size; ++i) {
      const double gi = g[b][i];
      double &mi = m[b].data[i];
      double &vi = v[b].data[i];
      mi = c.beta1 * mi + (1.0 - c.beta1) * gi;
      vi = c.beta2 * vi + (1.0 - c.beta2) * gi * gi;
      const double m_hat = mi / bc1;
      const double v_hat = vi / bc2;
      p[b].data[i] -= c.alpha * m_hat / (std::sqrt(v_hat) + c.epsilon);
    }
  }
}

double Accuracy(const ClassifierModel &model,
                std::span<const LabeledInstance> instances,
                const ProviderInputs &inputs) {
  if (instances.empty()) return 0.0;
  size_t right = 0;
  for (const LabeledInstance &x : instances) {
    if (Predict(model, x.tokens, x.position, inputs).label == x.label) ++right;
  }
  return static_cast<double>(right) / static_cast<double>(instances.size());
}

namespace {

struct DevScore {
  double accuracy = 0;
  double loss = 0;  // mean cross-entropy
};

DevScore ScoreDev(const ClassifierModel &model,
                  std::span<const LabeledInstance> instances,
                  const ProviderInputs &inputs) {
  DevScore score;
  for (const LabeledInstance &x : instances) {
    const PredictionResult p = Predict(model, x.tokens, x.position, inputs);
    if (p.label == x.label) score.accuracy += 1;
    score.loss -= std::log(std::max(p.probabilities[x.label], 1e-300));
  }
  const double n = static_cast<double>(instances.size());
  score.accuracy /= n;
  score.loss /= n;
  return score;
}

}  // namespace

TrainResult TrainClassifier(const AbbrevDataset &dataset,
                            const TrainConfig &config,
                            const ProviderInputs &inputs) {
  if (dataset.train.empty()) throw DataError("training split is empty");
  if (config.batch_size < 1) throw DataError("batch size must be positive");

  Vocabulary vocab;
  if (UsesVocabulary(config.provider)) {
    std::vector<std::vector<std::string>> sentences;
    sentences.reserve(dataset.train.size());
    for (const auto &x : dataset.train) sentences.push_back(x.tokens);
    vocab = Vocabulary::FromSentences(sentences);
  }
  ModelShape shape;
  shape.provider = config.provider;
  shape.hidden_dim = config.hidden_dim;
  shape.ffn_widths.assign(static_cast<size_t>(std::max(0, config.ffn_layers)),
                          config.ffn_width);
  if (UsesContextual(config.provider)) {
    if (!inputs.contextual) {
      throw DataError("provider " + std::string(ProviderName(config.provider)) +
                      " needs a contextual embedding file");
    }
    shape.input_dim = inputs.contextual->dim();
  } else {
    shape.input_dim = config.embed_dim;
  }
  std::vector<std::string> labels = dataset.inventory.Canonicals();
  if (labels.empty()) throw DataError("dataset inventory has no groups");

  TrainResult result;
  result.model = InitModel(dataset.abbreviation, shape, std::move(labels),
                           std::move(vocab), config.seed);
  ClassifierModel &model = result.model;
  AdamState adam(model.params, config.adam);
  Rng rng(config.seed ^ 0x5851f42d4c957f2dULL);

  const std::vector<LabeledInstance> &dev =
      dataset.dev.empty() ? dataset.train : dataset.dev;
  ModelParams best = model.params;
  DevScore best_score{-1.0, 0.0};
  int since_best = 0;
  std::vector<size_t> order(dataset.train.size());
  std::iota(order.begin(), order.end(), size_t{0});
  std::vector<LabeledInstance> batch;
  ModelParams grads;

  for (int epoch = 1; epoch <= config.max_epochs; ++epoch) {
    Shuffle(order, rng);
    double loss_sum = 0.0;
    size_t batches = 0;
    for (size_t start = 0; start < order.size();
         start += static_cast<size_t>(config.batch_size)) {
      const size_t end =
          std::min(order.size(), start + static_cast<size_t>(config.batch_size));
      batch.clear();
      for (size_t i = start; i < end; ++i) batch.push_back(dataset.train[order[i]]);
      loss_sum += LossAndGrads(model, batch, inputs, &grads);
      ++batches;
      ClipGlobalNorm(grads, config.clip_norm);
      AdamStep(model.params, grads, adam);
    }
    const DevScore score = ScoreDev(model, dev, inputs);
    result.log.push_back({epoch, loss_sum / static_cast<double>(batches), score.accuracy});
    // Dev loss breaks accuracy ties, so a plateau at high accuracy does not
    // pin the model to an early, barely trained epoch.
    if (score.accuracy > best_score.accuracy ||
        (score.accuracy == best_score.accuracy && score.loss < best_score.loss)) {
      best_score = score;
      best = model.params;
      result.best_epoch = epoch;
      since_best = 0;
    } else if (++since_best >= config.patience) {
      break;
    }
  }
  model.params = std::move(best);
  return result;
}

}  // namespace abx
