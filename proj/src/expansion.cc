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

#include "abx/expansion.h"

#include "abx/errors.h"
#include "abx/model_io.h"

namespace abx {

ModelRegistry::ModelRegistry(std::set<std::string> vocabulary,
                             std::map<std::string, std::string> locators,
                             size_t capacity)
    : vocabulary_(std::move(vocabulary)),
      locators_(std::move(locators)),
      capacity_(capacity) {}

size_t ModelRegistry::loads() const {
  std::lock_guard<std::mutex> lock(mu_);
  return loads_;
}

size_t ModelRegistry::cached() const {
  std::lock_guard<std::mutex> lock(mu_);
  return cache_.size();
}

std::shared_ptr<const ClassifierModel> ModelRegistry::Get(
    const std::string &abbreviation) {
  auto loc = locators_.find(abbreviation);
  if (loc == locators_.end()) return nullptr;

  std::promise<ModelPtr> promise;
  {
    std::unique_lock<std::mutex> lock(mu_);
    auto hit = cache_.find(abbreviation);
    if (hit != cache_.end()) {
      lru_.splice(lru_.begin(), lru_, hit->second.lru_pos);
      return hit->second.model;
    }
    auto pending = inflight_.find(abbreviation);
    if (pending != inflight_.end()) {
      std::shared_future<ModelPtr> f = pending->second;
      lock.unlock();
      return f.get();
    }
    inflight_.emplace(abbreviation, promise.get_future().share());
    ++loads_;
  }

  ModelPtr model;
  try {
    model = std::make_shared<const ClassifierModel>(LoadModel(loc->second));
    if (model->abbreviation != abbreviation) {
      throw DataError("model file " + loc->second + " holds abbreviation '" +
                      model->abbreviation + "', expected '" + abbreviation +
                      "'");
    }
  } catch (...) {
    std::lock_guard<std::mutex> lock(mu_);
    promise.set_exception(std::current_exception());
    inflight_.erase(abbreviation);
    throw;
  }

  std::lock_guard<std::mutex> lock(mu_);
  lru_.push_front(abbreviation);
  cache_[abbreviation] = {model, lru_.begin()};
  if (capacity_ > 0 && cache_.size() > capacity_) {
    cache_.erase(lru_.back());
    lru_.pop_back();
  }
  promise.set_value(model);
  inflight_.erase(abbreviation);
  return model;
}

std::vector<std::pair<int, std::string>> FindAmbiguous(
    std::span<const std::string> tokens, const std::set<std::string> &vocabulary) {
  std::vector<std::pair<int, std::string>> hits;
  for (size_t j = 0; j < tokens.size(); ++j) {
    if (vocabulary.count(tokens[j])) hits.emplace_back(static_cast<int>(j), tokens[j]);
  }
  return hits;
}

ExpansionResult ExpandSentence(std::span<const std::string> tokens,
                               ModelRegistry &registry,
                               const ProviderInputs &inputs) {
  ExpansionResult result;
  for (const auto &[position, abbr] : FindAmbiguous(tokens, registry.vocabulary())) {
    std::shared_ptr<const ClassifierModel> model = registry.Get(abbr);
    if (!model) {
      result.skipped.push_back({abbr, position, "no model"});
      continue;
    }
    if (UsesContextual(model->provider) && !inputs.contextual) {
      throw DataError("model for '" + abbr + "' uses provider " +
                      std::string(ProviderName(model->provider)) +
                      " but no contextual embeddings were supplied");
    }
    PredictionResult pred = Predict(*model, tokens, position, inputs);
    result.expansions.push_back({abbr, position,
                                 model->labels[static_cast<size_t>(pred.label)],
                                 pred.label, std::move(pred.probabilities)});
  }
  return result;
}

}  // namespace abx
