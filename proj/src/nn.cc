/*
 * Copyright 2026 The LDP Audit Authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *      http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#include "ldp_audit/nn.h"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

namespace ldp_audit {

std::size_t ModelSpec::ParamCount() const {
  std::size_t count = 0;
  for (std::size_t l = 0; l + 1 < layer_sizes.size(); ++l) {
    count += static_cast<std::size_t>(layer_sizes[l] + 1) * layer_sizes[l + 1];
  }
  return count;
}

void ModelSpec::Validate() const {
  if (layer_sizes.size() < 2) {
    throw std::invalid_argument("model needs at least 2 layers");
  }
  for (int size : layer_sizes) {
    if (size < 1) throw std::invalid_argument("layer sizes must be >= 1");
  }
  if (layer_sizes.back() < 2) {
    throw std::invalid_argument("model needs at least 2 output classes");
  }
}

namespace {

void CheckExample(const ModelState& model, std::span<const double> features) {
  if (features.size() != static_cast<std::size_t>(model.spec.input_dim())) {
    throw std::invalid_argument(
        "feature dimension " + std::to_string(features.size()) +
        " does not match model input " +
        std::to_string(model.spec.input_dim()));
  }
  if (model.params.size() != model.spec.ParamCount()) {
    throw std::invalid_argument("parameter vector length mismatch");
  }
}

// activations[0] is the input; activations[l] the post-ReLU output of layer l
// (for the last layer, the raw logits).
std::vector<std::vector<double>> Forward(const ModelState& model,
                                         std::span<const double> features) {
  const auto& sizes = model.spec.layer_sizes;
  const std::size_t layers = sizes.size() - 1;
  std::vector<std::vector<double>> acts(layers + 1);
  acts[0].assign(features.begin(), features.end());
  const double* p = model.params.data();
  for (std::size_t l = 0; l < layers; ++l) {
    const int fan_in = sizes[l];
    const int fan_out = sizes[l + 1];
    const double* weights = p;
    const double* biases = p + static_cast<std::size_t>(fan_in) * fan_out;
    auto& out = acts[l + 1];
    out.resize(fan_out);
    const auto& in = acts[l];
    for (int o = 0; o < fan_out; ++o) {
      const double* row = weights + static_cast<std::size_t>(o) * fan_in;
      double sum = biases[o];
      for (int i = 0; i < fan_in; ++i) sum += row[i] * in[i];
      out[o] = (l + 1 < layers) ? std::max(sum, 0.0) : sum;
    }
    p = biases + fan_out;
  }
  return acts;
}

double LogSumExp(std::span<const double> logits) {
  const double peak = *std::max_element(logits.begin(), logits.end());
  double sum = 0.0;
  for (double v : logits) sum += std::exp(v - peak);
  return peak + std::log(sum);
}

}  // namespace

ModelState InitParams(const ModelSpec& spec, Rng& rng) {
  spec.Validate();
  ModelState state{spec, std::vector<double>(spec.ParamCount(), 0.0)};
  double* p = state.params.data();
  for (std::size_t l = 0; l + 1 < spec.layer_sizes.size(); ++l) {
    const int fan_in = spec.layer_sizes[l];
    const int fan_out = spec.layer_sizes[l + 1];
    const double bound = 1.0 / std::sqrt(static_cast<double>(fan_in));
    const std::size_t n_weights = static_cast<std::size_t>(fan_in) * fan_out;
    for (std::size_t i = 0; i < n_weights; ++i) {
      p[i] = (2.0 * rng.Uniform() - 1.0) * bound;
    }
    p += n_weights + fan_out;
  }
  return state;
}

std::vector<double> Logits(const ModelState& model,
                           std::span<const double> features) {
  CheckExample(model, features);
  return std::move(Forward(model, features).back());
}

double LossAndGradients(const ModelState& model, const Example& x,
                        std::vector<double>* grad_params,
                        std::vector<double>* grad_input) {
  CheckExample(model, x.features);
  const int classes = model.spec.num_classes();
  if (x.label < 0 || x.label >= classes) {
    throw std::invalid_argument("label out of range");
  }
  const auto acts = Forward(model, x.features);
  const auto& logits = acts.back();
  const double lse = LogSumExp(logits);
  const double loss = lse - logits[x.label];
  if (grad_params == nullptr && grad_input == nullptr) return loss;

  const auto& sizes = model.spec.layer_sizes;
  const std::size_t layers = sizes.size() - 1;
  if (grad_params != nullptr) grad_params->assign(model.params.size(), 0.0);

  // delta = dLoss/d(pre-activation) of the current layer.
  std::vector<double> delta(classes);
  for (int c = 0; c < classes; ++c) delta[c] = std::exp(logits[c] - lse);
  delta[x.label] -= 1.0;

  // Offsets of each layer's block in the flat vector.
  std::vector<std::size_t> offset(layers + 1, 0);
  for (std::size_t l = 0; l < layers; ++l) {
    offset[l + 1] =
        offset[l] + static_cast<std::size_t>(sizes[l] + 1) * sizes[l + 1];
  }

  for (std::size_t l = layers; l-- > 0;) {
    const int fan_in = sizes[l];
    const int fan_out = sizes[l + 1];
    const double* weights = model.params.data() + offset[l];
    const auto& in = acts[l];
    if (grad_params != nullptr) {
      double* gw = grad_params->data() + offset[l];
      double* gb = gw + static_cast<std::size_t>(fan_in) * fan_out;
      for (int o = 0; o < fan_out; ++o) {
        double* row = gw + static_cast<std::size_t>(o) * fan_in;
        for (int i = 0; i < fan_in; ++i) row[i] = delta[o] * in[i];
        gb[o] = delta[o];
      }
    }
    if (l == 0 && grad_input == nullptr) break;
    std::vector<double> prev(fan_in, 0.0);
    for (int o = 0; o < fan_out; ++o) {
      if (delta[o] == 0.0) continue;
      const double* row = weights + static_cast<std::size_t>(o) * fan_in;
      for (int i = 0; i < fan_in; ++i) prev[i] += row[i] * delta[o];
    }
    if (l > 0) {
      // ReLU subgradient at 0 is 0.
      for (int i = 0; i < fan_in; ++i) {
        if (in[i] <= 0.0) prev[i] = 0.0;
      }
    }
    delta = std::move(prev);
  }
  if (grad_input != nullptr) *grad_input = std::move(delta);
  return loss;
}

double Loss(const ModelState& model, const Example& x) {
  return LossAndGradients(model, x, nullptr, nullptr);
}

std::vector<double> GradParams(const ModelState& model, const Example& x) {
  std::vector<double> grad;
  LossAndGradients(model, x, &grad, nullptr);
  return grad;
}

std::vector<double> GradInput(const ModelState& model, const Example& x) {
  std::vector<double> grad;
  LossAndGradients(model, x, nullptr, &grad);
  return grad;
}

}  // namespace ldp_audit
