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

// A small multilayer perceptron (ReLU hidden layers, softmax cross-entropy
// output) over flat parameter vectors. Every function is pure.

#ifndef LDP_AUDIT_NN_H_
#define LDP_AUDIT_NN_H_

#include <cstddef>
#include <span>
#include <vector>

#include "ldp_audit/rng.h"

namespace ldp_audit {

enum class Activation { kRelu };
enum class LossKind { kCrossEntropy };

struct ModelSpec {
  // Input dim, hidden dims..., number of classes.
  std::vector<int> layer_sizes;
  Activation activation = Activation::kRelu;
  LossKind loss = LossKind::kCrossEntropy;

  int input_dim() const { return layer_sizes.front(); }
  int num_classes() const { return layer_sizes.back(); }
  // Sum over layers of (fan_in + 1) * fan_out.
  std::size_t ParamCount() const;
  // Throws std::invalid_argument if the layer list is malformed.
  void Validate() const;

  bool operator==(const ModelSpec&) const = default;
};

struct ModelState {
  ModelSpec spec;
  // Per layer: weights (fan_out x fan_in, row-major) followed by biases.
  std::vector<double> params;
};

struct Example {
  std::vector<double> features;
  int label = 0;

  bool operator==(const Example&) const = default;
};

// Weights ~ U(-1/sqrt(fan_in), 1/sqrt(fan_in)), biases zero.
ModelState InitParams(const ModelSpec& spec, Rng& rng);

std::vector<double> Logits(const ModelState& model,
                           std::span<const double> features);
double Loss(const ModelState& model, const Example& x);
std::vector<double> GradParams(const ModelState& model, const Example& x);
std::vector<double> GradInput(const ModelState& model, const Example& x);

// Loss plus both gradients from a single forward/backward pass. Either
// output pointer may be null.
double LossAndGradients(const ModelState& model, const Example& x,
                        std::vector<double>* grad_params,
                        std::vector<double>* grad_input);

}  // namespace ldp_audit

#endif  // LDP_AUDIT_NN_H_
