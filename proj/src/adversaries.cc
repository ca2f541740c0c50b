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

#include "ldp_audit/adversaries.h"

#include <cmath>
#include <stdexcept>
#include <string>

namespace ldp_audit {

std::string_view CrafterName(CrafterKind kind) {
  switch (kind) {
    case CrafterKind::kBenign:
      return "benign";
    case CrafterKind::kInputPerturbation:
      return "input_perturbation";
    case CrafterKind::kParameterRetrogression:
      return "parameter_retrogression";
    case CrafterKind::kGradientFlip:
      return "gradient_flip";
    case CrafterKind::kCollusion:
      return "collusion";
    case CrafterKind::kDummyGradient:
      return "dummy_gradient";
  }
  return "unknown";
}

CrafterKind ParseCrafter(std::string_view name) {
  for (CrafterKind kind : kAllCrafters) {
    if (CrafterName(kind) == name) return kind;
  }
  throw std::invalid_argument("unknown crafter: " + std::string(name));
}

std::string_view DistinguisherName(DistinguisherKind kind) {
  switch (kind) {
    case DistinguisherKind::kBlackBoxDelta:
      return "black_delta";
    case DistinguisherKind::kBlackBoxLossDecrease:
      return "black_loss_decrease";
    case DistinguisherKind::kBlackBoxSignSum:
      return "black_sign_sum";
    case DistinguisherKind::kWhiteBoxCosine:
      return "white_cosine";
  }
  return "unknown";
}

DistinguisherKind BlackBoxRuleFor(CrafterKind kind) {
  switch (kind) {
    case CrafterKind::kBenign:
      return DistinguisherKind::kBlackBoxDelta;
    case CrafterKind::kDummyGradient:
      return DistinguisherKind::kBlackBoxSignSum;
    default:
      return DistinguisherKind::kBlackBoxLossDecrease;
  }
}

void CrafterParams::Validate() const {
  if (!(alpha > 0.0)) throw std::invalid_argument("alpha must be positive");
  if (!(dummy_norm_fraction > 0.0 && dummy_norm_fraction <= 1.0)) {
    throw std::invalid_argument("dummy_norm_fraction must lie in (0, 1]");
  }
  if (collusion_steps < 0) {
    throw std::invalid_argument("collusion_steps must be >= 0");
  }
  if (!(collusion_lr > 0.0)) {
    throw std::invalid_argument("collusion_lr must be positive");
  }
}

GradientPair CraftBenign(const ModelState& theta, const Example& x1,
                         const Example& x2) {
  if (x1 == x2) throw std::invalid_argument("benign crafter needs x1 != x2");
  return GradientPair{GradParams(theta, x1), GradParams(theta, x2),
                      CrafterKind::kBenign, x1, x2};
}

GradientPair CraftInputPerturbation(const ModelState& theta, const Example& x1,
                                    double alpha) {
  if (!(alpha > 0.0)) throw std::invalid_argument("alpha must be positive");
  std::vector<double> g1;
  std::vector<double> input_grad;
  LossAndGradients(theta, x1, &g1, &input_grad);
  Example x2 = x1;
  for (std::size_t i = 0; i < x2.features.size(); ++i) {
    x2.features[i] += alpha * Sign(input_grad[i]);
  }
  std::vector<double> g2 = GradParams(theta, x2);
  return GradientPair{std::move(g1), std::move(g2),
                      CrafterKind::kInputPerturbation, x1, std::move(x2)};
}

GradientPair CraftParameterRetrogression(const ModelState& theta,
                                         const Example& x1, double alpha) {
  if (alpha < 0.0) throw std::invalid_argument("alpha must be non-negative");
  std::vector<double> g1 = GradParams(theta, x1);
  ModelState retrograded = theta;
  for (std::size_t i = 0; i < g1.size(); ++i) {
    retrograded.params[i] += alpha * g1[i];
  }
  std::vector<double> g2 = GradParams(retrograded, x1);
  return GradientPair{std::move(g1), std::move(g2),
                      CrafterKind::kParameterRetrogression, x1, std::nullopt};
}

GradientPair CraftGradientFlip(const ModelState& theta, const Example& x1) {
  std::vector<double> g1 = GradParams(theta, x1);
  std::vector<double> g2(g1.size());
  for (std::size_t i = 0; i < g1.size(); ++i) g2[i] = -g1[i];
  return GradientPair{std::move(g1), std::move(g2), CrafterKind::kGradientFlip,
                      x1, std::nullopt};
}

ModelState PretrainMaliciousModel(const ModelSpec& spec, const Dataset& dataset,
                                  int target_label, int steps, double lr,
                                  Rng& rng) {
  const Dataset subset = FilterByLabel(dataset, target_label);
  ModelState model = InitParams(spec, rng);
  std::vector<double> total(model.params.size());
  std::vector<double> grad;
  const double scale = lr / static_cast<double>(subset.examples.size());
  for (int step = 0; step < steps; ++step) {
    std::fill(total.begin(), total.end(), 0.0);
    for (const auto& ex : subset.examples) {
      LossAndGradients(model, ex, &grad, nullptr);
      for (std::size_t i = 0; i < total.size(); ++i) total[i] += grad[i];
    }
    for (std::size_t i = 0; i < total.size(); ++i) {
      model.params[i] -= scale * total[i];
    }
  }
  return model;
}

GradientPair CraftCollusion(const ModelState& theta_malicious,
                            int target_label, const Example& x1) {
  if (x1.label == target_label) {
    throw std::invalid_argument(
        "collusion needs x1 labelled differently from the malicious model's "
        "training label");
  }
  GradientPair pair = CraftGradientFlip(theta_malicious, x1);
  pair.crafter = CrafterKind::kCollusion;
  return pair;
}

GradientPair CraftDummy(const PrivacySpec& spec, double norm_fraction) {
  if (!(norm_fraction > 0.0 && norm_fraction <= 1.0)) {
    throw std::invalid_argument("norm_fraction must lie in (0, 1]");
  }
  const double lambda =
      norm_fraction * spec.clip_norm / std::sqrt(static_cast<double>(spec.dim));
  return GradientPair{std::vector<double>(spec.dim, lambda),
                      std::vector<double>(spec.dim, -lambda),
                      CrafterKind::kDummyGradient, std::nullopt, std::nullopt};
}

Guess DistinguishBlackDelta(const ModelState& theta_t,
                            const ModelState& theta_t1, const Example& x1,
                            const Example& x2) {
  const double delta1 = std::abs(Loss(theta_t1, x1) - Loss(theta_t, x1));
  const double delta2 = std::abs(Loss(theta_t1, x2) - Loss(theta_t, x2));
  return delta1 >= delta2 ? Guess::kG1 : Guess::kG2;
}

Guess DistinguishBlackLossDecrease(const ModelState& theta_t,
                                   const ModelState& theta_t1,
                                   const Example& x1) {
  return Loss(theta_t1, x1) <= Loss(theta_t, x1) ? Guess::kG1 : Guess::kG2;
}

Guess DistinguishBlackSignSum(const ModelState& theta_t,
                              const ModelState& theta_t1, bool invert) {
  if (theta_t.params.size() != theta_t1.params.size()) {
    throw std::invalid_argument("models differ in size");
  }
  long long sum = 0;
  for (std::size_t i = 0; i < theta_t.params.size(); ++i) {
    sum += Sign(theta_t1.params[i] - theta_t.params[i]);
  }
  if (invert) sum = -sum;
  return sum >= 0 ? Guess::kG1 : Guess::kG2;
}

Guess DistinguishWhiteCosine(std::span<const double> z_hat,
                             std::span<const double> g1,
                             std::span<const double> g2) {
  const double n1 = L2Norm(g1);
  const double n2 = L2Norm(g2);
  if (n1 == 0.0 || n2 == 0.0) {
    throw std::invalid_argument("cosine rule needs non-zero gradients");
  }
  // z_hat's norm is common to both sides and cancels.
  return Dot(z_hat, g1) / n1 >= Dot(z_hat, g2) / n2 ? Guess::kG1 : Guess::kG2;
}

double WorstCaseSuccessProb(double epsilon) {
  if (epsilon < 0.0) throw std::invalid_argument("epsilon must be >= 0");
  return 1.0 / (1.0 + std::exp(-epsilon));
}

}  // namespace ldp_audit
