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

// Crafters produce the candidate gradient pair (g1, g2); distinguishers guess
// which one was randomized, from either the model update (black box) or the
// randomized report itself (white box).

#ifndef LDP_AUDIT_ADVERSARIES_H_
#define LDP_AUDIT_ADVERSARIES_H_

#include <array>
#include <optional>
#include <span>
#include <string_view>
#include <vector>

#include "ldp_audit/data_io.h"
#include "ldp_audit/ldp_mechanism.h"
#include "ldp_audit/nn.h"
#include "ldp_audit/rng.h"

namespace ldp_audit {

enum class CrafterKind {
  kBenign,
  kInputPerturbation,
  kParameterRetrogression,
  kGradientFlip,
  kCollusion,
  kDummyGradient,
};

inline constexpr std::array<CrafterKind, 6> kAllCrafters = {
    CrafterKind::kBenign,         CrafterKind::kInputPerturbation,
    CrafterKind::kParameterRetrogression, CrafterKind::kGradientFlip,
    CrafterKind::kCollusion,      CrafterKind::kDummyGradient};

enum class DistinguisherKind {
  kBlackBoxDelta,
  kBlackBoxLossDecrease,
  kBlackBoxSignSum,
  kWhiteBoxCosine,
};

enum class Guess { kG1, kG2 };

std::string_view CrafterName(CrafterKind kind);
// Throws std::invalid_argument for unknown names.
CrafterKind ParseCrafter(std::string_view name);
std::string_view DistinguisherName(DistinguisherKind kind);

// Black-box decision rule paired with each crafter.
DistinguisherKind BlackBoxRuleFor(CrafterKind kind);

struct CrafterParams {
  // FGSM step and retrogression step.
  double alpha = 1.0;
  // Dummy gradient norm as a fraction of the clip norm.
  double dummy_norm_fraction = 1.0;
  // Malicious model pre-training (collusion).
  int collusion_steps = 200;
  double collusion_lr = 0.1;

  void Validate() const;
};

struct GradientPair {
  std::vector<double> g1;
  std::vector<double> g2;
  CrafterKind crafter = CrafterKind::kBenign;
  // Examples the gradients were computed from, when any.
  std::optional<Example> x1;
  std::optional<Example> x2;
};

GradientPair CraftBenign(const ModelState& theta, const Example& x1,
                         const Example& x2);
GradientPair CraftInputPerturbation(const ModelState& theta, const Example& x1,
                                    double alpha);
// alpha = 0 is accepted for testing and yields g1 == g2.
GradientPair CraftParameterRetrogression(const ModelState& theta,
                                         const Example& x1, double alpha);
GradientPair CraftGradientFlip(const ModelState& theta, const Example& x1);

// Full-batch gradient descent from a fresh initialization on the examples
// of `target_label` only.
ModelState PretrainMaliciousModel(const ModelSpec& spec, const Dataset& dataset,
                                  int target_label, int steps, double lr,
                                  Rng& rng);
GradientPair CraftCollusion(const ModelState& theta_malicious,
                            int target_label, const Example& x1);
// g1 = (lambda, ..., lambda) with lambda = fraction * L / sqrt(d); g2 = -g1.
GradientPair CraftDummy(const PrivacySpec& spec, double norm_fraction);

Guess DistinguishBlackDelta(const ModelState& theta_t,
                            const ModelState& theta_t1, const Example& x1,
                            const Example& x2);
Guess DistinguishBlackLossDecrease(const ModelState& theta_t,
                                   const ModelState& theta_t1,
                                   const Example& x1);
// Guess g1 iff sum_i sgn(theta_t1[i] - theta_t[i]) >= 0. With `invert` the
// sum is negated first (ties still go to g1).
Guess DistinguishBlackSignSum(const ModelState& theta_t,
                              const ModelState& theta_t1, bool invert = false);
Guess DistinguishWhiteCosine(std::span<const double> z_hat,
                             std::span<const double> g1,
                             std::span<const double> g2);

// e^eps / (1 + e^eps).
double WorstCaseSuccessProb(double epsilon);

inline int Sign(double v) { return (v > 0.0) - (v < 0.0); }

}  // namespace ldp_audit

#endif  // LDP_AUDIT_ADVERSARIES_H_
