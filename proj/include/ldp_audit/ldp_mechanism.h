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

// Client-side randomizer and server-side debiased update of LDP-SGD.

#ifndef LDP_AUDIT_LDP_MECHANISM_H_
#define LDP_AUDIT_LDP_MECHANISM_H_

#include <span>
#include <vector>

#include "ldp_audit/nn.h"
#include "ldp_audit/rng.h"

namespace ldp_audit {

// Smallest accepted epsilon; protects the (e^eps - 1) divisors.
inline constexpr double kMinEpsilon = 1e-6;

struct PrivacySpec {
  double epsilon = 1.0;
  double clip_norm = 1.0;
  int dim = 1;

  void Validate() const;
};

struct RandomizedReport {
  // Unit vector of length dim.
  std::vector<double> z_hat;
};

struct ServerSpec {
  // Radius of the l2 ball the parameters are projected onto.
  double projection_radius = 10.0;
  int num_clients = 1;

  void Validate() const;
};

double L2Norm(std::span<const double> v);
double Dot(std::span<const double> a, std::span<const double> b);

// g * min(1, L / ||g||). The zero vector passes through.
std::vector<double> ClipGradient(std::span<const double> g, double clip_norm);

// Replaces x (||x|| <= L) by +L x/||x|| with probability 1/2 + ||x||/(2L),
// otherwise -L x/||x||. For x = 0 the direction is a fresh uniform unit
// vector and the sign a fair coin. Throws if ||x|| > L + 1e-9.
std::vector<double> NormProject(std::span<const double> x, double clip_norm,
                                Rng& rng);

// Uniform on the unit sphere in `dim` dimensions (normalized Gaussian).
std::vector<double> SampleUnitSphere(int dim, Rng& rng);

// Full client pipeline: clip, norm projection, then a uniform unit vector
// oriented toward z with probability e^eps / (1 + e^eps).
RandomizedReport RandomizeClient(std::span<const double> g,
                                 const PrivacySpec& spec, Rng& rng);

// Scale c such that c * E[z_hat] equals the clipped input gradient.
double DebiasFactor(const PrivacySpec& spec);

// Server step size ||C|| sqrt(n) / (L sqrt(d)) * (e^eps - 1)/(e^eps + 1).
double ServerLearningRate(const PrivacySpec& spec, const ServerSpec& server);

// Scales v onto the l2 ball of the given radius if it lies outside.
void ProjectOntoBall(std::vector<double>& v, double radius);

// theta - eta * DebiasFactor * mean(z_hat), projected onto the ball.
ModelState ServerDebiasAndUpdate(const ModelState& theta,
                                 std::span<const RandomizedReport> reports,
                                 const PrivacySpec& spec,
                                 const ServerSpec& server);

}  // namespace ldp_audit

#endif  // LDP_AUDIT_LDP_MECHANISM_H_
