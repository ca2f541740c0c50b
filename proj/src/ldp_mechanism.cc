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

#include "ldp_audit/ldp_mechanism.h"

#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

#include "ldp_audit/log_gamma.h"

namespace ldp_audit {

void PrivacySpec::Validate() const {
  if (!(epsilon >= kMinEpsilon) || !std::isfinite(epsilon)) {
    throw std::invalid_argument("epsilon must be finite and >= 1e-6, got " +
                                std::to_string(epsilon));
  }
  if (!(clip_norm > 0.0) || !std::isfinite(clip_norm)) {
    throw std::invalid_argument("clip norm must be positive");
  }
  if (dim < 1) throw std::invalid_argument("dimension must be >= 1");
}

void ServerSpec::Validate() const {
  if (!(projection_radius > 0.0)) {
    throw std::invalid_argument("projection radius must be positive");
  }
  if (num_clients < 1) throw std::invalid_argument("need at least 1 client");
}

double L2Norm(std::span<const double> v) { return std::sqrt(Dot(v, v)); }

double Dot(std::span<const double> a, std::span<const double> b) {
  double sum = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) sum += a[i] * b[i];
  return sum;
}

std::vector<double> ClipGradient(std::span<const double> g, double clip_norm) {
  std::vector<double> out(g.begin(), g.end());
  const double norm = L2Norm(g);
  if (norm > clip_norm) {
    const double scale = clip_norm / norm;
    for (double& v : out) v *= scale;
  }
  return out;
}

std::vector<double> SampleUnitSphere(int dim, Rng& rng) {
  if (dim < 1) throw std::invalid_argument("sphere dimension must be >= 1");
  std::vector<double> v(dim);
  double norm = 0.0;
  while (norm == 0.0) {
    for (double& c : v) c = rng.Normal();
    norm = L2Norm(v);
  }
  for (double& c : v) c /= norm;
  return v;
}

std::vector<double> NormProject(std::span<const double> x, double clip_norm,
                                Rng& rng) {
  const double norm = L2Norm(x);
  if (norm > clip_norm + 1e-9) {
    throw std::invalid_argument("NormProject input exceeds clip norm");
  }
  std::vector<double> z;
  double keep_probability;
  if (norm == 0.0) {
    z = SampleUnitSphere(static_cast<int>(x.size()), rng);
    for (double& c : z) c *= clip_norm;
    keep_probability = 0.5;
  } else {
    z.assign(x.begin(), x.end());
    for (double& c : z) c *= clip_norm / norm;
    keep_probability = 0.5 + norm / (2.0 * clip_norm);
  }
  if (!rng.Bernoulli(keep_probability)) {
    for (double& c : z) c = -c;
  }
  return z;
}

RandomizedReport RandomizeClient(std::span<const double> g,
                                 const PrivacySpec& spec, Rng& rng) {
  if (g.size() != static_cast<std::size_t>(spec.dim)) {
    throw std::invalid_argument("gradient length " + std::to_string(g.size()) +
                                " != privacy dim " + std::to_string(spec.dim));
  }
  const std::vector<double> clipped = ClipGradient(g, spec.clip_norm);
  const std::vector<double> z = NormProject(clipped, spec.clip_norm, rng);
  std::vector<double> v = SampleUnitSphere(spec.dim, rng);
  // sgn(<z, v>) with the measure-zero tie sent to +1 so the output stays
  // on the sphere.
  double orientation = Dot(z, v) < 0.0 ? -1.0 : 1.0;
  const double agree = 1.0 / (1.0 + std::exp(-spec.epsilon));
  if (!rng.Bernoulli(agree)) orientation = -orientation;
  for (double& c : v) c *= orientation;
  return RandomizedReport{std::move(v)};
}

double DebiasFactor(const PrivacySpec& spec) {
  spec.Validate();
  const double d = spec.dim;
  // E[z_hat] = (e^eps-1)/(e^eps+1) * E|v_1| * z / L, where
  // E|v_1| = Gamma(d/2 + 1) / (d sqrt(pi)/2 * Gamma((d-1)/2 + 1)).
  const double gamma_ratio =
      std::exp(LogGamma((d - 1.0) / 2.0 + 1.0) - LogGamma(d / 2.0 + 1.0));
  const double em1 = std::expm1(spec.epsilon);
  return spec.clip_norm * std::sqrt(std::numbers::pi) / 2.0 * gamma_ratio * d *
         (em1 + 2.0) / em1;
}

double ServerLearningRate(const PrivacySpec& spec, const ServerSpec& server) {
  const double em1 = std::expm1(spec.epsilon);
  return server.projection_radius * std::sqrt(server.num_clients) /
         (spec.clip_norm * std::sqrt(static_cast<double>(spec.dim))) * em1 /
         (em1 + 2.0);
}

void ProjectOntoBall(std::vector<double>& v, double radius) {
  const double norm = L2Norm(v);
  if (norm > radius) {
    const double scale = radius / norm;
    for (double& c : v) c *= scale;
  }
}

ModelState ServerDebiasAndUpdate(const ModelState& theta,
                                 std::span<const RandomizedReport> reports,
                                 const PrivacySpec& spec,
                                 const ServerSpec& server) {
  spec.Validate();
  server.Validate();
  if (reports.empty()) throw std::invalid_argument("no reports to aggregate");
  if (theta.params.size() != static_cast<std::size_t>(spec.dim)) {
    throw std::invalid_argument("model size does not match privacy dim");
  }
  std::vector<double> mean(spec.dim, 0.0);
  for (const auto& report : reports) {
    if (report.z_hat.size() != mean.size()) {
      throw std::invalid_argument("report length does not match privacy dim");
    }
    for (std::size_t i = 0; i < mean.size(); ++i) mean[i] += report.z_hat[i];
  }
  ServerSpec effective = server;
  effective.num_clients = static_cast<int>(reports.size());
  const double step = ServerLearningRate(spec, effective) * DebiasFactor(spec) /
                      static_cast<double>(reports.size());
  ModelState next = theta;
  for (std::size_t i = 0; i < mean.size(); ++i) {
    next.params[i] -= step * mean[i];
  }
  ProjectOntoBall(next.params, server.projection_radius);
  return next;
}

}  // namespace ldp_audit
