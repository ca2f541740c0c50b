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

#include "ldp_audit/audit.h"

#include <omp.h>

#include <algorithm>
#include <cmath>
#include <exception>
#include <stdexcept>
#include <string>

namespace ldp_audit {
namespace {

// Stream tags below the master seed.
constexpr uint64_t kModelStream = 1;
constexpr uint64_t kTrialStream = 2;
constexpr uint64_t kCalibrationStream = 3;
// Measurement index used for the held-out calibration context.
constexpr int kCalibrationMeasurement = -1;

const Example& DrawExample(const Dataset& ds, Rng& rng) {
  return ds.examples[rng.Below(ds.examples.size())];
}

const Example& DrawOtherExample(const Dataset& ds, const Example& not_this,
                                Rng& rng) {
  for (int attempt = 0; attempt < 64; ++attempt) {
    const Example& ex = DrawExample(ds, rng);
    if (!(ex == not_this)) return ex;
  }
  throw std::runtime_error("dataset has no two distinct examples");
}

const Example& DrawExampleNotLabelled(const Dataset& ds, int label, Rng& rng) {
  for (int attempt = 0; attempt < 1024; ++attempt) {
    const Example& ex = DrawExample(ds, rng);
    if (ex.label != label) return ex;
  }
  throw std::runtime_error("dataset has no example outside label " +
                           std::to_string(label));
}

Guess FairCoin(Rng& rng) {
  return rng.Bernoulli(0.5) ? Guess::kG1 : Guess::kG2;
}

GradientPair Craft(const AuditConfig& config, const MeasurementContext& ctx,
                   Rng& rng) {
  const Dataset& ds = *config.dataset;
  const CrafterParams& params = config.crafter_params;
  switch (config.crafter) {
    case CrafterKind::kBenign: {
      const Example& x1 = DrawExample(ds, rng);
      return CraftBenign(ctx.theta, x1, DrawOtherExample(ds, x1, rng));
    }
    case CrafterKind::kInputPerturbation:
      return CraftInputPerturbation(ctx.theta, DrawExample(ds, rng),
                                    params.alpha);
    case CrafterKind::kParameterRetrogression:
      return CraftParameterRetrogression(ctx.theta, DrawExample(ds, rng),
                                         params.alpha);
    case CrafterKind::kGradientFlip:
      return CraftGradientFlip(ctx.theta, DrawExample(ds, rng));
    case CrafterKind::kCollusion:
      return CraftCollusion(
          ctx.theta, ctx.collusion_target,
          DrawExampleNotLabelled(ds, ctx.collusion_target, rng));
    case CrafterKind::kDummyGradient:
      return CraftDummy(config.privacy(), params.dummy_norm_fraction);
  }
  throw std::logic_error("unhandled crafter");
}

AuditConfig WithResolvedOrientation(const AuditConfig& config,
                                    const ExecutionOptions& options) {
  AuditConfig resolved = config;
  if (config.sign_sum == SignSumOrientation::kAuto &&
      config.mode == AuditMode::kBlackBox &&
      BlackBoxRuleFor(config.crafter) == DistinguisherKind::kBlackBoxSignSum) {
    resolved.sign_sum = CalibrateSignSum(config, options)
                            ? SignSumOrientation::kInverted
                            : SignSumOrientation::kLiteral;
  }
  return resolved;
}

}  // namespace

std::string_view ModeName(AuditMode mode) {
  return mode == AuditMode::kBlackBox ? "black_box" : "white_box";
}

AuditMode ParseMode(std::string_view name) {
  if (name == "black_box") return AuditMode::kBlackBox;
  if (name == "white_box") return AuditMode::kWhiteBox;
  throw std::invalid_argument("unknown mode: " + std::string(name));
}

std::string_view OrientationName(SignSumOrientation orientation) {
  switch (orientation) {
    case SignSumOrientation::kAuto:
      return "auto";
    case SignSumOrientation::kLiteral:
      return "literal";
    case SignSumOrientation::kInverted:
      return "inverted";
  }
  return "unknown";
}

SignSumOrientation ParseOrientation(std::string_view name) {
  if (name == "auto") return SignSumOrientation::kAuto;
  if (name == "literal") return SignSumOrientation::kLiteral;
  if (name == "inverted") return SignSumOrientation::kInverted;
  throw std::invalid_argument("unknown sign-sum orientation: " +
                              std::string(name));
}

PrivacySpec AuditConfig::privacy() const {
  return PrivacySpec{epsilon, clip_norm, static_cast<int>(model.ParamCount())};
}

ServerSpec AuditConfig::server() const {
  return ServerSpec{projection_radius > 0.0 ? projection_radius
                                            : 10.0 * clip_norm,
                    num_clients};
}

void AuditConfig::Validate() const {
  model.Validate();
  privacy().Validate();
  server().Validate();
  crafter_params.Validate();
  if (trials < kMinTrials) {
    throw std::invalid_argument("trials must be >= " +
                                std::to_string(kMinTrials));
  }
  if (measurements < 1) {
    throw std::invalid_argument("measurements must be >= 1");
  }
  if (warmup_steps < 0 || warmup_batch < 1 || !(warmup_lr > 0.0)) {
    throw std::invalid_argument("invalid warm-up settings");
  }
  if (calibration_trials < 1) {
    throw std::invalid_argument("calibration_trials must be >= 1");
  }
  if (!dataset) throw std::invalid_argument("audit needs a dataset");
  dataset->Validate();
  if (dataset->input_dim != model.input_dim() ||
      dataset->num_classes != model.num_classes()) {
    throw std::invalid_argument("dataset shape does not match the model");
  }
}

void WarmUpGlobalModel(ModelState& model, const Dataset& dataset, int steps,
                       int batch, double lr, Rng& rng) {
  std::vector<double> total(model.params.size());
  std::vector<double> grad;
  const double scale = lr / static_cast<double>(batch);
  for (int step = 0; step < steps; ++step) {
    std::fill(total.begin(), total.end(), 0.0);
    for (int b = 0; b < batch; ++b) {
      LossAndGradients(model, DrawExample(dataset, rng), &grad, nullptr);
      for (std::size_t i = 0; i < total.size(); ++i) total[i] += grad[i];
    }
    for (std::size_t i = 0; i < total.size(); ++i) {
      model.params[i] -= scale * total[i];
    }
  }
}

MeasurementContext PrepareMeasurement(const AuditConfig& config,
                                      int measurement_index) {
  Rng rng = Rng::ForStream(
      config.master_seed,
      {kModelStream, static_cast<uint64_t>(measurement_index)});
  MeasurementContext ctx;
  ctx.invert_sign_sum = config.sign_sum == SignSumOrientation::kInverted;
  if (config.crafter == CrafterKind::kCollusion) {
    ctx.collusion_target =
        static_cast<int>(rng.Below(config.dataset->num_classes));
    ctx.theta = PretrainMaliciousModel(
        config.model, *config.dataset, ctx.collusion_target,
        config.crafter_params.collusion_steps,
        config.crafter_params.collusion_lr, rng);
  } else {
    ctx.theta = InitParams(config.model, rng);
    WarmUpGlobalModel(ctx.theta, *config.dataset, config.warmup_steps,
                      config.warmup_batch, config.warmup_lr, rng);
  }
  return ctx;
}

Rng TrialRng(const AuditConfig& config, int measurement_index,
             int trial_index) {
  return Rng::ForStream(config.master_seed,
                        {kTrialStream, static_cast<uint64_t>(measurement_index),
                         static_cast<uint64_t>(trial_index)});
}

TrialRecord RunTrialBlack(const AuditConfig& config,
                          const MeasurementContext& ctx, Rng& rng) {
  const PrivacySpec privacy = config.privacy();
  TrialRecord record;
  record.truth = FairCoin(rng);
  const GradientPair pair = Craft(config, ctx, rng);
  std::vector<RandomizedReport> reports;
  reports.reserve(config.num_clients);
  reports.push_back(RandomizeClient(
      record.truth == Guess::kG1 ? pair.g1 : pair.g2, privacy, rng));
  for (int client = 1; client < config.num_clients; ++client) {
    const Example& ex = DrawExample(*config.dataset, rng);
    reports.push_back(RandomizeClient(GradParams(ctx.theta, ex), privacy, rng));
  }
  const ModelState next =
      ServerDebiasAndUpdate(ctx.theta, reports, privacy, config.server());
  switch (BlackBoxRuleFor(config.crafter)) {
    case DistinguisherKind::kBlackBoxDelta:
      record.guess = DistinguishBlackDelta(ctx.theta, next, *pair.x1, *pair.x2);
      break;
    case DistinguisherKind::kBlackBoxSignSum:
      record.guess = DistinguishBlackSignSum(ctx.theta, next,
                                             ctx.invert_sign_sum);
      break;
    default:
      record.guess = DistinguishBlackLossDecrease(ctx.theta, next, *pair.x1);
      break;
  }
  return record;
}

TrialRecord RunTrialWhite(const AuditConfig& config,
                          const MeasurementContext& ctx, Rng& rng) {
  TrialRecord record;
  record.truth = FairCoin(rng);
  const GradientPair pair = Craft(config, ctx, rng);
  const RandomizedReport report = RandomizeClient(
      record.truth == Guess::kG1 ? pair.g1 : pair.g2, config.privacy(), rng);
  record.guess = DistinguishWhiteCosine(report.z_hat, pair.g1, pair.g2);
  return record;
}

void TrialTally::Add(const TrialRecord& record) {
  if (record.truth == Guess::kG1) {
    ++trials_g1;
    if (record.guess == Guess::kG2) ++fp_count;
  } else {
    ++trials_g2;
    if (record.guess == Guess::kG1) ++fn_count;
  }
}

TrialTally& TrialTally::operator+=(const TrialTally& other) {
  trials_g1 += other.trials_g1;
  trials_g2 += other.trials_g2;
  fp_count += other.fp_count;
  fn_count += other.fn_count;
  return *this;
}

TrialTally TallyTrialsSerial(const AuditConfig& config,
                             const MeasurementContext& ctx,
                             int measurement_index, int begin, int end) {
  TrialTally tally;
  const bool white = config.mode == AuditMode::kWhiteBox;
  for (int k = begin; k < end; ++k) {
    Rng rng = TrialRng(config, measurement_index, k);
    tally.Add(white ? RunTrialWhite(config, ctx, rng)
                    : RunTrialBlack(config, ctx, rng));
  }
  return tally;
}

TrialTally TallyTrialsParallel(const AuditConfig& config,
                               const MeasurementContext& ctx,
                               int measurement_index, int threads) {
  const bool white = config.mode == AuditMode::kWhiteBox;
  const int n = config.trials;
  int64_t g1 = 0, g2 = 0, fp = 0, fn = 0;
  std::exception_ptr error;
  const int team = threads > 0 ? threads : omp_get_max_threads();
#pragma omp parallel for num_threads(team) schedule(static) \
    reduction(+ : g1, g2, fp, fn)
  for (int k = 0; k < n; ++k) {
    try {
      Rng rng = TrialRng(config, measurement_index, k);
      const TrialRecord r = white ? RunTrialWhite(config, ctx, rng)
                                  : RunTrialBlack(config, ctx, rng);
      if (r.truth == Guess::kG1) {
        ++g1;
        fp += r.guess == Guess::kG2;
      } else {
        ++g2;
        fn += r.guess == Guess::kG1;
      }
    } catch (...) {
#pragma omp critical(ldp_audit_trial_error)
      if (!error) error = std::current_exception();
    }
  }
  if (error) std::rethrow_exception(error);
  return TrialTally{g1, g2, fp, fn};
}

double EmpiricalEpsilon(double fp, double fn) {
  if (!(fp > 0.0 && fp < 1.0 && fn > 0.0 && fn < 1.0)) {
    throw std::invalid_argument("FP and FN must lie in (0, 1)");
  }
  return std::max(std::log((1.0 - fp) / fn), std::log((1.0 - fn) / fp));
}

MeasurementResult Summarize(const TrialTally& tally) {
  if (tally.trials_g1 == 0 || tally.trials_g2 == 0) {
    throw std::invalid_argument("both hypotheses need at least one trial");
  }
  MeasurementResult out;
  out.fp_count = tally.fp_count;
  out.fn_count = tally.fn_count;
  out.trials_g1 = tally.trials_g1;
  out.trials_g2 = tally.trials_g2;
  auto rate = [&out](int64_t count, int64_t trials) {
    const double resolution = 1.0 / static_cast<double>(trials);
    if (count == 0) {
      out.clamped = true;
      return resolution;
    }
    if (count == trials) {
      out.clamped = true;
      return 1.0 - resolution;
    }
    return static_cast<double>(count) / static_cast<double>(trials);
  };
  out.fp_rate = rate(tally.fp_count, tally.trials_g1);
  out.fn_rate = rate(tally.fn_count, tally.trials_g2);
  // The estimate goes negative when the guesses are worse than chance; a
  // lower bound on epsilon is never below 0.
  out.eps_empirical = std::max(0.0, EmpiricalEpsilon(out.fp_rate, out.fn_rate));
  return out;
}

namespace {

TrialTally TallyAll(const AuditConfig& config, const MeasurementContext& ctx,
                    int measurement_index, const ExecutionOptions& options) {
  return options.threads == 1
             ? TallyTrialsSerial(config, ctx, measurement_index, 0,
                                 config.trials)
             : TallyTrialsParallel(config, ctx, measurement_index,
                                   options.threads);
}

}  // namespace

MeasurementResult RunMeasurement(const AuditConfig& config,
                                 int measurement_index,
                                 const ExecutionOptions& options) {
  config.Validate();
  const AuditConfig resolved = WithResolvedOrientation(config, options);
  const MeasurementContext ctx =
      PrepareMeasurement(resolved, measurement_index);
  return Summarize(TallyAll(resolved, ctx, measurement_index, options));
}

bool CalibrateSignSum(const AuditConfig& config,
                      const ExecutionOptions& options) {
  AuditConfig held_out = config;
  held_out.sign_sum = SignSumOrientation::kLiteral;
  held_out.trials = config.calibration_trials;
  held_out.master_seed = Mix64(config.master_seed ^ kCalibrationStream);
  const MeasurementContext ctx =
      PrepareMeasurement(held_out, kCalibrationMeasurement);
  const TrialTally tally =
      TallyAll(held_out, ctx, kCalibrationMeasurement, options);
  const int64_t wrong = tally.fp_count + tally.fn_count;
  return 2 * wrong > held_out.trials;
}

AuditResult RunAudit(const AuditConfig& config,
                     const ExecutionOptions& options) {
  config.Validate();
  AuditResult result;
  result.config = WithResolvedOrientation(config, options);
  if (result.config.mode == AuditMode::kBlackBox &&
      BlackBoxRuleFor(config.crafter) == DistinguisherKind::kBlackBoxSignSum) {
    result.sign_sum_inverted =
        result.config.sign_sum == SignSumOrientation::kInverted;
  }
  double sum = 0.0;
  for (int m = 0; m < config.measurements; ++m) {
    const MeasurementContext ctx = PrepareMeasurement(result.config, m);
    result.measurements.push_back(
        Summarize(TallyAll(result.config, ctx, m, options)));
    sum += result.measurements.back().eps_empirical;
  }
  const double r = static_cast<double>(config.measurements);
  result.eps_mean = sum / r;
  if (config.measurements > 1) {
    double ss = 0.0;
    for (const auto& m : result.measurements) {
      ss += (m.eps_empirical - result.eps_mean) *
            (m.eps_empirical - result.eps_mean);
    }
    result.eps_stddev = std::sqrt(ss / (r - 1.0));
  }
  return result;
}

}  // namespace ldp_audit
