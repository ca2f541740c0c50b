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

// Black-box and white-box LDP tests: K trials of the crafter / model trainer
// / distinguisher game per measurement, tallied into FP and FN rates and an
// empirical epsilon lower bound.

#ifndef LDP_AUDIT_AUDIT_H_
#define LDP_AUDIT_AUDIT_H_

#include <cstdint>
#include <memory>
#include <optional>
#include <string_view>
#include <vector>

#include "ldp_audit/adversaries.h"
#include "ldp_audit/data_io.h"
#include "ldp_audit/ldp_mechanism.h"
#include "ldp_audit/nn.h"
#include "ldp_audit/rng.h"

namespace ldp_audit {

enum class AuditMode { kBlackBox, kWhiteBox };

std::string_view ModeName(AuditMode mode);
AuditMode ParseMode(std::string_view name);

// Orientation of the sign-sum black-box rule. kAuto calibrates it against
// ground truth on a held-out run before the measurements start.
enum class SignSumOrientation { kAuto, kLiteral, kInverted };

std::string_view OrientationName(SignSumOrientation orientation);
SignSumOrientation ParseOrientation(std::string_view name);

inline constexpr int kMinTrials = 100;

struct AuditConfig {
  double epsilon = 1.0;
  double clip_norm = 1.0;
  CrafterKind crafter = CrafterKind::kBenign;
  CrafterParams crafter_params;
  AuditMode mode = AuditMode::kWhiteBox;
  int trials = 10000;
  int measurements = 10;
  int num_clients = 1;
  uint64_t master_seed = 0;
  ModelSpec model{{20, 32, 10}};
  // Radius of the server's parameter ball; <= 0 means 10 * clip_norm.
  double projection_radius = 0.0;
  SignSumOrientation sign_sum = SignSumOrientation::kAuto;
  int calibration_trials = 1000;
  // Benign minibatch SGD applied to the freshly initialized global model
  // before each measurement, so that honest gradients have the small norms of
  // a model in the middle of training. 0 audits the initialization itself.
  int warmup_steps = 100;
  int warmup_batch = 32;
  double warmup_lr = 0.1;
  std::shared_ptr<const Dataset> dataset;

  PrivacySpec privacy() const;
  ServerSpec server() const;
  // Throws std::invalid_argument.
  void Validate() const;
};

struct TrialRecord {
  Guess truth = Guess::kG1;
  Guess guess = Guess::kG1;

  bool operator==(const TrialRecord&) const = default;
};

// State shared by every trial of one measurement.
struct MeasurementContext {
  // The model the server distributes; the malicious one for collusion.
  ModelState theta;
  int collusion_target = -1;
  bool invert_sign_sum = false;
};

// Minibatch SGD on examples drawn uniformly from `dataset`.
void WarmUpGlobalModel(ModelState& model, const Dataset& dataset, int steps,
                       int batch, double lr, Rng& rng);

MeasurementContext PrepareMeasurement(const AuditConfig& config,
                                      int measurement_index);

Rng TrialRng(const AuditConfig& config, int measurement_index,
             int trial_index);

TrialRecord RunTrialBlack(const AuditConfig& config,
                          const MeasurementContext& ctx, Rng& rng);
TrialRecord RunTrialWhite(const AuditConfig& config,
                          const MeasurementContext& ctx, Rng& rng);

struct TrialTally {
  int64_t trials_g1 = 0;
  int64_t trials_g2 = 0;
  int64_t fp_count = 0;  // truth g1, guessed g2
  int64_t fn_count = 0;  // truth g2, guessed g1

  void Add(const TrialRecord& record);
  TrialTally& operator+=(const TrialTally& other);
  bool operator==(const TrialTally&) const = default;
};

// Reference loop over trials [begin, end) in index order.
TrialTally TallyTrialsSerial(const AuditConfig& config,
                             const MeasurementContext& ctx,
                             int measurement_index, int begin, int end);
// OpenMP loop over trials [0, config.trials); identical result to the serial
// loop for any thread count. threads <= 0 uses the OpenMP default.
TrialTally TallyTrialsParallel(const AuditConfig& config,
                               const MeasurementContext& ctx,
                               int measurement_index, int threads);

struct MeasurementResult {
  int64_t fp_count = 0;
  int64_t fn_count = 0;
  int64_t trials_g1 = 0;
  int64_t trials_g2 = 0;
  double fp_rate = 0.0;
  double fn_rate = 0.0;
  double eps_empirical = 0.0;
  // True when a zero (or full) count was replaced by the 1/trials clamp.
  bool clamped = false;
};

// max(log((1-fp)/fn), log((1-fn)/fp)). Throws unless fp, fn in (0, 1).
double EmpiricalEpsilon(double fp, double fn);

// Rates, clamping and the empirical epsilon (floored at 0) for one tally.
MeasurementResult Summarize(const TrialTally& tally);

struct ExecutionOptions {
  // 1 runs the serial reference loop; otherwise the OpenMP kernel.
  int threads = 0;
};

MeasurementResult RunMeasurement(const AuditConfig& config,
                                 int measurement_index,
                                 const ExecutionOptions& options = {});

// Runs the held-out calibration for the sign-sum rule and returns whether
// the rule must be inverted.
bool CalibrateSignSum(const AuditConfig& config,
                      const ExecutionOptions& options = {});

struct AuditResult {
  AuditConfig config;
  std::vector<MeasurementResult> measurements;
  double eps_mean = 0.0;
  // Sample standard deviation; 0 for a single measurement.
  double eps_stddev = 0.0;
  // Set when the sign-sum rule was in use.
  std::optional<bool> sign_sum_inverted;
};

AuditResult RunAudit(const AuditConfig& config,
                     const ExecutionOptions& options = {});

}  // namespace ldp_audit

#endif  // LDP_AUDIT_AUDIT_H_
