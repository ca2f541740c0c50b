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

#ifndef LDP_AUDIT_REPORT_H_
#define LDP_AUDIT_REPORT_H_

#include <filesystem>
#include <ostream>
#include <span>
#include <string>
#include <vector>

#include "ldp_audit/audit.h"
#include "ldp_audit/config.h"

namespace ldp_audit {

struct PlanResult {
  std::string id;
  AuditResult result;
};

// Runs every audit of the plan in order; the dataset is built once and
// shared by all audits.
std::vector<PlanResult> RunPlan(const ExperimentPlan& plan,
                                const ExecutionOptions& options);

// One row per (audit, measurement); reals printed with 17 significant digits.
void WriteResultsCsv(std::span<const PlanResult> results, std::ostream& out);

// Per-audit mean/stddev plus the full configuration echo.
void WriteSummaryJson(const ExperimentPlan& plan,
                      std::span<const PlanResult> results, std::ostream& out);

// Tidy table of measured epsilon against theoretical epsilon, one series per
// (crafter, mode, num_clients, dummy_norm_fraction), plus a y = x reference
// series per crafter.
void EmitFigureData(std::span<const PlanResult> results, std::ostream& out);

// Writes results.csv, figure_data.csv and summary.json (as enabled by the
// plan) into plan.output_dir. Throws std::runtime_error on I/O failure.
void WritePlanOutputs(const ExperimentPlan& plan,
                      std::span<const PlanResult> results);

}  // namespace ldp_audit

#endif  // LDP_AUDIT_REPORT_H_
