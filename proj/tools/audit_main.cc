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

// audit run <config> [--seed N] [--out DIR] [--threads N]
// audit oracle --epsilon E [--trials K]

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <exception>
#include <iostream>

#include "CLI11.hpp"
#include "ldp_audit/adversaries.h"
#include "ldp_audit/audit.h"
#include "ldp_audit/config.h"
#include "ldp_audit/report.h"

namespace {

int RunCommand(const std::string& config_path, const uint64_t* seed,
               const std::string& out_dir, const int* threads) {
  using namespace ldp_audit;
  ExperimentPlan plan = ParseConfig(config_path);
  if (seed != nullptr) OverrideSeed(plan, *seed);
  if (!out_dir.empty()) plan.output_dir = out_dir;
  if (threads != nullptr) plan.threads = *threads;
  std::cerr << "running " << plan.entries.size() << " audits, seed "
            << plan.master_seed << "\n";
  const auto results = RunPlan(plan, ExecutionOptions{plan.threads});
  for (const auto& [id, result] : results) {
    std::printf("%-48s eps=%-4g  eps_empirical=%.4f +- %.4f\n", id.c_str(),
                result.config.epsilon, result.eps_mean, result.eps_stddev);
  }
  WritePlanOutputs(plan, results);
  std::cerr << "wrote results to " << plan.output_dir.string() << "\n";
  return 0;
}

int OracleCommand(double epsilon, int trials) {
  using namespace ldp_audit;
  const double p = WorstCaseSuccessProb(epsilon);
  // Expected rates with half of the trials under each hypothesis, clamped
  // at the per-hypothesis resolution.
  const double half = trials / 2.0;
  const double error = std::clamp(1.0 - p, 1.0 / half, 1.0 - 1.0 / half);
  const double implied = std::max(0.0, EmpiricalEpsilon(error, error));
  std::printf("epsilon                  %.6g\n", epsilon);
  std::printf("worst_case_success_prob  %.17g\n", p);
  std::printf("trials                   %d\n", trials);
  std::printf("accuracy_binomial_sigma  %.6g\n",
              std::sqrt(p * (1.0 - p) / trials));
  std::printf("implied_eps_empirical    %.17g\n", implied);
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Empirical local differential privacy auditing for LDP-SGD"};
  app.require_subcommand(1);

  auto* run = app.add_subcommand("run", "Run every audit in a plan file");
  std::string config_path;
  uint64_t seed = 0;
  std::string out_dir;
  int threads = 0;
  run->add_option("config", config_path, "Plan file")
      ->required()
      ->check(CLI::ExistingFile);
  auto* seed_opt =
      run->add_option("--seed", seed, "Override the plan's master_seed");
  run->add_option("--out", out_dir, "Output directory");
  auto* threads_opt = run->add_option(
      "--threads", threads, "Worker threads (1 = serial reference loop)");

  auto* oracle =
      app.add_subcommand("oracle", "Worst-case success probability for eps");
  double epsilon = 1.0;
  int trials = 10000;
  oracle->add_option("--epsilon", epsilon, "Privacy parameter")
      ->required()
      ->check(CLI::NonNegativeNumber);
  oracle->add_option("--trials", trials, "Trials per measurement")
      ->check(CLI::Range(ldp_audit::kMinTrials, 1 << 30));

  CLI11_PARSE(app, argc, argv);
  try {
    if (*run) {
      return RunCommand(config_path, seed_opt->count() ? &seed : nullptr,
                        out_dir, threads_opt->count() ? &threads : nullptr);
    }
    return OracleCommand(epsilon, trials);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
}
