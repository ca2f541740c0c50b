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

#include "ldp_audit/report.h"

#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "gtest/gtest.h"
#include "ldp_audit/config.h"
#include "nlohmann/json.hpp"

namespace ldp_audit {
namespace {

constexpr char kSmallPlan[] = R"(
[run]
master_seed = 11
trials = 100
measurements = 10
warmup_steps = 5
calibration_trials = 100

[model]
hidden = 8

[dataset]
input_dim = 4
num_classes = 3
examples_per_class = 20
)";

std::vector<std::string> Lines(const std::string& text) {
  std::vector<std::string> lines;
  std::istringstream in(text);
  for (std::string line; std::getline(in, line);) lines.push_back(line);
  return lines;
}

std::string Csv(const std::vector<PlanResult>& results) {
  std::ostringstream out;
  WriteResultsCsv(results, out);
  return out.str();
}

TEST(ReportTest, ResultsCsvHasOneRowPerMeasurement) {
  const ExperimentPlan plan = ParseConfigString(
      std::string(kSmallPlan) +
      "[grid]\nepsilons = 1, 2\ncrafters = dummy_gradient\nmodes = white_box\n");
  const auto results = RunPlan(plan, {});
  const auto lines = Lines(Csv(results));
  ASSERT_EQ(lines.size(), 21u);
  EXPECT_EQ(lines[0].rfind("crafter,mode,epsilon_theoretical,num_clients,", 0),
            0u);
  EXPECT_EQ(lines[1].rfind("dummy_gradient,white_box,1,1,1,0,", 0), 0u);
  EXPECT_NE(lines[20].find(",dummy_gradient-white_box-eps2-n1-f1,1,11"),
            std::string::npos);
}

TEST(ReportTest, FigureDataSeries) {
  const ExperimentPlan plan = ParseConfigString(
      std::string(kSmallPlan) +
      "[grid]\ncrafters = dummy_gradient\nmodes = white_box, black_box\n");
  ASSERT_EQ(plan.entries.size(), 8u);
  std::vector<PlanResult> results = RunPlan(plan, {});
  std::ostringstream out;
  EmitFigureData(results, out);
  const auto lines = Lines(out.str());
  ASSERT_EQ(lines.size(), 1u + 8u + 4u);
  int measured = 0;
  int theoretical = 0;
  for (std::size_t i = 1; i < lines.size(); ++i) {
    measured += lines[i].rfind("measured,", 0) == 0;
    theoretical += lines[i].rfind("theoretical,", 0) == 0;
  }
  EXPECT_EQ(measured, 8);
  EXPECT_EQ(theoretical, 4);
  EXPECT_EQ(lines.back(), "theoretical,dummy_gradient,theoretical,4,,,4,0");
}

TEST(ReportTest, FigureDataKeysNormFractionAndClients) {
  const ExperimentPlan plan = ParseConfigString(
      std::string(kSmallPlan) +
      "[grid]\nepsilons = 4\ncrafters = dummy_gradient\nmodes = white_box\n"
      "num_clients = 1, 2\ndummy_norm_fractions = 0.25, 1\n");
  const auto results = RunPlan(plan, {});
  std::ostringstream out;
  EmitFigureData(results, out);
  const auto lines = Lines(out.str());
  ASSERT_EQ(lines.size(), 1u + 4u + 1u);
  EXPECT_EQ(lines[1].rfind("measured,dummy_gradient,white_box,4,1,0.25,", 0),
            0u);
  EXPECT_EQ(lines[4].rfind("measured,dummy_gradient,white_box,4,2,1,", 0), 0u);
}

TEST(ReportTest, SummaryJsonEchoesConfig) {
  const ExperimentPlan plan = ParseConfigString(
      std::string(kSmallPlan) +
      "[grid]\nepsilons = 2\ncrafters = dummy_gradient\n");
  const auto results = RunPlan(plan, {});
  std::ostringstream out;
  WriteSummaryJson(plan, results, out);
  const auto doc = nlohmann::json::parse(out.str());
  EXPECT_EQ(doc["master_seed"], 11);
  EXPECT_EQ(doc["dataset"]["kind"], "synthetic");
  ASSERT_EQ(doc["audits"].size(), 2u);
  const auto& black = doc["audits"][0];
  EXPECT_EQ(black["config"]["mode"], "black_box");
  EXPECT_TRUE(black.contains("sign_sum_inverted"));
  EXPECT_EQ(black["eps_empirical"].size(), 10u);
  EXPECT_EQ(black["config"]["warmup_steps"], 5);
  const auto& white = doc["audits"][1];
  EXPECT_FALSE(white.contains("sign_sum_inverted"));
  EXPECT_NEAR(white["worst_case_success_prob"].get<double>(), 0.8808, 1e-4);
  EXPECT_EQ(white["eps_empirical_mean"].get<double>(), results[1].result.eps_mean);
}

TEST(ReportTest, RerunsAreByteIdentical) {
  const ExperimentPlan plan = ParseConfigString(
      std::string(kSmallPlan) +
      "[grid]\nepsilons = 1\ncrafters = benign, dummy_gradient\n");
  EXPECT_EQ(Csv(RunPlan(plan, {.threads = 1})),
            Csv(RunPlan(plan, {.threads = 3})));
}

TEST(ReportTest, WritesOutputFiles) {
  ExperimentPlan plan = ParseConfigString(
      std::string(kSmallPlan) +
      "[grid]\nepsilons = 1\ncrafters = benign\nmodes = white_box\n");
  plan.output_dir = std::filesystem::temp_directory_path() / "ldp_audit_rep";
  std::filesystem::remove_all(plan.output_dir);
  WritePlanOutputs(plan, RunPlan(plan, {}));
  for (const char* name : {"results.csv", "figure_data.csv", "summary.json"}) {
    EXPECT_TRUE(std::filesystem::exists(plan.output_dir / name)) << name;
  }
  std::filesystem::remove_all(plan.output_dir);
  plan.write_json = false;
  WritePlanOutputs(plan, RunPlan(plan, {}));
  EXPECT_FALSE(std::filesystem::exists(plan.output_dir / "summary.json"));
  std::filesystem::remove_all(plan.output_dir);
}

}  // namespace
}  // namespace ldp_audit
