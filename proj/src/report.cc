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

#include <cstdio>
#include <fstream>
#include <map>
#include <memory>
#include <stdexcept>
#include <tuple>

#include "json.hpp"

namespace ldp_audit {
namespace {

std::string Exact(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

nlohmann::json ConfigJson(const AuditConfig& c) {
  return {
      {"epsilon", c.epsilon},
      {"clip_norm", c.clip_norm},
      {"crafter", CrafterName(c.crafter)},
      {"mode", ModeName(c.mode)},
      {"alpha", c.crafter_params.alpha},
      {"dummy_norm_fraction", c.crafter_params.dummy_norm_fraction},
      {"collusion_steps", c.crafter_params.collusion_steps},
      {"collusion_lr", c.crafter_params.collusion_lr},
      {"trials", c.trials},
      {"measurements", c.measurements},
      {"num_clients", c.num_clients},
      {"master_seed", c.master_seed},
      {"layer_sizes", c.model.layer_sizes},
      {"param_count", c.model.ParamCount()},
      {"projection_radius", c.server().projection_radius},
      {"sign_sum", OrientationName(c.sign_sum)},
      {"calibration_trials", c.calibration_trials},
      {"warmup_steps", c.warmup_steps},
      {"warmup_batch", c.warmup_batch},
      {"warmup_lr", c.warmup_lr},
  };
}

}  // namespace

std::vector<PlanResult> RunPlan(const ExperimentPlan& plan,
                                const ExecutionOptions& options) {
  auto dataset = std::make_shared<const Dataset>(BuildDataset(plan.dataset));
  std::vector<PlanResult> results;
  results.reserve(plan.entries.size());
  for (const auto& entry : plan.entries) {
    AuditConfig config = entry.config;
    config.dataset = dataset;
    results.push_back({entry.id, RunAudit(config, options)});
  }
  return results;
}

void WriteResultsCsv(std::span<const PlanResult> results, std::ostream& out) {
  out << "crafter,mode,epsilon_theoretical,num_clients,dummy_norm_fraction,"
         "measurement_index,trials_g1,trials_g2,fp_count,fn_count,fp_rate,"
         "fn_rate,clamped,eps_empirical,audit_id,alpha,master_seed\n";
  for (const auto& [id, result] : results) {
    const AuditConfig& c = result.config;
    for (std::size_t m = 0; m < result.measurements.size(); ++m) {
      const MeasurementResult& r = result.measurements[m];
      out << CrafterName(c.crafter) << ',' << ModeName(c.mode) << ','
          << Exact(c.epsilon) << ',' << c.num_clients << ','
          << Exact(c.crafter_params.dummy_norm_fraction) << ',' << m << ','
          << r.trials_g1 << ',' << r.trials_g2 << ',' << r.fp_count << ','
          << r.fn_count << ',' << Exact(r.fp_rate) << ',' << Exact(r.fn_rate)
          << ',' << (r.clamped ? "true" : "false") << ','
          << Exact(r.eps_empirical) << ',' << id << ','
          << Exact(c.crafter_params.alpha) << ',' << c.master_seed << '\n';
    }
  }
}

void WriteSummaryJson(const ExperimentPlan& plan,
                      std::span<const PlanResult> results, std::ostream& out) {
  nlohmann::json audits = nlohmann::json::array();
  for (const auto& [id, result] : results) {
    nlohmann::json eps = nlohmann::json::array();
    for (const auto& m : result.measurements) eps.push_back(m.eps_empirical);
    nlohmann::json audit = {
        {"id", id},
        {"config", ConfigJson(result.config)},
        {"eps_empirical_mean", result.eps_mean},
        {"eps_empirical_std", result.eps_stddev},
        {"eps_empirical", eps},
        {"worst_case_success_prob",
         WorstCaseSuccessProb(result.config.epsilon)},
    };
    if (result.sign_sum_inverted) {
      audit["sign_sum_inverted"] = *result.sign_sum_inverted;
    }
    audits.push_back(std::move(audit));
  }
  nlohmann::json dataset = {{"kind", plan.dataset.kind}};
  if (plan.dataset.kind == "synthetic") {
    const auto& s = plan.dataset.synthetic;
    dataset.update({{"num_classes", s.num_classes},
                    {"input_dim", s.input_dim},
                    {"examples_per_class", s.examples_per_class},
                    {"class_separation", s.class_separation},
                    {"noise_sigma", s.noise_sigma},
                    {"seed", s.seed}});
  } else {
    dataset.update({{"images", plan.dataset.images.string()},
                    {"labels", plan.dataset.labels.string()},
                    {"limit", plan.dataset.limit}});
  }
  const nlohmann::json doc = {{"master_seed", plan.master_seed},
                              {"dataset", dataset},
                              {"audits", audits}};
  out << doc.dump(2) << '\n';
}

void EmitFigureData(std::span<const PlanResult> results, std::ostream& out) {
  out << "series,crafter,mode,eps_theoretical,num_clients,"
         "dummy_norm_fraction,eps_empirical_mean,eps_empirical_std\n";
  std::map<std::pair<std::string, double>, bool> references;
  for (const auto& [id, result] : results) {
    const AuditConfig& c = result.config;
    out << "measured," << CrafterName(c.crafter) << ',' << ModeName(c.mode)
        << ',' << Exact(c.epsilon) << ',' << c.num_clients << ','
        << Exact(c.crafter_params.dummy_norm_fraction) << ','
        << Exact(result.eps_mean) << ',' << Exact(result.eps_stddev) << '\n';
    references[{std::string(CrafterName(c.crafter)), c.epsilon}] = true;
  }
  for (const auto& [key, unused] : references) {
    out << "theoretical," << key.first << ",theoretical," << Exact(key.second)
        << ",,," << Exact(key.second) << ",0\n";
  }
}

void WritePlanOutputs(const ExperimentPlan& plan,
                      std::span<const PlanResult> results) {
  std::error_code ec;
  std::filesystem::create_directories(plan.output_dir, ec);
  if (ec) {
    throw std::runtime_error("cannot create " + plan.output_dir.string() +
                             ": " + ec.message());
  }
  auto write = [&](const std::string& name, auto&& emit) {
    const auto path = plan.output_dir / name;
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot open " + path.string());
    emit(out);
    out.flush();
    if (!out) throw std::runtime_error("write failed for " + path.string());
  };
  if (plan.write_csv) {
    write("results.csv", [&](std::ostream& o) { WriteResultsCsv(results, o); });
    write("figure_data.csv",
          [&](std::ostream& o) { EmitFigureData(results, o); });
  }
  if (plan.write_json) {
    write("summary.json",
          [&](std::ostream& o) { WriteSummaryJson(plan, results, o); });
  }
}

}  // namespace ldp_audit
