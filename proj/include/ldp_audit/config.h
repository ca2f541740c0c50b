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

// Experiment plan files: INI-style sections, see README.md for the syntax.

#ifndef LDP_AUDIT_CONFIG_H_
#define LDP_AUDIT_CONFIG_H_

#include <cstdint>
#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include "ldp_audit/audit.h"
#include "ldp_audit/data_io.h"

namespace ldp_audit {

inline constexpr double kDefaultEpsilons[] = {0.5, 1.0, 2.0, 4.0};

struct DatasetSource {
  std::string kind = "synthetic";  // synthetic | mnist
  SyntheticSpec synthetic{10, 20, 100, 3.0, 0.5, 1};
  std::filesystem::path images;
  std::filesystem::path labels;
  // Keep only the first `limit` IDX examples; 0 keeps all.
  int limit = 0;
};

struct PlanEntry {
  std::string id;
  AuditConfig config;
};

struct ExperimentPlan {
  std::vector<PlanEntry> entries;
  DatasetSource dataset;
  uint64_t master_seed = 0;
  std::filesystem::path output_dir = "results";
  bool write_csv = true;
  bool write_json = true;
  int threads = 0;
};

// Throws std::invalid_argument with a message naming the offending key.
ExperimentPlan ParseConfigString(std::string_view text,
                                 const std::filesystem::path& base_dir = ".");
ExperimentPlan ParseConfig(const std::filesystem::path& path);

// Loads or generates the dataset described by `source`.
Dataset BuildDataset(const DatasetSource& source);

void OverrideSeed(ExperimentPlan& plan, uint64_t seed);

}  // namespace ldp_audit

#endif  // LDP_AUDIT_CONFIG_H_
