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

#include "ldp_audit/config.h"

#include <boost/property_tree/ini_parser.hpp>
#include <boost/property_tree/ptree.hpp>

#include <algorithm>
#include <charconv>
#include <fstream>
#include <memory>
#include <set>
#include <sstream>
#include <stdexcept>

namespace ldp_audit {
namespace {

using boost::property_tree::ptree;

const std::set<std::string> kRunKeys = {
    "master_seed", "trials",     "measurements",       "clip_norm",
    "projection_radius", "threads", "output_dir",      "formats",
    "sign_sum",    "calibration_trials", "collusion_steps", "collusion_lr",
    "warmup_steps", "warmup_batch", "warmup_lr"};
const std::set<std::string> kModelKeys = {"hidden"};
const std::set<std::string> kDatasetKeys = {
    "kind",        "input_dim",        "num_classes", "examples_per_class",
    "class_separation", "noise_sigma", "seed",        "images",
    "labels",      "limit"};
const std::set<std::string> kGridKeys = {
    "epsilons", "crafters", "modes", "num_clients", "dummy_norm_fractions",
    "alpha"};
const std::set<std::string> kAuditKeys = {
    "epsilon", "crafter", "mode", "num_clients", "dummy_norm_fraction",
    "alpha", "trials", "measurements"};

[[noreturn]] void Fail(const std::string& where, const std::string& what) {
  throw std::invalid_argument("config [" + where + "]: " + what);
}

std::string Trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t");
  if (first == std::string_view::npos) return "";
  const auto last = s.find_last_not_of(" \t");
  return std::string(s.substr(first, last - first + 1));
}

// The INI reader only knows whole-line comments; drop trailing "; ..." and
// "# ..." that follow whitespace so values can carry a note.
std::string StripInlineComments(std::string_view text) {
  std::string out;
  std::istringstream in{std::string(text)};
  for (std::string line; std::getline(in, line);) {
    for (std::size_t i = 1; i < line.size(); ++i) {
      if ((line[i] == ';' || line[i] == '#') &&
          (line[i - 1] == ' ' || line[i - 1] == '\t')) {
        line.erase(i);
        break;
      }
    }
    out += line;
    out += '\n';
  }
  return out;
}

std::vector<std::string> SplitList(const std::string& s) {
  std::vector<std::string> out;
  std::stringstream in(s);
  std::string item;
  while (std::getline(in, item, ',')) {
    item = Trim(item);
    if (!item.empty()) out.push_back(item);
  }
  return out;
}

template <typename T>
T ParseNumber(const std::string& where, const std::string& key,
              const std::string& text) {
  T value{};
  const char* begin = text.data();
  const char* end = begin + text.size();
  auto [ptr, ec] = std::from_chars(begin, end, value);
  if (ec != std::errc() || ptr != end) {
    Fail(where, "cannot parse " + key + " = '" + text + "'");
  }
  return value;
}

// Typed access to one section that rejects unknown keys up front.
class Section {
 public:
  Section(std::string name, const ptree& tree,
          const std::set<std::string>& allowed)
      : name_(std::move(name)), tree_(tree) {
    for (const auto& [key, child] : tree_) {
      if (!allowed.contains(key)) Fail(name_, "unknown key '" + key + "'");
    }
  }

  bool Has(const std::string& key) const {
    return tree_.find(key) != tree_.not_found();
  }
  std::string String(const std::string& key, std::string fallback) const {
    auto it = tree_.find(key);
    return it == tree_.not_found() ? fallback : Trim(it->second.data());
  }
  template <typename T>
  T Number(const std::string& key, T fallback) const {
    return Has(key) ? ParseNumber<T>(name_, key, String(key, "")) : fallback;
  }
  template <typename T>
  std::vector<T> NumberList(const std::string& key,
                            std::vector<T> fallback) const {
    if (!Has(key)) return fallback;
    std::vector<T> out;
    for (const auto& item : SplitList(String(key, ""))) {
      out.push_back(ParseNumber<T>(name_, key, item));
    }
    if (out.empty()) Fail(name_, key + " is empty");
    return out;
  }
  const std::string& name() const { return name_; }

 private:
  std::string name_;
  const ptree& tree_;
};

const ptree& ChildOrEmpty(const ptree& root, const std::string& name) {
  static const ptree kEmpty;
  auto it = root.find(name);
  return it == root.not_found() ? kEmpty : it->second;
}

std::string FormatNumber(double v) {
  std::ostringstream out;
  out << v;
  return out.str();
}

std::string EntryId(const AuditConfig& c) {
  std::string id = std::string(CrafterName(c.crafter)) + "-" +
                   std::string(ModeName(c.mode)) + "-eps" +
                   FormatNumber(c.epsilon) + "-n" +
                   std::to_string(c.num_clients);
  if (c.crafter == CrafterKind::kDummyGradient) {
    id += "-f" + FormatNumber(c.crafter_params.dummy_norm_fraction);
  }
  return id;
}

void ValidateEntry(const std::string& where, const AuditConfig& config) {
  try {
    config.model.Validate();
    config.privacy().Validate();
    config.server().Validate();
    config.crafter_params.Validate();
    if (config.trials < kMinTrials) {
      throw std::invalid_argument("trials must be >= " +
                                  std::to_string(kMinTrials));
    }
    if (config.measurements < 1) {
      throw std::invalid_argument("measurements must be >= 1");
    }
    if (config.warmup_steps < 0 || config.warmup_batch < 1 ||
        !(config.warmup_lr > 0.0)) {
      throw std::invalid_argument("invalid warm-up settings");
    }
  } catch (const std::invalid_argument& e) {
    Fail(where, e.what());
  }
}

}  // namespace

ExperimentPlan ParseConfigString(std::string_view text,
                                 const std::filesystem::path& base_dir) {
  ptree root;
  {
    std::istringstream in{StripInlineComments(text)};
    try {
      boost::property_tree::read_ini(in, root);
    } catch (const boost::property_tree::ini_parser_error& e) {
      throw std::invalid_argument("config: " + std::string(e.what()));
    }
  }
  bool has_grid = false;
  std::vector<std::string> audit_sections;
  for (const auto& [name, child] : root) {
    if (name == "grid") {
      has_grid = true;
    } else if (name.rfind("audit.", 0) == 0 && name.size() > 6) {
      audit_sections.push_back(name);
    } else if (name != "run" && name != "model" && name != "dataset") {
      Fail(name, child.empty() ? "top-level keys must live in a section"
                               : "unknown section");
    }
  }

  ExperimentPlan plan;
  const Section run("run", ChildOrEmpty(root, "run"), kRunKeys);
  plan.master_seed = run.Number<uint64_t>("master_seed", 0);
  plan.threads = run.Number<int>("threads", 0);
  plan.output_dir = run.String("output_dir", "results");
  if (run.Has("formats")) {
    plan.write_csv = plan.write_json = false;
    for (const auto& f : SplitList(run.String("formats", ""))) {
      if (f == "csv") {
        plan.write_csv = true;
      } else if (f == "json") {
        plan.write_json = true;
      } else {
        Fail("run", "unknown output format '" + f + "'");
      }
    }
    if (!plan.write_csv && !plan.write_json) Fail("run", "formats is empty");
  }

  AuditConfig base;
  base.master_seed = plan.master_seed;
  base.trials = run.Number<int>("trials", 10000);
  base.measurements = run.Number<int>("measurements", 10);
  base.clip_norm = run.Number<double>("clip_norm", 1.0);
  base.projection_radius = run.Number<double>("projection_radius", 0.0);
  base.calibration_trials = run.Number<int>("calibration_trials", 1000);
  base.crafter_params.collusion_steps = run.Number<int>("collusion_steps", 200);
  base.crafter_params.collusion_lr = run.Number<double>("collusion_lr", 0.1);
  base.warmup_steps = run.Number<int>("warmup_steps", 100);
  base.warmup_batch = run.Number<int>("warmup_batch", 32);
  base.warmup_lr = run.Number<double>("warmup_lr", 0.1);
  try {
    base.sign_sum = ParseOrientation(run.String("sign_sum", "auto"));
  } catch (const std::invalid_argument& e) {
    Fail("run", e.what());
  }

  const Section dataset("dataset", ChildOrEmpty(root, "dataset"), kDatasetKeys);
  DatasetSource& source = plan.dataset;
  source.kind = dataset.String("kind", "synthetic");
  int input_dim = 0;
  int num_classes = 10;
  if (source.kind == "synthetic") {
    auto& s = source.synthetic;
    s.input_dim = dataset.Number<int>("input_dim", 20);
    s.num_classes = dataset.Number<int>("num_classes", 10);
    s.examples_per_class = dataset.Number<int>("examples_per_class", 100);
    s.class_separation = dataset.Number<double>("class_separation", 3.0);
    s.noise_sigma = dataset.Number<double>("noise_sigma", 0.5);
    s.seed = dataset.Number<uint64_t>("seed", 1);
    if (s.input_dim < 1 || s.num_classes < 2 || s.examples_per_class < 1 ||
        !(s.class_separation > 0.0) || !(s.noise_sigma >= 0.0)) {
      Fail("dataset", "synthetic sizes must be positive");
    }
    input_dim = s.input_dim;
    num_classes = s.num_classes;
  } else if (source.kind == "mnist") {
    if (!dataset.Has("images") || !dataset.Has("labels")) {
      Fail("dataset", "mnist needs both 'images' and 'labels' paths");
    }
    source.images = dataset.String("images", "");
    source.labels = dataset.String("labels", "");
    if (source.images.is_relative()) source.images = base_dir / source.images;
    if (source.labels.is_relative()) source.labels = base_dir / source.labels;
    source.limit = dataset.Number<int>("limit", 0);
    input_dim = 28 * 28;
  } else {
    Fail("dataset", "unknown kind '" + source.kind + "'");
  }

  const Section model("model", ChildOrEmpty(root, "model"), kModelKeys);
  base.model.layer_sizes = {input_dim};
  for (int h : model.NumberList<int>("hidden", {32})) {
    base.model.layer_sizes.push_back(h);
  }
  base.model.layer_sizes.push_back(num_classes);

  if (has_grid || audit_sections.empty()) {
    const Section grid("grid", ChildOrEmpty(root, "grid"), kGridKeys);
    const auto epsilons = grid.NumberList<double>(
        "epsilons", {std::begin(kDefaultEpsilons), std::end(kDefaultEpsilons)});
    const auto clients = grid.NumberList<int>("num_clients", {1});
    const auto fractions =
        grid.NumberList<double>("dummy_norm_fractions", {1.0});
    const double alpha = grid.Number<double>("alpha", 1.0);
    std::vector<CrafterKind> crafters(kAllCrafters.begin(), kAllCrafters.end());
    std::vector<AuditMode> modes = {AuditMode::kBlackBox, AuditMode::kWhiteBox};
    try {
      if (grid.Has("crafters") && grid.String("crafters", "") != "all") {
        crafters.clear();
        for (const auto& name : SplitList(grid.String("crafters", ""))) {
          crafters.push_back(ParseCrafter(name));
        }
      }
      if (grid.Has("modes")) {
        modes.clear();
        for (const auto& name : SplitList(grid.String("modes", ""))) {
          modes.push_back(ParseMode(name));
        }
      }
    } catch (const std::invalid_argument& e) {
      Fail("grid", e.what());
    }
    for (CrafterKind crafter : crafters) {
      for (AuditMode mode : modes) {
        for (int n : clients) {
          for (double eps : epsilons) {
            const bool dummy = crafter == CrafterKind::kDummyGradient;
            for (std::size_t f = 0; f < (dummy ? fractions.size() : 1); ++f) {
              AuditConfig c = base;
              c.crafter = crafter;
              c.mode = mode;
              c.epsilon = eps;
              c.num_clients = n;
              c.crafter_params.alpha = alpha;
              if (dummy) c.crafter_params.dummy_norm_fraction = fractions[f];
              ValidateEntry("grid", c);
              plan.entries.push_back({EntryId(c), std::move(c)});
            }
          }
        }
      }
    }
  }

  for (const auto& name : audit_sections) {
    const Section s(name, root.find(name)->second, kAuditKeys);
    AuditConfig c = base;
    if (!s.Has("epsilon") || !s.Has("crafter") || !s.Has("mode")) {
      Fail(name, "audit needs epsilon, crafter and mode");
    }
    try {
      c.crafter = ParseCrafter(s.String("crafter", ""));
      c.mode = ParseMode(s.String("mode", ""));
    } catch (const std::invalid_argument& e) {
      Fail(name, e.what());
    }
    c.epsilon = s.Number<double>("epsilon", 1.0);
    c.num_clients = s.Number<int>("num_clients", 1);
    c.crafter_params.dummy_norm_fraction =
        s.Number<double>("dummy_norm_fraction", 1.0);
    c.crafter_params.alpha = s.Number<double>("alpha", 1.0);
    c.trials = s.Number<int>("trials", base.trials);
    c.measurements = s.Number<int>("measurements", base.measurements);
    ValidateEntry(name, c);
    plan.entries.push_back({name.substr(6), std::move(c)});
  }

  std::set<std::string> ids;
  for (const auto& entry : plan.entries) {
    if (!ids.insert(entry.id).second) {
      Fail(entry.id, "duplicate audit identifier");
    }
  }
  if (plan.entries.empty()) Fail("grid", "plan has no audits");
  return plan;
}

ExperimentPlan ParseConfig(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw std::invalid_argument("cannot read config " + path.string());
  std::stringstream buffer;
  buffer << in.rdbuf();
  return ParseConfigString(buffer.str(), path.parent_path().empty()
                                             ? std::filesystem::path(".")
                                             : path.parent_path());
}

Dataset BuildDataset(const DatasetSource& source) {
  if (source.kind == "synthetic") return GenerateBlobs(source.synthetic);
  IdxImages images = LoadIdxImages(source.images);
  std::vector<int> labels = LoadIdxLabels(source.labels);
  if (source.limit > 0) {
    const std::size_t keep = std::min<std::size_t>(source.limit, labels.size());
    images.pixels.resize(std::min(keep, images.pixels.size()));
    images.count = static_cast<uint32_t>(images.pixels.size());
    labels.resize(keep);
  }
  return MakeImageDataset(images, labels);
}

void OverrideSeed(ExperimentPlan& plan, uint64_t seed) {
  plan.master_seed = seed;
  for (auto& entry : plan.entries) entry.config.master_seed = seed;
}

}  // namespace ldp_audit
