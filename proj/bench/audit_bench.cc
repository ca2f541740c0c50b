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

// Serial reference loop vs. OpenMP kernel for one measurement, plus the
// per-trial building blocks.

#include <benchmark/benchmark.h>

#include <memory>

#include "ldp_audit/audit.h"

namespace ldp_audit {
namespace {

AuditConfig MakeConfig(CrafterKind crafter, AuditMode mode) {
  static const auto dataset = std::make_shared<const Dataset>(
      GenerateBlobs(SyntheticSpec{10, 20, 100, 3.0, 0.5, 1}));
  AuditConfig config;
  config.dataset = dataset;
  config.crafter = crafter;
  config.mode = mode;
  config.epsilon = 2.0;
  config.trials = 1000;
  config.sign_sum = SignSumOrientation::kInverted;
  return config;
}

void BM_TallySerial(benchmark::State& state) {
  const auto config = MakeConfig(static_cast<CrafterKind>(state.range(0)),
                                 static_cast<AuditMode>(state.range(1)));
  const auto ctx = PrepareMeasurement(config, 0);
  for (auto _ : state) {
    benchmark::DoNotOptimize(
        TallyTrialsSerial(config, ctx, 0, 0, config.trials));
  }
  state.SetItemsProcessed(state.iterations() * config.trials);
}

void BM_TallyParallel(benchmark::State& state) {
  const auto config = MakeConfig(static_cast<CrafterKind>(state.range(0)),
                                 static_cast<AuditMode>(state.range(1)));
  const auto ctx = PrepareMeasurement(config, 0);
  for (auto _ : state) {
    benchmark::DoNotOptimize(
        TallyTrialsParallel(config, ctx, 0, static_cast<int>(state.range(2))));
  }
  state.SetItemsProcessed(state.iterations() * config.trials);
}

void Args(benchmark::internal::Benchmark* b, bool threads) {
  for (int crafter : {0, 3, 5}) {
    for (int mode : {0, 1}) {
      if (threads) {
        for (int t : {1, 2, 4}) b->Args({crafter, mode, t});
      } else {
        b->Args({crafter, mode});
      }
    }
  }
  b->Unit(benchmark::kMillisecond);
}

BENCHMARK(BM_TallySerial)->Apply([](auto* b) { Args(b, false); });
BENCHMARK(BM_TallyParallel)->Apply([](auto* b) { Args(b, true); });

void BM_RandomizeClient(benchmark::State& state) {
  const PrivacySpec spec{2.0, 1.0, static_cast<int>(state.range(0))};
  std::vector<double> g(spec.dim, 0.01);
  Rng rng(1);
  for (auto _ : state) benchmark::DoNotOptimize(RandomizeClient(g, spec, rng));
}
BENCHMARK(BM_RandomizeClient)->Arg(1002)->Arg(25450);

void BM_GradParams(benchmark::State& state) {
  const auto config = MakeConfig(CrafterKind::kBenign, AuditMode::kWhiteBox);
  Rng rng(1);
  const ModelState model = InitParams(config.model, rng);
  const Example& x = config.dataset->examples[0];
  for (auto _ : state) benchmark::DoNotOptimize(GradParams(model, x));
}
BENCHMARK(BM_GradParams);

void BM_ServerUpdate(benchmark::State& state) {
  const auto config = MakeConfig(CrafterKind::kBenign, AuditMode::kBlackBox);
  Rng rng(1);
  const ModelState model = InitParams(config.model, rng);
  const PrivacySpec spec = config.privacy();
  std::vector<RandomizedReport> reports = {
      RandomizeClient(std::vector<double>(spec.dim, 0.01), spec, rng)};
  for (auto _ : state) {
    benchmark::DoNotOptimize(
        ServerDebiasAndUpdate(model, reports, spec, config.server()));
  }
}
BENCHMARK(BM_ServerUpdate);

}  // namespace
}  // namespace ldp_audit

BENCHMARK_MAIN();
