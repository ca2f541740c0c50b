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

#ifndef LDP_AUDIT_RNG_H_
#define LDP_AUDIT_RNG_H_

#include <cstdint>
#include <initializer_list>
#include <limits>
#include <random>

namespace ldp_audit {

// Counter-based generator: output i is a SplitMix64 finalizer applied to
// key + i * gamma. Streams are split by hashing a list of indices into the
// key, so (master seed, measurement, trial) pins down every draw regardless
// of the order in which trials execute.
class Rng {
 public:
  using result_type = uint64_t;

  explicit Rng(uint64_t key) : key_(key) {}

  // Derives an independent stream from a master seed and a path of indices.
  static Rng ForStream(uint64_t master_seed,
                       std::initializer_list<uint64_t> path);

  static constexpr result_type min() { return 0; }
  static constexpr result_type max() {
    return std::numeric_limits<result_type>::max();
  }

  result_type operator()();

  // Uniform in [0, 1) with 53 bits of precision.
  double Uniform();
  double Normal();
  bool Bernoulli(double p) { return Uniform() < p; }
  // Uniform integer in [0, n).
  uint64_t Below(uint64_t n);

  uint64_t key() const { return key_; }
  uint64_t counter() const { return counter_; }

 private:
  uint64_t key_;
  uint64_t counter_ = 0;
  std::normal_distribution<double> normal_;
};

uint64_t Mix64(uint64_t x);

}  // namespace ldp_audit

#endif  // LDP_AUDIT_RNG_H_
