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

#include "ldp_audit/nn.h"

#include <cmath>
#include <numbers>
#include <stdexcept>
#include <vector>

#include "gtest/gtest.h"

namespace ldp_audit {
namespace {

// Independent scalar re-implementation used as an oracle: nested-vector
// weights, explicit softmax, no shared code with the library.
struct NaiveMlp {
  std::vector<std::vector<std::vector<double>>> w;  // [layer][out][in]
  std::vector<std::vector<double>> b;               // [layer][out]

  explicit NaiveMlp(const ModelState& m) {
    const auto& sizes = m.spec.layer_sizes;
    std::size_t p = 0;
    for (std::size_t l = 0; l + 1 < sizes.size(); ++l) {
      w.emplace_back(sizes[l + 1], std::vector<double>(sizes[l]));
      for (int o = 0; o < sizes[l + 1]; ++o) {
        for (int i = 0; i < sizes[l]; ++i) w[l][o][i] = m.params[p++];
      }
      b.emplace_back(m.params.begin() + p, m.params.begin() + p + sizes[l + 1]);
      p += sizes[l + 1];
    }
  }

  // Pre-activations of every layer.
  std::vector<std::vector<double>> PreActivations(
      const std::vector<double>& x) const {
    std::vector<std::vector<double>> pre;
    std::vector<double> a = x;
    for (std::size_t l = 0; l < w.size(); ++l) {
      std::vector<double> z(w[l].size());
      for (std::size_t o = 0; o < z.size(); ++o) {
        z[o] = b[l][o];
        for (std::size_t i = 0; i < a.size(); ++i) z[o] += w[l][o][i] * a[i];
      }
      pre.push_back(z);
      a = z;
      if (l + 1 < w.size()) {
        for (double& v : a) v = v > 0 ? v : 0;
      }
    }
    return pre;
  }

  double Loss(const Example& x) const {
    const auto logits = PreActivations(x.features).back();
    double denom = 0.0;
    for (double v : logits) denom += std::exp(v);
    return -std::log(std::exp(logits[x.label]) / denom);
  }
};

ModelState RandomModel(const std::vector<int>& sizes, uint64_t seed) {
  Rng rng(seed);
  ModelState m = InitParams(ModelSpec{sizes}, rng);
  // Non-zero biases so every parameter block is exercised.
  for (double& p : m.params) p += 0.1 * rng.Normal();
  return m;
}

Example RandomExample(int dim, int classes, Rng& rng) {
  Example x;
  for (int i = 0; i < dim; ++i) x.features.push_back(rng.Normal());
  x.label = static_cast<int>(rng.Below(classes));
  return x;
}

bool NearKink(const NaiveMlp& net, const Example& x) {
  const auto pre = net.PreActivations(x.features);
  for (std::size_t l = 0; l + 1 < pre.size(); ++l) {
    for (double z : pre[l]) {
      if (std::abs(z) < 1e-3) return true;
    }
  }
  return false;
}

void ExpectRelNear(double actual, double expected, double rel) {
  EXPECT_LE(std::abs(actual - expected),
            rel * std::max(std::abs(actual), std::abs(expected)) + 1e-8)
      << "actual " << actual << " expected " << expected;
}

TEST(ModelSpecTest, ParamCount) {
  EXPECT_EQ((ModelSpec{{2, 3, 2}}.ParamCount()), 17u);
  EXPECT_EQ((ModelSpec{{784, 32, 10}}.ParamCount()), 25450u);
  EXPECT_EQ((ModelSpec{{20, 32, 10}}.ParamCount()), 1002u);
}

TEST(ModelSpecTest, RejectsMalformedSpecs) {
  EXPECT_THROW(ModelSpec{{4}}.Validate(), std::invalid_argument);
  EXPECT_THROW((ModelSpec{{4, 0, 2}}.Validate()), std::invalid_argument);
  EXPECT_THROW((ModelSpec{{4, 1}}.Validate()), std::invalid_argument);
  EXPECT_NO_THROW((ModelSpec{{1, 2}}.Validate()));
}

TEST(InitParamsTest, DeterministicAndScaled) {
  const ModelSpec spec{{2, 3, 2}};
  Rng a(42), b(42);
  const ModelState ma = InitParams(spec, a);
  const ModelState mb = InitParams(spec, b);
  ASSERT_EQ(ma.params.size(), 17u);
  EXPECT_EQ(ma.params, mb.params);
  // Layer 0: 6 weights in [-1/sqrt(2), 1/sqrt(2)], then 3 zero biases.
  for (int i = 0; i < 6; ++i) EXPECT_LE(std::abs(ma.params[i]), 1 / std::sqrt(2.0));
  for (int i = 6; i < 9; ++i) EXPECT_EQ(ma.params[i], 0.0);
  for (int i = 9; i < 15; ++i) EXPECT_LE(std::abs(ma.params[i]), 1 / std::sqrt(3.0));
  for (int i = 15; i < 17; ++i) EXPECT_EQ(ma.params[i], 0.0);
}

TEST(LossTest, UniformLogitsGiveLogK) {
  ModelState m{ModelSpec{{3, 4, 7}}, std::vector<double>(ModelSpec{{3, 4, 7}}.ParamCount(), 0.0)};
  Example x{{0.3, -1.0, 2.0}, 5};
  EXPECT_NEAR(Loss(m, x), std::log(7.0), 1e-12);
}

TEST(LossTest, SaturatesTowardZero) {
  // Linear 2-class model with logits (t, -t) for input 1.
  for (double t : {5.0, 50.0, 500.0}) {
    ModelState m{ModelSpec{{1, 2}}, {t, -t, 0.0, 0.0}};
    const double loss = Loss(m, Example{{1.0}, 0});
    EXPECT_TRUE(std::isfinite(loss));
    EXPECT_NEAR(loss, std::log1p(std::exp(-2 * t)), 1e-12);
  }
  ModelState m{ModelSpec{{1, 2}}, {500.0, -500.0, 0.0, 0.0}};
  EXPECT_NEAR(Loss(m, Example{{1.0}, 1}), 1000.0, 1e-9);
}

TEST(LossTest, MatchesNaiveImplementation) {
  for (uint64_t seed = 0; seed < 20; ++seed) {
    const ModelState m = RandomModel({5, 7, 4, 3}, seed);
    Rng rng(seed + 100);
    const Example x = RandomExample(5, 3, rng);
    const double expected = NaiveMlp(m).Loss(x);
    EXPECT_GE(Loss(m, x), 0.0);
    EXPECT_NEAR(Loss(m, x), expected, 1e-10 * std::max(1.0, expected));
  }
}

TEST(LossTest, InvariantToLogitShift) {
  const ModelState m = RandomModel({4, 6, 5}, 3);
  Rng rng(9);
  const Example x = RandomExample(4, 5, rng);
  ModelState shifted = m;
  // Output biases are the last 5 parameters.
  for (std::size_t i = m.params.size() - 5; i < m.params.size(); ++i) {
    shifted.params[i] += 17.5;
  }
  EXPECT_NEAR(Loss(shifted, x), Loss(m, x), 1e-12);
}

TEST(LossTest, DimensionMismatchThrows) {
  const ModelState m = RandomModel({4, 6, 5}, 3);
  EXPECT_THROW(Loss(m, Example{{1.0, 2.0}, 0}), std::invalid_argument);
  EXPECT_THROW(GradParams(m, Example{{1.0, 2.0}, 0}), std::invalid_argument);
  EXPECT_THROW(GradInput(m, Example{{1.0, 2.0}, 0}), std::invalid_argument);
  EXPECT_THROW(Loss(m, Example{{1, 2, 3, 4}, 5}), std::invalid_argument);
}

// Property: both gradients agree with central differences (h = 1e-5)
// within 1e-4 relative on 100 random small models.
TEST(GradientTest, FiniteDifferenceProperty) {
  constexpr double kH = 1e-5;
  int checked = 0;
  for (uint64_t seed = 0; checked < 100; ++seed) {
    Rng shape_rng(seed);
    const int in = 1 + static_cast<int>(shape_rng.Below(4));
    const int hidden = 1 + static_cast<int>(shape_rng.Below(5));
    const int classes = 2 + static_cast<int>(shape_rng.Below(3));
    const ModelState m = RandomModel({in, hidden, classes}, seed * 7 + 1);
    Rng rng(seed * 7 + 2);
    const Example x = RandomExample(in, classes, rng);
    const NaiveMlp net(m);
    if (NearKink(net, x)) continue;
    ++checked;

    const std::vector<double> gp = GradParams(m, x);
    ASSERT_EQ(gp.size(), m.params.size());
    for (std::size_t i = 0; i < m.params.size(); ++i) {
      ModelState up = m, down = m;
      up.params[i] += kH;
      down.params[i] -= kH;
      const double fd = (NaiveMlp(up).Loss(x) - NaiveMlp(down).Loss(x)) / (2 * kH);
      ExpectRelNear(gp[i], fd, 1e-4);
    }
    const std::vector<double> gi = GradInput(m, x);
    ASSERT_EQ(gi.size(), x.features.size());
    for (std::size_t i = 0; i < x.features.size(); ++i) {
      Example up = x, down = x;
      up.features[i] += kH;
      down.features[i] -= kH;
      const double fd = (net.Loss(up) - net.Loss(down)) / (2 * kH);
      ExpectRelNear(gi[i], fd, 1e-4);
    }
  }
}

TEST(GradientTest, ZeroInputZeroesFirstLayerWeightGrads) {
  ModelState m = RandomModel({3, 4, 2}, 1);
  for (int i = 0; i < 12; ++i) m.params[i] = 0.0;  // first-layer weights
  const std::vector<double> g = GradParams(m, Example{{0.0, 0.0, 0.0}, 1});
  for (int i = 0; i < 12; ++i) EXPECT_EQ(g[i], 0.0);
}

TEST(GradientTest, PureFunction) {
  const ModelState m = RandomModel({4, 6, 5}, 8);
  Rng rng(2);
  const Example x = RandomExample(4, 5, rng);
  EXPECT_EQ(GradParams(m, x), GradParams(m, x));
  EXPECT_EQ(GradInput(m, x), GradInput(m, x));
  EXPECT_EQ(Loss(m, x), Loss(m, x));
}

TEST(GradientTest, LinearModelInputGradientClosedForm) {
  const ModelState m = RandomModel({4, 3}, 21);
  Rng rng(4);
  const Example x = RandomExample(4, 3, rng);
  // Closed form: (softmax(Wx + b) - onehot)^T W.
  const NaiveMlp net(m);
  const auto logits = net.PreActivations(x.features).back();
  double denom = 0.0;
  for (double v : logits) denom += std::exp(v);
  std::vector<double> expected(4, 0.0);
  for (int c = 0; c < 3; ++c) {
    const double r = std::exp(logits[c]) / denom - (c == x.label ? 1.0 : 0.0);
    for (int i = 0; i < 4; ++i) expected[i] += r * net.w[0][c][i];
  }
  const auto g = GradInput(m, x);
  for (int i = 0; i < 4; ++i) EXPECT_NEAR(g[i], expected[i], 1e-12);
}

TEST(GradientTest, ConfidentModelHasFlatInputGradient) {
  ModelState m{ModelSpec{{2, 2}}, {40.0, 0.0, -40.0, 0.0, 0.0, 0.0}};
  const auto g = GradInput(m, Example{{1.0, 0.5}, 0});
  EXPECT_LT(std::hypot(g[0], g[1]), 1e-30);
}

}  // namespace
}  // namespace ldp_audit
