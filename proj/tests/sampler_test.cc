/*
 * Copyright 2026 The vaelime Authors.
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     https://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#include "vaelime/sampler.h"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>

#include "gtest/gtest.h"
#include "vaelime/analytic.h"
#include "vaelime/errors.h"

namespace vaelime {
namespace {

double ColumnMean(const Matrix& m, std::size_t j) {
  double s = 0.0;
  for (std::size_t i = 0; i < m.rows(); ++i) s += m(i, j);
  return s / static_cast<double>(m.rows());
}

double ColumnStd(const Matrix& m, std::size_t j) {
  const double mean = ColumnMean(m, j);
  double s = 0.0;
  for (std::size_t i = 0; i < m.rows(); ++i) s += (m(i, j) - mean) * (m(i, j) - mean);
  return std::sqrt(s / static_cast<double>(m.rows() - 1));
}

double Correlation(const Matrix& m, std::size_t a, std::size_t b) {
  const double ma = ColumnMean(m, a), mb = ColumnMean(m, b);
  double sab = 0.0, saa = 0.0, sbb = 0.0;
  for (std::size_t i = 0; i < m.rows(); ++i) {
    sab += (m(i, a) - ma) * (m(i, b) - mb);
    saa += (m(i, a) - ma) * (m(i, a) - ma);
    sbb += (m(i, b) - mb) * (m(i, b) - mb);
  }
  return sab / std::sqrt(saa * sbb);
}

VaeModel SmallVae(std::size_t d) {
  SynthConfig sc;
  sc.n_rows = 200;
  sc.n_features = d;
  sc.latent_rank = 2;
  const Dataset data = Generate(sc, 1);
  VaeModel m = InitVae(d, {.seed = 4}, Standardization::Fit(data.means(), data.stds()));
  m.latent_spread = LatentSpread(m, data.rows());
  return m;
}

TEST(SampleLatent, VanishingSpreadCollapsesOntoAnchor) {
  const Vector z_star = {0.7, -1.3, 2.0};
  const Matrix z = SampleLatent(z_star, Vector(3, 1e-12), 500, 3);
  ASSERT_EQ(z.rows(), 500u);
  for (std::size_t i = 0; i < z.rows(); ++i) {
    for (std::size_t j = 0; j < 3; ++j) EXPECT_NEAR(z(i, j), z_star[j], 1e-9);
  }
}

TEST(SampleLatent, MomentsMatchRequestedGaussian) {
  const Vector z_star = {1.0, -2.0, 0.0};
  const Vector sigma = {1.0, 1.0, 1.0};
  const Matrix z = SampleLatent(z_star, sigma, 10000, 11);
  for (std::size_t j = 0; j < 3; ++j) {
    EXPECT_NEAR(ColumnMean(z, j), z_star[j], 0.05);
    EXPECT_NEAR(ColumnStd(z, j), sigma[j], 0.05);
  }
}

TEST(SampleLatent, SeedDeterminism) {
  const Vector z_star = {0.1, 0.2};
  EXPECT_EQ(SampleLatent(z_star, Vector{1, 2}, 50, 8),
            SampleLatent(z_star, Vector{1, 2}, 50, 8));
  EXPECT_FALSE(SampleLatent(z_star, Vector{1, 2}, 50, 8) ==
               SampleLatent(z_star, Vector{1, 2}, 50, 9));
}

TEST(GowerWeights, IdenticalPointsWeighOne) {
  const Vector z_star = {0.5, -0.5};
  Matrix z(4, 2);
  for (std::size_t i = 0; i < 4; ++i) std::copy(z_star.begin(), z_star.end(), z.row(i).begin());
  EXPECT_EQ(GowerWeights(z, z_star), (Vector{1, 1, 1, 1}));
}

TEST(GowerWeights, OneDimensionalHandExample) {
  EXPECT_EQ(GowerWeights(Matrix{{0.0}, {1.0}}, Vector{0.0}), (Vector{1.0, 0.0}));
}

TEST(GowerWeights, TwoDimensionalHandExample) {
  EXPECT_EQ(GowerWeights(Matrix{{1.0, 0.0}, {0.0, 1.0}}, Vector{0.0, 0.0}),
            (Vector{0.5, 0.5}));
}

TEST(GowerWeights, RangeIncludesAnchor) {
  // Anchor 0 outside the batch {1, 3}: R = 3, distances 1/3 and 1.
  const Vector w = GowerWeights(Matrix{{1.0}, {3.0}}, Vector{0.0});
  EXPECT_NEAR(w[0], 2.0 / 3.0, 1e-15);
  EXPECT_EQ(w[1], 0.0);
}

TEST(GowerWeights, ZeroRangeDimensionContributesNothing) {
  // Second dimension is constant; the mean runs over both dimensions.
  const Vector w = GowerWeights(Matrix{{2.0, 5.0}, {0.0, 5.0}}, Vector{0.0, 5.0});
  EXPECT_EQ(w, (Vector{0.5, 1.0}));
}

TEST(GowerWeights, BoundedAndMinimizedAtFarthestSample) {
  std::mt19937_64 rng(21);
  std::normal_distribution<double> n01;
  std::uniform_int_distribution<int> size(1, 30);
  for (int trial = 0; trial < 2000; ++trial) {
    const std::size_t n = size(rng), l = 1 + trial % 4;
    Matrix z(n, l);
    Vector z_star(l);
    for (double& v : z_star) v = n01(rng);
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t j = 0; j < l; ++j) z(i, j) = std::pow(10.0, trial % 7 - 3) * n01(rng);
    }
    const Vector w = GowerWeights(z, z_star);
    ASSERT_EQ(w.size(), n);
    for (double v : w) {
      ASSERT_GE(v, 0.0);
      ASSERT_LE(v, 1.0);
    }
    // Independent distance oracle: the farthest sample has the smallest weight.
    Vector lo(z_star), hi(z_star);
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t j = 0; j < l; ++j) {
        lo[j] = std::min(lo[j], z(i, j));
        hi[j] = std::max(hi[j], z(i, j));
      }
    }
    Vector dist(n, 0.0);
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t j = 0; j < l; ++j) {
        if (hi[j] - lo[j] >= 1e-12) dist[i] += std::abs(z(i, j) - z_star[j]) / (hi[j] - lo[j]);
      }
    }
    const auto far = std::max_element(dist.begin(), dist.end()) - dist.begin();
    EXPECT_NEAR(w[far], *std::min_element(w.begin(), w.end()), 1e-12);
    for (std::size_t i = 0; i < n; ++i) {
      EXPECT_NEAR(w[i], 1.0 - dist[i] / static_cast<double>(l), 1e-12);
    }
  }
}

TEST(LimeSample, VanishingStdsCollapseOntoInstance) {
  const Vector x = {1.0, 2.0, 3.0};
  const Matrix s = LimeSample(x, Vector(3, 1e-12), 100, 2);
  for (std::size_t i = 0; i < s.rows(); ++i) {
    for (std::size_t j = 0; j < 3; ++j) EXPECT_NEAR(s(i, j), x[j], 1e-9);
  }
}

TEST(LimeSample, FeaturesAreIndependentWithRequestedScale) {
  const Vector x = {0.0, 5.0, -1.0, 2.0};
  const Vector stds = {1.0, 0.1, 3.0, 0.5};
  const Matrix s = LimeSample(x, stds, 10000, 5);
  for (std::size_t j = 0; j < 4; ++j) {
    EXPECT_NEAR(ColumnStd(s, j) / stds[j], 1.0, 0.05);
    EXPECT_NEAR(ColumnMean(s, j), x[j], 0.05 * stds[j]);
    for (std::size_t k = j + 1; k < 4; ++k) EXPECT_NEAR(Correlation(s, j, k), 0.0, 0.05);
  }
}

TEST(LimeSample, SeedDeterminism) {
  const Vector x = {1.0, 2.0};
  EXPECT_EQ(LimeSample(x, Vector{1, 1}, 30, 4), LimeSample(x, Vector{1, 1}, 30, 4));
}

TEST(KernelWeights, Examples) {
  const Vector x = {1.0, 2.0};
  const Vector stds = {2.0, 0.5};
  const Matrix s{{1.0, 2.0}, {3.0, 2.0}, {1.0, 2.5}, {3.0, 2.5}};
  const Vector w = KernelWeights(s, x, stds, 1.0);
  EXPECT_EQ(w[0], 1.0);
  EXPECT_NEAR(w[1], std::exp(-1.0), 1e-15);
  EXPECT_NEAR(w[2], 0.36787944117144233, 1e-15);
  EXPECT_NEAR(w[3], std::exp(-2.0), 1e-15);
}

TEST(KernelWeights, MonotoneInDistance) {
  const Vector x = {0.0, 0.0, 0.0};
  Matrix s(50, 3);
  for (std::size_t i = 0; i < 50; ++i) {
    s(i, 0) = 0.1 * static_cast<double>(i);
    s(i, 1) = -0.05 * static_cast<double>(i);
  }
  const Vector w = KernelWeights(s, x, Vector{1, 1, 1}, 1.5);
  for (std::size_t i = 1; i < w.size(); ++i) {
    EXPECT_LE(w[i], w[i - 1]);
    EXPECT_GT(w[i], 0.0);
  }
}

TEST(ResolveKernelWidth, DefaultsToScaledRootDimension) {
  EXPECT_DOUBLE_EQ(ResolveKernelWidth(16, {}), 3.0);
  EXPECT_DOUBLE_EQ(ResolveKernelWidth(16, {.kernel_width = 0.4}), 0.4);
}

TEST(BuildVaeLimeSet, VanishingSpreadGivesConstantSet) {
  const VaeModel m = SmallVae(6);
  const BlackBox bb(DefaultAnalyticSpec(6));
  const Vector x = {0.1, -0.2, 0.3, 0.0, 1.0, -1.0};
  // Spread small enough that every latent range falls below the Gower cutoff.
  const auto set = BuildVaeLimeSet(m, bb, x, {.n_samples = 100, .sigma = Vector(2, 1e-15)});
  const Vector center = Decode(m, Encode(m, x).mu);
  for (std::size_t i = 0; i < 100; ++i) {
    EXPECT_EQ(set.weights[i], 1.0);
    for (std::size_t j = 0; j < 6; ++j) EXPECT_NEAR(set.samples(i, j), center[j], 1e-9);
    EXPECT_NEAR(set.outputs[i], bb.Predict(center), 1e-9);
  }
}

TEST(BuildVaeLimeSet, EqualsManualComposition) {
  const VaeModel m = SmallVae(6);
  const BlackBox bb(DefaultAnalyticSpec(6));
  const Vector x = {0.5, 0.2, -0.3, 1.0, 0.0, 0.4};
  const ExplainConfig cfg{.n_samples = 64, .sigma_scale = 0.7, .seed = 13};
  const auto set = BuildVaeLimeSet(m, bb, x, cfg);

  const Vector z_star = Encode(m, x).mu;
  Vector sigma;
  for (double s : m.latent_spread) sigma.push_back(0.7 * s);
  const Matrix z = SampleLatent(z_star, sigma, 64, 13);
  const Vector w = GowerWeights(z, z_star);
  ASSERT_EQ(set.samples.rows(), 64u);
  EXPECT_EQ(*set.latent_anchor, z_star);
  EXPECT_EQ(*set.latent_points, z);
  EXPECT_EQ(set.weights, w);
  EXPECT_EQ(set.anchor, x);
  for (std::size_t i = 0; i < 64; ++i) {
    const Vector s = Decode(m, z.row(i));
    EXPECT_EQ(Vector(set.samples.row(i).begin(), set.samples.row(i).end()), s);
    EXPECT_EQ(set.outputs[i], bb.Predict(s));
  }
}

TEST(BuildVaeLimeSet, SizeAndThreadInvariance) {
  const VaeModel m = SmallVae(6);
  const BlackBox bb(DefaultAnalyticSpec(6));
  const Vector x(6, 0.3);
  for (std::size_t n : {1u, 7u, 250u}) {
    const auto one = BuildVaeLimeSet(m, bb, x, {.n_samples = n, .seed = 2, .threads = 1});
    const auto four = BuildVaeLimeSet(m, bb, x, {.n_samples = n, .seed = 2, .threads = 4});
    EXPECT_EQ(one.samples.rows(), n);
    EXPECT_EQ(one.weights.size(), n);
    EXPECT_EQ(one.outputs.size(), n);
    EXPECT_EQ(one.outputs, four.outputs);
    EXPECT_EQ(one.samples, four.samples);
  }
}

TEST(BuildVaeLimeSet, RejectsMismatchedSigma) {
  const VaeModel m = SmallVae(6);
  const BlackBox bb(DefaultAnalyticSpec(6));
  EXPECT_THROW(BuildVaeLimeSet(m, bb, Vector(6, 0.0), {.sigma = Vector{1.0}}), ConfigError);
  EXPECT_THROW(BuildVaeLimeSet(m, bb, Vector(5, 0.0), {}), DimensionMismatch);
}

TEST(BuildLimeSet, ComposesSampleAndKernel) {
  const BlackBox bb(DefaultAnalyticSpec(5));
  const Vector x = {1, 0, -1, 0.5, 2};
  const Vector stds = {1, 2, 0.5, 1, 1};
  const auto set = BuildLimeSet(bb, x, stds, {.n_samples = 40, .seed = 6});
  const Matrix s = LimeSample(x, stds, 40, 6);
  EXPECT_EQ(set.samples, s);
  EXPECT_EQ(set.weights, KernelWeights(s, x, stds, 0.75 * std::sqrt(5.0)));
  EXPECT_FALSE(set.latent_points.has_value());
  for (std::size_t i = 0; i < 40; ++i) EXPECT_EQ(set.outputs[i], bb.Predict(s.row(i)));
}

TEST(QueryBlackBox, FailureCarriesSampleIndex) {
  const BlackBox bb(DefaultAnalyticSpec(5));
  Matrix s(20, 5);
  s(13, 2) = std::numeric_limits<double>::quiet_NaN();
  for (std::size_t threads : {1u, 3u}) {
    try {
      QueryBlackBox(bb, s, threads);
      FAIL() << "expected BlackBoxFailure";
    } catch (const BlackBoxFailure& e) {
      EXPECT_EQ(e.sample_index(), 13u);
    }
  }
}

TEST(QueryBlackBox, OrderIndependentOfThreads) {
  const BlackBox bb(DefaultAnalyticSpec(5));
  const Matrix s = LimeSample(Vector(5, 0.0), Vector(5, 1.0), 101, 3);
  const Vector serial = QueryBlackBox(bb, s, 1);
  for (std::size_t t : {2u, 5u, 16u}) EXPECT_EQ(QueryBlackBox(bb, s, t), serial);
  for (std::size_t i = 0; i < s.rows(); ++i) EXPECT_EQ(serial[i], bb.Predict(s.row(i)));
}

}  // namespace
}  // namespace vaelime
