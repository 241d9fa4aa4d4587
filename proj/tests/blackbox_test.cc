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

#include "vaelime/blackbox.h"

#include <cmath>
#include <limits>
#include <numbers>
#include <random>

#include "gtest/gtest.h"
#include "test_oracles.h"
#include "vaelime/errors.h"

namespace vaelime {
namespace {

AnalyticSpec Spec(Vector linear, double c1 = 1.0, double c2 = 1.0, double c3 = 0.5) {
  AnalyticSpec s;
  s.c1 = c1;
  s.c2 = c2;
  s.c3 = c3;
  s.linear = std::move(linear);
  return s;
}

Dataset WithTarget(std::size_t rows, const AnalyticSpec& spec, double noise) {
  SynthConfig sc;
  sc.n_rows = rows;
  sc.n_features = spec.input_dim();
  sc.target = spec;
  sc.target_noise_std = noise;
  return Generate(sc, 12);
}

TEST(Predict, AnalyticExamples) {
  EXPECT_EQ(BlackBox(Spec({0.0})).Predict(Vector(5, 0.0)), 0.0);
  const BlackBox bb(Spec({2.0}));
  EXPECT_NEAR(bb.Predict(Vector{std::numbers::pi / 2, 1, 3, 2, 1}), 8.0, 1e-15);
  EXPECT_EQ(bb.kind(), BlackBoxKind::kAnalytic);
  EXPECT_EQ(bb.input_dim(), 5u);
}

TEST(Predict, ZeroWeightMlpIsBiasConstant) {
  MlpRegressor m;
  m.net = DenseNet({DenseLayer{Matrix(3, 4), Vector{0.1, 0.2, 0.3}, Activation::kTanh},
                    DenseLayer{Matrix(1, 3), Vector{0.5}, Activation::kIdentity}});
  m.input = Standardization::Fit(Vector(4, 1.0), Vector(4, 2.0));
  m.target_mean = 10.0;
  m.target_std = 4.0;
  const BlackBox bb(m);
  EXPECT_EQ(bb.kind(), BlackBoxKind::kMlp);
  for (const Vector& x : {Vector{0, 0, 0, 0}, Vector{5, -3, 2, 100}}) {
    EXPECT_DOUBLE_EQ(bb.Predict(x), 12.0);
  }
}

TEST(Predict, RejectsBadInputs) {
  const BlackBox bb(Spec({1.0, 2.0}));
  EXPECT_THROW(bb.Predict(Vector(5, 0.0)), DimensionMismatch);
  Vector x(6, 0.0);
  x[3] = std::numeric_limits<double>::infinity();
  EXPECT_THROW(bb.Predict(x), NonFiniteInput);
}

TEST(AnalyticGradient, AtOrigin) {
  const BlackBox bb(Spec({-0.7, 0.3}));
  EXPECT_EQ(AnalyticGradient(bb, Vector(6, 0.0)), (Vector{1, 0, 0, 0, -0.7, 0.3}));
}

TEST(AnalyticGradient, MatchesFiniteDifferences) {
  std::mt19937_64 rng(8);
  std::uniform_real_distribution<double> coef(-2.0, 2.0);
  for (int trial = 0; trial < 200; ++trial) {
    const AnalyticSpec spec =
        Spec(testing::RandomVector(1 + trial % 6, rng), coef(rng), coef(rng), coef(rng));
    const BlackBox bb(spec);
    const Vector x = testing::RandomVector(spec.input_dim(), rng, 2.0);
    const Vector g = AnalyticGradient(bb, x);
    const Vector fd = testing::FiniteDifferenceGradient(
        [&](std::span<const double> v) { return bb.Predict(v); }, x, 1e-5);
    for (std::size_t j = 0; j < g.size(); ++j) {
      EXPECT_LE(testing::RelativeDiscrepancy(g[j], fd[j]), 1e-6) << "coordinate " << j;
    }
  }
}

TEST(AnalyticGradient, PureLinearSpecIsConstant) {
  const Vector b = {0.8, -0.6, 0.4};
  const BlackBox bb(Spec(b, 0.0, 0.0, 0.0));
  std::mt19937_64 rng(9);
  for (int trial = 0; trial < 10; ++trial) {
    const Vector g = AnalyticGradient(bb, testing::RandomVector(7, rng, 3.0));
    EXPECT_EQ(g, (Vector{0, 0, 0, 0, 0.8, -0.6, 0.4}));
  }
  EXPECT_EQ(LinearAnalyticSpec(7).c1, 0.0);
}

TEST(AnalyticGradient, MlpIsWrongKind) {
  MlpRegressor m;
  m.net = DenseNet({DenseLayer{Matrix(1, 2), Vector{0.0}, Activation::kIdentity}});
  m.input = Standardization::Fit(Vector(2, 0.0), Vector(2, 1.0));
  const BlackBox bb(m);
  EXPECT_THROW(AnalyticGradient(bb, Vector(2, 0.0)), WrongKind);
  EXPECT_THROW(bb.analytic(), WrongKind);
  EXPECT_THROW(BlackBox(Spec({1.0})).mlp(), WrongKind);
}

TEST(DefaultAnalyticSpec, CyclesLinearCoefficients) {
  const AnalyticSpec s = DefaultAnalyticSpec(10);
  EXPECT_EQ(s.linear, (Vector{0.8, -0.6, 0.4, -0.2, 0.8, -0.6}));
  EXPECT_THROW(DefaultAnalyticSpec(4), ConfigError);
}

TEST(TrainMlpRegressor, LinearTargetIsLearned) {
  const Dataset data = WithTarget(2000, LinearAnalyticSpec(8), 0.0);
  const MlpTrainResult r = TrainMlpRegressor(data, {}, 1);
  EXPECT_GE(r.holdout_r2, 0.99);
  EXPECT_LT(r.holdout_mse, r.holdout_target_variance);
  EXPECT_EQ(r.loss_history.size(), 150u);
}

TEST(TrainMlpRegressor, DefaultTargetBeatsConstantPredictor) {
  const Dataset data = WithTarget(2000, DefaultAnalyticSpec(8), 0.05);
  const MlpTrainResult r = TrainMlpRegressor(data, {.epochs = 60}, 2);
  EXPECT_LT(r.holdout_mse, r.holdout_target_variance);
  EXPECT_GT(r.holdout_r2, 0.0);
}

TEST(TrainMlpRegressor, ConstantTarget) {
  const Dataset base = WithTarget(500, LinearAnalyticSpec(6), 0.0);
  const Dataset data =
      Dataset::Create(base.feature_names(), base.rows(), Vector(500, 3.25));
  const MlpTrainResult r = TrainMlpRegressor(data, {}, 3);
  EXPECT_LE(r.holdout_mse, 1e-6);
}

TEST(TrainMlpRegressor, SeedDeterminism) {
  const Dataset data = WithTarget(300, DefaultAnalyticSpec(6), 0.05);
  const MlpTrainConfig cfg{.epochs = 5};
  const MlpTrainResult a = TrainMlpRegressor(data, cfg, 4);
  const MlpTrainResult b = TrainMlpRegressor(data, cfg, 4);
  EXPECT_EQ(a.model, b.model);
  EXPECT_EQ(a.holdout_mse, b.holdout_mse);
  EXPECT_FALSE(a.model == TrainMlpRegressor(data, cfg, 5).model);
}

TEST(TrainMlpRegressor, Preconditions) {
  const Dataset small = WithTarget(99, DefaultAnalyticSpec(6), 0.05);
  EXPECT_THROW(TrainMlpRegressor(small, {}, 0), ConfigError);
  const Dataset no_target = Dataset::Create(small.feature_names(), small.rows());
  EXPECT_THROW(TrainMlpRegressor(no_target, {}, 0), ConfigError);
}

TEST(Predict, RepeatedCallsAreIdentical) {
  const Dataset data = WithTarget(300, DefaultAnalyticSpec(6), 0.05);
  const BlackBox bb(TrainMlpRegressor(data, {.epochs = 3}, 6).model);
  const auto x = data.rows().row(10);
  const double first = bb.Predict(x);
  for (int i = 0; i < 5; ++i) EXPECT_EQ(bb.Predict(x), first);
}

}  // namespace
}  // namespace vaelime
