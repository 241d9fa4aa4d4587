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

#include "vaelime/nnet.h"

#include <cmath>
#include <random>

#include "gtest/gtest.h"
#include "test_oracles.h"
#include "vaelime/errors.h"

namespace vaelime {
namespace {

std::pair<double, Vector> HalfSquaredNorm(std::span<const double> out) {
  double s = 0.0;
  for (double v : out) s += 0.5 * v * v;
  return {s, Vector(out.begin(), out.end())};
}

// Smooth non-quadratic loss so finite differences see curvature.
std::pair<double, Vector> LogCoshLoss(std::span<const double> out) {
  double s = 0.0;
  Vector g(out.size());
  for (std::size_t i = 0; i < out.size(); ++i) {
    const double t = out[i] - 0.3 * static_cast<double>(i);
    s += std::log(std::cosh(t));
    g[i] = std::tanh(t);
  }
  return {s, g};
}

DenseNet RandomNet(std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<std::size_t> width(1, 6);
  std::vector<std::size_t> widths = {width(rng), width(rng), width(rng), width(rng)};
  DenseNet net = DenseNet::Create(widths, seed);
  std::normal_distribution<double> normal(0.0, 0.3);
  for (auto& l : net.mutable_layers()) {
    for (double& b : l.bias) b = normal(rng);
  }
  return net;
}

TEST(Forward, ZeroWeightsExposeBias) {
  DenseNet net({DenseLayer{Matrix(1, 2), Vector{3.0}, Activation::kIdentity}});
  EXPECT_EQ(Forward(net, Vector{5, -7}).output, (Vector{3.0}));
}

TEST(Forward, TanhOfZero) {
  DenseNet net({DenseLayer{Matrix{{1.0}}, Vector{0.0}, Activation::kTanh}});
  EXPECT_EQ(Forward(net, Vector{0.0}).output, (Vector{0.0}));
}

TEST(Forward, TwoLayerHandEvaluation) {
  DenseNet net({DenseLayer{Matrix{{1, 2}, {0, -1}}, Vector{0.5, 0}, Activation::kTanh},
                DenseLayer{Matrix{{1, -1}}, Vector{0.25}, Activation::kIdentity}});
  // tanh(1 - 2 + 0.5) - tanh(0 + 1) + 0.25
  const double expected = std::tanh(-0.5) - std::tanh(1.0) + 0.25;
  const auto r = Forward(net, Vector{1, -1});
  EXPECT_NEAR(r.output[0], expected, 1e-15);
  EXPECT_NEAR(r.output[0], -0.97371131322, 1e-10);
  ASSERT_EQ(r.cache.inputs.size(), 2u);
  EXPECT_EQ(r.cache.inputs[0], (Vector{1, -1}));
}

TEST(Forward, IsBitDeterministic) {
  const DenseNet net = RandomNet(3);
  std::mt19937_64 rng(9);
  const Vector x = testing::RandomVector(net.input_dim(), rng);
  EXPECT_EQ(Forward(net, x).output, Forward(net, x).output);
  EXPECT_EQ(Evaluate(net, x), Forward(net, x).output);
}

TEST(Forward, DimensionMismatch) {
  const DenseNet net = DenseNet::Create({3, 2}, 0);
  EXPECT_THROW(Forward(net, Vector{1, 2}), DimensionMismatch);
  EXPECT_THROW(Evaluate(net, Vector{1, 2, 3, 4}), DimensionMismatch);
}

TEST(DenseNet, RejectsUnchainedLayers) {
  EXPECT_THROW(DenseNet({DenseLayer{Matrix(2, 3), Vector(2, 0.0)},
                         DenseLayer{Matrix(1, 4), Vector(1, 0.0)}}),
               DimensionMismatch);
  EXPECT_THROW(DenseNet({DenseLayer{Matrix(2, 3), Vector(3, 0.0)}}),
               DimensionMismatch);
}

TEST(DenseNet, GlorotInitIsBoundedAndSeeded) {
  const DenseNet a = DenseNet::Create({10, 6, 1}, 5);
  const DenseNet b = DenseNet::Create({10, 6, 1}, 5);
  EXPECT_EQ(a, b);
  const double bound = std::sqrt(6.0 / 16.0);
  for (double w : a.layers()[0].weights.data()) EXPECT_LE(std::abs(w), bound);
  for (double v : a.layers()[0].bias) EXPECT_EQ(v, 0.0);
  EXPECT_EQ(a.layers()[0].activation, Activation::kTanh);
  EXPECT_EQ(a.layers()[1].activation, Activation::kIdentity);
  EXPECT_EQ(a.parameter_count(), 10u * 6 + 6 + 6 + 1);
}

TEST(Backward, LinearLayerChainRule) {
  DenseNet net({DenseLayer{Matrix{{0.5, -1, 2}, {1, 1, 1}}, Vector{0.1, 0.2},
                           Activation::kIdentity}});
  const Vector x = {1, 2, 3};
  const Vector g = {0.7, -0.4};
  const auto grads = Backward(net, Forward(net, x).cache, g);
  for (std::size_t o = 0; o < 2; ++o) {
    for (std::size_t i = 0; i < 3; ++i) {
      EXPECT_DOUBLE_EQ(grads.layers[0].weights(o, i), g[o] * x[i]);
    }
  }
  EXPECT_EQ(grads.layers[0].bias, g);
  // dL/dx = W^T g
  EXPECT_NEAR(grads.input[0], 0.5 * 0.7 + 1 * -0.4, 1e-15);
  EXPECT_NEAR(grads.input[2], 2 * 0.7 - 0.4, 1e-15);
}

TEST(Backward, ZeroUpstreamGivesZeroGradients) {
  const DenseNet net = RandomNet(11);
  const auto fwd = Forward(net, Vector(net.input_dim(), 0.3));
  const auto grads = Backward(net, fwd.cache, Vector(net.output_dim(), 0.0));
  for (const auto& l : grads.layers) {
    for (double v : l.weights.data()) EXPECT_EQ(v, 0.0);
    for (double v : l.bias) EXPECT_EQ(v, 0.0);
  }
  for (double v : grads.input) EXPECT_EQ(v, 0.0);
}

TEST(Backward, InputGradientMatchesFiniteDifferences) {
  const DenseNet net = RandomNet(21);
  std::mt19937_64 rng(4);
  const Vector x = testing::RandomVector(net.input_dim(), rng);
  const auto fwd = Forward(net, x);
  const auto grads = Backward(net, fwd.cache, LogCoshLoss(fwd.output).second);
  const Vector numeric = testing::FiniteDifferenceGradient(
      [&](std::span<const double> p) { return LogCoshLoss(Evaluate(net, p)).first; }, x);
  for (std::size_t j = 0; j < x.size(); ++j) {
    EXPECT_LE(testing::RelativeDiscrepancy(grads.input[j], numeric[j]), 1e-4);
  }
}

TEST(Backward, DimensionMismatch) {
  const DenseNet net = DenseNet::Create({2, 3, 1}, 0);
  const auto fwd = Forward(net, Vector{1, 1});
  EXPECT_THROW(Backward(net, fwd.cache, Vector{1, 1}), DimensionMismatch);
  EXPECT_THROW(Backward(net, ForwardCache{}, Vector{1}), DimensionMismatch);
}

TEST(GradientCheck, LinearNetQuadraticLossIsNearExact) {
  DenseNet net = DenseNet::Create({4, 3}, 1);
  net.mutable_layers()[0].activation = Activation::kIdentity;
  EXPECT_LE(GradientCheck(net, Vector{0.5, -1, 2, 0.1}, HalfSquaredNorm), 1e-7);
}

TEST(GradientCheck, RandomTanhNetsAgreeWithFiniteDifferences) {
  for (std::uint64_t seed = 0; seed < 25; ++seed) {
    const DenseNet net = RandomNet(seed);
    std::mt19937_64 rng(seed + 1000);
    const Vector x = testing::RandomVector(net.input_dim(), rng);
    EXPECT_LE(GradientCheck(net, x, LogCoshLoss), 1e-4) << "seed " << seed;
  }
}

TEST(GradientCheck, DetectsCorruptedBackward) {
  const DenseNet net = RandomNet(7);
  std::mt19937_64 rng(8);
  const Vector x = testing::RandomVector(net.input_dim(), rng);
  const BackwardFn corrupted = [](const DenseNet& n, const ForwardCache& c,
                                  std::span<const double> g) {
    Gradients grads = Backward(n, c, g);
    grads.layers[0].bias[0] = -grads.layers[0].bias[0];
    return grads;
  };
  EXPECT_LE(GradientCheck(net, x, LogCoshLoss), 1e-4);
  EXPECT_GT(GradientCheck(net, x, LogCoshLoss, 1e-5, corrupted), 1e-2);
}

TEST(OptimizerStep, ZeroGradientFromFreshStateKeepsParameters) {
  DenseNet net = RandomNet(1);
  const DenseNet before = net;
  auto state = OptimizerState::For(net, {});
  OptimizerStep(net, Gradients::ZerosLike(net), state);
  EXPECT_EQ(net, before);
  EXPECT_EQ(state.step, 1u);
  for (double m : state.first_moment.layers[0].weights.data()) EXPECT_EQ(m, 0.0);
}

TEST(OptimizerStep, ZeroGradientDecaysMoments) {
  DenseNet net = DenseNet::Create({2, 1}, 0);
  auto state = OptimizerState::For(net, {});
  Gradients g = Gradients::ZerosLike(net);
  g.layers[0].bias[0] = 0.5;
  OptimizerStep(net, g, state);
  const double m1 = state.first_moment.layers[0].bias[0];
  const double v1 = state.second_moment.layers[0].bias[0];
  OptimizerStep(net, Gradients::ZerosLike(net), state);
  EXPECT_DOUBLE_EQ(state.first_moment.layers[0].bias[0], 0.9 * m1);
  EXPECT_DOUBLE_EQ(state.second_moment.layers[0].bias[0], 0.999 * v1);
}

TEST(OptimizerStep, FirstStepMovesByLearningRateTimesSign) {
  DenseNet net = DenseNet::Create({3, 2}, 2);
  const DenseNet before = net;
  auto state = OptimizerState::For(net, {});
  Gradients g = Gradients::ZerosLike(net);
  const Vector values = {0.5, -2.0, 1e-3, -0.25, 3.0, 0.7};
  auto gw = g.layers[0].weights.data();
  for (std::size_t k = 0; k < gw.size(); ++k) gw[k] = values[k];
  OptimizerStep(net, g, state);
  // m_hat = g, v_hat = g^2, so the step is lr * g / (|g| + eps).
  auto after = net.layers()[0].weights.data();
  auto prior = before.layers()[0].weights.data();
  for (std::size_t k = 0; k < gw.size(); ++k) {
    const double expected = -1e-3 * values[k] / (std::abs(values[k]) + 1e-8);
    EXPECT_NEAR(after[k] - prior[k], expected, 1e-15);
    EXPECT_NEAR(after[k] - prior[k], -1e-3 * std::copysign(1.0, values[k]), 1e-8);
  }
}

TEST(OptimizerStep, TwoStepsMatchHandUnrolledRecurrence) {
  DenseNet net({DenseLayer{Matrix{{0.3}}, Vector{-0.2}, Activation::kIdentity}});
  AdamConfig cfg{.learning_rate = 0.01, .decay1 = 0.8, .decay2 = 0.99, .epsilon = 1e-6};
  auto state = OptimizerState::For(net, cfg);
  Gradients g = Gradients::ZerosLike(net);
  g.layers[0].weights(0, 0) = 0.4;
  OptimizerStep(net, g, state);
  OptimizerStep(net, g, state);

  double p = 0.3, m = 0, v = 0;
  for (int t = 1; t <= 2; ++t) {
    m = 0.8 * m + 0.2 * 0.4;
    v = 0.99 * v + 0.01 * 0.16;
    const double mh = m / (1 - std::pow(0.8, t));
    const double vh = v / (1 - std::pow(0.99, t));
    p -= 0.01 * mh / (std::sqrt(vh) + 1e-6);
  }
  EXPECT_NEAR(net.layers()[0].weights(0, 0), p, 1e-12);
  EXPECT_EQ(net.layers()[0].bias[0], -0.2);
  EXPECT_EQ(state.step, 2u);
}

TEST(OptimizerStep, DecreasesConvexQuadraticForFiftySteps) {
  std::mt19937_64 rng(31);
  const Matrix inputs = testing::RandomMatrix(16, 3, rng);
  const Matrix targets = testing::RandomMatrix(16, 2, rng);
  DenseNet net = DenseNet::Create({3, 2}, 4);
  net.mutable_layers()[0].activation = Activation::kIdentity;
  auto state = OptimizerState::For(net, {.learning_rate = 1e-2});
  auto batch_loss = [&](Gradients* grads) {
    double loss = 0.0;
    for (std::size_t i = 0; i < inputs.rows(); ++i) {
      const auto fwd = Forward(net, inputs.row(i));
      Vector g(2);
      for (std::size_t o = 0; o < 2; ++o) {
        const double e = fwd.output[o] - targets(i, o);
        loss += e * e / 16.0;
        g[o] = 2.0 * e / 16.0;
      }
      if (grads) grads->Add(Backward(net, fwd.cache, g));
    }
    return loss;
  };
  double previous = batch_loss(nullptr);
  for (int step = 0; step < 50; ++step) {
    Gradients grads = Gradients::ZerosLike(net);
    batch_loss(&grads);
    OptimizerStep(net, grads, state);
    const double current = batch_loss(nullptr);
    EXPECT_LT(current, previous) << "step " << step;
    previous = current;
  }
}

}  // namespace
}  // namespace vaelime
