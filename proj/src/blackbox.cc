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

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>

#include "vaelime/errors.h"

namespace vaelime {

BlackBox::BlackBox(AnalyticSpec spec) : model_(std::move(spec)) {}

BlackBox::BlackBox(MlpRegressor mlp) : model_(std::move(mlp)) {
  const auto& m = std::get<MlpRegressor>(model_);
  if (m.net.output_dim() != 1 || m.net.input_dim() != m.input.dim()) {
    throw DimensionMismatch("MLP black box must map " +
                            std::to_string(m.input.dim()) + " features to 1");
  }
}

BlackBoxKind BlackBox::kind() const {
  return std::holds_alternative<AnalyticSpec>(model_) ? BlackBoxKind::kAnalytic
                                                      : BlackBoxKind::kMlp;
}

std::size_t BlackBox::input_dim() const {
  if (const auto* spec = std::get_if<AnalyticSpec>(&model_)) {
    return spec->input_dim();
  }
  return std::get<MlpRegressor>(model_).input.dim();
}

double BlackBox::Predict(std::span<const double> x) const {
  if (x.size() != input_dim()) {
    throw DimensionMismatch("black box expects " + std::to_string(input_dim()) +
                            " features, got " + std::to_string(x.size()));
  }
  for (std::size_t j = 0; j < x.size(); ++j) {
    if (!std::isfinite(x[j])) {
      throw NonFiniteInput("feature " + std::to_string(j) + " is not finite");
    }
  }
  if (const auto* spec = std::get_if<AnalyticSpec>(&model_)) {
    return EvaluateAnalytic(*spec, x);
  }
  const auto& m = std::get<MlpRegressor>(model_);
  return Evaluate(m.net, m.input.Apply(x))[0] * m.target_std + m.target_mean;
}

const AnalyticSpec& BlackBox::analytic() const {
  if (const auto* spec = std::get_if<AnalyticSpec>(&model_)) return *spec;
  throw WrongKind("black box is an MLP, not analytic");
}

const MlpRegressor& BlackBox::mlp() const {
  if (const auto* m = std::get_if<MlpRegressor>(&model_)) return *m;
  throw WrongKind("black box is analytic, not an MLP");
}

Vector AnalyticGradient(const BlackBox& blackbox, std::span<const double> x) {
  return AnalyticGradient(blackbox.analytic(), x);
}

void MlpTrainConfig::Validate() const {
  if (hidden1 < 1 || hidden2 < 1 || epochs < 1 || batch_size < 1) {
    throw ConfigError("MLP widths, epochs and batch_size must be >= 1");
  }
  if (!(learning_rate > 0.0)) throw ConfigError("learning_rate must be > 0");
  if (!(holdout_fraction > 0.0 && holdout_fraction < 1.0)) {
    throw ConfigError("holdout_fraction must be in (0, 1)");
  }
}

MlpTrainResult TrainMlpRegressor(const Dataset& data,
                                 const MlpTrainConfig& config,
                                 std::uint64_t seed) {
  config.Validate();
  if (!data.target()) throw ConfigError("dataset has no target column");
  if (data.size() < 100) {
    throw ConfigError("MLP training needs at least 100 rows, got " +
                      std::to_string(data.size()));
  }
  auto [fit, holdout] =
      Split(data, 1.0 - config.holdout_fraction, seed, SplitMode::kChronological);
  const Vector& y_fit = *fit.target();

  MlpRegressor model;
  model.input = Standardization::Fit(fit.means(), fit.stds());
  const std::vector<FeatureStats> ystats =
      ComputeStats(Matrix(y_fit.size(), 1, y_fit));
  model.target_mean = ystats[0].mean;
  model.target_std = ystats[0].std > 1e-12 ? ystats[0].std : 1.0;
  model.net = DenseNet::Create(
      {data.dim(), config.hidden1, config.hidden2, 1}, seed);
  if (ystats[0].std <= 1e-12) {
    // Constant target: start at the exact bias-only fit. Every residual and
    // hence every gradient is zero, so training leaves it in place.
    auto& out = model.net.mutable_layers().back();
    for (double& v : out.weights.data()) v = 0.0;
    out.bias.assign(out.bias.size(), 0.0);
  }

  const std::size_t n = fit.size();
  Matrix xs(n, data.dim());
  Vector ys(n);
  for (std::size_t i = 0; i < n; ++i) {
    const Vector z = model.input.Apply(fit.rows().row(i));
    std::copy(z.begin(), z.end(), xs.row(i).begin());
    ys[i] = (y_fit[i] - model.target_mean) / model.target_std;
  }

  AdamConfig adam;
  adam.learning_rate = config.learning_rate;
  OptimizerState state = OptimizerState::For(model.net, adam);
  std::mt19937_64 rng(seed ^ 0x5851f42d4c957f2dULL);
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);

  MlpTrainResult result;
  for (std::size_t epoch = 0; epoch < config.epochs; ++epoch) {
    std::shuffle(order.begin(), order.end(), rng);
    double epoch_loss = 0.0;
    for (std::size_t start = 0; start < n; start += config.batch_size) {
      const std::size_t stop = std::min(n, start + config.batch_size);
      Gradients grad = Gradients::ZerosLike(model.net);
      for (std::size_t b = start; b < stop; ++b) {
        const std::size_t i = order[b];
        const auto fwd = Forward(model.net, xs.row(i));
        const double err = fwd.output[0] - ys[i];
        epoch_loss += err * err;
        const double g[1] = {2.0 * err};
        grad.Add(Backward(model.net, fwd.cache, g));
      }
      grad.Scale(1.0 / static_cast<double>(stop - start));
      OptimizerStep(model.net, grad, state);
    }
    epoch_loss /= static_cast<double>(n);
    if (!std::isfinite(epoch_loss)) {
      throw NonFiniteLoss("MLP loss became non-finite in epoch " +
                          std::to_string(epoch + 1) +
                          "; lower learning_rate");
    }
    result.loss_history.push_back(epoch_loss);
  }

  const BlackBox trained(model);
  const Vector& y_hold = *holdout.target();
  double sse = 0.0;
  for (std::size_t i = 0; i < holdout.size(); ++i) {
    const double e = trained.Predict(holdout.rows().row(i)) - y_hold[i];
    sse += e * e;
  }
  const double m = static_cast<double>(holdout.size());
  const double mean = std::accumulate(y_hold.begin(), y_hold.end(), 0.0) / m;
  double sst = 0.0;
  for (double v : y_hold) sst += (v - mean) * (v - mean);
  result.holdout_mse = sse / m;
  result.holdout_target_variance = sst / m;
  result.holdout_r2 = sst > 1e-12 ? 1.0 - sse / sst : (sse < 1e-12 ? 1.0 : 0.0);
  result.model = std::move(model);
  return result;
}

}  // namespace vaelime
