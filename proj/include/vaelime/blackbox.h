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

#ifndef VAELIME_BLACKBOX_H_
#define VAELIME_BLACKBOX_H_

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <variant>

#include "vaelime/analytic.h"
#include "vaelime/dataio.h"
#include "vaelime/linalg.h"
#include "vaelime/nnet.h"
#include "vaelime/standardization.h"

namespace vaelime {

// d -> hidden tanh layers -> 1 regressor on standardized features, with the
// target standardized during training.
struct MlpRegressor {
  DenseNet net;
  Standardization input;
  double target_mean = 0.0;
  double target_std = 1.0;

  friend bool operator==(const MlpRegressor&, const MlpRegressor&) = default;
};

enum class BlackBoxKind { kAnalytic, kMlp };

// The regressor under explanation. Only Predict is consulted by the
// explainers; instances are immutable and safe for concurrent Predict calls.
class BlackBox {
 public:
  explicit BlackBox(AnalyticSpec spec);
  explicit BlackBox(MlpRegressor mlp);

  BlackBoxKind kind() const;
  std::size_t input_dim() const;

  // Throws DimensionMismatch or NonFiniteInput.
  double Predict(std::span<const double> x) const;

  // Throws WrongKind for MLP black boxes.
  const AnalyticSpec& analytic() const;
  const MlpRegressor& mlp() const;

 private:
  std::variant<AnalyticSpec, MlpRegressor> model_;
};

// Exact gradient of an analytic black box. Throws WrongKind otherwise.
Vector AnalyticGradient(const BlackBox& blackbox, std::span<const double> x);

struct MlpTrainConfig {
  std::size_t hidden1 = 32;
  std::size_t hidden2 = 16;
  std::size_t epochs = 150;
  std::size_t batch_size = 64;
  double learning_rate = 1e-3;
  // Trailing (chronological) fraction held out for the reported metrics.
  double holdout_fraction = 0.2;

  void Validate() const;
};

struct MlpTrainResult {
  MlpRegressor model;
  double holdout_mse = 0.0;
  double holdout_r2 = 0.0;
  double holdout_target_variance = 0.0;
  std::vector<double> loss_history;
};

// Fits on the leading rows and scores on the trailing holdout. Requires a
// target and at least 100 rows. Throws NonFiniteLoss on divergence.
MlpTrainResult TrainMlpRegressor(const Dataset& data,
                                 const MlpTrainConfig& config,
                                 std::uint64_t seed);

}  // namespace vaelime

#endif  // VAELIME_BLACKBOX_H_
