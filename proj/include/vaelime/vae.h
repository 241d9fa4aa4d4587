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

#ifndef VAELIME_VAE_H_
#define VAELIME_VAE_H_

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "vaelime/dataio.h"
#include "vaelime/linalg.h"
#include "vaelime/nnet.h"
#include "vaelime/standardization.h"

namespace vaelime {

inline constexpr double kLogVarClamp = 10.0;

struct VaeTrainConfig {
  std::size_t hidden_width = 16;
  // 0 selects max(2, ceil(d / 4)).
  std::size_t latent_dim = 0;
  std::size_t epochs = 100;
  std::size_t batch_size = 64;
  double kl_weight = 0.1;
  double learning_rate = 1e-3;
  std::uint64_t seed = 0;

  void Validate() const;
};

std::size_t DefaultLatentDim(std::size_t input_dim);

struct EpochLoss {
  double total = 0.0;
  double recon = 0.0;
  double kl = 0.0;
};

// Encoder d -> hidden -> 2L (mu then logvar) and decoder L -> hidden -> d,
// both operating on standardized features.
struct VaeModel {
  DenseNet encoder;
  DenseNet decoder;
  std::size_t latent_dim = 0;
  std::size_t input_dim = 0;
  Standardization standardization;
  // Per-dimension std of the encoder means over the training rows; the
  // default VAE-LIME sampling spread is a multiple of it.
  Vector latent_spread;
  std::vector<EpochLoss> history;

  // Throws DimensionMismatch if the parts disagree.
  void Validate() const;
};

struct LatentGaussian {
  Vector mu;
  Vector logvar;
};

// Encodes an input in original feature units. logvar is clamped to
// [-10, 10].
LatentGaussian Encode(const VaeModel& model, std::span<const double> x);

// z = mu + exp(logvar / 2) * epsilon.
Vector Reparameterize(std::span<const double> mu, std::span<const double> logvar,
                      std::span<const double> epsilon);

// Decodes a latent point back to original feature units.
Vector Decode(const VaeModel& model, std::span<const double> z);

struct VaeLoss {
  double total = 0.0;
  double recon = 0.0;
  double kl = 0.0;
};

// recon = mean squared error, kl = KL(N(mu, exp(logvar)) || N(0, I)),
// total = recon + kl_weight * kl.
VaeLoss ComputeVaeLoss(std::span<const double> x, std::span<const double> x_hat,
                       std::span<const double> mu,
                       std::span<const double> logvar, double kl_weight);

struct VaeGradients {
  VaeLoss loss;
  Gradients encoder;
  Gradients decoder;
};

// Loss and parameter gradients for one standardized input with a fixed
// epsilon draw.
VaeGradients VaeLossGradients(const VaeModel& model,
                              std::span<const double> x_standardized,
                              std::span<const double> epsilon,
                              double kl_weight);

// Same loss evaluated without gradients.
VaeLoss VaeLossAt(const VaeModel& model, std::span<const double> x_standardized,
                  std::span<const double> epsilon, double kl_weight);

// Untrained model with seeded initialization and the given standardization.
VaeModel InitVae(std::size_t input_dim, const VaeTrainConfig& config,
                 Standardization standardization);

// Mini-batch adaptive-moment training on mean loss over standardized rows.
// Throws NonFiniteLoss on divergence.
VaeModel TrainVae(const Dataset& data, const VaeTrainConfig& config);

// Std of encoder means over `rows` for each latent dimension.
Vector LatentSpread(const VaeModel& model, const Matrix& rows);

}  // namespace vaelime

#endif  // VAELIME_VAE_H_
