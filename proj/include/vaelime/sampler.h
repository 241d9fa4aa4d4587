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

#ifndef VAELIME_SAMPLER_H_
#define VAELIME_SAMPLER_H_

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>

#include "vaelime/blackbox.h"
#include "vaelime/linalg.h"
#include "vaelime/vae.h"

namespace vaelime {

inline constexpr std::size_t kDefaultSamples = 1000;
inline constexpr double kDefaultSigmaScale = 0.5;
inline constexpr double kDefaultRidge = 1.0;
// Ridge used when a fit at the requested lambda is not positive definite.
inline constexpr double kRidgeFloor = 1e-6;

struct ExplainConfig {
  std::size_t n_samples = kDefaultSamples;
  // Latent sampling std per dimension. Empty means
  // sigma_scale * model.latent_spread.
  Vector sigma;
  double sigma_scale = kDefaultSigmaScale;
  // LIME kernel width; <= 0 means 0.75 * sqrt(d).
  double kernel_width = 0.0;
  double ridge_lambda = kDefaultRidge;
  std::uint64_t seed = 0;
  // Worker threads for black-box queries. Results do not depend on it.
  std::size_t threads = 1;
};

// Resolved per-dimension latent spread for `model` under `config`.
Vector ResolveSigma(const VaeModel& model, const ExplainConfig& config);
double ResolveKernelWidth(std::size_t input_dim, const ExplainConfig& config);

// n rows z_i = z_star + sigma * eps_i with i.i.d. standard normal eps.
Matrix SampleLatent(std::span<const double> z_star, std::span<const double> sigma,
                    std::size_t n, std::uint64_t seed);

// w_i = 1 - Gower(z_i, z_star), per-dimension ranges taken over the batch
// together with z_star. Zero-range dimensions contribute nothing.
Vector GowerWeights(const Matrix& latent_points, std::span<const double> z_star);

// Independent Gaussian perturbations x_test + std_j * eps_ij.
Matrix LimeSample(std::span<const double> x_test,
                  std::span<const double> feature_stds, std::size_t n,
                  std::uint64_t seed);

// exp(-D^2 / kappa^2) with D the Euclidean distance in std-scaled units.
Vector KernelWeights(const Matrix& samples, std::span<const double> x_test,
                     std::span<const double> feature_stds, double kappa);

struct WeightedSampleSet {
  Matrix samples;                      // N x d, input space
  std::optional<Matrix> latent_points;  // N x L, VAE-LIME only
  Vector weights;                      // N, in [0, 1]
  Vector outputs;                      // N black-box predictions
  Vector anchor;                       // x_test
  std::optional<Vector> latent_anchor;  // encoder mean of x_test
};

// Black-box outputs for every row, evaluated on `threads` workers and
// assembled in row order. Failures surface as BlackBoxFailure.
Vector QueryBlackBox(const BlackBox& blackbox, const Matrix& samples,
                     std::size_t threads);

// encode -> sample latent -> Gower weights -> decode -> query.
WeightedSampleSet BuildVaeLimeSet(const VaeModel& model,
                                  const BlackBox& blackbox,
                                  std::span<const double> x_test,
                                  const ExplainConfig& config);

// Independent input-space sampling with the exponential kernel.
WeightedSampleSet BuildLimeSet(const BlackBox& blackbox,
                               std::span<const double> x_test,
                               std::span<const double> feature_stds,
                               const ExplainConfig& config);

}  // namespace vaelime

#endif  // VAELIME_SAMPLER_H_
