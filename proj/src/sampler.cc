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
#include <exception>
#include <random>
#include <string>
#include <thread>
#include <vector>

#include "vaelime/errors.h"

namespace vaelime {

namespace {

constexpr double kZeroRange = 1e-12;

void CheckSameLength(std::span<const double> a, std::span<const double> b,
                     const char* what) {
  if (a.size() != b.size()) {
    throw DimensionMismatch(std::string(what) + ": lengths " +
                            std::to_string(a.size()) + " and " +
                            std::to_string(b.size()));
  }
}

}  // namespace

Vector ResolveSigma(const VaeModel& model, const ExplainConfig& config) {
  Vector sigma = config.sigma;
  if (sigma.empty()) {
    if (model.latent_spread.size() != model.latent_dim) {
      throw ConfigError("VAE model has no latent spread; pass sigma explicitly");
    }
    for (double s : model.latent_spread) sigma.push_back(config.sigma_scale * s);
  }
  if (sigma.size() != model.latent_dim) {
    throw ConfigError("sigma has " + std::to_string(sigma.size()) +
                      " entries, latent_dim is " +
                      std::to_string(model.latent_dim));
  }
  for (double s : sigma) {
    if (!(s > 0.0) || !std::isfinite(s)) {
      throw ConfigError("every sigma entry must be finite and > 0");
    }
  }
  return sigma;
}

double ResolveKernelWidth(std::size_t input_dim, const ExplainConfig& config) {
  return config.kernel_width > 0.0
             ? config.kernel_width
             : 0.75 * std::sqrt(static_cast<double>(input_dim));
}

Matrix SampleLatent(std::span<const double> z_star, std::span<const double> sigma,
                    std::size_t n, std::uint64_t seed) {
  CheckSameLength(z_star, sigma, "sample_latent");
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal;
  Matrix out(n, z_star.size());
  for (std::size_t i = 0; i < n; ++i) {
    auto row = out.row(i);
    for (std::size_t j = 0; j < row.size(); ++j) {
      row[j] = z_star[j] + sigma[j] * normal(rng);
    }
  }
  return out;
}

Vector GowerWeights(const Matrix& latent_points, std::span<const double> z_star) {
  const std::size_t n = latent_points.rows();
  const std::size_t l = latent_points.cols();
  if (l != z_star.size()) {
    throw DimensionMismatch("gower_weights: points have " + std::to_string(l) +
                            " dimensions, anchor has " +
                            std::to_string(z_star.size()));
  }
  Vector lo(z_star.begin(), z_star.end());
  Vector hi = lo;
  for (std::size_t i = 0; i < n; ++i) {
    const auto row = latent_points.row(i);
    for (std::size_t j = 0; j < l; ++j) {
      lo[j] = std::min(lo[j], row[j]);
      hi[j] = std::max(hi[j], row[j]);
    }
  }
  Vector weights(n);
  for (std::size_t i = 0; i < n; ++i) {
    const auto row = latent_points.row(i);
    double distance = 0.0;
    for (std::size_t j = 0; j < l; ++j) {
      const double range = hi[j] - lo[j];
      if (range < kZeroRange) continue;
      distance += std::abs(row[j] - z_star[j]) / range;
    }
    distance /= static_cast<double>(l);
    weights[i] = std::clamp(1.0 - distance, 0.0, 1.0);
  }
  return weights;
}

Matrix LimeSample(std::span<const double> x_test,
                  std::span<const double> feature_stds, std::size_t n,
                  std::uint64_t seed) {
  CheckSameLength(x_test, feature_stds, "lime_sample");
  for (double s : feature_stds) {
    if (!(s > 0.0)) throw ConfigError("LIME feature stds must be > 0");
  }
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal;
  Matrix out(n, x_test.size());
  for (std::size_t i = 0; i < n; ++i) {
    auto row = out.row(i);
    for (std::size_t j = 0; j < row.size(); ++j) {
      row[j] = x_test[j] + feature_stds[j] * normal(rng);
    }
  }
  return out;
}

Vector KernelWeights(const Matrix& samples, std::span<const double> x_test,
                     std::span<const double> feature_stds, double kappa) {
  CheckSameLength(x_test, feature_stds, "kernel_weights");
  if (samples.cols() != x_test.size()) {
    throw DimensionMismatch("kernel_weights: sample width does not match x_test");
  }
  if (!(kappa > 0.0)) throw ConfigError("kernel width must be > 0");
  Vector weights(samples.rows());
  for (std::size_t i = 0; i < samples.rows(); ++i) {
    const auto row = samples.row(i);
    double d2 = 0.0;
    for (std::size_t j = 0; j < row.size(); ++j) {
      const double t = (row[j] - x_test[j]) / feature_stds[j];
      d2 += t * t;
    }
    weights[i] = std::exp(-d2 / (kappa * kappa));
  }
  return weights;
}

Vector QueryBlackBox(const BlackBox& blackbox, const Matrix& samples,
                     std::size_t threads) {
  const std::size_t n = samples.rows();
  Vector outputs(n);
  std::vector<std::exception_ptr> errors(n);
  auto run = [&](std::size_t begin, std::size_t end) {
    for (std::size_t i = begin; i < end; ++i) {
      try {
        outputs[i] = blackbox.Predict(samples.row(i));
      } catch (...) {
        errors[i] = std::current_exception();
      }
    }
  };
  const std::size_t workers = std::clamp<std::size_t>(threads, 1, std::max<std::size_t>(n, 1));
  if (workers == 1) {
    run(0, n);
  } else {
    std::vector<std::thread> pool;
    const std::size_t chunk = (n + workers - 1) / workers;
    for (std::size_t w = 0; w < workers; ++w) {
      const std::size_t begin = std::min(n, w * chunk);
      const std::size_t end = std::min(n, begin + chunk);
      pool.emplace_back(run, begin, end);
    }
    for (auto& t : pool) t.join();
  }
  for (std::size_t i = 0; i < n; ++i) {
    if (!errors[i]) continue;
    try {
      std::rethrow_exception(errors[i]);
    } catch (const std::exception& e) {
      throw BlackBoxFailure(i, e.what());
    }
  }
  return outputs;
}

WeightedSampleSet BuildVaeLimeSet(const VaeModel& model,
                                  const BlackBox& blackbox,
                                  std::span<const double> x_test,
                                  const ExplainConfig& config) {
  if (x_test.size() != model.input_dim || blackbox.input_dim() != model.input_dim) {
    throw DimensionMismatch("VAE, black box and x_test disagree on input_dim");
  }
  if (config.n_samples < 1) throw ConfigError("n_samples must be >= 1");
  const Vector sigma = ResolveSigma(model, config);

  WeightedSampleSet set;
  set.anchor.assign(x_test.begin(), x_test.end());
  set.latent_anchor = Encode(model, x_test).mu;
  set.latent_points =
      SampleLatent(*set.latent_anchor, sigma, config.n_samples, config.seed);
  set.weights = GowerWeights(*set.latent_points, *set.latent_anchor);
  set.samples = Matrix(config.n_samples, model.input_dim);
  for (std::size_t i = 0; i < config.n_samples; ++i) {
    const Vector s = Decode(model, set.latent_points->row(i));
    std::copy(s.begin(), s.end(), set.samples.row(i).begin());
  }
  set.outputs = QueryBlackBox(blackbox, set.samples, config.threads);
  return set;
}

WeightedSampleSet BuildLimeSet(const BlackBox& blackbox,
                               std::span<const double> x_test,
                               std::span<const double> feature_stds,
                               const ExplainConfig& config) {
  if (x_test.size() != blackbox.input_dim()) {
    throw DimensionMismatch("black box and x_test disagree on input_dim");
  }
  if (config.n_samples < 1) throw ConfigError("n_samples must be >= 1");
  WeightedSampleSet set;
  set.anchor.assign(x_test.begin(), x_test.end());
  set.samples = LimeSample(x_test, feature_stds, config.n_samples, config.seed);
  set.weights = KernelWeights(set.samples, x_test, feature_stds,
                              ResolveKernelWidth(x_test.size(), config));
  set.outputs = QueryBlackBox(blackbox, set.samples, config.threads);
  return set;
}

}  // namespace vaelime
