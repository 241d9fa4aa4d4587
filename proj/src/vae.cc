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

#include "vaelime/vae.h"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>
#include <string>

#include "vaelime/errors.h"

namespace vaelime {

namespace {

void CheckLength(std::span<const double> v, std::size_t n, const char* what) {
  if (v.size() != n) {
    throw DimensionMismatch(std::string(what) + ": expected length " +
                            std::to_string(n) + ", got " +
                            std::to_string(v.size()));
  }
}

double ClampLogVar(double v) {
  return std::clamp(v, -kLogVarClamp, kLogVarClamp);
}

}  // namespace

void VaeTrainConfig::Validate() const {
  if (hidden_width < 1 || epochs < 1 || batch_size < 1) {
    throw ConfigError("hidden_width, epochs and batch_size must be >= 1");
  }
  if (!(kl_weight >= 0.0)) throw ConfigError("kl_weight must be >= 0");
  if (!(learning_rate > 0.0)) throw ConfigError("learning_rate must be > 0");
}

std::size_t DefaultLatentDim(std::size_t input_dim) {
  return std::max<std::size_t>(2, (input_dim + 3) / 4);
}

void VaeModel::Validate() const {
  if (encoder.input_dim() != input_dim || encoder.output_dim() != 2 * latent_dim ||
      decoder.input_dim() != latent_dim || decoder.output_dim() != input_dim ||
      standardization.dim() != input_dim) {
    throw DimensionMismatch("VAE parts disagree on input_dim " +
                            std::to_string(input_dim) + " / latent_dim " +
                            std::to_string(latent_dim));
  }
  for (double s : standardization.stds) {
    if (!(s > 0.0)) throw DimensionMismatch("VAE standardization std <= 0");
  }
}

LatentGaussian Encode(const VaeModel& model, std::span<const double> x) {
  CheckLength(x, model.input_dim, "encode");
  const Vector out = Evaluate(model.encoder, model.standardization.Apply(x));
  const std::size_t l = model.latent_dim;
  LatentGaussian g;
  g.mu.assign(out.begin(), out.begin() + static_cast<std::ptrdiff_t>(l));
  g.logvar.resize(l);
  for (std::size_t j = 0; j < l; ++j) g.logvar[j] = ClampLogVar(out[l + j]);
  return g;
}

Vector Reparameterize(std::span<const double> mu, std::span<const double> logvar,
                      std::span<const double> epsilon) {
  CheckLength(logvar, mu.size(), "reparameterize logvar");
  CheckLength(epsilon, mu.size(), "reparameterize epsilon");
  Vector z(mu.size());
  for (std::size_t j = 0; j < z.size(); ++j) {
    z[j] = mu[j] + std::exp(0.5 * logvar[j]) * epsilon[j];
  }
  return z;
}

Vector Decode(const VaeModel& model, std::span<const double> z) {
  CheckLength(z, model.latent_dim, "decode");
  return model.standardization.Invert(Evaluate(model.decoder, z));
}

VaeLoss ComputeVaeLoss(std::span<const double> x, std::span<const double> x_hat,
                       std::span<const double> mu,
                       std::span<const double> logvar, double kl_weight) {
  CheckLength(x_hat, x.size(), "vae loss reconstruction");
  CheckLength(logvar, mu.size(), "vae loss logvar");
  VaeLoss loss;
  for (std::size_t j = 0; j < x.size(); ++j) {
    const double e = x[j] - x_hat[j];
    loss.recon += e * e;
  }
  if (!x.empty()) loss.recon /= static_cast<double>(x.size());
  for (std::size_t j = 0; j < mu.size(); ++j) {
    // exp(v) - v - 1 >= 0 for all v; summed that way the term cannot go
    // negative through cancellation.
    loss.kl += 0.5 * (mu[j] * mu[j] + std::expm1(logvar[j]) - logvar[j]);
  }
  loss.kl = std::max(loss.kl, 0.0);
  loss.total = loss.recon + kl_weight * loss.kl;
  return loss;
}

VaeGradients VaeLossGradients(const VaeModel& model,
                              std::span<const double> x_standardized,
                              std::span<const double> epsilon,
                              double kl_weight) {
  const std::size_t l = model.latent_dim;
  const std::size_t d = model.input_dim;
  CheckLength(x_standardized, d, "vae gradients input");
  CheckLength(epsilon, l, "vae gradients epsilon");

  const auto enc = Forward(model.encoder, x_standardized);
  std::span<const double> mu(enc.output.data(), l);
  std::span<const double> raw_logvar(enc.output.data() + l, l);
  Vector logvar(l);
  for (std::size_t j = 0; j < l; ++j) logvar[j] = ClampLogVar(raw_logvar[j]);
  const Vector z = Reparameterize(mu, logvar, epsilon);
  const auto dec = Forward(model.decoder, z);

  VaeGradients out;
  out.loss = ComputeVaeLoss(x_standardized, dec.output, mu, logvar, kl_weight);

  Vector d_xhat(d);
  for (std::size_t j = 0; j < d; ++j) {
    d_xhat[j] = 2.0 * (dec.output[j] - x_standardized[j]) / static_cast<double>(d);
  }
  out.decoder = Backward(model.decoder, dec.cache, d_xhat);
  const Vector& dz = out.decoder.input;

  Vector d_enc(2 * l);
  for (std::size_t j = 0; j < l; ++j) {
    const double sd = std::exp(0.5 * logvar[j]);
    d_enc[j] = dz[j] + kl_weight * mu[j];
    const bool clamped = raw_logvar[j] < -kLogVarClamp || raw_logvar[j] > kLogVarClamp;
    d_enc[l + j] = clamped ? 0.0
                           : dz[j] * epsilon[j] * 0.5 * sd +
                                 kl_weight * 0.5 * std::expm1(logvar[j]);
  }
  out.encoder = Backward(model.encoder, enc.cache, d_enc);
  return out;
}

VaeLoss VaeLossAt(const VaeModel& model, std::span<const double> x_standardized,
                  std::span<const double> epsilon, double kl_weight) {
  const std::size_t l = model.latent_dim;
  CheckLength(x_standardized, model.input_dim, "vae loss input");
  const Vector out = Evaluate(model.encoder, x_standardized);
  std::span<const double> mu(out.data(), l);
  Vector logvar(l);
  for (std::size_t j = 0; j < l; ++j) logvar[j] = ClampLogVar(out[l + j]);
  const Vector z = Reparameterize(mu, logvar, epsilon);
  const Vector x_hat = Evaluate(model.decoder, z);
  return ComputeVaeLoss(x_standardized, x_hat, mu, logvar, kl_weight);
}

VaeModel InitVae(std::size_t input_dim, const VaeTrainConfig& config,
                 Standardization standardization) {
  config.Validate();
  VaeModel model;
  model.input_dim = input_dim;
  model.latent_dim =
      config.latent_dim ? config.latent_dim : DefaultLatentDim(input_dim);
  // Distinct seeds per network so encoder and decoder do not mirror.
  model.encoder = DenseNet::Create(
      {input_dim, config.hidden_width, 2 * model.latent_dim}, config.seed);
  model.decoder = DenseNet::Create(
      {model.latent_dim, config.hidden_width, input_dim}, config.seed + 1);
  model.standardization = std::move(standardization);
  model.Validate();
  return model;
}

VaeModel TrainVae(const Dataset& data, const VaeTrainConfig& config) {
  config.Validate();
  if (data.size() < 2 * config.batch_size) {
    throw ConfigError("VAE training needs at least 2 * batch_size = " +
                      std::to_string(2 * config.batch_size) + " rows, got " +
                      std::to_string(data.size()));
  }
  VaeModel model = InitVae(data.dim(), config,
                           Standardization::Fit(data.means(), data.stds()));
  const std::size_t n = data.size();
  const std::size_t l = model.latent_dim;

  Matrix standardized(n, data.dim());
  for (std::size_t i = 0; i < n; ++i) {
    const Vector z = model.standardization.Apply(data.rows().row(i));
    std::copy(z.begin(), z.end(), standardized.row(i).begin());
  }

  AdamConfig adam;
  adam.learning_rate = config.learning_rate;
  OptimizerState enc_state = OptimizerState::For(model.encoder, adam);
  OptimizerState dec_state = OptimizerState::For(model.decoder, adam);

  std::mt19937_64 rng(config.seed ^ 0x9e3779b97f4a7c15ULL);
  std::normal_distribution<double> normal;
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  Vector epsilon(l);

  for (std::size_t epoch = 0; epoch < config.epochs; ++epoch) {
    std::shuffle(order.begin(), order.end(), rng);
    EpochLoss sum;
    for (std::size_t start = 0; start < n; start += config.batch_size) {
      const std::size_t stop = std::min(n, start + config.batch_size);
      Gradients enc_grad = Gradients::ZerosLike(model.encoder);
      Gradients dec_grad = Gradients::ZerosLike(model.decoder);
      for (std::size_t b = start; b < stop; ++b) {
        for (double& e : epsilon) e = normal(rng);
        const auto g = VaeLossGradients(model, standardized.row(order[b]),
                                        epsilon, config.kl_weight);
        if (!std::isfinite(g.loss.total)) {
          throw NonFiniteLoss("VAE loss became non-finite in epoch " +
                              std::to_string(epoch + 1) +
                              "; lower learning_rate or kl_weight");
        }
        sum.total += g.loss.total;
        sum.recon += g.loss.recon;
        sum.kl += g.loss.kl;
        enc_grad.Add(g.encoder);
        dec_grad.Add(g.decoder);
      }
      const double inv = 1.0 / static_cast<double>(stop - start);
      enc_grad.Scale(inv);
      dec_grad.Scale(inv);
      OptimizerStep(model.encoder, enc_grad, enc_state);
      OptimizerStep(model.decoder, dec_grad, dec_state);
    }
    const double inv_n = 1.0 / static_cast<double>(n);
    model.history.push_back({sum.total * inv_n, sum.recon * inv_n, sum.kl * inv_n});
  }
  model.latent_spread = LatentSpread(model, data.rows());
  return model;
}

Vector LatentSpread(const VaeModel& model, const Matrix& rows) {
  Matrix means(rows.rows(), model.latent_dim);
  for (std::size_t i = 0; i < rows.rows(); ++i) {
    const auto g = Encode(model, rows.row(i));
    std::copy(g.mu.begin(), g.mu.end(), means.row(i).begin());
  }
  Vector spread;
  for (const auto& s : ComputeStats(means)) spread.push_back(s.std);
  return spread;
}

}  // namespace vaelime
