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

#include "vaelime/surrogate.h"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "vaelime/errors.h"

namespace vaelime {

namespace {

constexpr double kDegenerateVariance = 1e-12;

}  // namespace

double LinearSurrogate::Predict(std::span<const double> x) const {
  if (x.size() != coefficients.size()) {
    throw DimensionMismatch("surrogate expects " +
                            std::to_string(coefficients.size()) +
                            " features, got " + std::to_string(x.size()));
  }
  return intercept + Dot(coefficients, x);
}

std::string MethodName(Method method) {
  return method == Method::kVaeLime ? "vae-lime" : "lime";
}

Method ParseMethod(const std::string& name) {
  if (name == "vae-lime") return Method::kVaeLime;
  if (name == "lime") return Method::kLime;
  throw ConfigError("unknown method '" + name + "' (expected vae-lime or lime)");
}

LinearSurrogate FitSurrogate(const Matrix& samples, std::span<const double> y,
                             std::span<const double> weights, double lambda) {
  const std::size_t n = samples.rows();
  const std::size_t d = samples.cols();
  if (n < d + 2) {
    throw DegenerateSystem("surrogate fit needs at least d + 2 = " +
                           std::to_string(d + 2) + " samples, got " +
                           std::to_string(n));
  }
  Matrix design(n, d + 1);
  for (std::size_t i = 0; i < n; ++i) {
    auto row = design.row(i);
    row[0] = 1.0;
    const auto s = samples.row(i);
    std::copy(s.begin(), s.end(), row.begin() + 1);
  }
  WlsOptions options;
  options.lambda = lambda;
  options.lambda_floor = std::max(lambda, kRidgeFloor);
  WlsSolution solution;
  try {
    solution = SolveWls(design, y, weights, options);
  } catch (const DegenerateSystem& e) {
    throw DegenerateSystem(std::string("surrogate fit on ") +
                           std::to_string(n) + " samples: " + e.what());
  }
  LinearSurrogate surrogate;
  surrogate.intercept = solution.beta[0];
  surrogate.coefficients.assign(solution.beta.begin() + 1, solution.beta.end());
  surrogate.fit_lambda = solution.lambda;
  surrogate.condition_hint = solution.condition_hint;
  return surrogate;
}

FidelityReport FidelityFromOutputs(const LinearSurrogate& surrogate,
                                   const Matrix& samples,
                                   std::span<const double> outputs,
                                   std::span<const double> x_test,
                                   double output_at_x) {
  const std::size_t n = samples.rows();
  if (outputs.size() != n || n == 0) {
    throw DimensionMismatch("fidelity: " + std::to_string(n) + " samples, " +
                            std::to_string(outputs.size()) + " outputs");
  }
  const double mean_y =
      std::accumulate(outputs.begin(), outputs.end(), 0.0) / static_cast<double>(n);
  double ss_res = 0.0;
  double ss_tot = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double r = outputs[i] - surrogate.Predict(samples.row(i));
    ss_res += r * r;
    ss_tot += (outputs[i] - mean_y) * (outputs[i] - mean_y);
  }
  FidelityReport report;
  report.local_mse = ss_res / static_cast<double>(n);
  if (ss_tot / static_cast<double>(n) < kDegenerateVariance) {
    report.r2 = report.local_mse < kDegenerateVariance ? 1.0 : 0.0;
  } else {
    report.r2 = 1.0 - ss_res / ss_tot;
  }
  report.abs_error_at_x = std::abs(surrogate.Predict(x_test) - output_at_x);
  return report;
}

FidelityReport Fidelity(const LinearSurrogate& surrogate,
                        const BlackBox& blackbox, const Matrix& samples,
                        std::span<const double> x_test) {
  const Vector outputs = QueryBlackBox(blackbox, samples, 1);
  return FidelityFromOutputs(surrogate, samples, outputs, x_test,
                             blackbox.Predict(x_test));
}

std::vector<RankedFeature> RankImportance(
    const LinearSurrogate& surrogate,
    const std::vector<std::string>& feature_names, std::size_t k) {
  const std::size_t d = surrogate.coefficients.size();
  if (feature_names.size() != d) {
    throw DimensionMismatch("rank_importance: " +
                            std::to_string(feature_names.size()) +
                            " names for " + std::to_string(d) + " coefficients");
  }
  if (k < 1) throw ConfigError("top-k must be >= 1");
  std::vector<std::size_t> order(d);
  std::iota(order.begin(), order.end(), 0);
  const auto& c = surrogate.coefficients;
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return std::abs(c[a]) > std::abs(c[b]);
  });
  std::vector<RankedFeature> ranked;
  for (std::size_t r = 0; r < std::min(k, d); ++r) {
    ranked.push_back({feature_names[order[r]], order[r], c[order[r]]});
  }
  return ranked;
}

WeightsSummary SummarizeWeights(std::span<const double> weights) {
  WeightsSummary s;
  if (weights.empty()) return s;
  const auto [lo, hi] = std::minmax_element(weights.begin(), weights.end());
  s.min = *lo;
  s.max = *hi;
  s.mean = std::accumulate(weights.begin(), weights.end(), 0.0) /
           static_cast<double>(weights.size());
  return s;
}

ExplainResult ExplainInstance(Method method, const VaeModel* vae,
                              const BlackBox& blackbox,
                              std::span<const double> x_test,
                              std::span<const double> feature_stds,
                              const std::vector<std::string>& feature_names,
                              const ExplainConfig& config,
                              std::size_t instance_id, std::size_t top_k) {
  const std::size_t d = x_test.size();
  if (config.n_samples < d + 2) {
    throw ConfigError("n_samples must be >= d + 2 = " + std::to_string(d + 2));
  }
  if (feature_stds.size() != d) {
    throw DimensionMismatch("feature stds do not match x_test");
  }
  ExplainResult result;
  if (method == Method::kVaeLime) {
    if (vae == nullptr) throw ConfigError("vae-lime requires a trained VAE");
    result.samples = BuildVaeLimeSet(*vae, blackbox, x_test, config);
  } else {
    result.samples = BuildLimeSet(blackbox, x_test, feature_stds, config);
  }
  const auto& set = result.samples;
  auto& ex = result.explanation;
  ex.method = method;
  ex.instance_id = instance_id;
  ex.surrogate =
      FitSurrogate(set.samples, set.outputs, set.weights, config.ridge_lambda);
  ex.standardized_coefficients.resize(d);
  for (std::size_t j = 0; j < d; ++j) {
    ex.standardized_coefficients[j] = ex.surrogate.coefficients[j] * feature_stds[j];
  }
  ex.top_k = RankImportance(ex.surrogate, feature_names, top_k);
  ex.weights_summary = SummarizeWeights(set.weights);
  ex.fidelity = FidelityFromOutputs(ex.surrogate, set.samples, set.outputs,
                                    x_test, blackbox.Predict(x_test));
  return result;
}

double MeanAbsOffDiagonalCorrelation(const Matrix& samples) {
  const std::size_t n = samples.rows();
  const std::size_t d = samples.cols();
  if (d < 2 || n < 2) return 0.0;
  const auto stats = ComputeStats(samples);
  double total = 0.0;
  std::size_t pairs = 0;
  for (std::size_t a = 0; a < d; ++a) {
    for (std::size_t b = a + 1; b < d; ++b) {
      ++pairs;
      if (stats[a].std < 1e-12 || stats[b].std < 1e-12) continue;
      double cov = 0.0;
      for (std::size_t i = 0; i < n; ++i) {
        cov += (samples(i, a) - stats[a].mean) * (samples(i, b) - stats[b].mean);
      }
      cov /= static_cast<double>(n - 1);
      total += std::abs(cov / (stats[a].std * stats[b].std));
    }
  }
  return total / static_cast<double>(pairs);
}

}  // namespace vaelime
