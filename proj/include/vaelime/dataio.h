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

#ifndef VAELIME_DATAIO_H_
#define VAELIME_DATAIO_H_

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "vaelime/analytic.h"
#include "vaelime/linalg.h"

namespace vaelime {

struct FeatureStats {
  double mean = 0.0;
  double std = 0.0;  // sample std, denominator T-1
  double min = 0.0;
  double max = 0.0;
};

// Observations x named numeric features with an optional target column.
// Immutable once built; Create validates and computes per-feature stats.
class Dataset {
 public:
  static Dataset Create(std::vector<std::string> feature_names, Matrix rows,
                        std::optional<Vector> target = std::nullopt);

  const std::vector<std::string>& feature_names() const { return names_; }
  const Matrix& rows() const { return rows_; }
  const std::optional<Vector>& target() const { return target_; }
  const std::vector<FeatureStats>& stats() const { return stats_; }

  std::size_t size() const { return rows_.rows(); }
  std::size_t dim() const { return rows_.cols(); }

  Vector means() const;
  Vector stds() const;

  // Rows at the given indices, in that order.
  Dataset Subset(const std::vector<std::size_t>& indices) const;

 private:
  std::vector<std::string> names_;
  Matrix rows_;
  std::optional<Vector> target_;
  std::vector<FeatureStats> stats_;
};

std::vector<FeatureStats> ComputeStats(const Matrix& rows);

struct SynthConfig {
  std::size_t n_rows = 5000;
  std::size_t n_features = 12;
  std::size_t latent_rank = 3;
  double ar_coefficient = 0.9;
  double noise_std = 0.1;
  std::uint64_t mixing_seed = 7;
  // Overrides the seeded mixing matrix (n_features x latent_rank) when set.
  std::optional<Matrix> mixing;
  // Defaults to DefaultAnalyticSpec(n_features) when unset.
  std::optional<AnalyticSpec> target;
  double target_noise_std = 0.05;

  // Throws ConfigError on inconsistent settings.
  void Validate() const;
};

// The d x k mixing matrix drawn from `mixing_seed`; rows are scaled to unit
// norm so every feature has unit factor variance.
Matrix MixingMatrix(const SynthConfig& config);

// Latent AR(1) factors u_t = rho u_{t-1} + sqrt(1 - rho^2) xi_t mixed into
// x_t = A u_t + noise_std eta_t, with target y_t = f(x_t) + noise.
Dataset Generate(const SynthConfig& config, std::uint64_t seed);

// Same process, also returning the latent factor matrix (T x k).
std::pair<Dataset, Matrix> GenerateWithFactors(const SynthConfig& config,
                                               std::uint64_t seed);

// Shortest decimal text that parses back to exactly `value`.
std::string FormatDouble(double value);

inline constexpr const char* kTargetColumn = "target";

// Header row of names; a column named `target_column` becomes the target.
Dataset LoadCsv(const std::string& path,
                const std::string& target_column = kTargetColumn);
Dataset ParseCsv(const std::string& text,
                 const std::string& target_column = kTargetColumn);
std::string FormatCsv(const Dataset& dataset);
void WriteCsv(const Dataset& dataset, const std::string& path);

enum class SplitMode { kChronological, kShuffled };

// First ceil(fraction * T) rows (in time order, or of a seeded permutation)
// go to the first dataset, the rest to the second.
std::pair<Dataset, Dataset> Split(const Dataset& dataset, double train_fraction,
                                  std::uint64_t seed,
                                  SplitMode mode = SplitMode::kChronological);

}  // namespace vaelime

#endif  // VAELIME_DATAIO_H_
