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

#include "vaelime/dataio.h"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <numeric>
#include <random>
#include <set>
#include <sstream>
#include <string_view>

#include "vaelime/errors.h"

namespace vaelime {

namespace {

bool ValidName(std::string_view name) {
  return !name.empty() && std::all_of(name.begin(), name.end(), [](char c) {
    return std::isalnum(static_cast<unsigned char>(c)) || c == '_';
  });
}

std::vector<std::string_view> SplitFields(std::string_view line) {
  std::vector<std::string_view> fields;
  std::size_t start = 0;
  while (true) {
    const std::size_t comma = line.find(',', start);
    if (comma == std::string_view::npos) {
      fields.push_back(line.substr(start));
      return fields;
    }
    fields.push_back(line.substr(start, comma - start));
    start = comma + 1;
  }
}

}  // namespace

std::vector<FeatureStats> ComputeStats(const Matrix& rows) {
  const std::size_t n = rows.rows();
  std::vector<FeatureStats> stats(rows.cols());
  for (std::size_t j = 0; j < rows.cols(); ++j) {
    auto& s = stats[j];
    if (n == 0) continue;
    double sum = 0.0;
    s.min = s.max = rows(0, j);
    for (std::size_t i = 0; i < n; ++i) {
      const double v = rows(i, j);
      sum += v;
      s.min = std::min(s.min, v);
      s.max = std::max(s.max, v);
    }
    s.mean = sum / static_cast<double>(n);
    double ss = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      const double d = rows(i, j) - s.mean;
      ss += d * d;
    }
    s.std = n > 1 ? std::sqrt(ss / static_cast<double>(n - 1)) : 0.0;
  }
  return stats;
}

Dataset Dataset::Create(std::vector<std::string> feature_names, Matrix rows,
                        std::optional<Vector> target) {
  if (feature_names.size() != rows.cols()) {
    throw DimensionMismatch("dataset has " +
                            std::to_string(feature_names.size()) +
                            " names for " + std::to_string(rows.cols()) +
                            " columns");
  }
  std::set<std::string> seen;
  for (const auto& name : feature_names) {
    if (!seen.insert(name).second) {
      throw DuplicateHeader("duplicate feature name '" + name + "'");
    }
  }
  if (!rows.AllFinite()) throw NonFiniteValue("dataset has non-finite values");
  if (target) {
    if (target->size() != rows.rows()) {
      throw DimensionMismatch("target length does not match row count");
    }
    for (double v : *target) {
      if (!std::isfinite(v)) throw NonFiniteValue("target has non-finite values");
    }
  }
  Dataset ds;
  ds.names_ = std::move(feature_names);
  ds.stats_ = ComputeStats(rows);
  ds.rows_ = std::move(rows);
  ds.target_ = std::move(target);
  return ds;
}

Vector Dataset::means() const {
  Vector v;
  for (const auto& s : stats_) v.push_back(s.mean);
  return v;
}

Vector Dataset::stds() const {
  Vector v;
  for (const auto& s : stats_) v.push_back(s.std);
  return v;
}

Dataset Dataset::Subset(const std::vector<std::size_t>& indices) const {
  Matrix rows(indices.size(), dim());
  std::optional<Vector> target;
  if (target_) target.emplace();
  for (std::size_t i = 0; i < indices.size(); ++i) {
    const auto src = rows_.row(indices.at(i));
    std::copy(src.begin(), src.end(), rows.row(i).begin());
    if (target_) target->push_back((*target_)[indices[i]]);
  }
  return Create(names_, std::move(rows), std::move(target));
}

void SynthConfig::Validate() const {
  if (n_rows < 10) throw ConfigError("n_rows must be >= 10");
  if (n_features < 1) throw ConfigError("n_features must be >= 1");
  if (latent_rank < 1 || latent_rank > n_features) {
    throw ConfigError("latent_rank must be in [1, n_features], got " +
                      std::to_string(latent_rank));
  }
  if (!(ar_coefficient >= 0.0 && ar_coefficient < 1.0)) {
    throw ConfigError("ar_coefficient must be in [0, 1)");
  }
  if (!(noise_std >= 0.0) || !(target_noise_std >= 0.0)) {
    throw ConfigError("noise levels must be nonnegative");
  }
  if (mixing &&
      (mixing->rows() != n_features || mixing->cols() != latent_rank)) {
    throw ConfigError("mixing matrix must be n_features x latent_rank");
  }
  if (target && target->input_dim() != n_features) {
    throw ConfigError("target spec input_dim does not match n_features");
  }
  if (!target && n_features < 5) {
    throw ConfigError("the default target needs at least 5 features");
  }
}

Matrix MixingMatrix(const SynthConfig& config) {
  if (config.mixing) return *config.mixing;
  std::mt19937_64 rng(config.mixing_seed);
  std::normal_distribution<double> normal;
  Matrix a(config.n_features, config.latent_rank);
  for (std::size_t r = 0; r < a.rows(); ++r) {
    auto row = a.row(r);
    for (double& v : row) v = normal(rng);
    const double norm = std::sqrt(Dot(row, row));
    for (double& v : row) v /= norm;
  }
  return a;
}

std::pair<Dataset, Matrix> GenerateWithFactors(const SynthConfig& config,
                                               std::uint64_t seed) {
  config.Validate();
  const std::size_t t_rows = config.n_rows;
  const std::size_t d = config.n_features;
  const std::size_t k = config.latent_rank;
  const Matrix mixing = MixingMatrix(config);
  const AnalyticSpec spec =
      config.target ? *config.target : DefaultAnalyticSpec(d);
  const double rho = config.ar_coefficient;
  const double innovation = std::sqrt(1.0 - rho * rho);

  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal;
  Matrix factors(t_rows, k);
  Matrix rows(t_rows, d);
  Vector target(t_rows);
  Vector u(k);
  for (double& v : u) v = normal(rng);
  for (std::size_t t = 0; t < t_rows; ++t) {
    if (t > 0) {
      for (double& v : u) v = rho * v + innovation * normal(rng);
    }
    std::copy(u.begin(), u.end(), factors.row(t).begin());
    auto x = rows.row(t);
    for (std::size_t j = 0; j < d; ++j) {
      x[j] = Dot(mixing.row(j), u) + config.noise_std * normal(rng);
    }
    target[t] =
        EvaluateAnalytic(spec, x) + config.target_noise_std * normal(rng);
  }
  std::vector<std::string> names;
  for (std::size_t j = 0; j < d; ++j) names.push_back("x" + std::to_string(j + 1));
  return {Dataset::Create(std::move(names), std::move(rows), std::move(target)),
          std::move(factors)};
}

Dataset Generate(const SynthConfig& config, std::uint64_t seed) {
  return GenerateWithFactors(config, seed).first;
}

std::string FormatDouble(double value) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof(buf), value);
  return std::string(buf, res.ptr);
}

Dataset ParseCsv(const std::string& text, const std::string& target_column) {
  std::istringstream in(text);
  std::string line;
  std::size_t line_no = 0;
  if (!std::getline(in, line)) throw EmptyDataset("CSV has no header row");
  ++line_no;
  if (!line.empty() && line.back() == '\r') line.pop_back();
  const auto header = SplitFields(line);
  std::vector<std::string> names;
  std::optional<std::size_t> target_index;
  std::set<std::string_view> seen;
  for (std::size_t c = 0; c < header.size(); ++c) {
    if (!ValidName(header[c])) {
      throw ParseError(line_no, c + 1,
                       "column name '" + std::string(header[c]) +
                           "' must match [A-Za-z0-9_]+");
    }
    if (!seen.insert(header[c]).second) {
      throw DuplicateHeader("duplicate column '" + std::string(header[c]) +
                            "'");
    }
    if (header[c] == target_column) {
      target_index = c;
    } else {
      names.emplace_back(header[c]);
    }
  }

  std::vector<double> values;
  Vector target;
  std::size_t n_rows = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    const auto fields = SplitFields(line);
    if (fields.size() != header.size()) {
      throw ParseError(line_no, std::min(fields.size(), header.size()) + 1,
                       "expected " + std::to_string(header.size()) +
                           " fields, found " + std::to_string(fields.size()));
    }
    for (std::size_t c = 0; c < fields.size(); ++c) {
      const auto f = fields[c];
      double v = 0.0;
      const auto res = std::from_chars(f.data(), f.data() + f.size(), v);
      if (res.ec != std::errc() || res.ptr != f.data() + f.size()) {
        throw ParseError(line_no, c + 1,
                         "'" + std::string(f) + "' is not a decimal number");
      }
      if (!std::isfinite(v)) {
        throw NonFiniteValue("non-finite value '" + std::string(f) +
                             "' at row " + std::to_string(line_no) +
                             ", column " + std::to_string(c + 1));
      }
      if (target_index && c == *target_index) {
        target.push_back(v);
      } else {
        values.push_back(v);
      }
    }
    ++n_rows;
  }
  if (n_rows == 0) throw EmptyDataset("CSV has a header but no data rows");
  std::optional<Vector> maybe_target;
  if (target_index) maybe_target = std::move(target);
  const std::size_t cols = names.size();
  return Dataset::Create(std::move(names),
                         Matrix(n_rows, cols, std::move(values)),
                         std::move(maybe_target));
}

Dataset LoadCsv(const std::string& path, const std::string& target_column) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError("cannot open data file '" + path + "'");
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return ParseCsv(buffer.str(), target_column);
}

std::string FormatCsv(const Dataset& dataset) {
  std::string out;
  const auto& names = dataset.feature_names();
  for (std::size_t j = 0; j < names.size(); ++j) {
    if (j) out += ',';
    out += names[j];
  }
  if (dataset.target()) out += std::string(names.empty() ? "" : ",") + kTargetColumn;
  out += '\n';
  for (std::size_t i = 0; i < dataset.size(); ++i) {
    const auto row = dataset.rows().row(i);
    for (std::size_t j = 0; j < row.size(); ++j) {
      if (j) out += ',';
      out += FormatDouble(row[j]);
    }
    if (dataset.target()) {
      if (!row.empty()) out += ',';
      out += FormatDouble((*dataset.target())[i]);
    }
    out += '\n';
  }
  return out;
}

void WriteCsv(const Dataset& dataset, const std::string& path) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw ConfigError("cannot write '" + path + "'");
  out << FormatCsv(dataset);
  if (!out) throw Error("failed writing '" + path + "'");
}

std::pair<Dataset, Dataset> Split(const Dataset& dataset, double train_fraction,
                                  std::uint64_t seed, SplitMode mode) {
  if (!(train_fraction > 0.0 && train_fraction < 1.0)) {
    throw ConfigError("train fraction must be in (0, 1)");
  }
  const std::size_t n = dataset.size();
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  if (mode == SplitMode::kShuffled) {
    std::mt19937_64 rng(seed);
    std::shuffle(order.begin(), order.end(), rng);
  }
  // Guard against products like 0.7 * 10 landing just above an integer.
  const auto n_train = std::min<std::size_t>(
      n, static_cast<std::size_t>(
             std::ceil(train_fraction * static_cast<double>(n) - 1e-9)));
  std::vector<std::size_t> first(order.begin(), order.begin() + n_train);
  std::vector<std::size_t> second(order.begin() + n_train, order.end());
  return {dataset.Subset(first), dataset.Subset(second)};
}

}  // namespace vaelime
