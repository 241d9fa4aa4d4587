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

#include "vaelime/linalg.h"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>
#include <utility>

#include "vaelime/errors.h"

namespace vaelime {

namespace {

constexpr double kPivotFloor = 1e-12;
constexpr double kSymmetryTolerance = 1e-9;

std::string Shape(std::size_t r, std::size_t c) {
  return std::to_string(r) + "x" + std::to_string(c);
}

// In-place lower Cholesky factor. Returns the smallest diagonal of L.
double CholeskyFactor(Matrix& a) {
  const std::size_t n = a.rows();
  double min_diag = std::numeric_limits<double>::infinity();
  for (std::size_t j = 0; j < n; ++j) {
    double pivot = a(j, j);
    for (std::size_t k = 0; k < j; ++k) pivot -= a(j, k) * a(j, k);
    if (!(pivot > kPivotFloor)) {
      throw NotPositiveDefinite("pivot " + std::to_string(j) + " is " +
                                std::to_string(pivot));
    }
    const double ljj = std::sqrt(pivot);
    a(j, j) = ljj;
    min_diag = std::min(min_diag, ljj);
    for (std::size_t i = j + 1; i < n; ++i) {
      double s = a(i, j);
      for (std::size_t k = 0; k < j; ++k) s -= a(i, k) * a(j, k);
      a(i, j) = s / ljj;
    }
  }
  return min_diag;
}

Vector SubstituteFactor(const Matrix& l, std::span<const double> b) {
  const std::size_t n = l.rows();
  Vector x(b.begin(), b.end());
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t k = 0; k < i; ++k) x[i] -= l(i, k) * x[k];
    x[i] /= l(i, i);
  }
  for (std::size_t i = n; i-- > 0;) {
    for (std::size_t k = i + 1; k < n; ++k) x[i] -= l(k, i) * x[k];
    x[i] /= l(i, i);
  }
  return x;
}

void CheckSquare(const Matrix& a, std::size_t b_size) {
  if (a.rows() != a.cols() || a.rows() == 0 || a.rows() != b_size) {
    throw DimensionMismatch("cholesky: matrix " + Shape(a.rows(), a.cols()) +
                            " with rhs of length " + std::to_string(b_size));
  }
  for (std::size_t i = 0; i < a.rows(); ++i) {
    for (std::size_t j = 0; j < i; ++j) {
      if (std::abs(a(i, j) - a(j, i)) > kSymmetryTolerance) {
        throw Error("cholesky: matrix is not symmetric at (" +
                    std::to_string(i) + "," + std::to_string(j) + ")");
      }
    }
  }
}

}  // namespace

Matrix::Matrix(std::size_t rows, std::size_t cols, double fill)
    : rows_(rows), cols_(cols), data_(rows * cols, fill) {}

Matrix::Matrix(std::size_t rows, std::size_t cols, std::vector<double> data)
    : rows_(rows), cols_(cols), data_(std::move(data)) {
  if (data_.size() != rows * cols) {
    throw DimensionMismatch("matrix " + Shape(rows, cols) + " built from " +
                            std::to_string(data_.size()) + " values");
  }
}

Matrix::Matrix(std::initializer_list<std::initializer_list<double>> rows)
    : rows_(rows.size()), cols_(rows.size() ? rows.begin()->size() : 0) {
  data_.reserve(rows_ * cols_);
  for (const auto& r : rows) {
    if (r.size() != cols_) throw DimensionMismatch("ragged matrix literal");
    data_.insert(data_.end(), r.begin(), r.end());
  }
}

Matrix Matrix::Identity(std::size_t n) {
  Matrix m(n, n);
  for (std::size_t i = 0; i < n; ++i) m(i, i) = 1.0;
  return m;
}

Matrix Matrix::Transposed() const {
  Matrix t(cols_, rows_);
  for (std::size_t r = 0; r < rows_; ++r) {
    for (std::size_t c = 0; c < cols_; ++c) t(c, r) = (*this)(r, c);
  }
  return t;
}

bool Matrix::AllFinite() const {
  return std::all_of(data_.begin(), data_.end(),
                     [](double v) { return std::isfinite(v); });
}

Vector MatVec(const Matrix& a, std::span<const double> x) {
  if (a.cols() != x.size()) {
    throw DimensionMismatch("matvec: " + Shape(a.rows(), a.cols()) +
                            " times vector of length " +
                            std::to_string(x.size()));
  }
  Vector out(a.rows(), 0.0);
  for (std::size_t r = 0; r < a.rows(); ++r) out[r] = Dot(a.row(r), x);
  return out;
}

Matrix MatMul(const Matrix& a, const Matrix& b) {
  if (a.cols() != b.rows()) {
    throw DimensionMismatch("matmul: " + Shape(a.rows(), a.cols()) + " times " +
                            Shape(b.rows(), b.cols()));
  }
  Matrix out(a.rows(), b.cols());
  for (std::size_t i = 0; i < a.rows(); ++i) {
    for (std::size_t k = 0; k < a.cols(); ++k) {
      const double aik = a(i, k);
      if (aik == 0.0) continue;
      for (std::size_t j = 0; j < b.cols(); ++j) out(i, j) += aik * b(k, j);
    }
  }
  return out;
}

double Dot(std::span<const double> a, std::span<const double> b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

double MaxAbs(std::span<const double> v) {
  double m = 0.0;
  for (double x : v) m = std::max(m, std::abs(x));
  return m;
}

Vector CholeskySolve(const Matrix& a, std::span<const double> b) {
  CheckSquare(a, b.size());
  Matrix l = a;
  CholeskyFactor(l);
  return SubstituteFactor(l, b);
}

namespace {

// Solves (G + lambda J) beta = r with symmetric diagonal equilibration, so
// the pivot floor applies to a unit-diagonal system.
WlsSolution SolveNormalEquations(const Matrix& gram, const Vector& rhs,
                                 double lambda) {
  const std::size_t p = gram.rows();
  Matrix a = gram;
  for (std::size_t j = 1; j < p; ++j) a(j, j) += lambda;
  Vector scale(p, 1.0);
  for (std::size_t j = 0; j < p; ++j) {
    if (a(j, j) > 0.0) scale[j] = 1.0 / std::sqrt(a(j, j));
  }
  for (std::size_t i = 0; i < p; ++i) {
    for (std::size_t j = 0; j < p; ++j) a(i, j) *= scale[i] * scale[j];
  }
  Vector b(p);
  for (std::size_t i = 0; i < p; ++i) b[i] = rhs[i] * scale[i];

  WlsSolution solution;
  solution.lambda = lambda;
  solution.condition_hint = CholeskyFactor(a);
  solution.beta = SubstituteFactor(a, b);
  for (std::size_t i = 0; i < p; ++i) solution.beta[i] *= scale[i];
  return solution;
}

}  // namespace

WlsSolution SolveWls(const Matrix& x, std::span<const double> y,
                     std::span<const double> w, const WlsOptions& options) {
  const std::size_t n = x.rows();
  const std::size_t p = x.cols();
  if (y.size() != n || w.size() != n || p == 0) {
    throw DimensionMismatch("wls: design " + Shape(n, p) + ", " +
                            std::to_string(y.size()) + " targets, " +
                            std::to_string(w.size()) + " weights");
  }
  if (n < 2) throw DegenerateSystem("wls: need at least 2 samples");
  if (!(options.lambda >= 0.0)) throw Error("wls: lambda must be >= 0");
  bool any_positive = false;
  for (double wi : w) {
    if (!(wi >= 0.0) || !std::isfinite(wi)) {
      throw Error("wls: weights must be finite and nonnegative");
    }
    any_positive = any_positive || wi > 0.0;
  }
  if (!any_positive) throw DegenerateSystem("wls: all weights are zero");

  Matrix gram(p, p);
  Vector rhs(p, 0.0);
  for (std::size_t i = 0; i < n; ++i) {
    const double wi = w[i];
    if (wi == 0.0) continue;
    const auto xi = x.row(i);
    for (std::size_t a = 0; a < p; ++a) {
      const double wxa = wi * xi[a];
      rhs[a] += wxa * y[i];
      for (std::size_t b = 0; b <= a; ++b) gram(a, b) += wxa * xi[b];
    }
  }
  for (std::size_t a = 0; a < p; ++a) {
    for (std::size_t b = 0; b < a; ++b) gram(b, a) = gram(a, b);
  }

  try {
    return SolveNormalEquations(gram, rhs, options.lambda);
  } catch (const NotPositiveDefinite& first) {
    const double retry = std::max(options.lambda, options.lambda_floor);
    if (retry > options.lambda) {
      try {
        return SolveNormalEquations(gram, rhs, retry);
      } catch (const NotPositiveDefinite& second) {
        throw DegenerateSystem(std::string("wls: ") + second.what() +
                               " even at lambda " + std::to_string(retry));
      }
    }
    throw DegenerateSystem(std::string("wls: ") + first.what() +
                           " at lambda " + std::to_string(options.lambda));
  }
}

}  // namespace vaelime
