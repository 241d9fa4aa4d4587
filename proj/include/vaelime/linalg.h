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

#ifndef VAELIME_LINALG_H_
#define VAELIME_LINALG_H_

#include <cstddef>
#include <initializer_list>
#include <span>
#include <vector>

namespace vaelime {

using Vector = std::vector<double>;

// Dense row-major matrix.
class Matrix {
 public:
  Matrix() = default;
  Matrix(std::size_t rows, std::size_t cols, double fill = 0.0);
  Matrix(std::size_t rows, std::size_t cols, std::vector<double> data);
  Matrix(std::initializer_list<std::initializer_list<double>> rows);

  static Matrix Identity(std::size_t n);

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  bool empty() const { return data_.empty(); }

  double& operator()(std::size_t r, std::size_t c) {
    return data_[r * cols_ + c];
  }
  double operator()(std::size_t r, std::size_t c) const {
    return data_[r * cols_ + c];
  }

  std::span<double> row(std::size_t r) {
    return {data_.data() + r * cols_, cols_};
  }
  std::span<const double> row(std::size_t r) const {
    return {data_.data() + r * cols_, cols_};
  }

  std::span<double> data() { return data_; }
  std::span<const double> data() const { return data_; }

  Matrix Transposed() const;
  bool AllFinite() const;

  friend bool operator==(const Matrix&, const Matrix&) = default;

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<double> data_;
};

Vector MatVec(const Matrix& a, std::span<const double> x);
Matrix MatMul(const Matrix& a, const Matrix& b);
double Dot(std::span<const double> a, std::span<const double> b);
double MaxAbs(std::span<const double> v);

// Solves A x = b for symmetric positive-definite A. Throws
// NotPositiveDefinite when a pivot drops to 1e-12 or below, and
// DimensionMismatch on shape errors.
Vector CholeskySolve(const Matrix& a, std::span<const double> b);

struct WlsSolution {
  // Intercept first, then one coefficient per remaining design column.
  Vector beta;
  // Smallest diagonal entry of the Cholesky factor of the equilibrated
  // normal matrix; small values flag near-collinear designs.
  double condition_hint = 0.0;
  // Ridge actually applied (the floor when the first attempt failed).
  double lambda = 0.0;
};

struct WlsOptions {
  double lambda = 1e-6;
  // When the system at `lambda` is not positive definite the solve is retried
  // once with max(lambda, lambda_floor) before giving up.
  double lambda_floor = 1e-6;
};

// Weighted ridge least squares
//   argmin_b sum_i w_i (y_i - X_i b)^2 + lambda * |b_1..d|^2
// over a design whose column 0 is the all-ones intercept (left unpenalized).
// Solved through the normal equations and CholeskySolve. Throws
// DegenerateSystem when no positive-definite system can be formed.
WlsSolution SolveWls(const Matrix& x, std::span<const double> y,
                     std::span<const double> w, const WlsOptions& options);

}  // namespace vaelime

#endif  // VAELIME_LINALG_H_
