// Copyright 2026 The mopkit Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <complex>
#include <functional>
#include <stdexcept>
#include <string>
#include <vector>

#include <Eigen/Dense>

namespace mopkit {

using Complex = std::complex<double>;
using Matrix = Eigen::MatrixXcd;
using Vector = Eigen::VectorXcd;
using Index = Eigen::Index;

/// Evaluable matrix-valued function of one real variable.
using MatrixFunction = std::function<Matrix(double)>;

/// Relative trim tolerance used to decide the degree of a matrix polynomial.
inline constexpr double kTrimTolerance = 1e-12;
/// A matrix is singular when sigma_min < kSingularTolerance * sigma_max.
inline constexpr double kSingularTolerance = 1e-10;

/// Thrown when a matrix that must be inverted is numerically singular.
/// `index` carries the sequence position (recursion step, series term, ...)
/// or -1 when there is none.
class SingularMatrixError : public std::runtime_error {
 public:
  SingularMatrixError(const std::string& what, int index = -1)
      : std::runtime_error(what), index_(index) {}
  int index() const noexcept { return index_; }

 private:
  int index_;
};

/// Throws std::invalid_argument unless `m` is square, non-empty and finite.
void require_square_finite(const Matrix& m, const char* what);

/// sigma_min / sigma_max (0 for the zero matrix).
double inverse_condition(const Matrix& m);
bool is_singular(const Matrix& m, double rel_tol = kSingularTolerance);

/// Inverse through a full-pivot LU; throws SingularMatrixError.
Matrix checked_inverse(const Matrix& m, int index = -1);

/// Scalar polynomial with ascending coefficients: s(x) = sum_k c[k] x^k.
using ScalarPolynomial = std::vector<Complex>;

/// Polynomial in one real variable with N x N complex matrix coefficients,
/// stored dense and ascending. Always trimmed: the last stored coefficient
/// exceeds kTrimTolerance * (largest coefficient norm), or the polynomial
/// is zero and holds a single zero coefficient.
class MatrixPolynomial {
 public:
  explicit MatrixPolynomial(std::vector<Matrix> coeffs);

  static MatrixPolynomial zero(Index n);
  static MatrixPolynomial identity(Index n);
  static MatrixPolynomial constant(const Matrix& m);
  /// Builds c(x) * M from a scalar polynomial c.
  static MatrixPolynomial from_scalar(const ScalarPolynomial& s, const Matrix& m);

  Index size() const noexcept { return coeffs_.front().rows(); }
  int degree() const noexcept { return static_cast<int>(coeffs_.size()) - 1; }
  bool is_zero() const noexcept { return zero_; }

  const std::vector<Matrix>& coeffs() const noexcept { return coeffs_; }
  /// Coefficient of x^k; the zero matrix beyond the degree.
  Matrix coeff(int k) const;

  /// Horner evaluation.
  Matrix operator()(double x) const;

 private:
  std::vector<Matrix> coeffs_;
  bool zero_ = false;
};

MatrixPolynomial poly_add(const MatrixPolynomial& p, const MatrixPolynomial& q);
MatrixPolynomial poly_sub(const MatrixPolynomial& p, const MatrixPolynomial& q);
MatrixPolynomial poly_scale(Complex c, const MatrixPolynomial& p);
MatrixPolynomial poly_left_mul(const Matrix& m, const MatrixPolynomial& p);
MatrixPolynomial poly_right_mul(const MatrixPolynomial& p, const Matrix& m);
/// Product p(x) q(x), matrix multiplication order preserved.
MatrixPolynomial poly_mul(const MatrixPolynomial& p, const MatrixPolynomial& q);
MatrixPolynomial poly_mul_scalar_poly(const MatrixPolynomial& p, const ScalarPolynomial& s);
MatrixPolynomial poly_derivative(const MatrixPolynomial& p, int k = 1);
/// p(scale * x + shift), by binomial re-expansion.
MatrixPolynomial poly_compose_affine(const MatrixPolynomial& p, double scale, double shift);

MatrixPolynomial operator+(const MatrixPolynomial& p, const MatrixPolynomial& q);
MatrixPolynomial operator-(const MatrixPolynomial& p, const MatrixPolynomial& q);
MatrixPolynomial operator*(const Matrix& m, const MatrixPolynomial& p);
MatrixPolynomial operator*(const MatrixPolynomial& p, const Matrix& m);

struct LeadingCoefficient {
  int degree = 0;
  Matrix value;
  bool nonsingular = false;
};

/// Throws std::invalid_argument for the zero polynomial.
LeadingCoefficient leading_coefficient(const MatrixPolynomial& p);

}  // namespace mopkit
