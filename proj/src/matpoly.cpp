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

#include "mopkit/matpoly.hpp"

#include <algorithm>
#include <cmath>

namespace mopkit {

void require_square_finite(const Matrix& m, const char* what) {
  if (m.rows() == 0 || m.rows() != m.cols()) {
    throw std::invalid_argument(std::string(what) + ": matrix must be square and non-empty");
  }
  if (!m.allFinite()) {
    throw std::invalid_argument(std::string(what) + ": matrix has non-finite entries");
  }
}

double inverse_condition(const Matrix& m) {
  Eigen::JacobiSVD<Matrix> svd(m);
  const auto& sv = svd.singularValues();
  if (sv.size() == 0 || sv(0) == 0.0) return 0.0;
  return sv(sv.size() - 1) / sv(0);
}

bool is_singular(const Matrix& m, double rel_tol) { return inverse_condition(m) < rel_tol; }

Matrix checked_inverse(const Matrix& m, int index) {
  if (is_singular(m)) {
    throw SingularMatrixError("matrix is numerically singular", index);
  }
  return m.fullPivLu().inverse();
}

namespace {

void require_same_size(const MatrixPolynomial& p, const MatrixPolynomial& q) {
  if (p.size() != q.size()) {
    throw std::invalid_argument("matrix polynomial size mismatch");
  }
}

}  // namespace

MatrixPolynomial::MatrixPolynomial(std::vector<Matrix> coeffs) : coeffs_(std::move(coeffs)) {
  if (coeffs_.empty()) {
    throw std::invalid_argument("MatrixPolynomial needs at least one coefficient");
  }
  const Index n = coeffs_.front().rows();
  double largest = 0.0;
  for (const auto& c : coeffs_) {
    if (c.rows() != n || c.cols() != n) {
      throw std::invalid_argument("MatrixPolynomial coefficients must share one square size");
    }
    require_square_finite(c, "MatrixPolynomial coefficient");
    largest = std::max(largest, c.norm());
  }
  if (largest == 0.0) {
    coeffs_.resize(1);
    zero_ = true;
    return;
  }
  const double cutoff = kTrimTolerance * largest;
  while (coeffs_.size() > 1 && coeffs_.back().norm() <= cutoff) coeffs_.pop_back();
}

MatrixPolynomial MatrixPolynomial::zero(Index n) {
  return MatrixPolynomial({Matrix::Zero(n, n)});
}

MatrixPolynomial MatrixPolynomial::identity(Index n) {
  return MatrixPolynomial({Matrix::Identity(n, n)});
}

MatrixPolynomial MatrixPolynomial::constant(const Matrix& m) { return MatrixPolynomial({m}); }

MatrixPolynomial MatrixPolynomial::from_scalar(const ScalarPolynomial& s, const Matrix& m) {
  if (s.empty()) return zero(m.rows());
  std::vector<Matrix> out;
  out.reserve(s.size());
  for (const auto& c : s) out.push_back(c * m);
  return MatrixPolynomial(std::move(out));
}

Matrix MatrixPolynomial::coeff(int k) const {
  if (k < 0 || k > degree()) return Matrix::Zero(size(), size());
  return coeffs_[static_cast<std::size_t>(k)];
}

Matrix MatrixPolynomial::operator()(double x) const {
  Matrix acc = coeffs_.back();
  for (auto it = coeffs_.rbegin() + 1; it != coeffs_.rend(); ++it) {
    acc = acc * x + *it;
  }
  return acc;
}

MatrixPolynomial poly_add(const MatrixPolynomial& p, const MatrixPolynomial& q) {
  require_same_size(p, q);
  const int d = std::max(p.degree(), q.degree());
  std::vector<Matrix> out;
  out.reserve(static_cast<std::size_t>(d) + 1);
  for (int k = 0; k <= d; ++k) out.push_back(p.coeff(k) + q.coeff(k));
  return MatrixPolynomial(std::move(out));
}

MatrixPolynomial poly_sub(const MatrixPolynomial& p, const MatrixPolynomial& q) {
  return poly_add(p, poly_scale(-1.0, q));
}

MatrixPolynomial poly_scale(Complex c, const MatrixPolynomial& p) {
  std::vector<Matrix> out = p.coeffs();
  for (auto& m : out) m *= c;
  return MatrixPolynomial(std::move(out));
}

MatrixPolynomial poly_left_mul(const Matrix& m, const MatrixPolynomial& p) {
  if (m.rows() != p.size() || m.cols() != p.size()) {
    throw std::invalid_argument("poly_left_mul: size mismatch");
  }
  std::vector<Matrix> out;
  out.reserve(p.coeffs().size());
  for (const auto& c : p.coeffs()) out.push_back(m * c);
  return MatrixPolynomial(std::move(out));
}

MatrixPolynomial poly_right_mul(const MatrixPolynomial& p, const Matrix& m) {
  if (m.rows() != p.size() || m.cols() != p.size()) {
    throw std::invalid_argument("poly_right_mul: size mismatch");
  }
  std::vector<Matrix> out;
  out.reserve(p.coeffs().size());
  for (const auto& c : p.coeffs()) out.push_back(c * m);
  return MatrixPolynomial(std::move(out));
}

MatrixPolynomial poly_mul(const MatrixPolynomial& p, const MatrixPolynomial& q) {
  require_same_size(p, q);
  const Index n = p.size();
  std::vector<Matrix> out(static_cast<std::size_t>(p.degree() + q.degree()) + 1, Matrix::Zero(n, n));
  for (int i = 0; i <= p.degree(); ++i) {
    for (int j = 0; j <= q.degree(); ++j) {
      out[static_cast<std::size_t>(i + j)] += p.coeffs()[i] * q.coeffs()[j];
    }
  }
  return MatrixPolynomial(std::move(out));
}

MatrixPolynomial poly_mul_scalar_poly(const MatrixPolynomial& p, const ScalarPolynomial& s) {
  const Index n = p.size();
  if (s.empty()) return MatrixPolynomial::zero(n);
  std::vector<Matrix> out(static_cast<std::size_t>(p.degree()) + s.size(), Matrix::Zero(n, n));
  for (int i = 0; i <= p.degree(); ++i) {
    for (std::size_t j = 0; j < s.size(); ++j) {
      out[static_cast<std::size_t>(i) + j] += s[j] * p.coeffs()[i];
    }
  }
  return MatrixPolynomial(std::move(out));
}

MatrixPolynomial poly_derivative(const MatrixPolynomial& p, int k) {
  if (k < 0) throw std::invalid_argument("poly_derivative: negative order");
  if (k == 0) return p;
  if (k > p.degree()) return MatrixPolynomial::zero(p.size());
  std::vector<Matrix> out;
  out.reserve(static_cast<std::size_t>(p.degree() - k) + 1);
  for (int j = k; j <= p.degree(); ++j) {
    double falling = 1.0;
    for (int t = 0; t < k; ++t) falling *= static_cast<double>(j - t);
    out.push_back(falling * p.coeffs()[j]);
  }
  return MatrixPolynomial(std::move(out));
}

MatrixPolynomial poly_compose_affine(const MatrixPolynomial& p, double scale, double shift) {
  // Horner in the affine variable: acc <- acc * (scale x + shift) + c_k.
  const ScalarPolynomial affine{shift, scale};
  MatrixPolynomial acc = MatrixPolynomial::constant(p.coeffs().back());
  for (int k = p.degree() - 1; k >= 0; --k) {
    acc = poly_add(poly_mul_scalar_poly(acc, affine), MatrixPolynomial::constant(p.coeffs()[k]));
  }
  return acc;
}

MatrixPolynomial operator+(const MatrixPolynomial& p, const MatrixPolynomial& q) { return poly_add(p, q); }
MatrixPolynomial operator-(const MatrixPolynomial& p, const MatrixPolynomial& q) { return poly_sub(p, q); }
MatrixPolynomial operator*(const Matrix& m, const MatrixPolynomial& p) { return poly_left_mul(m, p); }
MatrixPolynomial operator*(const MatrixPolynomial& p, const Matrix& m) { return poly_right_mul(p, m); }

LeadingCoefficient leading_coefficient(const MatrixPolynomial& p) {
  if (p.is_zero()) throw std::invalid_argument("leading_coefficient: zero polynomial");
  LeadingCoefficient lc;
  lc.degree = p.degree();
  lc.value = p.coeffs().back();
  lc.nonsingular = !is_singular(lc.value);
  return lc;
}

}  // namespace mopkit
