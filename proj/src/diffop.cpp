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

#include "mopkit/diffop.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

namespace mopkit {

RightDiffOperator::RightDiffOperator(std::vector<MatrixPolynomial> coeffs) : coeffs_(std::move(coeffs)) {
  if (coeffs_.empty()) throw std::invalid_argument("RightDiffOperator: needs at least one coefficient");
  for (const auto& c : coeffs_) {
    if (c.size() != coeffs_.front().size()) {
      throw std::invalid_argument("RightDiffOperator: coefficient size mismatch");
    }
  }
}

bool RightDiffOperator::is_hypergeometric_shape() const {
  for (std::size_t j = 0; j < coeffs_.size(); ++j) {
    if (!coeffs_[j].is_zero() && coeffs_[j].degree() > static_cast<int>(j)) return false;
  }
  return true;
}

JetFunction polynomial_jet(MatrixPolynomial p) {
  MatrixPolynomial d1 = poly_derivative(p, 1);
  MatrixPolynomial d2 = poly_derivative(p, 2);
  return [p = std::move(p), d1 = std::move(d1), d2 = std::move(d2)](double x) {
    return MatrixJet{p(x), d1(x), d2(x)};
  };
}

MatrixPolynomial apply_right(const RightDiffOperator& d, const MatrixPolynomial& q) {
  if (q.size() != d.size()) throw std::invalid_argument("apply_right: size mismatch");
  MatrixPolynomial acc = MatrixPolynomial::zero(q.size());
  for (int i = 0; i <= d.order(); ++i) {
    acc = acc + poly_mul(poly_derivative(q, i), d.coeffs()[static_cast<std::size_t>(i)]);
  }
  return acc;
}

Matrix apply_right_sampled(const SampledRightOperator& d, const MatrixPolynomial& q, double x) {
  Matrix acc = Matrix::Zero(q.size(), q.size());
  for (int i = 0; i <= d.order(); ++i) {
    acc += poly_derivative(q, i)(x) * d.coeffs[static_cast<std::size_t>(i)](x);
  }
  return acc;
}

RightDiffOperator hyper_operator(const HypergeometricConstants& k) {
  const Index n = k.C.rows();
  const Matrix id = Matrix::Identity(n, n);
  return RightDiffOperator({
      MatrixPolynomial::constant(-k.V),
      MatrixPolynomial({k.C, -k.U}),
      MatrixPolynomial({Matrix::Zero(n, n), id, -id}),
  });
}

namespace {

double relative(const Matrix& diff, const Matrix& reference) {
  const double scale = reference.norm();
  return scale > 0.0 ? diff.norm() / scale : diff.norm();
}

template <class Apply>
EigenReport eigen_residuals(std::size_t count, std::span<const Matrix> lambdas, std::span<const double> xs,
                            double tol, Apply&& apply) {
  if (lambdas.size() != count) throw std::invalid_argument("check_eigenfunction: length mismatch");
  EigenReport report;
  report.residuals.assign(count, 0.0);
  for (std::size_t k = 0; k < count; ++k) {
    for (const double x : xs) {
      const auto [lhs, value] = apply(k, x);
      const Matrix rhs = lambdas[k] * value;
      report.residuals[k] = std::max(report.residuals[k], relative(lhs - rhs, rhs));
    }
    report.max_residual = std::max(report.max_residual, report.residuals[k]);
  }
  report.pass = report.max_residual <= tol;
  return report;
}

}  // namespace

EigenReport check_eigenfunction(const RightDiffOperator& d, std::span<const MatrixPolynomial> qs,
                                std::span<const Matrix> lambdas, std::span<const double> xs, double tol) {
  std::vector<MatrixPolynomial> images;
  images.reserve(qs.size());
  for (const auto& q : qs) images.push_back(apply_right(d, q));
  return eigen_residuals(qs.size(), lambdas, xs, tol, [&](std::size_t k, double x) {
    return std::pair<Matrix, Matrix>{images[k](x), qs[k](x)};
  });
}

EigenReport check_eigenfunction_sampled(const SampledRightOperator& d, std::span<const MatrixPolynomial> fs,
                                        std::span<const Matrix> lambdas, std::span<const double> xs,
                                        double tol) {
  return eigen_residuals(fs.size(), lambdas, xs, tol, [&](std::size_t k, double x) {
    return std::pair<Matrix, Matrix>{apply_right_sampled(d, fs[k], x), fs[k](x)};
  });
}

HyperExtraction extract_hyper_constants(const JetFunction& psi, const MatrixFunction& a1,
                                        const MatrixFunction& a0, std::span<const double> xs, double tol) {
  if (xs.size() < 3) throw std::invalid_argument("extract_hyper_constants: need at least 3 samples");

  std::vector<Matrix> g(xs.size());
  std::vector<Matrix> v(xs.size());
  for (std::size_t i = 0; i < xs.size(); ++i) {
    const double x = xs[i];
    const MatrixJet j = psi(x);
    if (std::abs(j.value.determinant()) <= 1e-10) {
      throw SingularMatrixError("extract_hyper_constants: Psi is singular at a sample", static_cast<int>(i));
    }
    const Matrix inv = checked_inverse(j.value, static_cast<int>(i));
    const Matrix a1x = a1(x);
    g[i] = (2.0 * x * (1.0 - x) * j.first + j.value * a1x) * inv;
    v[i] = -(x * (1.0 - x) * j.second + j.first * a1x + j.value * a0(x)) * inv;
  }

  // Order samples by distance from the middle of their range.
  const auto [lo, hi] = std::minmax_element(xs.begin(), xs.end());
  const double mid = 0.5 * (*lo + *hi);
  std::vector<std::size_t> order(xs.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return std::abs(xs[a] - mid) < std::abs(xs[b] - mid);
  });
  const std::size_t i1 = order[0];
  const auto second = std::find_if(order.begin() + 1, order.end(),
                                   [&](std::size_t k) { return xs[k] != xs[i1]; });
  if (second == order.end()) throw std::invalid_argument("extract_hyper_constants: samples must be distinct");
  const std::size_t i2 = *second;

  HyperExtraction out;
  Matrix& u = out.constants.U;
  Matrix& c = out.constants.C;
  u = (g[i1] - g[i2]) / (xs[i2] - xs[i1]);
  c = g[i1] + xs[i1] * u;
  out.constants.V = v[i1];

  for (std::size_t i = 0; i < xs.size(); ++i) {
    const Matrix fitted = c - xs[i] * u;
    out.affine_residual = std::max(out.affine_residual, relative(g[i] - fitted, fitted));
    out.constancy_residual = std::max(out.constancy_residual, relative(v[i] - out.constants.V, out.constants.V));
  }
  if (out.affine_residual > tol) {
    throw std::domain_error("extract_hyper_constants: first-order coefficient is not affine in x");
  }
  if (out.constancy_residual > tol) {
    throw std::domain_error("extract_hyper_constants: zeroth-order coefficient is not constant");
  }
  return out;
}

std::array<Matrix, 3> conjugate_operator_numeric(const SampledRightOperator& d, const JetFunction& psi,
                                                 double x) {
  if (d.order() != 2) throw std::invalid_argument("conjugate_operator_numeric: order-2 operator required");
  const MatrixJet j = psi(x);
  const Matrix inv = checked_inverse(j.value);
  const Matrix d0 = d.coeffs[0](x);
  const Matrix d1 = d.coeffs[1](x);
  const Matrix d2 = d.coeffs[2](x);
  return {
      (j.second * d2 + j.first * d1 + j.value * d0) * inv,
      (2.0 * j.first * d2 + j.value * d1) * inv,
      j.value * d2 * inv,
  };
}

}  // namespace mopkit
