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

#include "mopkit/weights.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <utility>

namespace mopkit {

MatrixWeight::MatrixWeight(Index size, double a, double b, MatrixFunction evaluate,
                           std::optional<int> polynomial_degree)
    : size_(size), a_(a), b_(b), evaluate_(std::move(evaluate)), polynomial_degree_(polynomial_degree) {
  if (size_ < 1) throw std::invalid_argument("MatrixWeight: size must be positive");
  if (!(a_ < b_)) throw std::invalid_argument("MatrixWeight: need a < b");
  if (!evaluate_) throw std::invalid_argument("MatrixWeight: empty evaluator");
}

Matrix MatrixWeight::operator()(double x) const {
  Matrix v = evaluate_(x);
  if (v.rows() != size_ || v.cols() != size_) {
    throw std::invalid_argument("MatrixWeight: evaluator returned the wrong size");
  }
  return v;
}

Matrix moment(const MatrixWeight& w, int k, const QuadratureRule& rule) {
  if (k < 0) throw std::invalid_argument("moment: negative order");
  return integrate_matrix([&](double x) -> Matrix { return std::pow(x, k) * w(x); }, rule);
}

MatrixWeight conjugate_weight(const MatrixWeight& w, MatrixFunction f0, std::optional<int> f0_degree) {
  std::optional<int> degree;
  if (f0_degree && w.polynomial_degree()) degree = 2 * *f0_degree + *w.polynomial_degree();
  return MatrixWeight(
      w.size(), w.lower(), w.upper(),
      [w, f0 = std::move(f0)](double x) -> Matrix {
        const Matrix f = f0(x);
        return f * w(x) * f.adjoint();
      },
      degree);
}

MatrixWeight equivalence_transform(const MatrixWeight& w, const Matrix& m) {
  if (m.rows() != w.size() || m.cols() != w.size()) {
    throw std::invalid_argument("equivalence_transform: size mismatch");
  }
  if (is_singular(m)) throw SingularMatrixError("equivalence_transform: M is singular");
  return MatrixWeight(
      w.size(), w.lower(), w.upper(), [w, m](double x) -> Matrix { return m * w(x) * m.adjoint(); },
      w.polynomial_degree());
}

PsdReport psd_report(const MatrixWeight& w, std::span<const double> xs) {
  PsdReport report;
  for (const double x : xs) {
    const Matrix v = w(x);
    const double norm = v.norm();
    if (norm > 0.0) {
      report.max_hermitian_defect = std::max(report.max_hermitian_defect, (v - v.adjoint()).norm() / norm);
    }
    const Matrix herm = 0.5 * (v + v.adjoint());
    Eigen::SelfAdjointEigenSolver<Matrix> es(herm, Eigen::EigenvaluesOnly);
    const auto& ev = es.eigenvalues();
    PsdSample s;
    s.x = x;
    s.min_eigenvalue = ev.minCoeff();
    s.spectral_norm = std::max(std::abs(ev.minCoeff()), std::abs(ev.maxCoeff()));
    s.positive_definite = s.min_eigenvalue > 1e-10 * s.spectral_norm && s.spectral_norm > 0.0;
    s.flagged = s.spectral_norm == 0.0 || s.min_eigenvalue < -1e-10 * s.spectral_norm;
    if (s.flagged) report.all_psd = false;
    report.samples.push_back(s);
  }
  return report;
}

}  // namespace mopkit
