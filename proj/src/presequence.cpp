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

#include "mopkit/presequence.hpp"

#include <algorithm>
#include <array>
#include <limits>
#include <cmath>
#include <stdexcept>
#include <string>

namespace mopkit {

PreSequenceCheck check_presequence(const PreSequence& ps, std::span<const double> xs) {
  PreSequenceCheck out;
  out.a0_zero = ps.coefficients(0).A.norm() == 0.0;
  for (const double x : xs) {
    if (std::abs(ps.f0(x).determinant()) <= 1e-12) ++out.singular_f0_samples;
  }
  // "almost everywhere": tolerate isolated hits, never a majority
  out.ok = out.a0_zero && 2 * out.singular_f0_samples < static_cast<int>(xs.size());
  return out;
}

std::vector<MatrixPolynomial> build_Q(const PreSequence& ps, int n_max) {
  if (n_max < 0) throw std::invalid_argument("build_Q: n_max must be nonnegative");
  if (ps.spectral_map.scale == 0.0) throw std::invalid_argument("build_Q: degenerate spectral map");
  const Index n = ps.size;
  // s as a polynomial in x; recurring on it directly avoids re-expanding powers of s
  const ScalarPolynomial s{ps.spectral_map.shift, ps.spectral_map.scale};

  std::vector<MatrixPolynomial> out;
  out.reserve(static_cast<std::size_t>(n_max) + 1);
  out.push_back(MatrixPolynomial::identity(n));
  for (int k = 0; k < n_max; ++k) {
    const ThreeTermCoefficients t = ps.coefficients(k);
    if (k == 0 && t.A.norm() != 0.0) throw std::invalid_argument("build_Q: A_0 must vanish");
    Matrix c_inv;
    try {
      c_inv = checked_inverse(t.C, k);
    } catch (const SingularMatrixError&) {
      throw SingularMatrixError("build_Q: C_" + std::to_string(k) + " is singular", k);
    }
    MatrixPolynomial rhs = poly_mul_scalar_poly(out[k], s) - t.B * out[k];
    if (k > 0) rhs = rhs - t.A * out[k - 1];
    out.push_back(c_inv * rhs);
  }
  return out;
}

FactorizationReport verify_factorization(const PreSequence& ps, std::span<const MatrixPolynomial> qs,
                                         const std::function<Matrix(int, double)>& f,
                                         std::span<const double> xs, double tol) {
  FactorizationReport report;
  report.residuals.assign(qs.size(), 0.0);
  for (const double x : xs) {
    const Matrix f0 = ps.f0(x);
    for (std::size_t k = 0; k < qs.size(); ++k) {
      const Matrix fk = f(static_cast<int>(k), x);
      const double scale = fk.norm();
      const double diff = (fk - qs[k](x) * f0).norm();
      const double r = scale > 0.0 ? diff / scale : diff;
      report.residuals[k] = std::max(report.residuals[k], r);
    }
  }
  for (const double r : report.residuals) report.max_residual = std::max(report.max_residual, r);
  report.pass = report.max_residual <= tol;
  return report;
}

namespace {

struct RecursionSample {
  std::array<Matrix, 3> f;  // F_{n-1}, F_n, F_{n+1}
  Matrix misfit;            // lhs - rhs
};

OffendingEntry isolate_entry(int n, const std::vector<RecursionSample>& samples) {
  const Index size = samples.front().misfit.rows();
  double total = 0.0;
  for (const auto& s : samples) total += s.misfit.squaredNorm();
  OffendingEntry best;
  double best_remaining = std::numeric_limits<double>::infinity();
  const char names[] = {'A', 'B', 'C'};
  for (int m = n == 0 ? 1 : 0; m < 3; ++m) {
    for (Index i = 0; i < size; ++i) {
      for (Index j = 0; j < size; ++j) {
        // a change d in entry (i, j) adds d * F.row(j) to row i of the rhs
        Complex num = 0.0;
        double den = 0.0;
        for (const auto& s : samples) {
          const auto g = s.f[static_cast<std::size_t>(m)].row(j);
          num += (g.conjugate().array() * s.misfit.row(i).array()).sum();
          den += g.squaredNorm();
        }
        if (den == 0.0) continue;
        const Complex d = num / den;
        double remaining = 0.0;
        for (const auto& s : samples) {
          Matrix r = s.misfit;
          r.row(i) -= d * s.f[static_cast<std::size_t>(m)].row(j);
          remaining += r.squaredNorm();
        }
        if (remaining < best_remaining) {
          best_remaining = remaining;
          best = OffendingEntry{n, names[m], i, j, d, 0.0};
        }
      }
    }
  }
  best.explained = total > 0.0 ? 1.0 - std::sqrt(best_remaining / total) : 0.0;
  return best;
}

}  // namespace

RecursionReport check_recursion(const std::function<ThreeTermCoefficients(int)>& coefficients,
                                const std::function<Matrix(int, double)>& f, const SpectralMap& map,
                                int n_max, std::span<const double> xs, double tol) {
  if (n_max < 0) throw std::invalid_argument("check_recursion: n_max must be nonnegative");
  RecursionReport report;
  for (int n = 0; n <= n_max; ++n) {
    const ThreeTermCoefficients t = coefficients(n);
    std::vector<RecursionSample> samples;
    double worst = 0.0;
    for (const double x : xs) {
      RecursionSample s;
      s.f[1] = f(n, x);
      s.f[2] = f(n + 1, x);
      s.f[0] = n > 0 ? f(n - 1, x) : Matrix::Zero(s.f[1].rows(), s.f[1].cols());
      const Matrix lhs = map(x) * s.f[1];
      Matrix rhs = t.B * s.f[1] + t.C * s.f[2];
      if (n > 0) rhs += t.A * s.f[0];
      s.misfit = lhs - rhs;
      const double scale = std::max(lhs.norm(), rhs.norm());
      worst = std::max(worst, scale > 0.0 ? s.misfit.norm() / scale : s.misfit.norm());
      samples.push_back(std::move(s));
    }
    report.residuals.push_back(worst);
    report.max_residual = std::max(report.max_residual, worst);
    if (worst > tol && !samples.empty()) report.offenders.push_back(isolate_entry(n, samples));
  }
  report.pass = report.max_residual <= tol;
  return report;
}

GramMatrix::GramMatrix(int count, Index size)
    : count_(count), blocks_(static_cast<std::size_t>(count) * static_cast<std::size_t>(count),
                             Matrix::Zero(size, size)) {}

std::size_t GramMatrix::index(int i, int j) const {
  if (i < 0 || j < 0 || i >= count_ || j >= count_) throw std::out_of_range("GramMatrix index");
  return static_cast<std::size_t>(i) * static_cast<std::size_t>(count_) + static_cast<std::size_t>(j);
}

double GramMatrix::max_relative_offdiagonal() const {
  double worst = 0.0;
  for (int i = 0; i < count_; ++i) {
    for (int j = 0; j < count_; ++j) {
      if (i == j) continue;
      const double scale = std::sqrt((*this)(i, i).norm() * (*this)(j, j).norm());
      worst = std::max(worst, (*this)(i, j).norm() / scale);
    }
  }
  return worst;
}

namespace {

bool hermitian_positive_definite(const Matrix& m) {
  if ((m - m.adjoint()).norm() > 1e-10 * m.norm()) return false;
  Eigen::SelfAdjointEigenSolver<Matrix> es(0.5 * (m + m.adjoint()), Eigen::EigenvaluesOnly);
  return es.eigenvalues().minCoeff() > kSingularTolerance * es.eigenvalues().cwiseAbs().maxCoeff();
}

}  // namespace

bool GramMatrix::diagonal_positive_definite() const {
  for (int i = 0; i < count_; ++i) {
    if (!hermitian_positive_definite((*this)(i, i))) return false;
  }
  return true;
}

GramMatrix gram_matrix(std::span<const MatrixPolynomial> ps, const MatrixWeight& w,
                       const QuadratureRule& rule) {
  const int count = static_cast<int>(ps.size());
  GramMatrix g(count, w.size());
  // Sample every polynomial once per node, then accumulate in node order.
  std::vector<std::vector<Matrix>> values(ps.size());
  for (std::size_t k = 0; k < ps.size(); ++k) {
    if (ps[k].size() != w.size()) throw std::invalid_argument("gram_matrix: size mismatch");
    values[k].reserve(static_cast<std::size_t>(rule.size()));
    for (const double x : rule.nodes()) values[k].push_back(ps[k](x));
  }
  for (int node = 0; node < rule.size(); ++node) {
    const Matrix wx = rule.weights()[node] * w(rule.nodes()[node]);
    for (int i = 0; i < count; ++i) {
      const Matrix left = values[i][node] * wx;
      for (int j = 0; j < count; ++j) g(i, j) += left * values[j][node].adjoint();
    }
  }
  for (int i = 0; i < count; ++i) {
    if (!hermitian_positive_definite(g(i, i))) {
      throw std::domain_error("gram_matrix: diagonal block " + std::to_string(i) +
                              " is not positive definite");
    }
  }
  return g;
}

MonicRecursion recursion_from_moments(const MatrixWeight& w, int n_max, const QuadratureRule& rule) {
  if (n_max < 0) throw std::invalid_argument("recursion_from_moments: n_max must be nonnegative");
  const Index n = w.size();
  const ScalarPolynomial x_poly{0.0, 1.0};
  MonicRecursion out;
  out.monic.push_back(MatrixPolynomial::identity(n));

  Matrix prev_norm;  // (P_{k-1}, P_{k-1})^{-1}
  for (int k = 0; k < n_max; ++k) {
    const MatrixPolynomial& pk = out.monic[k];
    const MatrixPolynomial xpk = poly_mul_scalar_poly(pk, x_poly);
    const Matrix norm_k = inner_product(pk, pk, w, rule);
    Matrix norm_k_inv;
    try {
      norm_k_inv = checked_inverse(norm_k, k);
    } catch (const SingularMatrixError&) {
      throw SingularMatrixError(
          "recursion_from_moments: (P_" + std::to_string(k) + ", P_" + std::to_string(k) + ") is singular", k);
    }
    const Matrix b = inner_product(xpk, pk, w, rule) * norm_k_inv;
    Matrix a = Matrix::Zero(n, n);
    MatrixPolynomial next = xpk - b * pk;
    if (k > 0) {
      a = inner_product(xpk, out.monic[k - 1], w, rule) * prev_norm;
      next = next - a * out.monic[k - 1];
    }
    out.a_tilde.push_back(a);
    out.b_tilde.push_back(b);
    out.monic.push_back(std::move(next));
    prev_norm = norm_k_inv;
  }

  // orthogonality of the generated sequence (the Gram PD check may throw)
  const GramMatrix g = gram_matrix(out.monic, w, rule);
  out.max_relative_offdiagonal = g.max_relative_offdiagonal();
  return out;
}

MonicNormalization monic_normalize(std::span<const MatrixPolynomial> qs) {
  MonicNormalization out;
  for (std::size_t k = 0; k < qs.size(); ++k) {
    const LeadingCoefficient lc = leading_coefficient(qs[k]);
    if (!lc.nonsingular) {
      throw SingularMatrixError("monic_normalize: singular leading coefficient", static_cast<int>(k));
    }
    out.monic.push_back(lc.value.fullPivLu().inverse() * qs[k]);
    out.leading.push_back(lc.value);
  }
  return out;
}

}  // namespace mopkit
