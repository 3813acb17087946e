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

#include <functional>
#include <optional>
#include <span>
#include <vector>

#include "mopkit/matpoly.hpp"
#include "mopkit/quadrature.hpp"
#include "mopkit/weights.hpp"

namespace mopkit {

/// s * F_n = A F_{n-1} + B F_n + C F_{n+1} at a fixed index n.
struct ThreeTermCoefficients {
  Matrix A;
  Matrix B;
  Matrix C;
};

/// Affine change of variable s = scale * x + shift in which the sequence
/// recurs. The identity map recovers the plain x-recursion.
struct SpectralMap {
  double scale = 1.0;
  double shift = 0.0;

  double operator()(double x) const noexcept { return scale * x + shift; }
};

/// Matrix orthogonal functions {F_n} on (a, b) that obey a three-term
/// recursion with A_0 = 0 and every C_n nonsingular, with det F_0 nonzero
/// almost everywhere.
struct PreSequence {
  Index size = 0;
  MatrixFunction f0;
  std::optional<MatrixPolynomial> f0_polynomial;
  std::function<ThreeTermCoefficients(int)> coefficients;
  MatrixWeight weight;
  SpectralMap spectral_map;
};

struct PreSequenceCheck {
  bool a0_zero = false;
  int singular_f0_samples = 0;  // samples where |det F_0| <= 1e-12
  bool ok = false;
};

/// Checks the structural hypotheses at the given sample points.
PreSequenceCheck check_presequence(const PreSequence& ps, std::span<const double> xs);

/// Q_0 = I, Q_{k+1} = C_k^{-1}(s Q_k - A_k Q_{k-1} - B_k Q_k), run in the
/// spectral variable and composed back to x. Returns Q_0..Q_{n_max}.
/// Throws SingularMatrixError carrying k when C_k is singular.
std::vector<MatrixPolynomial> build_Q(const PreSequence& ps, int n_max);

struct FactorizationReport {
  std::vector<double> residuals;  // per index: max_x ||F_n - Q_n F_0|| / ||F_n||
  double max_residual = 0.0;
  bool pass = false;
};

/// `f(n, x)` supplies F_n(x) independently of the recursion.
FactorizationReport verify_factorization(const PreSequence& ps, std::span<const MatrixPolynomial> qs,
                                         const std::function<Matrix(int, double)>& f,
                                         std::span<const double> xs, double tol);

/// Dense table of blocks (P_i, P_j).
/// Single coefficient entry whose correction best explains a recursion misfit.
struct OffendingEntry {
  int index = 0;         // n of the failing relation
  char coefficient = 0;  // 'A', 'B' or 'C'
  Index row = 0;
  Index col = 0;
  Complex correction;    // least-squares amount to add to the entry
  double explained = 0;  // fraction of the residual norm removed by the correction
};

struct RecursionReport {
  std::vector<double> residuals;  // per index: max_x relative misfit
  double max_residual = 0.0;
  bool pass = false;
  std::vector<OffendingEntry> offenders;  // one per failing index
};

/// Checks s(x) F_n = A_n F_{n-1} + B_n F_n + C_n F_{n+1} for n = 0..n_max,
/// relative to max(||lhs||, ||rhs||).
RecursionReport check_recursion(const std::function<ThreeTermCoefficients(int)>& coefficients,
                                const std::function<Matrix(int, double)>& f, const SpectralMap& map,
                                int n_max, std::span<const double> xs, double tol);

class GramMatrix {
 public:
  explicit GramMatrix(int count, Index size);

  int count() const noexcept { return count_; }
  const Matrix& operator()(int i, int j) const { return blocks_[index(i, j)]; }
  Matrix& operator()(int i, int j) { return blocks_[index(i, j)]; }

  /// max over i != j of ||G_ij|| / sqrt(||G_ii|| ||G_jj||).
  double max_relative_offdiagonal() const;
  bool diagonal_positive_definite() const;

 private:
  std::size_t index(int i, int j) const;
  int count_;
  std::vector<Matrix> blocks_;
};

/// Throws std::domain_error when a diagonal block is not positive definite.
GramMatrix gram_matrix(std::span<const MatrixPolynomial> ps, const MatrixWeight& w,
                       const QuadratureRule& rule);

/// Monic sequence for a weight, generated by the Stieltjes procedure:
/// x P_n = P_{n+1} + Bt_n P_n + At_n P_{n-1}, with Bt_n, At_n read off
/// from quadrature inner products. At[0] is zero.
struct MonicRecursion {
  std::vector<Matrix> a_tilde;
  std::vector<Matrix> b_tilde;
  std::vector<MatrixPolynomial> monic;  // P_0..P_{n_max}
  double max_relative_offdiagonal = 0.0;
};

/// Throws SingularMatrixError (index n) when (P_n, P_n) is singular.
MonicRecursion recursion_from_moments(const MatrixWeight& w, int n_max, const QuadratureRule& rule);

struct MonicNormalization {
  std::vector<MatrixPolynomial> monic;
  std::vector<Matrix> leading;
};

/// Q_n = M_n P_n with M_n = LC(Q_n). Throws SingularMatrixError on a
/// singular leading coefficient.
MonicNormalization monic_normalize(std::span<const MatrixPolynomial> qs);

}  // namespace mopkit
