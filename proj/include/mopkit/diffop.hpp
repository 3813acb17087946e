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

#include <array>
#include <functional>
#include <span>
#include <vector>

#include "mopkit/matpoly.hpp"

namespace mopkit {

/// D = sum_i d^i F_i(x) acting from the right: Q D = sum_i Q^{(i)}(x) F_i(x).
/// Coefficients are matrix polynomials; coeffs()[i] multiplies d^i.
class RightDiffOperator {
 public:
  explicit RightDiffOperator(std::vector<MatrixPolynomial> coeffs);

  int order() const noexcept { return static_cast<int>(coeffs_.size()) - 1; }
  Index size() const noexcept { return coeffs_.front().size(); }
  const std::vector<MatrixPolynomial>& coeffs() const noexcept { return coeffs_; }

  /// True when the d^j coefficient has degree <= j for every j.
  bool is_hypergeometric_shape() const;

 private:
  std::vector<MatrixPolynomial> coeffs_;
};

/// Right operator with arbitrary evaluable coefficients, for operators
/// whose coefficients are rational (poles excluded by the caller).
struct SampledRightOperator {
  std::vector<MatrixFunction> coeffs;

  int order() const noexcept { return static_cast<int>(coeffs.size()) - 1; }
};

/// Value and first two derivatives of a matrix function at one point.
struct MatrixJet {
  Matrix value;
  Matrix first;
  Matrix second;
};

using JetFunction = std::function<MatrixJet(double)>;

/// Exact jet of a matrix polynomial.
JetFunction polynomial_jet(MatrixPolynomial p);

/// d^2 x(1-x) + d (C - x U) - V.
struct HypergeometricConstants {
  Matrix C;
  Matrix U;
  Matrix V;
};

MatrixPolynomial apply_right(const RightDiffOperator& d, const MatrixPolynomial& q);

/// (Q D)(x) for a sampled operator; q must be polynomial.
Matrix apply_right_sampled(const SampledRightOperator& d, const MatrixPolynomial& q, double x);

/// Order-2 operator with coefficients [-V, C - x U, x(1-x) I].
RightDiffOperator hyper_operator(const HypergeometricConstants& k);

struct EigenReport {
  std::vector<double> residuals;  // per sequence index, max over samples
  double max_residual = 0.0;
  bool pass = false;
};

/// Residual ||(Q_n D)(x) - Lambda_n Q_n(x)|| / ||Lambda_n Q_n(x)||, absolute
/// when Lambda_n Q_n(x) vanishes.
EigenReport check_eigenfunction(const RightDiffOperator& d, std::span<const MatrixPolynomial> qs,
                                std::span<const Matrix> lambdas, std::span<const double> xs, double tol);

EigenReport check_eigenfunction_sampled(const SampledRightOperator& d, std::span<const MatrixPolynomial> fs,
                                        std::span<const Matrix> lambdas, std::span<const double> xs,
                                        double tol);

struct HyperExtraction {
  HypergeometricConstants constants;
  double affine_residual = 0.0;     // max relative misfit of G(x) = C - x U
  double constancy_residual = 0.0;  // max relative spread of V(x)
};

inline constexpr double kExtractionTolerance = 1e-9;

/// Recovers C, U, V for an operator D = d^2 x(1-x) + d A1(x) + A0(x) with
/// Psi D Psi^{-1} hypergeometric:
///   G(x) = (2x(1-x) Psi' + Psi A1) Psi^{-1} = C - x U,
///   V    = -(x(1-x) Psi'' + Psi' A1 + Psi A0) Psi^{-1}.
/// C, U are fitted from the two samples nearest the middle of the sample
/// range and V is taken at the sample nearest the middle; the others verify.
/// Throws SingularMatrixError when Psi is singular at a sample and
/// std::domain_error when G is not affine or V not constant within `tol`.
HyperExtraction extract_hyper_constants(const JetFunction& psi, const MatrixFunction& a1,
                                        const MatrixFunction& a0, std::span<const double> xs,
                                        double tol = kExtractionTolerance);

/// Pointwise coefficients [c0, c1, c2] of Psi D Psi^{-1} for an order-2
/// sampled operator D, where Q (Psi D Psi^{-1}) = ((Q Psi) D) Psi^{-1}.
std::array<Matrix, 3> conjugate_operator_numeric(const SampledRightOperator& d, const JetFunction& psi,
                                                 double x);

}  // namespace mopkit
