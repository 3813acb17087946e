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

#include <optional>
#include <vector>

#include "mopkit/matpoly.hpp"

namespace mopkit {

/// Parameters of pFq(a_1..a_p; b_1..b_q; x).
struct HyperSeriesParams {
  std::vector<double> numerator;
  std::vector<double> denominator;
  int truncation = 512;
  double tolerance = 1e-16;
};

/// Number of terms of a terminating series (-a for the first nonpositive
/// integer numerator a, plus one), or nullopt when the series does not
/// terminate.
std::optional<int> terminating_length(const HyperSeriesParams& params);

/// Ascending-power coefficients of a terminating series. Throws
/// std::domain_error when the series does not terminate or a denominator
/// Pochhammer symbol vanishes before termination.
std::vector<double> pfq_coefficients(const HyperSeriesParams& params);

/// Series value, summed in ascending order. Terminating series are summed
/// exactly; otherwise |x| < 1 is required and the series is truncated once
/// a term drops below tolerance * |partial sum|. Throws std::domain_error
/// on a vanishing denominator or when the truncation budget runs out.
double pfq(const HyperSeriesParams& params, double x);

/// Coefficient vectors y_i of the power-series solution y(x) = sum x^i y_i,
/// y_0 = v0, of x(1-x) y'' + (Ct - x Ut) y' - Vshift y = 0:
///   y_{i+1} = ((i+1)(Ct + i I))^{-1} (i(i-1) I + i Ut + Vshift) y_i.
/// Generation stops early when the product on the right cancels to
/// rounding level, which is how polynomial solutions are detected.
struct Matrix2H1Series {
  std::vector<Vector> coefficients;
  bool terminated = false;
};

inline constexpr int kDefault2H1Terms = 64;
inline constexpr double kDefault2H1Tolerance = 1e-14;

/// Throws SingularMatrixError carrying i when Ct + i I is singular.
Matrix2H1Series matrix_2H1_series(const Matrix& ut, const Matrix& vshift, const Matrix& ct,
                                  const Vector& v0, int terms = kDefault2H1Terms);

/// Value of the series at x; a non-terminating series must have a last
/// term below tolerance * |sum| (std::domain_error otherwise).
Vector evaluate_2H1(const Matrix2H1Series& series, double x, double tolerance = kDefault2H1Tolerance);

/// First and second derivatives of the truncated series at x.
Vector evaluate_2H1_derivative(const Matrix2H1Series& series, double x, int order);

/// 2H1(Ut, Vshift; Ct; x) v0.
Vector matrix_2H1(const Matrix& ut, const Matrix& vshift, const Matrix& ct, double x, const Vector& v0,
                  int terms = kDefault2H1Terms);

/// max over xs of |x(1-x) y'' + (Ct - x Ut) y' - Vshift y|, each sample
/// scaled by the largest of the three term norms.
double hyper_ode_residual(const Matrix2H1Series& series, const Matrix& ut, const Matrix& vshift,
                          const Matrix& ct, const std::vector<double>& xs);

}  // namespace mopkit
