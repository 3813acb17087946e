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

#include "mopkit/diffop.hpp"
#include "mopkit/matpoly.hpp"
#include "mopkit/presequence.hpp"
#include "mopkit/weights.hpp"

// 2x2 matrix spherical functions of type (n, 1) on the complex projective
// plane SU(3)/U(2), in the local coordinate x in (0, 1).
namespace mopkit::cp2 {

struct Params {
  int n = 0;
  int w = 0;

  /// c = (w+1)(w+n+3) / ((w+1)(w+n+3) + n)
  double c() const;
  /// s_w = w(w+n+4) + 3(n+2)
  double s_w() const;
};

/// Which version of a closed-form display to use. `printed` reproduces the
/// published formula verbatim; `corrected` fixes the entries that disagree
/// with F_w F_0^{-1} (the (2,2) entry of Q_w carries a spurious factor 3,
/// and LC(Q_w) inherits it together with a wrong (2,1) entry).
enum class Formula { printed, corrected };

/// F_w(x), entries evaluated through terminating 3F2 / 2F1 series.
Matrix F(const Params& p, double x);
/// F_w as a matrix polynomial (degree w + 1).
MatrixPolynomial F_polynomial(const Params& p);

/// diag(x(1-x)^{n+1}, x(1-x)^n)
Matrix weight_W(int n, double x);
/// x(1-x)^n [[2-x, 2-(n+3)x], [2-(n+3)x, 1-x+(1-(n+2)x)^2]]
Matrix weight_Wprime(int n, double x);
MatrixWeight make_weight_W(int n);
MatrixWeight make_weight_Wprime(int n);

/// Coefficients of (1-x) F_w = A_w F_{w-1} + B_w F_w + C_w F_{w+1}.
ThreeTermCoefficients recursion_coeffs(int n, int w);

/// Q_w(x) = F_w(x) F_0(x)^{-1} from the closed-form entries.
Matrix closed_form_Q(const Params& p, double x, Formula formula = Formula::corrected);

struct LeadingCoeffs {
  Matrix F;  // LC(F_w), degree w + 1
  Matrix Q;  // LC(Q_w), degree w
};
LeadingCoeffs leading_coeffs(int n, int w, Formula formula = Formula::corrected);

/// D = d^2 x(1-x) + d diag(2-(n+4)x, 2-(n+3)x) + (1/x)[[-1, 1-x], [1, -1+x]].
/// The x^0 coefficient throws std::domain_error at x = 0.
SampledRightOperator operator_D(int n);
MatrixPolynomial operator_D_first_order(int n);
MatrixFunction operator_D_zeroth_order(int n);

/// C, U, V of F_0 D F_0^{-1} = d^2 x(1-x) + d (C - x U) - V.
HypergeometricConstants tilde_constants(int n);

struct Eigenvalues {
  Matrix Lambda;
  double lambda1 = 0.0;  // -w(w+n+3)
  double lambda2 = 0.0;  // -w(w+n+4) - n - 2
};
Eigenvalues lambda_w(int n, int w);

/// Published initial row vectors Q_{1,w}(0), Q_{2,w}(0) stacked as rows.
/// These equal the rows of Q_w(0) - I, not of Q_w(0).
Matrix printed_initial_rows(int n, int w);

/// Pre-sequence with F_0, W, the (1-x)-recursion and spectral map s = 1 - x.
PreSequence make_presequence(int n);

/// Default Gauss-Legendre node count for sweeps up to w_max.
int default_nodes(int n, int w_max);

}  // namespace mopkit::cp2
