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

#include "mopkit/cp2_model.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <stdexcept>

#include "mopkit/hyper.hpp"

namespace mopkit::cp2 {

namespace {

void require_params(int n, int w) {
  if (n < 0 || w < 0) throw std::invalid_argument("cp2: n and w must be nonnegative");
}

double pochhammer(double a, int k) {
  double r = 1.0;
  for (int i = 0; i < k; ++i) r *= a + i;
  return r;
}

double factorial(int k) { return pochhammer(1.0, k); }

double sign(int k) { return k % 2 == 0 ? 1.0 : -1.0; }

Matrix mat2(Complex a, Complex b, Complex c, Complex d) {
  Matrix m(2, 2);
  m << a, b, c, d;
  return m;
}

HyperSeriesParams series(std::vector<double> num, std::vector<double> den) {
  HyperSeriesParams p;
  p.numerator = std::move(num);
  p.denominator = std::move(den);
  return p;
}

// The four entries of F_w as series parameters, row-major.
std::array<HyperSeriesParams, 4> f_entries(const Params& p) {
  const double n = p.n;
  const double w = p.w;
  const double c = p.c();
  return {
      series({-w, w + n + 3, 2}, {3, 1}),
      series({-w, w + n + 3}, {3}),
      series({-w, w + n + 4}, {3}),
      series({-w - 1, w + n + 3, c + 1}, {3, c}),
  };
}

}  // namespace

double Params::c() const {
  const double num = (w + 1.0) * (w + n + 3.0);
  return num / (num + n);
}

double Params::s_w() const { return w * (w + n + 4.0) + 3.0 * (n + 2.0); }

Matrix F(const Params& p, double x) {
  require_params(p.n, p.w);
  const auto e = f_entries(p);
  return mat2(pfq(e[0], x), pfq(e[1], x), pfq(e[2], x), pfq(e[3], x));
}

MatrixPolynomial F_polynomial(const Params& p) {
  require_params(p.n, p.w);
  const auto e = f_entries(p);
  std::array<std::vector<double>, 4> c;
  std::size_t len = 0;
  for (std::size_t i = 0; i < 4; ++i) {
    c[i] = pfq_coefficients(e[i]);
    len = std::max(len, c[i].size());
  }
  std::vector<Matrix> coeffs(len, Matrix::Zero(2, 2));
  for (std::size_t i = 0; i < 4; ++i) {
    for (std::size_t k = 0; k < c[i].size(); ++k) {
      coeffs[k](static_cast<Index>(i / 2), static_cast<Index>(i % 2)) = c[i][k];
    }
  }
  return MatrixPolynomial(std::move(coeffs));
}

Matrix weight_W(int n, double x) {
  const double base = x * std::pow(1.0 - x, n);
  return mat2(base * (1.0 - x), 0.0, 0.0, base);
}

Matrix weight_Wprime(int n, double x) {
  const double base = x * std::pow(1.0 - x, n);
  const double off = 2.0 - (n + 3.0) * x;
  const double t = 1.0 - (n + 2.0) * x;
  return base * mat2(2.0 - x, off, off, 1.0 - x + t * t);
}

MatrixWeight make_weight_W(int n) {
  require_params(n, 0);
  return MatrixWeight(2, 0.0, 1.0, [n](double x) { return weight_W(n, x); }, n + 2);
}

MatrixWeight make_weight_Wprime(int n) {
  require_params(n, 0);
  return MatrixWeight(2, 0.0, 1.0, [n](double x) { return weight_Wprime(n, x); }, n + 3);
}

ThreeTermCoefficients recursion_coeffs(int n, int w) {
  require_params(n, w);
  const double W = w;
  const double N = n;
  ThreeTermCoefficients t;
  t.A = mat2(W * (W + N) * (W + N + 2) / ((W + N + 1) * (2 * W + N + 2) * (2 * W + N + 3)),
             W / ((W + 1) * (W + N + 1) * (2 * W + N + 3)),
             0.0,
             W * (W + 2) * (W + N + 1) / ((W + 1) * (2 * W + N + 3) * (2 * W + N + 4)));
  const double b11 = (W + 1) * (W + 1) * (W + 3) / ((W + 2) * (2 * W + N + 3) * (2 * W + N + 4)) +
                     1.0 / ((W + 1) * (W + 2) * (W + N + 1) * (W + N + 2)) +
                     (W + N) * (W + N + 2) * (W + N + 2) / ((W + N + 1) * (2 * W + N + 2) * (2 * W + N + 3));
  const double b22 = (W + 1) * (W + 3) * (W + 3) / ((W + 2) * (2 * W + N + 4) * (2 * W + N + 5)) +
                     (W + N + 1) * (W + N + 1) * (W + N + 3) / ((W + N + 2) * (2 * W + N + 3) * (2 * W + N + 4));
  t.B = mat2(b11, (W + N + 3) / ((W + 2) * (W + N + 2) * (2 * W + N + 3)),
             (W + N + 1) / ((W + 1) * (W + N + 2) * (2 * W + N + 4)), b22);
  t.C = mat2((W + 1) * (W + 3) * (W + N + 3) / ((W + 2) * (2 * W + N + 3) * (2 * W + N + 4)),
             0.0,
             (W + 3) / ((W + 2) * (W + N + 3) * (2 * W + N + 4)),
             (W + 3) * (W + N + 2) * (W + N + 4) / ((W + N + 3) * (2 * W + N + 4) * (2 * W + N + 5)));
  return t;
}

Matrix closed_form_Q(const Params& p, double x, Formula formula) {
  require_params(p.n, p.w);
  const double n = p.n;
  const double w = p.w;
  const double s = p.s_w();
  const double k = w * (w + n + 3) / (3 * (n + 2));
  // k vanishes at w = 0, where the 2F1(1, n+4; 4; x) companion does not terminate
  const double f = p.w == 0 ? 0.0 : pfq(series({-w + 1, w + n + 4}, {4}), x);
  const double g = pfq(series({-w, w + n + 4, s + 1}, {4, s}), x);
  const double q22_scale = formula == Formula::printed ? s / (n + 2) : s / (3 * (n + 2));
  return mat2(pfq(series({-w, w + n + 3, 2}, {3, 1}), x) + k * f,
              -k * f,
              pfq(series({-w, w + n + 4}, {3}), x) - s / (3 * (n + 2)) * g,
              q22_scale * g);
}

LeadingCoeffs leading_coeffs(int n, int w, Formula formula) {
  require_params(n, w);
  const Params p{n, w};
  const double c = p.c();
  const double s = p.s_w();
  const double N = n;
  LeadingCoeffs out;
  out.F = mat2(0.0, 0.0, 0.0,
               sign(w + 1) * pochhammer(w + N + 3, w + 1) * (c + w + 1) / (pochhammer(3, w + 1) * c));
  const double q11 = sign(w) * pochhammer(w + N + 3, w) * 2.0 / ((2.0 + w) * factorial(w));
  if (formula == Formula::printed) {
    out.Q = mat2(q11, 0.0,
                 sign(w) * pochhammer(w + N + 4, w) * w * (w - 3.0) / (pochhammer(3, w + 1) * (N + 2)),
                 sign(w) * pochhammer(w + N + 4, w) * (s + w) / ((N + 2) * pochhammer(4, w)));
  } else {
    out.Q = mat2(q11, 0.0,
                 sign(w + 1) * pochhammer(w + N + 4, w) * w * (w + 3.0) / (pochhammer(3, w + 1) * (N + 2)),
                 sign(w) * pochhammer(w + N + 4, w) * (s + w) / (3.0 * (N + 2) * pochhammer(4, w)));
  }
  return out;
}

MatrixPolynomial operator_D_first_order(int n) {
  require_params(n, 0);
  return MatrixPolynomial({mat2(2.0, 0.0, 0.0, 2.0), mat2(-(n + 4.0), 0.0, 0.0, -(n + 3.0))});
}

MatrixFunction operator_D_zeroth_order(int n) {
  require_params(n, 0);
  return [](double x) -> Matrix {
    if (x == 0.0) throw std::domain_error("cp2 operator D: zeroth-order coefficient has a pole at x = 0");
    return mat2(-1.0, 1.0 - x, 1.0, -1.0 + x) / x;
  };
}

SampledRightOperator operator_D(int n) {
  const MatrixPolynomial a1 = operator_D_first_order(n);
  return SampledRightOperator{{
      operator_D_zeroth_order(n),
      [a1](double x) { return a1(x); },
      [](double x) -> Matrix { return x * (1.0 - x) * Matrix::Identity(2, 2); },
  }};
}

HypergeometricConstants tilde_constants(int n) {
  require_params(n, 0);
  const double N = n;
  HypergeometricConstants k;
  k.C = mat2(2 * N + 5, -1.0, -2 * N - 3, 4 * N + 7) / (N + 2);
  k.U = mat2(N + 4, 0.0, -1.0, N + 5);
  k.V = mat2(0.0, 0.0, 0.0, N + 2);
  return k;
}

Eigenvalues lambda_w(int n, int w) {
  require_params(n, w);
  Eigenvalues e;
  e.lambda1 = -static_cast<double>(w) * (w + n + 3);
  e.lambda2 = -static_cast<double>(w) * (w + n + 4) - n - 2;
  e.Lambda = mat2(e.lambda1, 0.0, 0.0, e.lambda2);
  return e;
}

Matrix printed_initial_rows(int n, int w) {
  require_params(n, w);
  const double scale = w / (3.0 * (n + 2));
  return scale * mat2(w + n + 3.0, -(w + n + 3.0), -(w + n + 4.0), w + n + 4.0);
}

PreSequence make_presequence(int n) {
  require_params(n, 0);
  PreSequence ps{
      .size = 2,
      .f0 = [n](double x) { return F(Params{n, 0}, x); },
      .f0_polynomial = F_polynomial(Params{n, 0}),
      .coefficients = [n](int w) { return recursion_coeffs(n, w); },
      .weight = make_weight_W(n),
      .spectral_map = SpectralMap{-1.0, 1.0},
  };
  return ps;
}

int default_nodes(int n, int w_max) { return w_max + n + 8; }

}  // namespace mopkit::cp2
