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

#include <cmath>

#include "doctest.h"
#include "mopkit/cp2_model.hpp"
#include "mopkit/hyper.hpp"
#include "mopkit/presequence.hpp"
#include "support/test_support.hpp"

using namespace mopkit;
using mopkit::testing::Rng;

namespace {

HyperSeriesParams params(std::vector<double> a, std::vector<double> b) {
  HyperSeriesParams p;
  p.numerator = std::move(a);
  p.denominator = std::move(b);
  return p;
}

Vector vec(std::initializer_list<Complex> v) {
  Vector out(static_cast<Index>(v.size()));
  Index i = 0;
  for (const Complex c : v) out(i++) = c;
  return out;
}

double vec_rel_diff(const Vector& a, const Vector& b) {
  const double scale = std::max(a.norm(), b.norm());
  return scale > 0.0 ? (a - b).norm() / scale : 0.0;
}

}  // namespace

TEST_CASE("pfq small cases") {
  CHECK(pfq(params({-3, 2, 5}, {4, 1}), 0.0) == 1.0);
  CHECK(pfq(params({0.5, 0.7}, {1.3}), 0.0) == 1.0);
  for (const double x : {-0.7, 0.25, 0.9}) {
    CHECK(pfq(params({-1, 4.5}, {2.5}), x) == doctest::Approx(1.0 - 4.5 / 2.5 * x).epsilon(1e-15));
  }
  CHECK(pfq(params({-1, 5}, {3}), 0.5) == doctest::Approx(1.0 / 6.0).epsilon(1e-15));
  // 2F1(-2, 1; -5; x) = 1 + 0.4x + 0.1x^2; the denominator never reaches zero
  CHECK(pfq(params({-2, 1}, {-5}), 0.5) == doctest::Approx(1.225).epsilon(1e-15));
}

TEST_CASE("pfq non-terminating closed forms") {
  for (const double x : {-0.6, 0.1, 0.5, 0.8}) {
    CHECK(pfq(params({1, 1}, {2}), x) == doctest::Approx(-std::log1p(-x) / x).epsilon(1e-13));
    CHECK(pfq(params({}, {}), x) == doctest::Approx(std::exp(x)).epsilon(1e-14));
    // 2F1(a, b; b; x) = (1 - x)^{-a}
    CHECK(pfq(params({0.3, 2.5}, {2.5}), x) == doctest::Approx(std::pow(1.0 - x, -0.3)).epsilon(1e-13));
  }
}

TEST_CASE("pfq terminating structure and errors") {
  CHECK(terminating_length(params({-3, 2}, {4})) == 4);
  CHECK(terminating_length(params({2, 0}, {4})) == 1);
  CHECK_FALSE(terminating_length(params({0.5}, {2})).has_value());
  CHECK(pfq_coefficients(params({-2, 3}, {1})) == std::vector<double>{1.0, -6.0, 6.0});
  CHECK_THROWS_AS(pfq_coefficients(params({0.5}, {2})), std::domain_error);

  CHECK_THROWS_AS(pfq(params({-5, 1}, {-2}), 0.3), std::domain_error);
  CHECK_THROWS_AS(pfq(params({0.5, 1}, {2}), 1.0), std::domain_error);
  CHECK_THROWS_AS(pfq(params({0.5, 1}, {2}), -1.5), std::domain_error);
}

TEST_CASE("matrix series against the power-matching oracle") {
  Rng rng(61);
  for (int trial = 0; trial < 10; ++trial) {
    const Index n = 1 + trial % 3;
    const Matrix ct = 2.5 * Matrix::Identity(n, n) + 0.3 * rng.matrix(n);
    const Matrix ut = rng.matrix(n);
    const Matrix vs = rng.matrix(n);
    Vector v0(n);
    for (Index i = 0; i < n; ++i) v0(i) = rng.complex();
    const auto series = matrix_2H1_series(ut, vs, ct, v0, 7);
    REQUIRE(series.coefficients.size() == 7);
    CHECK_FALSE(series.terminated);
    const auto oracle = testing::power_matching_coefficients(ut, vs, ct, v0, 6);
    for (std::size_t i = 0; i <= 6; ++i) {
      CHECK(vec_rel_diff(series.coefficients[i], oracle[i]) <= 1e-12);
    }
  }
}

TEST_CASE("matrix series at the origin and derivatives") {
  Rng rng(62);
  const Matrix ct = 3.0 * Matrix::Identity(2, 2) + 0.2 * rng.matrix(2);
  const Matrix ut = rng.matrix(2);
  const Matrix vs = rng.matrix(2);
  const Vector v0 = vec({1.0, Complex(0.5, -0.25)});
  CHECK(matrix_2H1(ut, vs, ct, 0.0, v0) == v0);

  const auto series = matrix_2H1_series(ut, vs, ct, v0);
  const double x = 0.3;
  const double h = 1e-5;
  const Vector fd = (evaluate_2H1(series, x + h) - evaluate_2H1(series, x - h)) / (2.0 * h);
  CHECK(vec_rel_diff(evaluate_2H1_derivative(series, x, 1), fd) <= 1e-8);
  CHECK(vec_rel_diff(evaluate_2H1_derivative(series, x, 0), evaluate_2H1(series, x)) <= 1e-15);
  CHECK_THROWS_AS(evaluate_2H1_derivative(series, x, -1), std::invalid_argument);
  CHECK(hyper_ode_residual(series, ut, vs, ct, {0.1, 0.3, 0.5}) <= 1e-9);
}

TEST_CASE("scalar reduction") {
  // x(1-x)y'' + (c - (a+b+1)x)y' - ab y = 0 is solved by 2F1(a, b; c; x)
  const std::vector<std::array<double, 3>> cases{{-3, 2.5, 1.5}, {0.5, 0.7, 1.3}, {1.0, 1.0, 2.0}, {-6, 7, 3}};
  for (const auto& [a, b, c] : cases) {
    const Matrix ut = Matrix::Constant(1, 1, a + b + 1);
    const Matrix vs = Matrix::Constant(1, 1, a * b);
    const Matrix ct = Matrix::Constant(1, 1, c);
    const Vector one = Vector::Ones(1);
    for (const double x : {0.05, 0.3, 0.6}) {
      const auto p = params({a, b}, {c});
      const double expected = pfq(p, x);
      // terminating sums cancel; measure against the sum of term magnitudes
      double scale = std::abs(expected);
      if (terminating_length(p)) {
        scale = 0.0;
        double xk = 1.0;
        for (const double ck : pfq_coefficients(p)) {
          scale += std::abs(ck) * xk;
          xk *= x;
        }
      }
      CHECK(std::abs(matrix_2H1(ut, vs, ct, x, one)(0) - expected) <= 1e-12 * scale);
    }
  }
}

TEST_CASE("termination") {
  // scalar: raising factor i(i-1) + i u + v vanishes at i = w
  for (int w = 0; w <= 6; ++w) {
    const double u = 3.5;
    const Matrix ut = Matrix::Constant(1, 1, u);
    const Matrix vs = Matrix::Constant(1, 1, -(w * (w - 1.0) + w * u));
    const auto series = matrix_2H1_series(ut, vs, Matrix::Constant(1, 1, 2.0), Vector::Ones(1));
    CHECK(series.terminated);
    CHECK(series.coefficients.size() == static_cast<std::size_t>(w + 1));
    CHECK(hyper_ode_residual(series, ut, vs, Matrix::Constant(1, 1, 2.0), {0.2, 0.5, 0.9}) <= 1e-12);
  }
}

TEST_CASE("errors") {
  const Matrix ct = -2.0 * Matrix::Identity(2, 2);
  const Matrix ut = Matrix::Identity(2, 2);
  const Matrix vs = Matrix::Identity(2, 2);
  const Vector v0 = vec({1.0, 1.0});
  try {
    matrix_2H1_series(ut, vs, ct, v0);
    FAIL("expected SingularMatrixError");
  } catch (const SingularMatrixError& e) {
    CHECK(e.index() == 2);
  }
  CHECK_THROWS_AS(matrix_2H1_series(ut, vs, Matrix::Identity(3, 3), v0), std::invalid_argument);
  CHECK_THROWS_AS(matrix_2H1_series(ut, vs, 2.0 * ut, v0, 0), std::invalid_argument);

  const auto short_series = matrix_2H1_series(ut, vs, 2.0 * ut, v0, 4);
  CHECK_THROWS_AS(evaluate_2H1(short_series, 0.9), std::domain_error);
}

TEST_CASE("rows of Q_w for cp2") {
  Rng rng(63);
  const auto xs = rng.samples(10, 0.0, 1.0);
  for (int n : {0, 1, 2, 5}) {
    const auto qs = build_Q(cp2::make_presequence(n), 5);
    const auto k = cp2::tilde_constants(n);
    const Matrix ct = k.C.transpose();
    const Matrix ut = k.U.transpose();
    for (int w = 0; w <= 5; ++w) {
      const auto& q = qs[static_cast<std::size_t>(w)];
      const auto ev = cp2::lambda_w(n, w);
      const Matrix q0 = q(0.0);
      for (int j = 0; j < 2; ++j) {
        const double lambda = j == 0 ? ev.lambda1 : ev.lambda2;
        const Matrix vs = k.V.transpose() + lambda * Matrix::Identity(2, 2);
        const Vector v0 = q0.row(j).transpose();
        const auto series = matrix_2H1_series(ut, vs, ct, v0);
        CHECK(series.terminated);
        CHECK(series.coefficients.size() <= static_cast<std::size_t>(w + 1));
        CHECK(hyper_ode_residual(series, ut, vs, ct, xs) <= 1e-9);
        for (const double x : xs) {
          const Vector row = q(x).row(j).transpose();
          CHECK(vec_rel_diff(evaluate_2H1(series, x), row) <= 1e-9);
        }
        // the printed initial vectors do not give Q_w(0) (they are off by the identity row)
        if (w > 0) {
          const Vector printed = cp2::printed_initial_rows(n, w).row(j).transpose();
          CHECK(vec_rel_diff(printed, v0) > 1e-3);
          const Vector shifted = printed + Matrix::Identity(2, 2).row(j).transpose();
          CHECK(vec_rel_diff(shifted, v0) <= 1e-12);
        }
      }
    }
  }
}
