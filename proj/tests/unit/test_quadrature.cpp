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
#include "mopkit/quadrature.hpp"
#include "mopkit/weights.hpp"
#include "support/test_support.hpp"

using namespace mopkit;
using mopkit::testing::rel_diff;
using mopkit::testing::Rng;

TEST_CASE("rule structure") {
  for (int m : {1, 2, 3, 7, 16, 40, 81}) {
    const auto rule = gauss_legendre_rule(m, 0.0, 1.0);
    REQUIRE(rule.size() == m);
    CHECK(rule.exactness_degree() == 2 * m - 1);
    double sum = 0.0;
    for (int i = 0; i < m; ++i) {
      CHECK(rule.nodes()[i] > 0.0);
      CHECK(rule.nodes()[i] < 1.0);
      if (i > 0) CHECK(rule.nodes()[i] > rule.nodes()[i - 1]);
      CHECK(rule.weights()[i] > 0.0);
      sum += rule.weights()[i];
    }
    CHECK(std::abs(sum - 1.0) <= 1e-12);
  }
}

TEST_CASE("midpoint rule") {
  const auto rule = gauss_legendre_rule(1, 0.0, 1.0);
  CHECK(rule.nodes()[0] == doctest::Approx(0.5).epsilon(1e-15));
  CHECK(rule.weights()[0] == doctest::Approx(1.0).epsilon(1e-15));
}

TEST_CASE("monomial exactness") {
  for (int m = 1; m <= 30; ++m) {
    const auto rule = gauss_legendre_rule(m, 0.0, 1.0);
    const auto ident = [](double x) -> Matrix { return x * Matrix::Identity(1, 1); };
    CHECK(std::abs(integrate_matrix(ident, rule)(0, 0).real() - 0.5) <= 1e-14);
    const int d = 2 * m - 1;
    const auto mono = [d](double x) -> Matrix { return std::pow(x, d) * Matrix::Identity(1, 1); };
    // closed form: int_0^1 x^d dx = 1/(d+1) = 1/(2m)
    CHECK(std::abs(integrate_matrix(mono, rule)(0, 0).real() - 1.0 / (2.0 * m)) <= 1e-13);
  }
}

TEST_CASE("errors") {
  CHECK_THROWS_AS(gauss_legendre_rule(0, 0.0, 1.0), std::invalid_argument);
  CHECK_THROWS_AS(gauss_legendre_rule(3, 1.0, 1.0), std::invalid_argument);
  CHECK_THROWS_AS(gauss_legendre_rule(3, 2.0, 1.0), std::invalid_argument);
  const auto rule = gauss_legendre_rule(3, 0.0, 1.0);
  int calls = 0;
  const auto changing = [&](double) -> Matrix {
    const Index n = calls++ == 0 ? 1 : 2;
    return Matrix::Identity(n, n);
  };
  CHECK_THROWS_AS(integrate_matrix(changing, rule), std::invalid_argument);
}

TEST_CASE("integrate_matrix simple integrands") {
  const auto rule = gauss_legendre_rule(5, 0.0, 1.0);
  CHECK(rel_diff(integrate_matrix([](double) -> Matrix { return Matrix::Identity(2, 2); }, rule),
                 Matrix::Identity(2, 2)) <= 1e-15);
  CHECK(rel_diff(integrate_matrix([](double x) -> Matrix { return x * Matrix::Identity(2, 2); }, rule),
                 0.5 * Matrix::Identity(2, 2)) <= 1e-15);
}

TEST_CASE("zeroth moment of W' against scalar antiderivatives") {
  // n = 1: W' = x(1-x) [[2-x, 2-4x], [2-4x, 1-x+(1-3x)^2]]
  //   int 2x - 3x^2 + x^3              = 1 - 1 + 1/4      = 1/4
  //   int 2x - 6x^2 + 4x^3             = 1 - 2 + 1        = 0
  //   int 2x - 9x^2 + 16x^3 - 9x^4     = 1 - 3 + 4 - 9/5  = 1/5
  const auto rule = gauss_legendre_rule(cp2::default_nodes(1, 0), 0.0, 1.0);
  const Matrix m0 = integrate_matrix(
      [](double x) -> Matrix {
        const Matrix f0 = cp2::F({1, 0}, x);
        return f0 * cp2::weight_W(1, x) * f0.adjoint();
      },
      rule);
  CHECK(rel_diff(m0, mopkit::testing::mat2(0.25, 0.0, 0.0, 0.2)) <= 1e-14);
}

TEST_CASE("inner product axioms on random inputs") {
  Rng rng(31);
  const auto w = cp2::make_weight_W(1);
  const auto rule = gauss_legendre_rule(20, 0.0, 1.0);
  for (int trial = 0; trial < 20; ++trial) {
    const auto p = rng.polynomial(2, trial % 5);
    const auto q = rng.polynomial(2, (trial + 2) % 5);
    const auto r = rng.polynomial(2, 3);
    const Matrix t = rng.matrix(2);
    const Complex a = rng.complex();
    const Complex b = rng.complex();

    const Matrix pq = inner_product(p, q, w, rule);
    CHECK(rel_diff(pq.adjoint(), inner_product(q, p, w, rule)) <= 1e-11);
    CHECK(rel_diff(inner_product(t * p, q, w, rule), t * pq) <= 1e-11);
    const Matrix lin = inner_product(poly_scale(a, p) + poly_scale(b, q), r, w, rule);
    CHECK(rel_diff(lin, a * inner_product(p, r, w, rule) + b * inner_product(q, r, w, rule)) <= 1e-11);

    const Matrix pp = inner_product(p, p, w, rule);
    Eigen::SelfAdjointEigenSolver<Matrix> es(0.5 * (pp + pp.adjoint()));
    CHECK(es.eigenvalues().minCoeff() >= -1e-12 * es.eigenvalues().maxCoeff());
  }

  const auto id = MatrixPolynomial::identity(2);
  const Matrix ii = inner_product(id, id, w, rule);
  Eigen::SelfAdjointEigenSolver<Matrix> es(ii);
  CHECK(es.eigenvalues().minCoeff() > 0.0);
  CHECK_THROWS_AS(inner_product(id, MatrixPolynomial::identity(3), w, rule), std::invalid_argument);
}

TEST_CASE("polynomial exactness against a doubled rule") {
  Rng rng(17);
  for (int d = 0; d <= 24; d += 3) {
    const auto p = rng.polynomial(2, d);
    const int m = (d + 2) / 2;
    CHECK(nodes_for_degree(d) == m);
    const auto f = [&](double x) -> Matrix { return p(x); };
    const Matrix lo = integrate_matrix(f, gauss_legendre_rule(m, 0.0, 1.0));
    const Matrix hi = integrate_matrix(f, gauss_legendre_rule(2 * m, 0.0, 1.0));
    CHECK(rel_diff(lo, hi) <= 1e-12);
  }
}

TEST_CASE("deterministic output") {
  Rng rng(1);
  const auto p = rng.polynomial(2, 6);
  const auto rule_a = gauss_legendre_rule(9, -1.0, 2.0);
  const auto rule_b = gauss_legendre_rule(9, -1.0, 2.0);
  CHECK(rule_a.nodes() == rule_b.nodes());
  CHECK(rule_a.weights() == rule_b.weights());
  const auto f = [&](double x) -> Matrix { return p(x); };
  CHECK(integrate_matrix(f, rule_a) == integrate_matrix(f, rule_b));
}
