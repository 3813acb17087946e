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

#include "doctest.h"
#include "mopkit/cp2_model.hpp"
#include "mopkit/diffop.hpp"
#include "mopkit/presequence.hpp"
#include "support/test_support.hpp"

using namespace mopkit;
using mopkit::testing::mat2;
using mopkit::testing::rel_diff;
using mopkit::testing::Rng;

namespace {

MatrixPolynomial scalar_poly(std::vector<double> c) {
  std::vector<Matrix> m;
  for (const double v : c) m.push_back(Matrix::Constant(1, 1, v));
  return MatrixPolynomial(std::move(m));
}

// discrete max of ||p(x) - q(x)|| / max ||q(x)|| on a fixed grid
double poly_rel_diff(const MatrixPolynomial& p, const MatrixPolynomial& q) {
  double diff = 0.0;
  double scale = 0.0;
  for (int i = 0; i <= 20; ++i) {
    const double x = i / 20.0;
    diff = std::max(diff, (p(x) - q(x)).norm());
    scale = std::max(scale, q(x).norm());
  }
  return scale > 0.0 ? diff / scale : diff;
}

JetFunction cp2_psi(int n) { return polynomial_jet(cp2::F_polynomial({n, 0})); }

MatrixFunction cp2_a1(int n) {
  const auto a1 = cp2::operator_D_first_order(n);
  return [a1](double x) { return a1(x); };
}

std::vector<double> mid_samples() { return {0.2, 0.35, 0.5, 0.55, 0.7, 0.9}; }

}  // namespace

TEST_CASE("apply_right basics") {
  Rng rng(3);
  const auto q = rng.polynomial(2, 4);
  const RightDiffOperator mult({MatrixPolynomial::identity(2)});
  CHECK(mult.order() == 0);
  CHECK(rel_diff(apply_right(mult, q)(0.3), q(0.3)) == 0.0);

  const RightDiffOperator d({MatrixPolynomial::zero(2), MatrixPolynomial::identity(2)});
  const auto xi = poly_mul_scalar_poly(MatrixPolynomial::identity(2), {0.0, 1.0});
  const auto r = apply_right(d, xi);
  CHECK(r.degree() == 0);
  CHECK(r.coeff(0) == Matrix::Identity(2, 2));

  // right action: coefficients multiply on the right
  const Matrix m = rng.matrix(2);
  const RightDiffOperator right_m({MatrixPolynomial::constant(m)});
  CHECK(rel_diff(apply_right(right_m, q)(0.4), q(0.4) * m) <= 1e-15);

  CHECK_THROWS_AS(apply_right(mult, MatrixPolynomial::identity(3)), std::invalid_argument);
  CHECK_THROWS_AS(RightDiffOperator({}), std::invalid_argument);
  CHECK_THROWS_AS(RightDiffOperator({MatrixPolynomial::identity(2), MatrixPolynomial::identity(3)}),
                  std::invalid_argument);
}

TEST_CASE("right action is linear") {
  Rng rng(21);
  for (int trial = 0; trial < 10; ++trial) {
    const RightDiffOperator d({rng.polynomial(2, 1), rng.polynomial(2, 2), rng.polynomial(2, 2)});
    const auto q1 = rng.polynomial(2, 5);
    const auto q2 = rng.polynomial(2, 3);
    const Complex a = rng.complex();
    const Complex b = rng.complex();
    const auto lhs = apply_right(d, poly_scale(a, q1) + poly_scale(b, q2));
    const auto rhs = poly_scale(a, apply_right(d, q1)) + poly_scale(b, apply_right(d, q2));
    CHECK(poly_rel_diff(lhs, rhs) <= 1e-12);
  }
}

TEST_CASE("hyper_operator") {
  const HypergeometricConstants zero{Matrix::Zero(2, 2), Matrix::Zero(2, 2), Matrix::Zero(2, 2)};
  const auto pure = hyper_operator(zero);
  REQUIRE(pure.order() == 2);
  CHECK(pure.coeffs()[0].is_zero());
  CHECK(pure.coeffs()[1].is_zero());
  CHECK(rel_diff(pure.coeffs()[2](0.3), 0.21 * Matrix::Identity(2, 2)) <= 1e-15);
  CHECK(pure.is_hypergeometric_shape());

  const auto k = cp2::tilde_constants(1);
  const auto dt = hyper_operator(k);
  CHECK(dt.is_hypergeometric_shape());
  const auto on_identity = apply_right(dt, MatrixPolynomial::identity(2));
  CHECK(on_identity.degree() == 0);
  CHECK(rel_diff(on_identity.coeff(0), -k.V) == 0.0);
  CHECK(rel_diff(on_identity.coeff(0), mat2(0, 0, 0, -3)) == 0.0);
  CHECK(rel_diff(on_identity.coeff(0), cp2::lambda_w(1, 0).Lambda) == 0.0);

  const RightDiffOperator bad(
      {poly_mul_scalar_poly(MatrixPolynomial::identity(2), {0.0, 1.0}), MatrixPolynomial::zero(2)});
  CHECK_FALSE(bad.is_hypergeometric_shape());
}

TEST_CASE("Q_1 is an eigenfunction of the conjugated operator") {
  const auto qs = build_Q(cp2::make_presequence(1), 1);
  const auto lhs = apply_right(hyper_operator(cp2::tilde_constants(1)), qs[1]);
  const auto rhs = cp2::lambda_w(1, 1).Lambda * qs[1];
  CHECK(poly_rel_diff(lhs, rhs) <= 1e-10);
}

TEST_CASE("check_eigenfunction on cp2") {
  Rng rng(9);
  const auto xs = rng.samples(20, 0.0, 1.0);
  for (int n : {0, 1, 2, 5}) {
    const auto qs = build_Q(cp2::make_presequence(n), 8);
    std::vector<Matrix> lambdas;
    for (int w = 0; w <= 8; ++w) lambdas.push_back(cp2::lambda_w(n, w).Lambda);
    const auto rep = check_eigenfunction(hyper_operator(cp2::tilde_constants(n)), qs, lambdas, xs, 1e-9);
    CHECK(rep.pass);
    CHECK(rep.max_residual <= 1e-9);
    CHECK(rep.residuals.size() == 9);

    // swapping the two eigenvalues must be detected
    std::vector<Matrix> swapped;
    for (const auto& l : lambdas) swapped.push_back(mat2(l(1, 1).real(), 0, 0, l(0, 0).real()));
    const auto bad = check_eigenfunction(hyper_operator(cp2::tilde_constants(n)), qs, swapped, xs, 1e-9);
    CHECK_FALSE(bad.pass);
    CHECK(bad.max_residual > 0.1);
  }

  const auto qs = build_Q(cp2::make_presequence(1), 2);
  const std::vector<Matrix> short_lambdas{Matrix::Zero(2, 2)};
  CHECK_THROWS_AS(check_eigenfunction(hyper_operator(cp2::tilde_constants(1)), qs, short_lambdas, xs, 1e-9),
                  std::invalid_argument);
}

TEST_CASE("F-side eigenfunction check through the sampled operator") {
  Rng rng(10);
  const auto xs = rng.samples(20, 0.05, 0.95);
  for (int n : {0, 1, 2, 5}) {
    std::vector<MatrixPolynomial> fs;
    std::vector<Matrix> lambdas;
    for (int w = 0; w <= 8; ++w) {
      fs.push_back(cp2::F_polynomial({n, w}));
      lambdas.push_back(cp2::lambda_w(n, w).Lambda);
    }
    const auto rep = check_eigenfunction_sampled(cp2::operator_D(n), fs, lambdas, xs, 1e-8);
    CHECK(rep.pass);
    CHECK(rep.max_residual <= 1e-8);
  }
  const double at_zero[] = {0.0};
  const std::vector<MatrixPolynomial> f0{cp2::F_polynomial({1, 0})};
  const std::vector<Matrix> l0{cp2::lambda_w(1, 0).Lambda};
  CHECK_THROWS_AS(check_eigenfunction_sampled(cp2::operator_D(1), f0, l0, at_zero, 1e-8), std::domain_error);
}

TEST_CASE("Legendre operator") {
  // (1 - x^2) y'' - 2x y' = lambda y;  P_1 = x, P_2 = x^2 - 1/3, P_3 = x^3 - 3x/5
  const RightDiffOperator d({MatrixPolynomial::zero(1), scalar_poly({0.0, -2.0}), scalar_poly({1.0, 0.0, -1.0})});
  const std::vector<MatrixPolynomial> ps{scalar_poly({0.0, 1.0}), scalar_poly({-1.0 / 3.0, 0.0, 1.0}),
                                         scalar_poly({0.0, -0.6, 0.0, 1.0})};
  const std::vector<Matrix> lambdas{Matrix::Constant(1, 1, -2.0), Matrix::Constant(1, 1, -6.0),
                                    Matrix::Constant(1, 1, -12.0)};
  const std::vector<double> xs{-0.9, -0.5, 0.1, 0.3, 0.8};
  const auto rep = check_eigenfunction(d, ps, lambdas, xs, 0.0);
  CHECK(rep.residuals[0] == 0.0);
  CHECK(rep.max_residual <= 1e-14);
}

TEST_CASE("polynomial_jet against central differences") {
  Rng rng(13);
  for (int trial = 0; trial < 10; ++trial) {
    const auto p = rng.polynomial(2, 2 + trial % 4);
    const auto jet = polynomial_jet(p);
    const double x = rng.uniform(0.1, 0.9);
    const auto j = jet(x);
    CHECK(rel_diff(j.value, p(x)) == 0.0);
    CHECK(rel_diff(j.first, testing::central_difference([&](double t) { return p(t); }, x, 1e-5)) <= 1e-6);
    CHECK(rel_diff(j.second, testing::central_second_difference([&](double t) { return p(t); }, x, 1e-4)) <=
          1e-6);
  }
}

TEST_CASE("extract_hyper_constants with identity conjugation") {
  Rng rng(14);
  const HypergeometricConstants k{rng.matrix(2), rng.matrix(2), rng.matrix(2)};
  const auto psi = polynomial_jet(MatrixPolynomial::identity(2));
  const auto a1 = [&](double x) -> Matrix { return k.C - x * k.U; };
  const auto a0 = [&](double) -> Matrix { return -k.V; };
  const auto ex = extract_hyper_constants(psi, a1, a0, mid_samples());
  CHECK(rel_diff(ex.constants.C, k.C) <= 1e-14);
  CHECK(rel_diff(ex.constants.U, k.U) <= 1e-14);
  CHECK(rel_diff(ex.constants.V, k.V) <= 1e-15);
  CHECK(ex.affine_residual <= 1e-14);
  CHECK(ex.constancy_residual <= 1e-15);
}

TEST_CASE("extract_hyper_constants on cp2") {
  {
    const auto ex = extract_hyper_constants(cp2_psi(1), cp2_a1(1), cp2::operator_D_zeroth_order(1), mid_samples());
    CHECK(testing::max_abs_entry_diff(ex.constants.C, mat2(7, -1, -5, 11) / 3.0) <= 1e-9);
    CHECK(testing::max_abs_entry_diff(ex.constants.U, mat2(5, 0, -1, 6)) <= 1e-9);
    CHECK(testing::max_abs_entry_diff(ex.constants.V, mat2(0, 0, 0, 3)) <= 1e-9);
  }
  {
    // n = 2: C = (1/4)[[9, -1], [-7, 15]], U = [[6, 0], [-1, 7]], V = diag(0, 4)
    const auto ex = extract_hyper_constants(cp2_psi(2), cp2_a1(2), cp2::operator_D_zeroth_order(2), mid_samples());
    CHECK(testing::max_abs_entry_diff(ex.constants.C, mat2(9, -1, -7, 15) / 4.0) <= 1e-9);
    CHECK(testing::max_abs_entry_diff(ex.constants.U, mat2(6, 0, -1, 7)) <= 1e-9);
    CHECK(testing::max_abs_entry_diff(ex.constants.V, mat2(0, 0, 0, 4)) <= 1e-9);
  }
  Rng rng(15);
  for (int n : {0, 1, 2, 5}) {
    const auto ex = extract_hyper_constants(cp2_psi(n), cp2_a1(n), cp2::operator_D_zeroth_order(n),
                                            rng.samples(20, 0.01, 0.99));
    const auto k = cp2::tilde_constants(n);
    CHECK(testing::max_abs_entry_diff(ex.constants.C, k.C) <= 1e-9);
    CHECK(testing::max_abs_entry_diff(ex.constants.U, k.U) <= 1e-9);
    CHECK(testing::max_abs_entry_diff(ex.constants.V, k.V) <= 1e-9);
    CHECK(ex.affine_residual <= 1e-9);
    CHECK(ex.constancy_residual <= 1e-9);
  }
}

TEST_CASE("extract_hyper_constants errors") {
  const auto psi = cp2_psi(1);
  const auto a1 = cp2_a1(1);
  const auto a0 = cp2::operator_D_zeroth_order(1);
  const std::vector<double> two{0.3, 0.6};
  CHECK_THROWS_AS(extract_hyper_constants(psi, a1, a0, two), std::invalid_argument);
  const std::vector<double> repeated{0.5, 0.5, 0.5};
  CHECK_THROWS_AS(extract_hyper_constants(psi, a1, a0, repeated), std::invalid_argument);

  // F_0 is singular at 0; the zeroth-order coefficient is not evaluated there
  const auto safe_a0 = [](double) -> Matrix { return Matrix::Zero(2, 2); };
  const std::vector<double> with_zero{0.0, 0.4, 0.6};
  CHECK_THROWS_AS(extract_hyper_constants(psi, a1, safe_a0, with_zero), SingularMatrixError);

  // not hypergeometric: quadratic first-order coefficient, non-constant zeroth-order one
  const auto id = polynomial_jet(MatrixPolynomial::identity(2));
  const auto quad = [](double x) -> Matrix { return x * x * Matrix::Identity(2, 2); };
  const auto lin = [](double x) -> Matrix { return x * Matrix::Identity(2, 2); };
  const auto zero = [](double) -> Matrix { return Matrix::Zero(2, 2); };
  CHECK_THROWS_AS(extract_hyper_constants(id, quad, zero, mid_samples()), std::domain_error);
  CHECK_THROWS_AS(extract_hyper_constants(id, zero, lin, mid_samples()), std::domain_error);
}

TEST_CASE("conjugate_operator_numeric") {
  const auto d = cp2::operator_D(1);
  const auto same = conjugate_operator_numeric(d, polynomial_jet(MatrixPolynomial::identity(2)), 0.3);
  for (int i = 0; i < 3; ++i) CHECK(rel_diff(same[static_cast<std::size_t>(i)], d.coeffs[i](0.3)) == 0.0);

  const auto k = extract_hyper_constants(cp2_psi(1), cp2_a1(1), cp2::operator_D_zeroth_order(1), mid_samples());
  Rng rng(16);
  std::vector<double> xs{0.5};
  for (const double x : rng.samples(10, 0.05, 0.95)) xs.push_back(x);
  const auto hyper = hyper_operator(k.constants);
  for (const double x : xs) {
    const auto c = conjugate_operator_numeric(d, cp2_psi(1), x);
    CHECK(rel_diff(c[2], x * (1.0 - x) * Matrix::Identity(2, 2)) <= 1e-15);
    CHECK(rel_diff(c[1], k.constants.C - x * k.constants.U) <= 1e-9);
    CHECK(rel_diff(c[0], -k.constants.V) <= 1e-9);
    for (int i = 0; i < 3; ++i) {
      CHECK(rel_diff(c[static_cast<std::size_t>(i)], hyper.coeffs()[static_cast<std::size_t>(i)](x)) <= 1e-9);
    }
  }

  const SampledRightOperator first{{cp2::operator_D_zeroth_order(1), cp2_a1(1)}};
  CHECK_THROWS_AS(conjugate_operator_numeric(first, cp2_psi(1), 0.5), std::invalid_argument);
}
