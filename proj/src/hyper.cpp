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

#include "mopkit/hyper.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

namespace mopkit {

namespace {

bool is_nonpositive_integer(double a) {
  return a <= 0.0 && std::abs(a - std::round(a)) <= 1e-12 * std::max(1.0, std::abs(a));
}

// Ratio t_{k+1} / t_k without the x factor, in extended precision.
long double term_ratio(const HyperSeriesParams& params, int k) {
  long double num = 1.0L;
  for (const double a : params.numerator) num *= static_cast<long double>(a) + k;
  long double den = 1.0L;
  for (const double b : params.denominator) {
    const long double bk = static_cast<long double>(b) + k;
    if (std::abs(bk) <= 1e-12 * std::max(1.0, std::abs(b))) {
      throw std::domain_error("pfq: denominator Pochhammer symbol vanishes at term " + std::to_string(k + 1));
    }
    den *= bk;
  }
  return num / (den * (k + 1));
}

}  // namespace

std::optional<int> terminating_length(const HyperSeriesParams& params) {
  std::optional<int> best;
  for (const double a : params.numerator) {
    if (is_nonpositive_integer(a)) {
      const int len = static_cast<int>(std::round(-a)) + 1;
      if (!best || len < *best) best = len;
    }
  }
  return best;
}

std::vector<double> pfq_coefficients(const HyperSeriesParams& params) {
  const auto len = terminating_length(params);
  if (!len) throw std::domain_error("pfq_coefficients: series does not terminate");
  std::vector<double> out;
  out.reserve(static_cast<std::size_t>(*len));
  long double t = 1.0L;
  out.push_back(1.0);
  for (int k = 0; k + 1 < *len; ++k) {
    t *= term_ratio(params, k);
    out.push_back(static_cast<double>(t));
  }
  return out;
}

double pfq(const HyperSeriesParams& params, double x) {
  if (const auto len = terminating_length(params)) {
    // extended-precision Horner: the alternating terms cancel heavily near x = 1
    std::vector<long double> c(static_cast<std::size_t>(*len), 1.0L);
    for (int k = 0; k + 1 < *len; ++k) c[k + 1] = c[k] * term_ratio(params, k);
    long double sum = 0.0L;
    for (auto it = c.rbegin(); it != c.rend(); ++it) sum = sum * x + *it;
    return static_cast<double>(sum);
  }
  if (!(std::abs(x) < 1.0)) {
    throw std::domain_error("pfq: non-terminating series needs |x| < 1");
  }
  double sum = 1.0;
  double t = 1.0;
  for (int k = 0; k < params.truncation; ++k) {
    t *= static_cast<double>(term_ratio(params, k)) * x;
    sum += t;
    if (std::abs(t) <= params.tolerance * std::abs(sum)) return sum;
  }
  throw std::domain_error("pfq: series did not converge within the truncation budget");
}

Matrix2H1Series matrix_2H1_series(const Matrix& ut, const Matrix& vshift, const Matrix& ct,
                                  const Vector& v0, int terms) {
  const Index n = ct.rows();
  if (ut.rows() != n || vshift.rows() != n || v0.size() != n) {
    throw std::invalid_argument("matrix_2H1_series: size mismatch");
  }
  if (terms < 1) throw std::invalid_argument("matrix_2H1_series: need at least one term");
  const Matrix id = Matrix::Identity(n, n);
  Matrix2H1Series out;
  out.coefficients.push_back(v0);
  for (int i = 0; i + 1 < terms; ++i) {
    const Matrix raise = static_cast<double>(i) * (i - 1) * id + static_cast<double>(i) * ut + vshift;
    const Vector& yi = out.coefficients.back();
    const Vector rhs = raise * yi;
    if (rhs.norm() <= 1e-12 * raise.norm() * yi.norm()) {
      out.terminated = true;
      break;
    }
    const Matrix lower = static_cast<double>(i + 1) * (ct + static_cast<double>(i) * id);
    if (is_singular(lower)) {
      throw SingularMatrixError("matrix_2H1_series: Ct + " + std::to_string(i) + " I is singular", i);
    }
    out.coefficients.push_back(lower.fullPivLu().solve(rhs));
  }
  return out;
}

Vector evaluate_2H1(const Matrix2H1Series& series, double x, double tolerance) {
  Vector acc = series.coefficients.back();
  for (auto it = series.coefficients.rbegin() + 1; it != series.coefficients.rend(); ++it) {
    acc = acc * x + *it;
  }
  if (!series.terminated) {
    const double last = series.coefficients.back().norm() *
                        std::pow(std::abs(x), static_cast<double>(series.coefficients.size() - 1));
    if (last > tolerance * std::max(acc.norm(), 1e-300)) {
      throw std::domain_error("evaluate_2H1: series tail above tolerance; raise the term count");
    }
  }
  return acc;
}

Vector evaluate_2H1_derivative(const Matrix2H1Series& series, double x, int order) {
  if (order < 0) throw std::invalid_argument("evaluate_2H1_derivative: negative order");
  const Index n = series.coefficients.front().size();
  Vector acc = Vector::Zero(n);
  const int count = static_cast<int>(series.coefficients.size());
  for (int i = count - 1; i >= order; --i) {
    double falling = 1.0;
    for (int t = 0; t < order; ++t) falling *= static_cast<double>(i - t);
    acc = acc * x + falling * series.coefficients[static_cast<std::size_t>(i)];
  }
  return acc;
}

Vector matrix_2H1(const Matrix& ut, const Matrix& vshift, const Matrix& ct, double x, const Vector& v0,
                  int terms) {
  return evaluate_2H1(matrix_2H1_series(ut, vshift, ct, v0, terms), x);
}

double hyper_ode_residual(const Matrix2H1Series& series, const Matrix& ut, const Matrix& vshift,
                          const Matrix& ct, const std::vector<double>& xs) {
  double worst = 0.0;
  for (const double x : xs) {
    const Vector y = evaluate_2H1_derivative(series, x, 0);
    const Vector y1 = evaluate_2H1_derivative(series, x, 1);
    const Vector y2 = evaluate_2H1_derivative(series, x, 2);
    const Vector t2 = x * (1.0 - x) * y2;
    const Vector t1 = (ct - x * ut) * y1;
    const Vector t0 = vshift * y;
    const double scale = std::max({t2.norm(), t1.norm(), t0.norm()});
    const double r = (t2 + t1 - t0).norm();
    worst = std::max(worst, scale > 0.0 ? r / scale : r);
  }
  return worst;
}

}  // namespace mopkit
