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

#include "mopkit/quadrature.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>
#include <utility>

#include "mopkit/weights.hpp"

namespace mopkit {

QuadratureRule::QuadratureRule(std::vector<double> nodes, std::vector<double> weights, double a,
                               double b)
    : nodes_(std::move(nodes)), weights_(std::move(weights)), a_(a), b_(b) {
  if (nodes_.empty() || nodes_.size() != weights_.size()) {
    throw std::invalid_argument("QuadratureRule: node and weight counts must match and be >= 1");
  }
  if (!(a_ < b_)) throw std::invalid_argument("QuadratureRule: need a < b");
  for (std::size_t i = 0; i < nodes_.size(); ++i) {
    if (!(nodes_[i] > a_ && nodes_[i] < b_)) {
      throw std::invalid_argument("QuadratureRule: nodes must be strictly interior");
    }
    if (i > 0 && !(nodes_[i] > nodes_[i - 1])) {
      throw std::invalid_argument("QuadratureRule: nodes must be strictly increasing");
    }
    if (!(weights_[i] > 0.0)) throw std::invalid_argument("QuadratureRule: weights must be positive");
  }
}

QuadratureRule gauss_legendre_rule(int m, double a, double b) {
  if (m < 1) throw std::invalid_argument("gauss_legendre_rule: need at least one node");
  if (!(a < b)) throw std::invalid_argument("gauss_legendre_rule: need a < b");

  const auto mu = static_cast<std::size_t>(m);
  std::vector<double> t(mu);
  std::vector<double> wt(mu);
  const double pi = std::numbers::pi;
  // Roots are symmetric; compute the positive half by Newton on P_m.
  for (int i = 0; i < (m + 1) / 2; ++i) {
    double z = std::cos(pi * (i + 0.75) / (m + 0.5));
    double dp = 0.0;
    for (int iter = 0; iter < 100; ++iter) {
      double p0 = 1.0;
      double p1 = z;
      for (int k = 2; k <= m; ++k) {
        const double p2 = ((2.0 * k - 1.0) * z * p1 - (k - 1.0) * p0) / k;
        p0 = p1;
        p1 = p2;
      }
      // P_m'(z) from P_m and P_{m-1}.
      dp = m * (z * p1 - p0) / (z * z - 1.0);
      const double dz = p1 / dp;
      z -= dz;
      if (std::abs(dz) <= 1e-15) break;
    }
    {
      // Refresh the derivative at the converged root for the weight.
      double p0 = 1.0;
      double p1 = z;
      for (int k = 2; k <= m; ++k) {
        const double p2 = ((2.0 * k - 1.0) * z * p1 - (k - 1.0) * p0) / k;
        p0 = p1;
        p1 = p2;
      }
      dp = m * (z * p1 - p0) / (z * z - 1.0);
    }
    const double w = 2.0 / ((1.0 - z * z) * dp * dp);
    const auto lo = static_cast<std::size_t>(i);
    const auto hi = mu - 1 - lo;
    t[lo] = -z;
    t[hi] = z;
    wt[lo] = w;
    wt[hi] = w;
  }
  if (m % 2 == 1) t[mu / 2] = 0.0;

  const double half = 0.5 * (b - a);
  const double mid = 0.5 * (a + b);
  std::vector<double> nodes(mu);
  std::vector<double> weights(mu);
  for (std::size_t i = 0; i < mu; ++i) {
    nodes[i] = mid + half * t[i];
    weights[i] = half * wt[i];
  }
  return QuadratureRule(std::move(nodes), std::move(weights), a, b);
}

int nodes_for_degree(int degree) { return std::max(1, (degree + 2) / 2); }

Matrix integrate_matrix(const MatrixFunction& f, const QuadratureRule& rule) {
  Matrix acc;
  for (int i = 0; i < rule.size(); ++i) {
    Matrix v = f(rule.nodes()[i]);
    if (i == 0) {
      acc = Matrix::Zero(v.rows(), v.cols());
    } else if (v.rows() != acc.rows() || v.cols() != acc.cols()) {
      throw std::invalid_argument("integrate_matrix: integrand changed size between nodes");
    }
    acc += rule.weights()[i] * v;
  }
  return acc;
}

Matrix inner_product(const MatrixPolynomial& p, const MatrixPolynomial& q, const MatrixWeight& w,
                     const QuadratureRule& rule) {
  if (p.size() != q.size() || p.size() != w.size()) {
    throw std::invalid_argument("inner_product: size mismatch");
  }
  return integrate_matrix([&](double x) -> Matrix { return p(x) * w(x) * q(x).adjoint(); }, rule);
}

}  // namespace mopkit
