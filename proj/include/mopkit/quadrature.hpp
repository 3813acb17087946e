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

#include <vector>

#include "mopkit/matpoly.hpp"

namespace mopkit {

class MatrixWeight;

/// Gauss-Legendre rule mapped to [a, b]. Nodes are strictly interior and
/// stored in increasing order; the rule integrates polynomials of degree
/// up to exactness_degree() = 2m - 1 exactly.
class QuadratureRule {
 public:
  QuadratureRule(std::vector<double> nodes, std::vector<double> weights, double a, double b);

  const std::vector<double>& nodes() const noexcept { return nodes_; }
  const std::vector<double>& weights() const noexcept { return weights_; }
  double lower() const noexcept { return a_; }
  double upper() const noexcept { return b_; }
  int size() const noexcept { return static_cast<int>(nodes_.size()); }
  int exactness_degree() const noexcept { return 2 * size() - 1; }

 private:
  std::vector<double> nodes_;
  std::vector<double> weights_;
  double a_;
  double b_;
};

/// Throws std::invalid_argument for m < 1 or a >= b.
QuadratureRule gauss_legendre_rule(int m, double a, double b);

/// Smallest node count whose rule is exact for polynomials of `degree`.
int nodes_for_degree(int degree);

/// sum_i w_i f(x_i), accumulated in ascending node order.
Matrix integrate_matrix(const MatrixFunction& f, const QuadratureRule& rule);

/// (P, Q) = int P(x) W(x) Q(x)^* dx.
Matrix inner_product(const MatrixPolynomial& p, const MatrixPolynomial& q, const MatrixWeight& w,
                     const QuadratureRule& rule);

}  // namespace mopkit
