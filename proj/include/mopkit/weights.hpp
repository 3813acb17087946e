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
#include <span>
#include <vector>

#include "mopkit/matpoly.hpp"
#include "mopkit/quadrature.hpp"

namespace mopkit {

/// Matrix density on an open interval (a, b). The evaluator is expected to
/// return Hermitian positive semidefinite matrices; psd_report checks that.
/// polynomial_degree is set when every entry is a polynomial of at most
/// that degree, which lets callers size an exact quadrature rule.
class MatrixWeight {
 public:
  MatrixWeight(Index size, double a, double b, MatrixFunction evaluate,
               std::optional<int> polynomial_degree = std::nullopt);

  Index size() const noexcept { return size_; }
  double lower() const noexcept { return a_; }
  double upper() const noexcept { return b_; }
  std::optional<int> polynomial_degree() const noexcept { return polynomial_degree_; }

  Matrix operator()(double x) const;

 private:
  Index size_;
  double a_;
  double b_;
  MatrixFunction evaluate_;
  std::optional<int> polynomial_degree_;
};

/// int x^k W(x) dx.
Matrix moment(const MatrixWeight& w, int k, const QuadratureRule& rule);

/// x -> F0(x) W(x) F0(x)^*. When F0 is polynomial of degree d and W has
/// polynomial degree e, the result carries polynomial degree 2d + e.
MatrixWeight conjugate_weight(const MatrixWeight& w, MatrixFunction f0,
                              std::optional<int> f0_degree = std::nullopt);

/// x -> M W(x) M^* for constant nonsingular M (throws SingularMatrixError).
MatrixWeight equivalence_transform(const MatrixWeight& w, const Matrix& m);

struct PsdSample {
  double x = 0.0;
  double min_eigenvalue = 0.0;
  double spectral_norm = 0.0;
  bool positive_definite = false;
  // eigenvalue below -1e-10 * spectral norm, or the evaluation is zero
  bool flagged = false;
};

struct PsdReport {
  std::vector<PsdSample> samples;
  double max_hermitian_defect = 0.0;  // max ||W - W^*|| / ||W||
  bool all_psd = true;
};

PsdReport psd_report(const MatrixWeight& w, std::span<const double> xs);

}  // namespace mopkit
