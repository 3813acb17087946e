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

#include <span>
#include <vector>

#include "mopkit/matpoly.hpp"
#include "mopkit/weights.hpp"

namespace mopkit {

/// Real-linear basis of {T : T W(x) = W(x) T^* for all x}.
struct CommutantBasis {
  int dimension = 0;
  std::vector<Matrix> basis;
  bool contains_identity = false;
  double max_residual = 0.0;  // max ||T W - W T^*|| / (||W|| ||T||) over basis and samples
};

/// At least 2N^2 + 1 distinct interior samples (std::invalid_argument
/// otherwise). The constraint is real-linear in the 2N^2 real parts of T;
/// its null space is read off an SVD with cutoff 1e-10 * sigma_max.
CommutantBasis commuting_space(const MatrixWeight& w, std::span<const double> xs);

struct IrreducibilityReport {
  bool irreducible = false;
  CommutantBasis commutant;
};

IrreducibilityReport is_irreducible(const MatrixWeight& w, std::span<const double> xs);

/// `count` distinct points strictly inside (a, b), deterministic.
std::vector<double> interior_samples(double a, double b, int count);

}  // namespace mopkit
