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

#include "mopkit/commutant.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <set>
#include <stdexcept>

namespace mopkit {

namespace {

// Unknown k < N^2 is the real part of entry k (row-major), k >= N^2 the
// imaginary part.
Matrix unit_unknown(Index n, Index k) {
  Matrix e = Matrix::Zero(n, n);
  const Index nn = n * n;
  const Index entry = k % nn;
  e(entry / n, entry % n) = k < nn ? Complex(1.0, 0.0) : Complex(0.0, 1.0);
  return e;
}

Matrix from_unknowns(Index n, const Eigen::VectorXd& t) {
  Matrix m = Matrix::Zero(n, n);
  const Index nn = n * n;
  for (Index entry = 0; entry < nn; ++entry) {
    m(entry / n, entry % n) = Complex(t(entry), t(entry + nn));
  }
  return m;
}

Eigen::VectorXd to_unknowns(const Matrix& m) {
  const Index n = m.rows();
  const Index nn = n * n;
  Eigen::VectorXd t(2 * nn);
  for (Index entry = 0; entry < nn; ++entry) {
    t(entry) = m(entry / n, entry % n).real();
    t(entry + nn) = m(entry / n, entry % n).imag();
  }
  return t;
}

// Real-scale so that the entry of largest modulus has modulus one and a
// positive leading component; keeps the basis real-linear.
Matrix normalize(const Matrix& t) {
  Index r = 0;
  Index c = 0;
  t.cwiseAbs().maxCoeff(&r, &c);
  const Complex e = t(r, c);
  double scale = std::abs(e);
  const double lead = std::abs(e.real()) > 1e-12 * scale ? e.real() : e.imag();
  if (lead < 0.0) scale = -scale;
  return t / scale;
}

}  // namespace

CommutantBasis commuting_space(const MatrixWeight& w, std::span<const double> xs) {
  const Index n = w.size();
  const Index unknowns = 2 * n * n;
  const std::set<double> distinct(xs.begin(), xs.end());
  if (static_cast<Index>(distinct.size()) < unknowns + 1) {
    throw std::invalid_argument("commuting_space: need at least 2N^2+1 distinct samples");
  }

  Eigen::MatrixXd system(unknowns * static_cast<Index>(xs.size()), unknowns);
  std::vector<Matrix> values;
  for (std::size_t s = 0; s < xs.size(); ++s) {
    const Matrix wx = w(xs[s]);
    values.push_back(wx);
    const double scale = wx.norm() > 0.0 ? 1.0 / wx.norm() : 1.0;
    for (Index k = 0; k < unknowns; ++k) {
      const Matrix e = unit_unknown(n, k);
      const Matrix image = scale * (e * wx - wx * e.adjoint());
      system.block(static_cast<Index>(s) * unknowns, k, unknowns, 1) = to_unknowns(image);
    }
  }

  Eigen::JacobiSVD<Eigen::MatrixXd> svd(system, Eigen::ComputeFullV);
  const auto& sv = svd.singularValues();
  const double cutoff = 1e-10 * sv(0);
  CommutantBasis out;
  Eigen::MatrixXd null_space(unknowns, 0);
  for (Index k = 0; k < unknowns; ++k) {
    const double sigma = k < sv.size() ? sv(k) : 0.0;
    if (sigma < cutoff) {
      null_space.conservativeResize(Eigen::NoChange, null_space.cols() + 1);
      null_space.col(null_space.cols() - 1) = svd.matrixV().col(k);
    }
  }
  out.dimension = static_cast<int>(null_space.cols());
  for (Index k = 0; k < null_space.cols(); ++k) {
    out.basis.push_back(normalize(from_unknowns(n, null_space.col(k))));
  }
  for (const auto& t : out.basis) {
    for (const auto& wx : values) {
      const double denom = wx.norm() * t.norm();
      if (denom > 0.0) out.max_residual = std::max(out.max_residual, (t * wx - wx * t.adjoint()).norm() / denom);
    }
  }

  // identity membership: projection residual onto the orthonormal null space
  const Eigen::VectorXd id = to_unknowns(Matrix::Identity(n, n));
  const Eigen::VectorXd proj = null_space * (null_space.transpose() * id);
  out.contains_identity = out.dimension > 0 && (id - proj).norm() <= 1e-8 * id.norm();
  return out;
}

IrreducibilityReport is_irreducible(const MatrixWeight& w, std::span<const double> xs) {
  IrreducibilityReport r;
  r.commutant = commuting_space(w, xs);
  r.irreducible = r.commutant.dimension == 1;
  return r;
}

std::vector<double> interior_samples(double a, double b, int count) {
  if (count < 1 || !(a < b)) throw std::invalid_argument("interior_samples: bad arguments");
  // Chebyshev points of the first kind: distinct, interior, clustered at ends.
  std::vector<double> xs(static_cast<std::size_t>(count));
  for (int k = 0; k < count; ++k) {
    const double t = -std::cos(std::numbers::pi * (k + 0.5) / count);
    xs[static_cast<std::size_t>(k)] = 0.5 * (a + b) + 0.5 * (b - a) * t;
  }
  return xs;
}

}  // namespace mopkit
