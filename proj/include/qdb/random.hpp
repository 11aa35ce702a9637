// Copyright 2026 The qdb Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <cmath>
#include <cstdint>
#include <numbers>
#include <random>
#include <vector>

#include "qdb/linalg.hpp"

namespace qdb {

/// Seeded generator with a portable output stream.
///
/// The engine is std::mt19937_64, whose sequence is fixed by the C++
/// standard. The std distributions are not, so uniforms are taken as
/// (x >> 11) * 2^-53 and normals by Box-Muller on two such uniforms.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  double uniform() {
    return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
  }

  double normal() {
    if (has_spare_) {
      has_spare_ = false;
      return spare_;
    }
    double u1 = uniform();
    while (u1 <= 0.0) u1 = uniform();
    const double u2 = uniform();
    const double r = std::sqrt(-2.0 * std::log(u1));
    const double a = 2.0 * std::numbers::pi * u2;
    spare_ = r * std::sin(a);
    has_spare_ = true;
    return r * std::cos(a);
  }

  /// Integer in [lo, hi].
  Index integer(Index lo, Index hi) {
    const auto span = static_cast<std::uint64_t>(hi - lo + 1);
    return lo + static_cast<Index>(engine_() % span);
  }

  bool coin() { return (engine_() >> 63) != 0; }

 private:
  std::mt19937_64 engine_;
  double spare_ = 0.0;
  bool has_spare_ = false;
};

/// Complex Ginibre matrix with standard normal real and imaginary parts.
inline CMatrix ginibre(Rng& rng, Index rows, Index cols) {
  CMatrix g(rows, cols);
  for (Index i = 0; i < rows; ++i)
    for (Index j = 0; j < cols; ++j) {
      const double re = rng.normal();
      const double im = rng.normal();
      g(i, j) = Complex(re, im);
    }
  return g;
}

inline CMatrix random_hermitian(Rng& rng, Index dim) {
  const CMatrix g = ginibre(rng, dim, dim);
  return (g + g.adjoint()) / 2.0;
}

inline CMatrix random_psd(Rng& rng, Index dim, Index rank) {
  const CMatrix g = ginibre(rng, dim, rank);
  return g * g.adjoint();
}

/// Full-rank density matrix G G^dag / Tr.
inline CMatrix random_density(Rng& rng, Index dim) {
  CMatrix r = random_psd(rng, dim, dim);
  return r / r.trace().real();
}

/// Haar unitary via QR of a Ginibre matrix with R's diagonal phases removed.
inline CMatrix random_unitary(Rng& rng, Index dim) {
  const CMatrix g = ginibre(rng, dim, dim);
  Eigen::HouseholderQR<CMatrix> qr(g);
  CMatrix q = qr.householderQ() * CMatrix::Identity(dim, dim);
  const CMatrix r = qr.matrixQR().triangularView<Eigen::Upper>();
  for (Index j = 0; j < dim; ++j) {
    const double mag = std::abs(r(j, j));
    if (mag > 0) q.col(j) *= r(j, j) / mag;
  }
  return q;
}

/// Kraus operators K_k S^{-1/2} with S = sum K_k^dag K_k, so that the
/// set is trace preserving.
inline std::vector<CMatrix> random_kraus(Rng& rng, Index dim_in, Index dim_out, Index count) {
  std::vector<CMatrix> ops;
  CMatrix s = CMatrix::Zero(dim_in, dim_in);
  for (Index k = 0; k < count; ++k) {
    ops.push_back(ginibre(rng, dim_out, dim_in));
    s += ops.back().adjoint() * ops.back();
  }
  const CMatrix s_inv_half = psd_power(s, -0.5);
  for (auto& k : ops) k = k * s_inv_half;
  return ops;
}

}  // namespace qdb
