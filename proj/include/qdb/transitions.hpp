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

#include <optional>
#include <utility>
#include <vector>

#include "qdb/channel.hpp"

namespace qdb {

/// Pure state psi of the doubled system with its weight p.
struct ElementaryTransition {
  CVector psi;
  double probability = 0.0;
  Index dim_a = 0;
  Index dim_b = 0;

  CMatrix projector() const { return psi * psi.adjoint(); }
};

/// ||psi psi^dag - phi phi^dag||_F. Formed explicitly: the closed form
/// sqrt(2 - 2|<psi|phi>|^2) loses half the digits near zero.
inline double projector_distance(const CVector& psi, const CVector& phi) {
  return (psi * psi.adjoint() - phi * phi.adjoint()).norm();
}

class CJDecomposition {
 public:
  CJDecomposition(std::vector<ElementaryTransition> items, RelativeChoi source)
      : items_(std::move(items)), source_(std::move(source)) {}

  const std::vector<ElementaryTransition>& items() const { return items_; }
  const RelativeChoi& source() const { return source_; }
  std::size_t size() const { return items_.size(); }
  const ElementaryTransition& operator[](std::size_t a) const { return items_[a]; }

  CMatrix reconstruct() const {
    CMatrix k = CMatrix::Zero(source_.kappa.rows(), source_.kappa.cols());
    for (const auto& it : items_) k += it.probability * it.projector();
    return k;
  }

 private:
  std::vector<ElementaryTransition> items_;
  RelativeChoi source_;
};

/// Eigendecomposition of kappa; keeps eigenvalues above rank_tol.
inline CJDecomposition decompose(const RelativeChoi& rc, const ToleranceConfig& tol = {}) {
  const HermEigen eig = herm_eig(rc.kappa, tol);
  std::vector<ElementaryTransition> items;
  const double cut = tol.rank_tol * std::max(eig.values(0), 0.0);
  for (Index a = 0; a < eig.values.size(); ++a) {
    if (eig.values(a) <= cut) break;
    items.push_back({eig.vectors.col(a), eig.values(a), rc.dim_in, rc.dim_out});
  }
  return CJDecomposition(std::move(items), rc);
}

/// Unnormalized CP map of one transition, relative to the state and basis
/// of `source`: eps(b_i b_j^dag) = (w_i w_j)^{-1/2} (<b_i| (x) I) |psi><psi| (|b_j> (x) I).
inline Channel elementary_map(const ElementaryTransition& et, const RelativeChoi& source,
                              const ToleranceConfig& tol = {}) {
  return invert_relative(et.projector(), source.weights, source.basis, et.dim_a, et.dim_b, tol);
}

inline Channel elementary_map(const ElementaryTransition& et, const DensityMatrix& rho,
                              const ToleranceConfig& tol = {}) {
  const auto& sp = rho.spectral();
  return invert_relative(et.projector(), sp.values.cwiseMax(0.0), sp.vectors, et.dim_a, et.dim_b, tol);
}

inline ElementaryTransition reverse_transition(const ElementaryTransition& et) {
  if (et.dim_a != et.dim_b) throw DimensionMismatch("reverse_transition: system is not square");
  return {swap_operator(et.dim_a, et.dim_b) * et.psi, et.probability, et.dim_b, et.dim_a};
}

struct CompletenessVerdict {
  bool complete = true;
  std::optional<std::size_t> witness;
  // partner[a] is the index b with R(kappa_a) = kappa_b, if any
  std::vector<std::optional<std::size_t>> partner;
  // items whose reverse lies in the kernel of kappa
  std::vector<std::size_t> kernel_side;
};

/// Closure of the decomposition under the swap. An item either has its
/// reverse among the items, or the reverse is orthogonal to all items and
/// can be added with weight zero; those added vectors must be mutually
/// orthogonal too.
inline CompletenessVerdict is_complete(const CJDecomposition& dec, const ToleranceConfig& tol = {}) {
  const Index d = dec.source().dim_in;
  if (d != dec.source().dim_out) throw DimensionMismatch("is_complete: system is not square");
  const CMatrix r = swap_operator(d, d);
  const auto& items = dec.items();
  CompletenessVerdict v;
  v.partner.assign(items.size(), std::nullopt);
  std::vector<CVector> reversed;
  for (const auto& it : items) reversed.push_back(r * it.psi);

  for (std::size_t a = 0; a < items.size(); ++a) {
    for (std::size_t b = 0; b < items.size(); ++b) {
      if (projector_distance(reversed[a], items[b].psi) <= tol.projector_tol) {
        v.partner[a] = b;
        break;
      }
    }
    if (v.partner[a]) continue;
    bool orthogonal = true;
    for (const auto& it : items) {
      if (std::abs(it.psi.dot(reversed[a])) > tol.projector_tol) {
        orthogonal = false;
        break;
      }
    }
    if (orthogonal) {
      v.kernel_side.push_back(a);
    } else if (!v.witness) {
      v.witness = a;
    }
  }
  if (!v.witness) {
    for (std::size_t x = 0; x < v.kernel_side.size() && !v.witness; ++x)
      for (std::size_t y = x + 1; y < v.kernel_side.size(); ++y) {
        const auto a = v.kernel_side[x];
        const auto b = v.kernel_side[y];
        if (std::abs(reversed[a].dot(reversed[b])) > tol.projector_tol) {
          v.witness = b;
          break;
        }
      }
  }
  v.complete = !v.witness.has_value();
  return v;
}

}  // namespace qdb
