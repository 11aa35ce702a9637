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

#include <functional>
#include <span>
#include <utility>
#include <vector>

#include "qdb/linalg.hpp"

namespace qdb {

/// Hermitian, positive semidefinite, unit-trace matrix with its canonical
/// spectral decomposition cached.
class DensityMatrix {
 public:
  explicit DensityMatrix(CMatrix rho, const ToleranceConfig& tol = {})
      : matrix_(std::move(rho)) {
    if (matrix_.rows() != matrix_.cols() || matrix_.rows() == 0) {
      throw InvalidState("density matrix must be square and non-empty");
    }
    if (hermiticity_defect(matrix_) > tol.herm_tol * std::max(matrix_.norm(), 1e-300)) {
      throw InvalidState("density matrix is not Hermitian");
    }
    spectral_ = herm_eig(matrix_, tol);
    if (spectral_.values(dim() - 1) < -tol.psd_tol) {
      throw InvalidState("density matrix has a negative eigenvalue");
    }
    if (std::abs(matrix_.trace() - Complex(1.0)) > tol.trace_tol) {
      throw InvalidState("density matrix trace differs from one");
    }
  }

  const CMatrix& matrix() const { return matrix_; }
  const HermEigen& spectral() const { return spectral_; }
  Index dim() const { return matrix_.rows(); }

  bool invertible(const ToleranceConfig& tol = {}) const {
    return spectral_.values(dim() - 1) > tol.rank_tol * spectral_.values(0);
  }

 private:
  CMatrix matrix_;
  HermEigen spectral_;
};

/// Linear map L(C^m) -> L(C^n) stored as its standard Choi matrix
/// sum_ij |i><j| (x) E(|i><j|). Complete positivity and trace
/// preservation are recorded as flags rather than enforced, so the
/// same type also carries positive maps and unnormalized CP maps.
class Channel {
 public:
  Channel() = default;

  static Channel from_choi(CMatrix choi, Index dim_in, Index dim_out,
                           const ToleranceConfig& tol = {}) {
    if (choi.rows() != dim_in * dim_out || choi.cols() != dim_in * dim_out) {
      throw DimensionMismatch("from_choi: Choi matrix size does not match dimensions");
    }
    Channel ch;
    ch.dim_in_ = dim_in;
    ch.dim_out_ = dim_out;
    ch.choi_ = std::move(choi);
    ch.classify(tol);
    return ch;
  }

  static Channel from_kraus(std::span<const CMatrix> ops, const ToleranceConfig& tol = {}) {
    if (ops.empty()) throw InvalidChannel("from_kraus: empty Kraus list");
    const Index n = ops.front().rows();
    const Index m = ops.front().cols();
    CMatrix choi = CMatrix::Zero(m * n, m * n);
    for (const auto& k : ops) {
      if (k.rows() != n || k.cols() != m) {
        throw DimensionMismatch("from_kraus: Kraus operators have inconsistent shapes");
      }
      CVector v(m * n);
      for (Index i = 0; i < m; ++i) v.segment(i * n, n) = k.col(i);
      choi += v * v.adjoint();
    }
    return from_choi(std::move(choi), m, n, tol);
  }

  /// Builds the Choi matrix of a linear map from its action on matrix units.
  static Channel from_map(Index dim_in, Index dim_out,
                          const std::function<CMatrix(const CMatrix&)>& f,
                          const ToleranceConfig& tol = {}) {
    CMatrix choi = CMatrix::Zero(dim_in * dim_out, dim_in * dim_out);
    for (Index i = 0; i < dim_in; ++i)
      for (Index j = 0; j < dim_in; ++j) {
        CMatrix unit = CMatrix::Zero(dim_in, dim_in);
        unit(i, j) = 1.0;
        const CMatrix image = f(unit);
        require_square(image, dim_out, "from_map");
        choi.block(i * dim_out, j * dim_out, dim_out, dim_out) = image;
      }
    return from_choi(std::move(choi), dim_in, dim_out, tol);
  }

  Index dim_in() const { return dim_in_; }
  Index dim_out() const { return dim_out_; }
  const CMatrix& choi() const { return choi_; }
  bool completely_positive() const { return cp_; }
  bool trace_preserving() const { return tp_; }

  CMatrix apply(const CMatrix& x) const {
    require_square(x, dim_in_, "apply");
    CMatrix out = CMatrix::Zero(dim_out_, dim_out_);
    for (Index i = 0; i < dim_in_; ++i)
      for (Index j = 0; j < dim_in_; ++j) {
        if (x(i, j) == Complex(0.0)) continue;
        out += x(i, j) * choi_.block(i * dim_out_, j * dim_out_, dim_out_, dim_out_);
      }
    return out;
  }

  CMatrix operator()(const CMatrix& x) const { return apply(x); }

  /// Kraus operators from the eigendecomposition of the Choi matrix.
  std::vector<CMatrix> kraus(const ToleranceConfig& tol = {}) const {
    if (!cp_) throw InvalidChannel("kraus: map is not completely positive");
    const HermEigen eig = herm_eig(choi_, tol);
    std::vector<CMatrix> ops;
    const double cut = tol.rank_tol * std::max(eig.values(0), 0.0);
    for (Index a = 0; a < eig.values.size(); ++a) {
      if (eig.values(a) <= cut) continue;
      const double w = std::sqrt(eig.values(a));
      CMatrix k(dim_out_, dim_in_);
      for (Index i = 0; i < dim_in_; ++i)
        k.col(i) = w * eig.vectors.col(a).segment(i * dim_out_, dim_out_);
      ops.push_back(std::move(k));
    }
    return ops;
  }

 private:
  void classify(const ToleranceConfig& tol) {
    const Index d = dim_in_ * dim_out_;
    const double norm = choi_.norm();
    cp_ = false;
    if (hermiticity_defect(choi_) <= tol.herm_tol * std::max(norm, 1.0)) {
      const HermEigen eig = herm_eig((choi_ + choi_.adjoint()) / 2.0, tol);
      cp_ = d == 0 || eig.values(d - 1) >= -tol.psd_tol * std::max(1.0, norm);
    }
    const CMatrix reduced = partial_trace(choi_, dim_in_, dim_out_, Factor::second);
    tp_ = (reduced - CMatrix::Identity(dim_in_, dim_in_)).norm() <= tol.tp_tol;
  }

  Index dim_in_ = 0;
  Index dim_out_ = 0;
  CMatrix choi_;
  bool cp_ = false;
  bool tp_ = false;
};

inline Channel identity_channel(Index dim) {
  const CMatrix id = CMatrix::Identity(dim, dim);
  return Channel::from_kraus(std::span<const CMatrix>(&id, 1));
}

inline Channel unitary_channel(const CMatrix& u) {
  return Channel::from_kraus(std::span<const CMatrix>(&u, 1));
}

/// Hilbert-Schmidt adjoint under Tr(X E^dag(Y)) = Tr(E(X) Y).
inline Channel adjoint(const Channel& ch, const ToleranceConfig& tol = {}) {
  const Index m = ch.dim_in();
  const Index n = ch.dim_out();
  const CMatrix& c = ch.choi();
  CMatrix out(n * m, n * m);
  // E^dag(|k><l|)_{ji} = <l| E(|i><j|) |k>
  for (Index k = 0; k < n; ++k)
    for (Index l = 0; l < n; ++l)
      for (Index j = 0; j < m; ++j)
        for (Index i = 0; i < m; ++i) out(k * m + j, l * m + i) = c(i * n + l, j * n + k);
  return Channel::from_choi(std::move(out), n, m, tol);
}

inline Channel compose(const Channel& outer, const Channel& inner, const ToleranceConfig& tol = {}) {
  if (inner.dim_out() != outer.dim_in()) throw DimensionMismatch("compose: dimensions do not chain");
  return Channel::from_map(inner.dim_in(), outer.dim_out(),
                           [&](const CMatrix& x) { return outer.apply(inner.apply(x)); }, tol);
}

/// Frobenius distance between standard Choi matrices.
inline double choi_distance(const Channel& a, const Channel& b) {
  if (a.dim_in() != b.dim_in() || a.dim_out() != b.dim_out()) {
    throw DimensionMismatch("choi_distance: dimension mismatch");
  }
  return (a.choi() - b.choi()).norm();
}

/// State-relative CJ matrix kappa with the state and the eigenbasis used.
struct RelativeChoi {
  CMatrix kappa;
  DensityMatrix rho;
  CMatrix basis;    // columns: eigenvectors of rho
  RVector weights;  // eigenvalues of rho in that basis
  Index dim_in = 0;
  Index dim_out = 0;
};

namespace detail {

inline RVector basis_weights(const CMatrix& rho, const CMatrix& basis, const ToleranceConfig& tol) {
  const Index m = rho.rows();
  require_square(basis, m, "basis");
  if ((basis.adjoint() * basis - CMatrix::Identity(m, m)).norm() > tol.cj_tol) {
    throw InvalidBasis("basis is not orthonormal");
  }
  const CMatrix d = basis.adjoint() * rho * basis;
  CMatrix off = d;
  off.diagonal().setZero();
  if (off.norm() > tol.cj_tol) throw InvalidBasis("basis does not diagonalize the state");
  RVector w(m);
  for (Index i = 0; i < m; ++i) w(i) = std::max(d(i, i).real(), 0.0);
  return w;
}

// kappa = (B (x) I) K (B^dag (x) I), with block (i, j) of K equal to
// sqrt(w_i w_j) E(b_i b_j^dag).
inline CMatrix relative_kappa(const Channel& ch, const RVector& w, const CMatrix& basis) {
  const Index m = ch.dim_in();
  const Index n = ch.dim_out();
  CMatrix k(m * n, m * n);
  for (Index i = 0; i < m; ++i)
    for (Index j = 0; j < m; ++j) {
      const CMatrix unit = basis.col(i) * basis.col(j).adjoint();
      k.block(i * n, j * n, n, n) = std::sqrt(w(i) * w(j)) * ch.apply(unit);
    }
  const CMatrix lift = tensor(basis, CMatrix::Identity(n, n));
  return lift * k * lift.adjoint();
}

}  // namespace detail

/// kappa relative to rho in an explicit eigenbasis of rho.
inline RelativeChoi cj_relative(const Channel& ch, const DensityMatrix& rho, const CMatrix& basis,
                                const ToleranceConfig& tol = {}) {
  if (rho.dim() != ch.dim_in()) throw DimensionMismatch("cj_relative: state and channel dimensions differ");
  RVector w = detail::basis_weights(rho.matrix(), basis, tol);
  CMatrix kappa = detail::relative_kappa(ch, w, basis);
  return RelativeChoi{std::move(kappa), rho, basis, std::move(w), ch.dim_in(), ch.dim_out()};
}

/// kappa relative to rho in the canonical eigenbasis of rho.
inline RelativeChoi cj_relative(const Channel& ch, const DensityMatrix& rho,
                                const ToleranceConfig& tol = {}) {
  return cj_relative(ch, rho, rho.spectral().vectors, tol);
}

/// Recovers the map whose kappa relative to weights w in basis B is
/// `kappa`: E(b_i b_j^dag) = (w_i w_j)^{-1/2} (<b_i| (x) I) kappa (|b_j> (x) I).
inline Channel invert_relative(const CMatrix& kappa, const RVector& w, const CMatrix& basis,
                               Index dim_in, Index dim_out, const ToleranceConfig& tol = {}) {
  const Index m = dim_in;
  const Index n = dim_out;
  require_square(kappa, m * n, "invert_relative");
  const double top = w.maxCoeff();
  if (w.minCoeff() <= tol.rank_tol * top) {
    throw NonInvertibleState("invert_relative: state has a zero eigenvalue");
  }
  const CMatrix lift = tensor(basis, CMatrix::Identity(n, n));
  CMatrix k = lift.adjoint() * kappa * lift;
  for (Index i = 0; i < m; ++i)
    for (Index j = 0; j < m; ++j) k.block(i * n, j * n, n, n) /= std::sqrt(w(i) * w(j));
  // back to matrix units: E(|a><c|) = sum_ij conj(B_ai) B_cj E(b_i b_j^dag)
  const CMatrix back = tensor(basis.conjugate(), CMatrix::Identity(n, n));
  CMatrix choi = back * k * back.adjoint();
  return Channel::from_choi(std::move(choi), m, n, tol);
}

inline Channel cj_invert(const RelativeChoi& rc, const ToleranceConfig& tol = {}) {
  return invert_relative(rc.kappa, rc.weights, rc.basis, rc.dim_in, rc.dim_out, tol);
}

}  // namespace qdb
