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

#include <algorithm>
#include <cmath>
#include <complex>
#include <numeric>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "qdb/error.hpp"
#include "qdb/tolerance.hpp"

namespace qdb {

using Complex = std::complex<double>;
using CMatrix = Eigen::MatrixXcd;
using CVector = Eigen::VectorXcd;
using RVector = Eigen::VectorXd;
using Index = Eigen::Index;

enum class Factor { first, second };

inline void require_square(const CMatrix& x, Index dim, const char* what) {
  if (x.rows() != dim || x.cols() != dim) {
    throw DimensionMismatch(std::string(what) + ": expected " +
                            std::to_string(dim) + "x" + std::to_string(dim) +
                            ", got " + std::to_string(x.rows()) + "x" +
                            std::to_string(x.cols()));
  }
}

/// Kronecker product; row index of the result is i_a * rows(b) + i_b.
inline CMatrix tensor(const CMatrix& a, const CMatrix& b) {
  CMatrix out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Index i = 0; i < a.rows(); ++i) {
    for (Index j = 0; j < a.cols(); ++j) {
      out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
    }
  }
  return out;
}

inline CVector tensor_vector(const CVector& a, const CVector& b) {
  CVector out(a.size() * b.size());
  for (Index i = 0; i < a.size(); ++i) out.segment(i * b.size(), b.size()) = a(i) * b;
  return out;
}

/// Traces out the factor named by `which`. Factor::second keeps the
/// first factor and returns a dim_a square matrix.
inline CMatrix partial_trace(const CMatrix& x, Index dim_a, Index dim_b,
                             Factor which) {
  require_square(x, dim_a * dim_b, "partial_trace");
  if (which == Factor::second) {
    CMatrix out = CMatrix::Zero(dim_a, dim_a);
    for (Index i = 0; i < dim_a; ++i)
      for (Index j = 0; j < dim_a; ++j)
        for (Index k = 0; k < dim_b; ++k) out(i, j) += x(i * dim_b + k, j * dim_b + k);
    return out;
  }
  CMatrix out = CMatrix::Zero(dim_b, dim_b);
  for (Index k = 0; k < dim_a; ++k) out += x.block(k * dim_b, k * dim_b, dim_b, dim_b);
  return out;
}

/// Transposes one tensor factor in the computational basis.
inline CMatrix partial_transpose(const CMatrix& x, Index dim_a, Index dim_b,
                                 Factor which) {
  require_square(x, dim_a * dim_b, "partial_transpose");
  CMatrix out(x.rows(), x.cols());
  for (Index ia = 0; ia < dim_a; ++ia)
    for (Index ib = 0; ib < dim_b; ++ib)
      for (Index ja = 0; ja < dim_a; ++ja)
        for (Index jb = 0; jb < dim_b; ++jb) {
          const Index r = ia * dim_b + ib;
          const Index c = ja * dim_b + jb;
          if (which == Factor::first)
            out(r, c) = x(ja * dim_b + ib, ia * dim_b + jb);
          else
            out(r, c) = x(ia * dim_b + jb, ja * dim_b + ib);
        }
  return out;
}

/// R : H_m (x) H_n -> H_n (x) H_m with R(e_i (x) f_j) = f_j (x) e_i.
inline CMatrix swap_operator(Index m, Index n) {
  CMatrix r = CMatrix::Zero(m * n, m * n);
  for (Index i = 0; i < m; ++i)
    for (Index j = 0; j < n; ++j) r(j * m + i, i * n + j) = 1.0;
  return r;
}

/// Transpose of x taken in the orthonormal basis given by the columns
/// of `basis`: X^T_B = B B^T X^T conj(B) B^dag.
inline CMatrix transpose_in_basis(const CMatrix& x, const CMatrix& basis) {
  const CMatrix bbt = basis * basis.transpose();
  return bbt * x.transpose() * bbt.conjugate();
}

inline double hermiticity_defect(const CMatrix& a) {
  return (a - a.adjoint()).norm();
}

inline bool is_hermitian(const CMatrix& a, const ToleranceConfig& tol = {}) {
  return a.rows() == a.cols() && hermiticity_defect(a) <= tol.herm_tol * std::max(a.norm(), 1e-300);
}

struct EigenCluster {
  Index begin = 0;
  Index size = 0;
};

struct HermEigen {
  RVector values;   // descending
  CMatrix vectors;  // orthonormal columns
  std::vector<EigenCluster> clusters;
};

namespace detail {

constexpr double kAcceptResidual = 1e-3;
constexpr double kPhaseThreshold = 1e-8;

// Cyclic Jacobi on a Hermitian matrix. Each rotation zeroes one
// off-diagonal pair with the unitary J = [[c, s], [-s e^{-i phi}, c e^{-i phi}]]
// where a_pq = |a_pq| e^{i phi}.
inline void jacobi_sweeps(CMatrix& a, CMatrix& v, double scale, double eig_tol) {
  const Index n = a.rows();
  v = CMatrix::Identity(n, n);
  auto off_norm = [&] {
    double s = 0;
    for (Index p = 0; p < n; ++p)
      for (Index q = 0; q < n; ++q)
        if (p != q) s += std::norm(a(p, q));
    return std::sqrt(s);
  };
  const double floor = std::numeric_limits<double>::epsilon() * scale;
  for (int sweep = 0; sweep < 100; ++sweep) {
    if (off_norm() <= floor) break;
    for (Index p = 0; p < n - 1; ++p) {
      for (Index q = p + 1; q < n; ++q) {
        const double mag = std::abs(a(p, q));
        if (mag <= 1e-300 || mag <= 1e-3 * floor / static_cast<double>(n)) continue;
        const Complex phase = a(p, q) / mag;
        const double zeta = (a(q, q).real() - a(p, p).real()) / (2.0 * mag);
        const double t = (zeta >= 0 ? 1.0 : -1.0) / (std::abs(zeta) + std::sqrt(zeta * zeta + 1.0));
        const double c = 1.0 / std::sqrt(t * t + 1.0);
        const double s = t * c;
        const Complex e = std::conj(phase);
        // A <- A J on columns p, q
        for (Index k = 0; k < n; ++k) {
          const Complex akp = a(k, p), akq = a(k, q);
          a(k, p) = c * akp - s * e * akq;
          a(k, q) = s * akp + c * e * akq;
        }
        // A <- J^dag A on rows p, q
        for (Index k = 0; k < n; ++k) {
          const Complex apk = a(p, k), aqk = a(q, k);
          a(p, k) = c * apk - s * std::conj(e) * aqk;
          a(q, k) = s * apk + c * std::conj(e) * aqk;
        }
        a(p, q) = 0;
        a(q, p) = 0;
        a(p, p) = a(p, p).real();
        a(q, q) = a(q, q).real();
        for (Index k = 0; k < n; ++k) {
          const Complex vkp = v(k, p), vkq = v(k, q);
          v(k, p) = c * vkp - s * e * vkq;
          v(k, q) = s * vkp + c * e * vkq;
        }
      }
    }
  }
  if (off_norm() > eig_tol * scale) {
    throw ConvergenceFailure("herm_eig: Jacobi iteration did not converge");
  }
}

}  // namespace detail

/// Makes the first component with modulus above 1e-8 real and positive.
inline void fix_phase(Eigen::Ref<CVector> v) {
  for (Index x = 0; x < v.size(); ++x) {
    const double mag = std::abs(v(x));
    if (mag > detail::kPhaseThreshold) {
      v *= std::conj(v(x)) / mag;
      return;
    }
  }
}

/// Orthonormal basis of the range of the projector `proj` (rank k),
/// built by Gram-Schmidt on proj * e_x in index order. A candidate is
/// accepted when its residual exceeds 1e-3; if that yields fewer than k
/// vectors the remaining ones are filled greedily by largest residual.
inline CMatrix canonical_span_basis(const CMatrix& proj, Index k) {
  const Index n = proj.rows();
  std::vector<CVector> basis;
  auto residual = [&](Index x) {
    CVector r = proj.col(x);
    for (int pass = 0; pass < 2; ++pass)
      for (const auto& b : basis) r -= b * b.dot(r);
    return r;
  };
  for (Index x = 0; x < n && static_cast<Index>(basis.size()) < k; ++x) {
    CVector r = residual(x);
    const double nr = r.norm();
    if (nr > detail::kAcceptResidual) basis.push_back(r / nr);
  }
  while (static_cast<Index>(basis.size()) < k) {
    Index best = 0;
    double best_norm = -1;
    for (Index x = 0; x < n; ++x) {
      const double nr = residual(x).norm();
      if (nr > best_norm) {
        best_norm = nr;
        best = x;
      }
    }
    if (best_norm <= 1e-300) throw ConvergenceFailure("canonical_span_basis: rank deficient projector");
    CVector r = residual(best);
    basis.push_back(r / r.norm());
  }
  CMatrix out(n, k);
  for (Index j = 0; j < k; ++j) {
    out.col(j) = basis[j];
    fix_phase(out.col(j));
  }
  return out;
}

/// Hermitian eigendecomposition by cyclic Jacobi. Eigenvalues descend;
/// eigenvalues within cluster_tol * max(1, ||A||) form one cluster, share
/// the cluster mean as their value and get the canonical basis of the
/// cluster's eigenspace.
inline HermEigen herm_eig(const CMatrix& a, const ToleranceConfig& tol = {}) {
  if (a.rows() != a.cols()) throw DimensionMismatch("herm_eig: matrix is not square");
  const double norm = a.norm();
  if (hermiticity_defect(a) > tol.herm_tol * norm) {
    throw NotHermitian("herm_eig: input is not Hermitian");
  }
  const Index n = a.rows();
  HermEigen out;
  if (n == 0) return out;
  CMatrix work = (a + a.adjoint()) / 2.0;
  CMatrix v;
  detail::jacobi_sweeps(work, v, std::max(norm, 1e-300), tol.eig_tol);

  std::vector<Index> order(static_cast<std::size_t>(n));
  std::iota(order.begin(), order.end(), Index{0});
  std::stable_sort(order.begin(), order.end(), [&](Index x, Index y) {
    return work(x, x).real() > work(y, y).real();
  });
  out.values.resize(n);
  out.vectors.resize(n, n);
  for (Index j = 0; j < n; ++j) {
    out.values(j) = work(order[j], order[j]).real();
    out.vectors.col(j) = v.col(order[j]);
  }

  const double gap = tol.cluster_tol * std::max(1.0, norm);
  Index start = 0;
  for (Index j = 1; j <= n; ++j) {
    if (j == n || out.values(j - 1) - out.values(j) > gap) {
      out.clusters.push_back({start, j - start});
      start = j;
    }
  }
  for (const auto& c : out.clusters) {
    if (c.size == 1) {
      fix_phase(out.vectors.col(c.begin));
      continue;
    }
    const auto block = out.vectors.middleCols(c.begin, c.size);
    const CMatrix proj = block * block.adjoint();
    out.vectors.middleCols(c.begin, c.size) = canonical_span_basis(proj, c.size);
    const double mean = out.values.segment(c.begin, c.size).mean();
    out.values.segment(c.begin, c.size).setConstant(mean);
  }
  return out;
}

enum class KernelPolicy { reject, pseudo };

/// A^p for PSD A. Eigenvalues below rank_tol * lambda_max count as kernel.
inline CMatrix psd_power(const CMatrix& a, double exponent,
                         KernelPolicy policy = KernelPolicy::reject,
                         const ToleranceConfig& tol = {}) {
  const HermEigen eig = herm_eig(a, tol);
  const Index n = a.rows();
  if (n == 0) return a;
  const double top = std::max(eig.values(0), 0.0);
  if (eig.values(n - 1) < -tol.psd_tol * std::max(1.0, a.norm())) {
    throw NotPositive("psd_power: matrix has a negative eigenvalue");
  }
  const double cut = tol.rank_tol * top;
  RVector powered(n);
  for (Index j = 0; j < n; ++j) {
    const double lam = eig.values(j);
    if (lam <= cut) {
      if (exponent < 0 && policy == KernelPolicy::reject) {
        throw SingularMatrix("psd_power: negative power of a singular matrix");
      }
      powered(j) = 0.0;
    } else {
      powered(j) = std::pow(lam, exponent);
    }
  }
  return eig.vectors * powered.cast<Complex>().asDiagonal() * eig.vectors.adjoint();
}

}  // namespace qdb
