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

#include <numbers>
#include <optional>
#include <string>

#include "qdb/balance.hpp"

namespace qdb {

// An (anti)unitary involution is a matrix M plus a flag. The antiunitary
// operator acts on vectors as v -> M conj(v).

struct ParityOp {
  CMatrix matrix;
  bool antiunitary = false;
};

struct ReversingOp {
  CMatrix matrix;
  bool antiunitary = false;
};

namespace detail {

inline void validate_involution(const CMatrix& m, bool antiunitary, double tol, const char* what) {
  if (m.rows() != m.cols() || m.rows() == 0) throw InvalidOperator(std::string(what) + ": matrix must be square");
  const Index d = m.rows();
  const CMatrix id = CMatrix::Identity(d, d);
  if ((m.adjoint() * m - id).norm() > tol) throw InvalidOperator(std::string(what) + ": matrix is not unitary");
  const CMatrix square = antiunitary ? CMatrix(m * m.conjugate()) : CMatrix(m * m);
  if ((square - id).norm() > tol) throw InvalidOperator(std::string(what) + ": operator does not square to the identity");
}

// Theta X Theta for the involution Theta: M X M, or M conj(X) conj(M).
inline CMatrix conjugate_by(const CMatrix& m, bool antiunitary, const CMatrix& x) {
  if (antiunitary) return m * x.conjugate() * m.conjugate();
  return m * x * m;
}

}  // namespace detail

inline ParityOp make_parity(CMatrix m, bool antiunitary, const ToleranceConfig& tol = {}) {
  detail::validate_involution(m, antiunitary, tol.involution_tol, "parity");
  return {std::move(m), antiunitary};
}

inline ReversingOp make_reversing(CMatrix m, bool antiunitary, const ToleranceConfig& tol = {}) {
  detail::validate_involution(m, antiunitary, tol.involution_tol, "reversing operation");
  return {std::move(m), antiunitary};
}

/// Componentwise complex conjugation C on C^d.
inline ParityOp conjugation(Index d) { return {CMatrix::Identity(d, d), true}; }

inline ParityOp permutation_parity(const std::vector<Index>& pi) {
  const Index d = static_cast<Index>(pi.size());
  CMatrix m = CMatrix::Zero(d, d);
  for (Index i = 0; i < d; ++i) m(pi[static_cast<std::size_t>(i)], i) = 1.0;
  return make_parity(std::move(m), false);
}

template <class Op>
CVector apply_to_vector(const Op& op, const CVector& v) {
  return op.antiunitary ? CVector(op.matrix * v.conjugate()) : CVector(op.matrix * v);
}

/// P(X) = P X P.
inline CMatrix apply_parity(const ParityOp& p, const CMatrix& x) {
  require_square(x, p.matrix.rows(), "apply_parity");
  return detail::conjugate_by(p.matrix, p.antiunitary, x);
}

/// theta(X) = Theta X^dag Theta.
inline CMatrix apply_reversing(const ReversingOp& th, const CMatrix& x) {
  require_square(x, th.matrix.rows(), "apply_reversing");
  return detail::conjugate_by(th.matrix, th.antiunitary, x.adjoint());
}

/// Q = R o (P (x) P) on operators of the doubled system, allowing
/// different parities on the two factors.
inline CMatrix q_map(const ParityOp& pa, const ParityOp& pb, const CMatrix& z) {
  if (pa.antiunitary != pb.antiunitary) throw InvalidOperator("q_map: parities must share linearity");
  const Index m = pa.matrix.rows();
  const Index n = pb.matrix.rows();
  require_square(z, m * n, "q_map");
  const CMatrix pp = tensor(pa.matrix, pb.matrix);
  const CMatrix r = swap_operator(m, n);
  return r * detail::conjugate_by(pp, pa.antiunitary, z) * r.adjoint();
}

inline CMatrix q_map(const ParityOp& p, const CMatrix& z) { return q_map(p, p, z); }

inline CheckResult check_etdb_p(const Channel& ch, const DensityMatrix& rho, const ParityOp& p,
                                const CMatrix& basis, const ToleranceConfig& tol = {}) {
  detail::require_endo(ch, rho, "check_etdb_p");
  require_square(p.matrix, rho.dim(), "check_etdb_p parity");
  const RelativeChoi rc = cj_relative(ch, rho, basis, tol);
  CheckResult res = make_result((q_map(p, rc.kappa) - rc.kappa).norm(), tol.etdb_tol);
  if ((apply_parity(p, rho.matrix()) - rho.matrix()).norm() > tol.inv_tol) {
    res.notes.emplace_back("parity does not commute with the state; invariance and the dual characterization do not apply");
  }
  return res;
}

inline CheckResult check_etdb_p(const Channel& ch, const DensityMatrix& rho, const ParityOp& p,
                                const ToleranceConfig& tol = {}) {
  return check_etdb_p(ch, rho, p, rho.spectral().vectors, tol);
}

/// E^P = P_A o E' o P_B, cross-checked against CJ inversion of Q(kappa)
/// in the basis P_B f_k.
inline Channel parity_dual(const Channel& ch, const DensityMatrix& rho, const ParityOp& pa, const ParityOp& pb,
                           const DualBases& bases, const ToleranceConfig& tol = {}) {
  if (pa.antiunitary != pb.antiunitary) {
    throw InvalidOperator("parity_dual: P_A and P_B must both be unitary or both antiunitary");
  }
  require_square(pa.matrix, ch.dim_in(), "parity_dual P_A");
  require_square(pb.matrix, ch.dim_out(), "parity_dual P_B");
  const detail::Sigma sigma = detail::output_state(ch, rho, tol);
  const CMatrix in_basis = bases.in.value_or(rho.spectral().vectors);
  const CMatrix out_basis = bases.out.value_or(sigma.spectral.vectors);
  const Channel prime = dual_channel(ch, rho, DualBases{in_basis, out_basis}, tol);
  Channel composed = Channel::from_map(ch.dim_out(), ch.dim_in(), [&](const CMatrix& y) {
    return apply_parity(pa, prime.apply(apply_parity(pb, y)));
  }, tol);

  const RelativeChoi rc = cj_relative(ch, rho, in_basis, tol);
  const CMatrix kappa_p = q_map(pa, pb, rc.kappa);
  CMatrix g(out_basis.rows(), out_basis.cols());
  for (Index k = 0; k < out_basis.cols(); ++k) g.col(k) = apply_to_vector(pb, out_basis.col(k));
  const RVector w = detail::weights_in(sigma.matrix, out_basis, tol);
  const Channel direct = invert_relative(kappa_p, w, g, ch.dim_out(), ch.dim_in(), tol);
  assert_duals_agree(composed, direct, tol, "parity_dual");
  return composed;
}

inline Channel parity_dual(const Channel& ch, const DensityMatrix& rho, const ParityOp& pa, const ParityOp& pb,
                           const ToleranceConfig& tol = {}) {
  return parity_dual(ch, rho, pa, pb, DualBases{}, tol);
}

/// Signs s_i with Theta b_i = s_i b_i, or nullopt if Theta is not
/// diagonal with real +-1 entries in the basis.
inline std::optional<RVector> reversing_signs(const ReversingOp& th, const CMatrix& basis, double tol) {
  const CMatrix image = th.antiunitary ? CMatrix(th.matrix * basis.conjugate()) : CMatrix(th.matrix * basis);
  const CMatrix d = basis.adjoint() * image;
  RVector s(d.rows());
  CMatrix off = d;
  off.diagonal().setZero();
  if (off.norm() > tol) return std::nullopt;
  for (Index i = 0; i < d.rows(); ++i) {
    const Complex x = d(i, i);
    if (std::abs(x - Complex(1.0)) <= tol) s(i) = 1.0;
    else if (std::abs(x + Complex(1.0)) <= tol) s(i) = -1.0;
    else return std::nullopt;
  }
  return s;
}

/// The parity P = C_B Theta with theta = P o T_B = T_B o P, where T_B is
/// the transpose in `basis`. Theta must act as +-1 on every basis vector.
inline ParityOp factor_theta(const ReversingOp& th, const CMatrix& basis, const ToleranceConfig& tol = {}) {
  const Index d = th.matrix.rows();
  require_square(basis, d, "factor_theta basis");
  if (!reversing_signs(th, basis, tol.involution_tol * std::max<double>(1.0, static_cast<double>(d)))) {
    throw NotDiagonalizedJointly("factor_theta: reversing operation is not diagonal in the basis");
  }
  ParityOp p{basis * basis.transpose() * th.matrix.conjugate(), !th.antiunitary};
  for (Index i = 0; i < d; ++i)
    for (Index j = 0; j < d; ++j) {
      CMatrix unit = CMatrix::Zero(d, d);
      unit(i, j) = 1.0;
      const CMatrix want = apply_reversing(th, unit);
      const CMatrix left = apply_parity(p, transpose_in_basis(unit, basis));
      const CMatrix right = transpose_in_basis(apply_parity(p, unit), basis);
      if ((want - left).norm() > tol.involution_tol || (want - right).norm() > tol.involution_tol) {
        throw ConsistencyFailure("factor_theta: factorization does not reproduce theta");
      }
    }
  return p;
}

/// Eigenbasis of rho in which Theta is also diagonal with signs +-1.
/// Within each eigenspace a unitary Theta is diagonalized as a Hermitian
/// involution; an antiunitary one gets a basis of fixed vectors from
/// Gram-Schmidt on the seeds w + Theta w and i(w - Theta w).
inline CMatrix joint_basis(const DensityMatrix& rho, const ReversingOp& th, const ToleranceConfig& tol = {}) {
  const Index d = rho.dim();
  require_square(th.matrix, d, "joint_basis");
  if ((apply_reversing(th, rho.matrix()) - rho.matrix()).norm() > tol.theta_state_tol) {
    throw NotDiagonalizedJointly("joint_basis: reversing operation does not fix the state");
  }
  const HermEigen& sp = rho.spectral();
  CMatrix out(d, d);
  for (const auto& cl : sp.clusters) {
    const CMatrix w = sp.vectors.middleCols(cl.begin, cl.size);
    CMatrix block;
    if (!th.antiunitary) {
      const CMatrix h = w.adjoint() * th.matrix * w;
      const HermEigen he = herm_eig((h + h.adjoint()) / 2.0, tol);
      block = w * he.vectors;
    } else {
      std::vector<CVector> fixed;
      for (Index j = 0; j < cl.size && static_cast<Index>(fixed.size()) < cl.size; ++j) {
        const CVector col = w.col(j);
        const CVector theta_col = th.matrix * col.conjugate();
        for (const CVector& seed : {CVector(col + theta_col), CVector(Complex(0, 1) * (col - theta_col))}) {
          CVector r = seed;
          for (int pass = 0; pass < 2; ++pass)
            for (const auto& f : fixed) r -= f * f.dot(r).real();
          const double nr = r.norm();
          if (nr > 1e-3 && static_cast<Index>(fixed.size()) < cl.size) fixed.push_back(r / nr);
        }
      }
      if (static_cast<Index>(fixed.size()) < cl.size) {
        throw NotDiagonalizedJointly("joint_basis: could not build fixed vectors of the reversing operation");
      }
      block.resize(d, cl.size);
      for (Index j = 0; j < cl.size; ++j) {
        CVector f = fixed[static_cast<std::size_t>(j)];
        for (Index x = 0; x < d; ++x)
          if (std::abs(f(x)) > 1e-8) {
            if (f(x).real() < 0) f = -f;
            break;
          }
        block.col(j) = f;
      }
    }
    out.middleCols(cl.begin, cl.size) = block;
  }
  if (!reversing_signs(th, out, tol.involution_tol * std::max<double>(1.0, static_cast<double>(d)))) {
    throw NotDiagonalizedJointly("joint_basis: reversing operation does not commute with the state");
  }
  return out;
}

struct SqdbThetaResult {
  CheckResult invariance;
  double kms_residual = 0.0;                // ||choi(theta o E^KMS o theta) - choi(E)||
  std::optional<double> ac_residual;        // ||choi(P o E^AC o P) - choi(E)||
  std::optional<double> form_disagreement;  // between the two composites
  bool pass = false;
  CMatrix basis;
  std::optional<ParityOp> parity;
  std::vector<std::string> notes;
};

/// theta o E^KMS o theta = E together with E(rho) = rho. The factorized
/// form P o E^AC o P is evaluated as well when invariance holds, and the
/// two composites must agree.
inline SqdbThetaResult check_sqdb_theta(const Channel& ch, const DensityMatrix& rho, const ReversingOp& th,
                                        const ToleranceConfig& tol = {}) {
  detail::require_endo(ch, rho, "check_sqdb_theta");
  require_square(th.matrix, rho.dim(), "check_sqdb_theta");
  if ((apply_reversing(th, rho.matrix()) - rho.matrix()).norm() > tol.theta_state_tol) {
    throw ThetaStateMismatch("check_sqdb_theta: theta(rho) differs from rho");
  }
  (void)detail::output_state(ch, rho, tol);
  SqdbThetaResult out;
  out.invariance = check_invariance(ch, rho, tol);

  const Channel kms = kms_dual(ch, rho, tol);
  const Channel kms_form = Channel::from_map(ch.dim_in(), ch.dim_in(), [&](const CMatrix& y) {
    return apply_reversing(th, kms.apply(apply_reversing(th, y)));
  }, tol);
  out.kms_residual = choi_distance(kms_form, ch);

  const double sign_tol = tol.involution_tol * std::max<double>(1.0, static_cast<double>(rho.dim()));
  out.basis = reversing_signs(th, rho.spectral().vectors, sign_tol) ? rho.spectral().vectors
                                                                     : joint_basis(rho, th, tol);
  out.parity = factor_theta(th, out.basis, tol);
  if (out.invariance.pass) {
    try {
      const Channel ac = ac_dual(ch, rho, DualBases{out.basis, out.basis}, tol);
      const ParityOp& p = *out.parity;
      const Channel ac_form = Channel::from_map(ch.dim_in(), ch.dim_in(), [&](const CMatrix& y) {
        return apply_parity(p, ac.apply(apply_parity(p, y)));
      }, tol);
      out.ac_residual = choi_distance(ac_form, ch);
      out.form_disagreement = choi_distance(ac_form, kms_form);
      assert_duals_agree(kms_form, ac_form, tol, "check_sqdb_theta");
    } catch (const InvalidBasis&) {
      out.notes.emplace_back("output state not diagonal in the state basis; factorized form skipped");
    }
  } else {
    out.notes.emplace_back("invariance fails; factorized form not evaluated");
  }
  out.pass = out.invariance.pass && out.kms_residual <= tol.sqdb_tol;
  return out;
}

struct ShiftClock {
  CMatrix u;  // U|k> = |k+1 mod m>
  CMatrix v;  // diag(1, r, ..., r^{m-1})
  CMatrix f;  // F_kl = r^{-kl} / sqrt(m)
};

inline ShiftClock shift_clock(Index m) {
  if (m < 2) throw InvalidOperator("shift_clock: dimension must be at least 2");
  ShiftClock sc{CMatrix::Zero(m, m), CMatrix::Zero(m, m), CMatrix(m, m)};
  const double step = 2.0 * std::numbers::pi / static_cast<double>(m);
  for (Index k = 0; k < m; ++k) {
    sc.u((k + 1) % m, k) = 1.0;
    sc.v(k, k) = std::polar(1.0, step * static_cast<double>(k));
    for (Index l = 0; l < m; ++l)
      sc.f(k, l) = std::polar(1.0 / std::sqrt(static_cast<double>(m)), -step * static_cast<double>((k * l) % m));
  }
  return sc;
}

}  // namespace qdb
