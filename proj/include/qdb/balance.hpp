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
#include <string>
#include <vector>

#include "qdb/transitions.hpp"

namespace qdb {

struct CheckResult {
  double residual = 0.0;
  double tolerance = 0.0;
  bool pass = false;
  std::vector<std::string> notes;
};

inline CheckResult make_result(double residual, double tolerance) {
  return {residual, tolerance, residual <= tolerance, {}};
}

/// Bases for the input and output side of a dual. Empty means canonical.
struct DualBases {
  std::optional<CMatrix> in;
  std::optional<CMatrix> out;
};

namespace detail {

inline void require_endo(const Channel& ch, const DensityMatrix& rho, const char* what) {
  if (ch.dim_in() != ch.dim_out()) throw DimensionMismatch(std::string(what) + ": channel is not square");
  if (rho.dim() != ch.dim_in()) throw DimensionMismatch(std::string(what) + ": state dimension differs");
}

struct Sigma {
  CMatrix matrix;
  HermEigen spectral;
};

inline Sigma output_state(const Channel& ch, const DensityMatrix& rho, const ToleranceConfig& tol) {
  if (rho.dim() != ch.dim_in()) throw DimensionMismatch("state dimension differs from channel input");
  Sigma s;
  s.matrix = ch.apply(rho.matrix());
  s.matrix = (s.matrix + s.matrix.adjoint()) / 2.0;
  s.spectral = herm_eig(s.matrix, tol);
  const Index n = s.matrix.rows();
  const double top = s.spectral.values(0);
  if (!(top > 0) || s.spectral.values(n - 1) <= tol.rank_tol * top) {
    throw NonInvertibleSigma("output state E(rho) is not invertible");
  }
  return s;
}

inline RVector weights_in(const CMatrix& state, const CMatrix& basis, const ToleranceConfig& tol) {
  return basis_weights(state, basis, tol);
}

}  // namespace detail

inline CheckResult check_invariance(const Channel& ch, const DensityMatrix& rho,
                                    const ToleranceConfig& tol = {}) {
  detail::require_endo(ch, rho, "check_invariance");
  return make_result((ch.apply(rho.matrix()) - rho.matrix()).norm(), tol.inv_tol);
}

/// ||R kappa R - kappa|| for kappa relative to rho in `basis`.
inline CheckResult check_etdb(const Channel& ch, const DensityMatrix& rho, const CMatrix& basis,
                              const ToleranceConfig& tol = {}) {
  detail::require_endo(ch, rho, "check_etdb");
  const RelativeChoi rc = cj_relative(ch, rho, basis, tol);
  const CMatrix r = swap_operator(rc.dim_in, rc.dim_out);
  return make_result((r * rc.kappa * r.adjoint() - rc.kappa).norm(), tol.etdb_tol);
}

inline CheckResult check_etdb(const Channel& ch, const DensityMatrix& rho, const ToleranceConfig& tol = {}) {
  return check_etdb(ch, rho, rho.spectral().vectors, tol);
}

/// Decomposition of an R-invariant kappa into R-eigenvectors, plus the
/// form in which +1/-1 pairs inside one eigenspace of kappa are recombined
/// into (phi + chi)/sqrt2, (phi - chi)/sqrt2, which swap into each other.
struct EtdbDecomposition {
  CJDecomposition symmetric;
  CJDecomposition paired;
  std::vector<int> parity;  // R-eigenvalue of each symmetric item
  std::vector<std::optional<std::size_t>> partner;  // within `paired`
};

inline EtdbDecomposition etdb_decomposition(const RelativeChoi& rc, const ToleranceConfig& tol = {}) {
  if (rc.dim_in != rc.dim_out) throw DimensionMismatch("etdb_decomposition: system is not square");
  const Index d = rc.dim_in;
  const CMatrix r = swap_operator(d, d);
  if ((r * rc.kappa * r - rc.kappa).norm() > tol.etdb_tol) {
    throw EtdbNotSatisfied("etdb_decomposition: kappa is not swap invariant");
  }
  const HermEigen eig = herm_eig(rc.kappa, tol);
  const double cut = tol.rank_tol * std::max(eig.values(0), 0.0);
  const Index dd = d * d;
  const CMatrix id = CMatrix::Identity(dd, dd);

  std::vector<ElementaryTransition> sym, paired;
  std::vector<int> parity;
  std::vector<std::optional<std::size_t>> partner;
  for (const auto& cl : eig.clusters) {
    const double p = eig.values(cl.begin);
    if (p <= cut) continue;
    const auto block = eig.vectors.middleCols(cl.begin, cl.size);
    const CMatrix proj = block * block.adjoint();
    // R commutes with the eigenprojector, so the +-1 parts are projectors
    const CMatrix plus = proj * (id + r) / 2.0;
    const CMatrix minus = proj * (id - r) / 2.0;
    const auto rank = [&](const CMatrix& q) {
      return static_cast<Index>(std::llround(q.trace().real()));
    };
    const Index np = rank(plus);
    const Index nm = cl.size - np;
    const CMatrix bp = np > 0 ? canonical_span_basis((plus + plus.adjoint()) / 2.0, np) : CMatrix(dd, 0);
    const CMatrix bm = nm > 0 ? canonical_span_basis((minus + minus.adjoint()) / 2.0, nm) : CMatrix(dd, 0);
    for (Index j = 0; j < np; ++j) {
      sym.push_back({bp.col(j), p, d, d});
      parity.push_back(1);
    }
    for (Index j = 0; j < nm; ++j) {
      sym.push_back({bm.col(j), p, d, d});
      parity.push_back(-1);
    }
    const Index pairs = std::min(np, nm);
    for (Index j = 0; j < pairs; ++j) {
      CVector a = (bp.col(j) + bm.col(j)) / std::sqrt(2.0);
      CVector b = (bp.col(j) - bm.col(j)) / std::sqrt(2.0);
      fix_phase(a);
      fix_phase(b);
      const std::size_t base = paired.size();
      paired.push_back({a, p, d, d});
      paired.push_back({b, p, d, d});
      partner.push_back(base + 1);
      partner.push_back(base);
    }
    for (Index j = pairs; j < np; ++j) {
      partner.push_back(paired.size());
      paired.push_back({bp.col(j), p, d, d});
    }
    for (Index j = pairs; j < nm; ++j) {
      partner.push_back(paired.size());
      paired.push_back({bm.col(j), p, d, d});
    }
  }
  return {CJDecomposition(std::move(sym), rc), CJDecomposition(std::move(paired), rc), std::move(parity),
          std::move(partner)};
}

inline EtdbDecomposition etdb_decomposition(const Channel& ch, const DensityMatrix& rho,
                                            const ToleranceConfig& tol = {}) {
  detail::require_endo(ch, rho, "etdb_decomposition");
  return etdb_decomposition(cj_relative(ch, rho, tol), tol);
}

/// E' : the map represented by R kappa R^dag relative to sigma = E(rho),
/// obtained by CJ inversion in the eigenbasis of sigma.
inline Channel dual_channel(const Channel& ch, const DensityMatrix& rho, const DualBases& bases,
                            const ToleranceConfig& tol = {}) {
  const detail::Sigma sigma = detail::output_state(ch, rho, tol);
  const CMatrix in_basis = bases.in.value_or(rho.spectral().vectors);
  const CMatrix out_basis = bases.out.value_or(sigma.spectral.vectors);
  const RelativeChoi rc = cj_relative(ch, rho, in_basis, tol);
  const CMatrix r = swap_operator(rc.dim_in, rc.dim_out);
  const CMatrix kappa_rev = r * rc.kappa * r.adjoint();
  const RVector w = detail::weights_in(sigma.matrix, out_basis, tol);
  return invert_relative(kappa_rev, w, out_basis, ch.dim_out(), ch.dim_in(), tol);
}

inline Channel dual_channel(const Channel& ch, const DensityMatrix& rho, const ToleranceConfig& tol = {}) {
  return dual_channel(ch, rho, DualBases{}, tol);
}

namespace detail {

// rho^{1/2} [E^dag(sigma^{-1/2} Y^{T_B} sigma^{-1/2})]^{T_A} rho^{1/2}
inline Channel ac_closed_form(const Channel& ch, const DensityMatrix& rho, const Sigma& sigma,
                              const CMatrix& in_basis, const CMatrix& out_basis,
                              const ToleranceConfig& tol) {
  const Channel adj = adjoint(ch, tol);
  const CMatrix rho_half = psd_power(rho.matrix(), 0.5, KernelPolicy::pseudo, tol);
  const CMatrix sigma_inv_half = psd_power(sigma.matrix, -0.5, KernelPolicy::reject, tol);
  return Channel::from_map(ch.dim_out(), ch.dim_in(), [&](const CMatrix& y) {
    const CMatrix inner = sigma_inv_half * transpose_in_basis(y, out_basis) * sigma_inv_half;
    return CMatrix(rho_half * transpose_in_basis(adj.apply(inner), in_basis) * rho_half);
  }, tol);
}

}  // namespace detail

inline void assert_duals_agree(const Channel& a, const Channel& b, const ToleranceConfig& tol,
                               const char* what) {
  const double scale = std::max(1.0, a.choi().norm());
  if (choi_distance(a, b) > tol.dual_agreement_tol * scale) {
    throw ConsistencyFailure(std::string(what) + ": independently computed duals disagree");
  }
}

/// Closed-form Accardi-Cecchini dual, cross-checked against dual_channel.
inline Channel ac_dual(const Channel& ch, const DensityMatrix& rho, const DualBases& bases,
                       const ToleranceConfig& tol = {}) {
  const detail::Sigma sigma = detail::output_state(ch, rho, tol);
  const CMatrix in_basis = bases.in.value_or(rho.spectral().vectors);
  const CMatrix out_basis = bases.out.value_or(sigma.spectral.vectors);
  Channel ac = detail::ac_closed_form(ch, rho, sigma, in_basis, out_basis, tol);
  assert_duals_agree(ac, dual_channel(ch, rho, DualBases{in_basis, out_basis}, tol), tol, "ac_dual");
  return ac;
}

inline Channel ac_dual(const Channel& ch, const DensityMatrix& rho, const ToleranceConfig& tol = {}) {
  return ac_dual(ch, rho, DualBases{}, tol);
}

/// Petz recovery map rho^{1/2} E^dag(sigma^{-1/2} Y sigma^{-1/2}) rho^{1/2}.
inline Channel kms_dual(const Channel& ch, const DensityMatrix& rho, const ToleranceConfig& tol = {}) {
  const detail::Sigma sigma = detail::output_state(ch, rho, tol);
  const Channel adj = adjoint(ch, tol);
  const CMatrix rho_half = psd_power(rho.matrix(), 0.5, KernelPolicy::pseudo, tol);
  const CMatrix sigma_inv_half = psd_power(sigma.matrix, -0.5, KernelPolicy::reject, tol);
  return Channel::from_map(ch.dim_out(), ch.dim_in(), [&](const CMatrix& y) {
    return CMatrix(rho_half * adj.apply(sigma_inv_half * y * sigma_inv_half) * rho_half);
  }, tol);
}

struct SqdbResult {
  CheckResult invariance;
  double dual_residual = 0.0;  // ||choi(E^AC) - choi(E)||
  bool pass = false;
  CMatrix basis;  // used on both sides when invariance holds
};

/// E(rho) = rho and E^AC = E. When invariance holds sigma is taken to
/// share rho's eigenbasis, so both transposes are in one basis.
inline SqdbResult check_sqdb(const Channel& ch, const DensityMatrix& rho, const CMatrix& basis,
                             const ToleranceConfig& tol = {}) {
  detail::require_endo(ch, rho, "check_sqdb");
  const detail::Sigma sigma = detail::output_state(ch, rho, tol);
  SqdbResult out;
  out.invariance = check_invariance(ch, rho, tol);
  DualBases bases{basis, std::nullopt};
  if (out.invariance.pass) bases.out = basis;
  else bases.out = sigma.spectral.vectors;
  try {
    out.dual_residual = choi_distance(ac_dual(ch, rho, bases, tol), ch);
  } catch (const InvalidBasis&) {
    // sigma close to rho but not diagonal in rho's basis at cj_tol
    bases.out = sigma.spectral.vectors;
    out.dual_residual = choi_distance(ac_dual(ch, rho, bases, tol), ch);
  }
  out.basis = basis;
  out.pass = out.invariance.pass && out.dual_residual <= tol.sqdb_tol;
  return out;
}

inline SqdbResult check_sqdb(const Channel& ch, const DensityMatrix& rho, const ToleranceConfig& tol = {}) {
  return check_sqdb(ch, rho, rho.spectral().vectors, tol);
}

enum class Verdict { pass, fail, not_evaluable };

inline const char* to_string(Verdict v) {
  switch (v) {
    case Verdict::pass: return "pass";
    case Verdict::fail: return "fail";
    default: return "not_evaluable";
  }
}

inline Verdict verdict_of(bool pass) { return pass ? Verdict::pass : Verdict::fail; }

struct BalanceReport {
  double invariance_residual = 0.0;
  double etdb_residual = 0.0;
  std::optional<double> sqdb_residual;
  Verdict invariance = Verdict::fail;
  Verdict etdb = Verdict::fail;
  Verdict sqdb = Verdict::not_evaluable;
  ToleranceConfig tolerances;
  CMatrix basis;
  std::vector<std::string> notes;
};

/// Runs invariance, ETDB and SQDB. SQDB is "not evaluable" when
/// E(rho) is singular; the other two need no inverses.
inline BalanceReport balance_report(const Channel& ch, const DensityMatrix& rho, const CMatrix& basis,
                                    const ToleranceConfig& tol = {}) {
  BalanceReport rep;
  rep.tolerances = tol;
  rep.basis = basis;
  const CheckResult inv = check_invariance(ch, rho, tol);
  rep.invariance_residual = inv.residual;
  rep.invariance = verdict_of(inv.pass);
  const CheckResult et = check_etdb(ch, rho, basis, tol);
  rep.etdb_residual = et.residual;
  rep.etdb = verdict_of(et.pass);
  try {
    const SqdbResult sq = check_sqdb(ch, rho, basis, tol);
    rep.sqdb_residual = sq.dual_residual;
    rep.sqdb = verdict_of(sq.pass);
  } catch (const NonInvertibleSigma& e) {
    rep.sqdb = Verdict::not_evaluable;
    rep.notes.emplace_back(e.what());
  }
  return rep;
}

inline BalanceReport balance_report(const Channel& ch, const DensityMatrix& rho, const ToleranceConfig& tol = {}) {
  return balance_report(ch, rho, rho.spectral().vectors, tol);
}

}  // namespace qdb
