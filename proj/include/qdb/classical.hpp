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

#include <utility>
#include <vector>

#include "qdb/balance.hpp"
#include "qdb/parity.hpp"

namespace qdb {

using Permutation = std::vector<Index>;  // 0-based images

class MarkovChain {
 public:
  MarkovChain(Eigen::VectorXd rho, Eigen::MatrixXd tau, double tol = 1e-12)
      : rho_(std::move(rho)), tau_(std::move(tau)) {
    if (rho_.size() != tau_.rows()) throw InvalidChain("chain: rho length differs from tau rows");
    if (rho_.size() == 0 || tau_.cols() == 0) throw InvalidChain("chain: empty chain");
    if (rho_.minCoeff() < 0) throw InvalidChain("chain: negative probability in rho");
    if (std::abs(rho_.sum() - 1.0) > tol) throw InvalidChain("chain: rho does not sum to one");
    if (tau_.minCoeff() < 0) throw InvalidChain("chain: negative transition probability");
    for (Index j = 0; j < tau_.rows(); ++j)
      if (std::abs(tau_.row(j).sum() - 1.0) > tol) throw InvalidChain("chain: tau row does not sum to one");
  }

  const Eigen::VectorXd& rho() const { return rho_; }
  const Eigen::MatrixXd& tau() const { return tau_; }
  Index states_in() const { return tau_.rows(); }
  Index states_out() const { return tau_.cols(); }

  /// sigma = rho tau.
  Eigen::VectorXd sigma() const { return (rho_.transpose() * tau_).transpose(); }

 private:
  Eigen::VectorXd rho_;
  Eigen::MatrixXd tau_;
};

struct ClassicalVerdict {
  bool pass = true;
  double max_violation = 0.0;
  std::pair<Index, Index> worst{0, 0};
};

inline bool is_involution(const Permutation& pi) {
  const auto n = static_cast<Index>(pi.size());
  for (Index i = 0; i < n; ++i) {
    const Index j = pi[static_cast<std::size_t>(i)];
    if (j < 0 || j >= n || pi[static_cast<std::size_t>(j)] != i) return false;
  }
  return true;
}

/// rho_i tau_ij = rho_pi(j) tau_pi(j)pi(i) for all i, j.
inline ClassicalVerdict check_classical_db_parity(const MarkovChain& mc, const Permutation& pi, double tol = 1e-12) {
  const Index n = mc.states_in();
  if (n != mc.states_out()) throw DimensionMismatch("classical detailed balance needs a square chain");
  if (static_cast<Index>(pi.size()) != n || !is_involution(pi)) {
    throw InvalidChain("parity permutation must be an involution of the state set");
  }
  ClassicalVerdict v;
  const auto& rho = mc.rho();
  const auto& tau = mc.tau();
  for (Index i = 0; i < n; ++i)
    for (Index j = 0; j < n; ++j) {
      const Index pj = pi[static_cast<std::size_t>(j)];
      const Index pi_i = pi[static_cast<std::size_t>(i)];
      const double gap = std::abs(rho(i) * tau(i, j) - rho(pj) * tau(pj, pi_i));
      if (gap > v.max_violation) {
        v.max_violation = gap;
        v.worst = {i, j};
      }
    }
  v.pass = v.max_violation <= tol;
  return v;
}

inline Permutation identity_permutation(Index n) {
  Permutation p(static_cast<std::size_t>(n));
  for (Index i = 0; i < n; ++i) p[static_cast<std::size_t>(i)] = i;
  return p;
}

/// rho_i tau_ij = rho_j tau_ji for all i, j.
inline ClassicalVerdict check_classical_db(const MarkovChain& mc, double tol = 1e-12) {
  if (mc.states_in() != mc.states_out()) throw DimensionMismatch("classical detailed balance needs a square chain");
  return check_classical_db_parity(mc, identity_permutation(mc.states_in()), tol);
}

/// E(|i><j|) = delta_ij sum_k tau_ik |k><k|.
inline Channel embed(const MarkovChain& mc, const ToleranceConfig& tol = {}) {
  const Index m = mc.states_in();
  const Index n = mc.states_out();
  CMatrix choi = CMatrix::Zero(m * n, m * n);
  for (Index i = 0; i < m; ++i)
    for (Index k = 0; k < n; ++k) choi(i * n + k, i * n + k) = mc.tau()(i, k);
  return Channel::from_choi(std::move(choi), m, n, tol);
}

inline CMatrix diagonal_state(const Eigen::VectorXd& p) {
  return p.cast<Complex>().asDiagonal();
}

/// tau'_kj = rho_j tau_jk / sigma_k; the reversed chain starts from sigma.
inline MarkovChain reverse_chain(const MarkovChain& mc) {
  const Eigen::VectorXd sigma = mc.sigma();
  if (sigma.minCoeff() <= 0) throw ZeroSigmaComponent("reverse_chain: sigma has a zero component");
  const Index m = mc.states_in();
  const Index n = mc.states_out();
  Eigen::MatrixXd rev(n, m);
  for (Index k = 0; k < n; ++k)
    for (Index j = 0; j < m; ++j) rev(k, j) = mc.rho()(j) * mc.tau()(j, k) / sigma(k);
  Eigen::VectorXd start = sigma / sigma.sum();
  return MarkovChain(std::move(start), std::move(rev), 1e-10);
}

struct DualConsistency {
  bool pass = false;
  double residual = 0.0;
};

/// dual_channel(embed(mc), diag(rho)) against embed(reverse_chain(mc)).
inline DualConsistency verify_classical_dual_consistency(const MarkovChain& mc, double tol = 1e-10,
                                                         const ToleranceConfig& cfg = {}) {
  if (mc.rho().minCoeff() <= 0) throw NonInvertibleState("verify_classical_dual_consistency: rho has a zero entry");
  const Channel e = embed(mc, cfg);
  const DensityMatrix rho(diagonal_state(mc.rho()), cfg);
  const Channel forward_dual = dual_channel(e, rho, cfg);
  const Channel reversed = embed(reverse_chain(mc), cfg);
  DualConsistency out;
  out.residual = choi_distance(forward_dual, reversed);
  out.pass = out.residual <= tol;
  return out;
}

}  // namespace qdb
