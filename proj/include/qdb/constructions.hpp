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

// Named example channels and seeded random instance generators.

#pragma once

#include <optional>
#include <vector>

#include "qdb/classical.hpp"
#include "qdb/parity.hpp"
#include "qdb/random.hpp"

namespace qdb {

struct Instance {
  Channel channel;
  DensityMatrix rho;
  std::optional<ParityOp> parity;
};

inline DensityMatrix maximally_mixed(Index d) {
  return DensityMatrix(CMatrix::Identity(d, d) / static_cast<double>(d));
}

/// Two opposing cycles on three points: p U.U^dag + (1 - p) U^dag.U.
inline Instance cycle3(double weight = 0.5) {
  const CMatrix u = shift_clock(3).u;
  const std::vector<CMatrix> ops{std::sqrt(weight) * u, std::sqrt(1.0 - weight) * u.adjoint()};
  return {Channel::from_kraus(ops), maximally_mixed(3), std::nullopt};
}

/// X -> Tr(X) I / 2 relative to I / 2.
inline Instance depolarizing2() {
  std::vector<CMatrix> ops;
  for (Index i = 0; i < 2; ++i)
    for (Index j = 0; j < 2; ++j) {
      CMatrix k = CMatrix::Zero(2, 2);
      k(i, j) = 1.0 / std::sqrt(2.0);
      ops.push_back(k);
    }
  return {Channel::from_kraus(ops), maximally_mixed(2), std::nullopt};
}

/// Decomposition of kappa = I/4 into |00>, |11>, a(|01> + c|10>),
/// b(|01> - |10>/conj(c)).
inline CJDecomposition depolarizing2_decomposition(Complex c) {
  const Instance inst = depolarizing2();
  RelativeChoi rc = cj_relative(inst.channel, inst.rho);
  const auto unit = [](Index x) {
    CVector v = CVector::Zero(4);
    v(x) = 1.0;
    return v;
  };
  CVector third = unit(1) + c * unit(2);
  CVector fourth = unit(1) - unit(2) / std::conj(c);
  third.normalize();
  fourth.normalize();
  std::vector<ElementaryTransition> items{
      {unit(0), 0.25, 2, 2}, {unit(3), 0.25, 2, 2}, {third, 0.25, 2, 2}, {fourth, 0.25, 2, 2}};
  return CJDecomposition(std::move(items), std::move(rc));
}

/// Single shift U.U^dag with the maximally mixed state and P = C.
inline Instance shift_example(Index m) {
  return {unitary_channel(shift_clock(m).u), maximally_mixed(m), conjugation(m)};
}

/// Three states, uniform rho, tau_ij = 1/2 off the diagonal.
inline MarkovChain classical_db3() {
  Eigen::MatrixXd tau = Eigen::MatrixXd::Constant(3, 3, 0.5);
  tau.diagonal().setZero();
  return MarkovChain(Eigen::VectorXd::Constant(3, 1.0 / 3.0), tau);
}

/// Random CPTP map from `count` Ginibre Kraus operators.
inline Channel random_channel(Rng& rng, Index dim, Index count = 2) {
  return Channel::from_kraus(random_kraus(rng, dim, dim, count));
}

/// Mixture of random unitary conjugations; unital and trace preserving.
inline Channel random_unital_channel(Rng& rng, Index dim, Index count = 3) {
  std::vector<double> q;
  double total = 0;
  for (Index k = 0; k < count; ++k) {
    q.push_back(rng.uniform() + 0.1);
    total += q.back();
  }
  std::vector<CMatrix> ops;
  for (Index k = 0; k < count; ++k)
    ops.push_back(std::sqrt(q[static_cast<std::size_t>(k)] / total) * random_unitary(rng, dim));
  return Channel::from_kraus(ops);
}

/// Full-rank diagonal state with entries drawn from (0.1, 1.1), normalized.
inline DensityMatrix random_diagonal_state(Rng& rng, Index dim) {
  Eigen::VectorXd p(dim);
  for (Index i = 0; i < dim; ++i) p(i) = 0.1 + rng.uniform();
  return DensityMatrix(diagonal_state(p / p.sum()));
}

/// The map represented by kappa relative to rho = Tr_2 kappa in the
/// canonical basis of rho.
inline Instance instance_from_kappa(const CMatrix& kappa, Index dim) {
  const CMatrix reduced = partial_trace(kappa, dim, dim, Factor::second);
  DensityMatrix rho((reduced + reduced.adjoint()) / 2.0);
  Channel ch = invert_relative(kappa, rho.spectral().values, rho.spectral().vectors, dim, dim);
  return {std::move(ch), std::move(rho), std::nullopt};
}

/// kappa = (kappa0 + R kappa0 R) / (2 Tr kappa0) for a full-rank Wishart kappa0.
inline Instance random_etdb(Rng& rng, Index dim) {
  const Index dd = dim * dim;
  const CMatrix k0 = random_psd(rng, dd, dd);
  const CMatrix r = swap_operator(dim, dim);
  const CMatrix kappa = (k0 + r * k0 * r) / (2.0 * k0.trace().real());
  return instance_from_kappa(kappa, dim);
}

/// Diagonal +-1 parity, unitary or antiunitary, drawn from the generator.
inline ParityOp random_diagonal_parity(Rng& rng, Index dim) {
  CMatrix d = CMatrix::Zero(dim, dim);
  for (Index i = 0; i < dim; ++i) d(i, i) = rng.coin() ? 1.0 : -1.0;
  const bool anti = rng.coin();
  return make_parity(std::move(d), anti);
}

/// kappa = (kappa0 + Q kappa0) / (2 Tr kappa0), rho = Tr_2 kappa. Passes
/// ETDB-P, but rho need not commute with P.
inline Instance random_q_symmetric(Rng& rng, Index dim, const ParityOp& p) {
  const Index dd = dim * dim;
  const CMatrix k0 = random_psd(rng, dd, dd);
  const CMatrix kappa = (k0 + q_map(p, k0)) / (2.0 * k0.trace().real());
  Instance inst = instance_from_kappa(kappa, dim);
  inst.parity = p;
  return inst;
}

/// A channel fixing rho and balanced under P, with rho diagonal and P a
/// diagonal parity, so P rho = rho P. E0 = (G1' G1)(G2' G2) fixes rho and
/// is generically not self-dual; E = (E0 + E0^P) / 2 then has
/// kappa = (kappa0 + Q kappa0) / 2.
inline Instance random_parity_balanced(Rng& rng, Index dim, const ParityOp& p) {
  const DensityMatrix rho = random_diagonal_state(rng, dim);
  const auto self_dual = [&] {
    const Channel g = random_channel(rng, dim, 2);
    return compose(dual_channel(g, rho), g);
  };
  const Channel a = self_dual();
  const Channel b = self_dual();
  const Channel e0 = compose(a, b);
  const Channel e0p = parity_dual(e0, rho, p, p);
  Channel e = Channel::from_choi((e0.choi() + e0p.choi()) / 2.0, dim, dim);
  return {std::move(e), rho, p};
}

/// Random chain with strictly positive rho; tau rows from uniform weights,
/// with about a third of the entries zeroed.
inline MarkovChain random_chain(Rng& rng, Index n) {
  Eigen::MatrixXd tau(n, n);
  for (Index i = 0; i < n; ++i) {
    for (Index j = 0; j < n; ++j) tau(i, j) = rng.uniform() < 0.3 ? 0.0 : rng.uniform();
    if (tau.row(i).sum() <= 0) tau(i, (i + 1) % n) = 1.0;
    tau.row(i) /= tau.row(i).sum();
  }
  Eigen::VectorXd rho(n);
  for (Index i = 0; i < n; ++i) rho(i) = 0.05 + rng.uniform();
  rho /= rho.sum();
  return MarkovChain(rho, tau, 1e-12);
}

/// Detailed-balance chain from a symmetric nonnegative weight matrix W:
/// rho_i proportional to the row sums, tau = W / rowsum.
inline MarkovChain random_db_chain(Rng& rng, Index n) {
  Eigen::MatrixXd w(n, n);
  for (Index i = 0; i < n; ++i)
    for (Index j = 0; j <= i; ++j) {
      const double x = rng.uniform() < 0.25 ? 0.0 : rng.uniform();
      w(i, j) = x;
      w(j, i) = x;
    }
  for (Index i = 0; i < n; ++i)
    if (w.row(i).sum() <= 0) w(i, i) = 1.0;
  const Eigen::VectorXd rows = w.rowwise().sum();
  Eigen::MatrixXd tau = w;
  for (Index i = 0; i < n; ++i) tau.row(i) /= rows(i);
  return MarkovChain(rows / rows.sum(), tau, 1e-12);
}

}  // namespace qdb
