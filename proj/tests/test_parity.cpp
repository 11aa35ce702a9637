#include <gtest/gtest.h>

#include "oracles.hpp"
#include "qdb/constructions.hpp"

using namespace qdb;

namespace {

// k -> -k mod m
ParityOp reflection(Index m) {
  std::vector<Index> pi;
  for (Index k = 0; k < m; ++k) pi.push_back((m - k) % m);
  return permutation_parity(pi);
}

CMatrix pauli_x() {
  CMatrix x = CMatrix::Zero(2, 2);
  x(0, 1) = x(1, 0) = 1.0;
  return x;
}

CMatrix diag2(Complex a, Complex b) {
  CMatrix m = CMatrix::Zero(2, 2);
  m(0, 0) = a;
  m(1, 1) = b;
  return m;
}

// Q(X (x) Y) = P(Y) (x) P(X)
CMatrix q_on_product(const ParityOp& p, const CMatrix& x, const CMatrix& y) {
  return oracle::kron(apply_parity(p, y), apply_parity(p, x));
}

}  // namespace

TEST(ParityOp, ValidatesInvolution) {
  EXPECT_NO_THROW(make_parity(pauli_x(), false));
  EXPECT_THROW(make_parity(diag2(1.0, Complex(0, 1)), false), InvalidOperator);
  // i I is antiunitarily an involution: (iI) conj(iI) = I
  EXPECT_NO_THROW(make_parity(diag2(Complex(0, 1), Complex(0, 1)), true));
  EXPECT_THROW(make_parity(CMatrix::Identity(2, 2) * 2.0, false), InvalidOperator);
  EXPECT_THROW(make_reversing(CMatrix::Identity(2, 3), false), InvalidOperator);
}

TEST(ParityOp, OperatorActionMatchesVectorComposition) {
  Rng rng(81);
  for (const bool anti : {false, true}) {
    const CMatrix u = random_unitary(rng, 3);
    // U U^T satisfies M conj(M) = I; U S U^dag with S = +-1 is a Hermitian involution
    const CMatrix m = anti ? CMatrix(u * u.transpose())
                           : CMatrix(u * Eigen::Vector3cd(1.0, -1.0, 1.0).asDiagonal() * u.adjoint());
    const ParityOp p = make_parity(m, anti);
    const CMatrix x = ginibre(rng, 3, 3);
    const CVector v = ginibre(rng, 3, 1);
    const CVector direct = apply_parity(p, x) * v;
    const CVector composed = apply_to_vector(p, CVector(x * apply_to_vector(p, v)));
    EXPECT_LE((direct - composed).norm(), 1e-12);
  }
}

TEST(ApplyParity, ConjugationNegatesClockPhases) {
  const ShiftClock sc = shift_clock(5);
  EXPECT_LE((apply_parity(conjugation(5), sc.v) - sc.v.adjoint()).norm(), 1e-15);
}

TEST(ApplyParity, IdentityParity) {
  Rng rng(82);
  const CMatrix x = ginibre(rng, 3, 3);
  EXPECT_EQ(apply_parity(make_parity(CMatrix::Identity(3, 3), false), x), x);
}

TEST(ApplyParity, PermutationMovesProjector) {
  const ParityOp p = permutation_parity({1, 0, 2});
  EXPECT_EQ(apply_parity(p, oracle::unit(3, 0, 0)), oracle::unit(3, 1, 1));
}

TEST(ApplyReversing, PreservesHermiticityAndIsInvolutive) {
  Rng rng(83);
  const CMatrix u = random_unitary(rng, 3);
  const ReversingOp th = make_reversing(u * u.transpose(), true);
  const CMatrix h = random_hermitian(rng, 3);
  EXPECT_LE(hermiticity_defect(apply_reversing(th, h)), 1e-13);
  const CMatrix x = ginibre(rng, 3, 3);
  EXPECT_LE((apply_reversing(th, apply_reversing(th, x)) - x).norm(), 1e-12);
}

TEST(QMap, TrivialParityIsSwap) {
  Rng rng(84);
  const CMatrix z = ginibre(rng, 9, 9);
  const CMatrix r = oracle::swap_matrix(3, 3);
  EXPECT_LE((q_map(make_parity(CMatrix::Identity(3, 3), false), z) - r * z * r.adjoint()).norm(), 1e-14);
}

TEST(QMap, ClassicalTransitionsArePermuted) {
  const std::vector<Index> pi{2, 1, 0};
  const ParityOp p = permutation_parity(pi);
  for (Index i = 0; i < 3; ++i)
    for (Index j = 0; j < 3; ++j) {
      const CMatrix k = oracle::unit(9, i * 3 + j, i * 3 + j);
      const Index target = pi[static_cast<std::size_t>(j)] * 3 + pi[static_cast<std::size_t>(i)];
      EXPECT_EQ(q_map(p, k), oracle::unit(9, target, target));
    }
}

TEST(QMap, ActsOnProductsAsSwappedParities) {
  Rng rng(85);
  for (const bool anti : {false, true}) {
    const ParityOp p = anti ? conjugation(3) : reflection(3);
    const CMatrix x = ginibre(rng, 3, 3), y = ginibre(rng, 3, 3);
    EXPECT_LE((q_map(p, oracle::kron(x, y)) - q_on_product(p, x, y)).norm(), 1e-13);
  }
}

TEST(QMap, SwapCommutesWithDoubledParity) {
  const ParityOp p = make_parity(CMatrix(Eigen::Vector3cd(1.0, -1.0, -1.0).asDiagonal()), true);
  const CMatrix r = oracle::swap_matrix(3, 3);
  const CMatrix pp = oracle::kron(p.matrix, p.matrix);
  for (Index a = 0; a < 9; ++a)
    for (Index b = 0; b < 9; ++b) {
      const CMatrix z = oracle::unit(9, a, b);
      const CMatrix swap_first = pp * (r * z * r.adjoint()).conjugate() * pp.conjugate();
      EXPECT_LE((q_map(p, z) - swap_first).norm(), 1e-15);
    }
}

TEST(QMap, IsAnInvolution) {
  Rng rng(87);
  for (int t = 0; t < 10; ++t) {
    const ParityOp p = random_diagonal_parity(rng, 3);
    const CMatrix z = ginibre(rng, 9, 9);
    EXPECT_LE((q_map(p, q_map(p, z)) - z).norm(), 1e-12);
  }
}

TEST(EtdbP, TrivialParityMatchesEtdb) {
  Rng rng(88);
  const ParityOp id = make_parity(CMatrix::Identity(3, 3), false);
  for (const Instance& inst : {cycle3(), cycle3(0.7), random_etdb(rng, 3)}) {
    const CheckResult a = check_etdb(inst.channel, inst.rho);
    const CheckResult b = check_etdb_p(inst.channel, inst.rho, id);
    EXPECT_EQ(a.pass, b.pass);
    EXPECT_NEAR(a.residual, b.residual, 1e-12);
  }
  EXPECT_TRUE(check_etdb_p(cycle3().channel, cycle3().rho, id).pass);
}

TEST(EtdbP, ShiftUnderConjugationFailsBeyondQubit) {
  // kappa is the projector on sum_k |k>|k+1> / sqrt(m); C fixes it and the swap sends it to sum_k |k+1>|k>
  for (const Index m : {3, 5, 8}) {
    const Instance inst = shift_example(m);
    EXPECT_FALSE(check_etdb(inst.channel, inst.rho).pass) << m;
    const CheckResult r = check_etdb_p(inst.channel, inst.rho, *inst.parity);
    EXPECT_NEAR(r.residual, std::sqrt(2.0), 1e-12) << m;
    EXPECT_FALSE(r.pass) << m;
  }
  const Instance qubit = shift_example(2);
  EXPECT_TRUE(check_etdb(qubit.channel, qubit.rho).pass);
  EXPECT_TRUE(check_etdb_p(qubit.channel, qubit.rho, *qubit.parity).pass);
}

TEST(EtdbP, ShiftUnderReflectionPasses) {
  for (const Index m : {2, 3, 5, 8}) {
    const Instance inst = shift_example(m);
    const CheckResult r = check_etdb_p(inst.channel, inst.rho, reflection(m));
    EXPECT_LE(r.residual, 1e-14) << m;
    EXPECT_TRUE(r.notes.empty());
  }
}

TEST(EtdbP, ClassicalChainBalancedUnderPermutation) {
  // joint weights J_ij = rho_i tau_ij with J_ij = J_pi(j)pi(i)
  Rng rng(89);
  const std::vector<Index> pi{1, 0, 2};
  Eigen::MatrixXd k(3, 3);
  for (Index i = 0; i < 3; ++i)
    for (Index j = 0; j < 3; ++j) k(i, j) = 0.1 + rng.uniform();
  Eigen::MatrixXd joint(3, 3);
  for (Index i = 0; i < 3; ++i)
    for (Index j = 0; j < 3; ++j)
      joint(i, j) = (k(i, j) + k(pi[static_cast<std::size_t>(j)], pi[static_cast<std::size_t>(i)])) / 2.0;
  joint /= joint.sum();
  const Eigen::VectorXd rho = joint.rowwise().sum();
  Eigen::MatrixXd tau = joint;
  for (Index i = 0; i < 3; ++i) tau.row(i) /= rho(i);
  const MarkovChain mc(rho, tau, 1e-12);
  EXPECT_TRUE(check_classical_db_parity(mc, pi).pass);
  const CheckResult r = check_etdb_p(embed(mc), DensityMatrix(diagonal_state(rho)), permutation_parity(pi));
  EXPECT_TRUE(r.pass);
  EXPECT_LE(r.residual, 1e-14);
}

TEST(EtdbP, FlagsParityNotCommutingWithState) {
  Rng rng(90);
  const Instance inst = random_q_symmetric(rng, 2, make_parity(pauli_x(), false));
  const CheckResult r = check_etdb_p(inst.channel, inst.rho, *inst.parity);
  EXPECT_TRUE(r.pass);
  const bool commutes = (apply_parity(*inst.parity, inst.rho.matrix()) - inst.rho.matrix()).norm() <= 1e-9;
  EXPECT_EQ(r.notes.empty(), commutes);
  const DensityMatrix skewed(diag2(0.8, 0.2));
  EXPECT_FALSE(check_etdb_p(identity_channel(2), skewed, make_parity(pauli_x(), false)).notes.empty());
}

TEST(EtdbP, BalanceImpliesInvarianceWhenParityCommutes) {
  Rng rng(91);
  for (int t = 0; t < 10; ++t) {
    const ParityOp p = random_diagonal_parity(rng, 3);
    const Instance inst = random_parity_balanced(rng, 3, p);
    ASSERT_TRUE(check_etdb_p(inst.channel, inst.rho, p).pass);
    EXPECT_TRUE(check_invariance(inst.channel, inst.rho).pass);
  }
}

TEST(ParityDual, TrivialParityIsDual) {
  Rng rng(92);
  const Channel ch = random_channel(rng, 3);
  const DensityMatrix rho(random_density(rng, 3));
  const ParityOp id = make_parity(CMatrix::Identity(3, 3), false);
  EXPECT_LE(choi_distance(parity_dual(ch, rho, id, id), dual_channel(ch, rho)), 1e-10);
}

TEST(ParityDual, ShiftUnderConjugationIsInverseShift) {
  const Instance inst = shift_example(3);
  const CMatrix u = shift_clock(3).u;
  const Channel d = parity_dual(inst.channel, inst.rho, *inst.parity, *inst.parity);
  EXPECT_LE(choi_distance(d, unitary_channel(u.adjoint())), 1e-12);
}

TEST(ParityDual, ShiftUnderReflectionIsItself) {
  for (const Index m : {3, 5}) {
    const Instance inst = shift_example(m);
    const ParityOp p = reflection(m);
    EXPECT_LE(choi_distance(parity_dual(inst.channel, inst.rho, p, p), inst.channel), 1e-12) << m;
  }
}

TEST(ParityDual, TracePreservingOnRandomChannels) {
  Rng rng(93);
  for (int t = 0; t < 10; ++t) {
    const Channel ch = random_channel(rng, 3);
    const DensityMatrix rho(random_density(rng, 3));
    const ParityOp p = random_diagonal_parity(rng, 3);
    EXPECT_TRUE(parity_dual(ch, rho, p, p).trace_preserving());
  }
}

TEST(ParityDual, BalanceIffInvariantAndSelfDual) {
  Rng rng(94);
  for (int t = 0; t < 10; ++t) {
    const ParityOp p = random_diagonal_parity(rng, 3);
    const Instance balanced = random_parity_balanced(rng, 3, p);
    EXPECT_TRUE(check_etdb_p(balanced.channel, balanced.rho, p).pass);
    EXPECT_TRUE(check_invariance(balanced.channel, balanced.rho).pass);
    EXPECT_LE(choi_distance(parity_dual(balanced.channel, balanced.rho, p, p), balanced.channel), 1e-9);

    const Channel generic = random_channel(rng, 3);
    const DensityMatrix rho = random_diagonal_state(rng, 3);
    EXPECT_FALSE(check_etdb_p(generic, rho, p).pass);
    EXPECT_GT(choi_distance(parity_dual(generic, rho, p, p), generic), 1e-6);
  }
}

TEST(FactorTheta, TranspositionHasNoParity) {
  const ParityOp p = factor_theta(make_reversing(CMatrix::Identity(3, 3), true), CMatrix::Identity(3, 3));
  EXPECT_FALSE(p.antiunitary);
  EXPECT_LE((p.matrix - CMatrix::Identity(3, 3)).norm(), 1e-15);
}

TEST(FactorTheta, AdjointGivesConjugation) {
  const ReversingOp th = make_reversing(CMatrix::Identity(2, 2), false);
  Rng rng(95);
  const CMatrix x = ginibre(rng, 2, 2);
  EXPECT_LE((apply_reversing(th, x) - x.adjoint()).norm(), 0.0);
  const ParityOp p = factor_theta(th, CMatrix::Identity(2, 2));
  EXPECT_TRUE(p.antiunitary);
  EXPECT_LE((p.matrix - CMatrix::Identity(2, 2)).norm(), 1e-15);
}

TEST(FactorTheta, SignedConjugation) {
  const ParityOp p = factor_theta(make_reversing(diag2(1.0, -1.0), true), CMatrix::Identity(2, 2));
  EXPECT_FALSE(p.antiunitary);
  EXPECT_LE((p.matrix - diag2(1.0, -1.0)).norm(), 1e-15);
}

TEST(FactorTheta, ReconstructsThetaInRotatedBasis) {
  Rng rng(96);
  const CMatrix b = random_unitary(rng, 3);
  const Eigen::Vector3cd signs(1.0, -1.0, 1.0);
  // antiunitary Theta with Theta b_i = s_i b_i: M conj(b_i) = s_i b_i, so M = B S B^T
  const ReversingOp th = make_reversing(b * signs.asDiagonal() * b.transpose(), true);
  const ParityOp p = factor_theta(th, b);
  const CMatrix x = ginibre(rng, 3, 3);
  EXPECT_LE((apply_parity(p, transpose_in_basis(x, b)) - apply_reversing(th, x)).norm(), 1e-12);
  EXPECT_LE((transpose_in_basis(apply_parity(p, x), b) - apply_reversing(th, x)).norm(), 1e-12);
}

TEST(FactorTheta, RejectsNonDiagonalTheta) {
  EXPECT_THROW(factor_theta(make_reversing(pauli_x(), false), CMatrix::Identity(2, 2)), NotDiagonalizedJointly);
}

TEST(JointBasis, DiagonalizesUnitaryTheta) {
  const ReversingOp th = make_reversing(pauli_x(), false);
  const CMatrix b = joint_basis(maximally_mixed(2), th);
  EXPECT_LE((b.adjoint() * b - CMatrix::Identity(2, 2)).norm(), 1e-12);
  EXPECT_TRUE(reversing_signs(th, b, 1e-10).has_value());
  EXPECT_NO_THROW(factor_theta(th, b));
}

TEST(JointBasis, FixedVectorsOfAntiunitaryTheta) {
  Rng rng(97);
  const CMatrix u = random_unitary(rng, 3);
  const ReversingOp th = make_reversing(u * u.transpose(), true);
  const CMatrix b = joint_basis(maximally_mixed(3), th);
  const auto signs = reversing_signs(th, b, 1e-10);
  ASSERT_TRUE(signs.has_value());
  EXPECT_LE((b.adjoint() * b - CMatrix::Identity(3, 3)).norm(), 1e-12);
}

TEST(JointBasis, RejectsThetaNotFixingState) {
  EXPECT_THROW(joint_basis(DensityMatrix(diag2(0.7, 0.3)), make_reversing(pauli_x(), false)), NotDiagonalizedJointly);
}

TEST(SqdbTheta, TranspositionOnCycleMatchesSqdb) {
  const Instance inst = cycle3();
  const SqdbThetaResult r = check_sqdb_theta(inst.channel, inst.rho, make_reversing(CMatrix::Identity(3, 3), true));
  EXPECT_TRUE(r.pass);
  EXPECT_EQ(r.pass, check_sqdb(inst.channel, inst.rho).pass);
  ASSERT_TRUE(r.form_disagreement.has_value());
  EXPECT_LE(*r.form_disagreement, 1e-10);
}

TEST(SqdbTheta, AdjointOnShiftFails) {
  // theta o E^KMS o theta sends Y to U^dag Y U
  for (const Index m : {3, 5}) {
    const Instance inst = shift_example(m);
    const SqdbThetaResult r = check_sqdb_theta(inst.channel, inst.rho, make_reversing(CMatrix::Identity(m, m), false));
    EXPECT_FALSE(r.pass) << m;
    ASSERT_TRUE(r.parity.has_value());
    EXPECT_TRUE(r.parity->antiunitary);
    EXPECT_EQ(r.pass, check_etdb_p(inst.channel, inst.rho, *r.parity).pass);
  }
}

TEST(SqdbTheta, TranspositionOnSingleCycleFails) {
  const Instance inst = shift_example(3);
  const SqdbThetaResult r = check_sqdb_theta(inst.channel, inst.rho, make_reversing(CMatrix::Identity(3, 3), true));
  EXPECT_FALSE(r.pass);
  EXPECT_NEAR(r.kms_residual, choi_distance(unitary_channel(shift_clock(3).u.adjoint()), inst.channel), 1e-12);
}

TEST(SqdbTheta, ReflectionThetaOnShiftPasses) {
  // Theta = conj(Pi) with flag flipped factors to the reflection parity
  const Instance inst = shift_example(5);
  const ParityOp pi = reflection(5);
  const ReversingOp th = make_reversing(pi.matrix.conjugate(), true);
  const SqdbThetaResult r = check_sqdb_theta(inst.channel, inst.rho, th);
  EXPECT_TRUE(r.pass);
  EXPECT_TRUE(check_etdb_p(inst.channel, inst.rho, *r.parity, r.basis).pass);
}

TEST(SqdbTheta, RejectsThetaNotFixingState) {
  const DensityMatrix rho(diag2(0.7, 0.3));
  EXPECT_THROW(check_sqdb_theta(identity_channel(2), rho, make_reversing(pauli_x(), false)), ThetaStateMismatch);
}

TEST(SqdbTheta, FormsAgreeOnBalancedInstances) {
  Rng rng(98);
  for (int t = 0; t < 10; ++t) {
    const ParityOp p = random_diagonal_parity(rng, 3);
    const Instance inst = random_parity_balanced(rng, 3, p);
    const ReversingOp th = make_reversing(p.matrix.conjugate(), !p.antiunitary);
    const SqdbThetaResult r = check_sqdb_theta(inst.channel, inst.rho, th);
    EXPECT_TRUE(r.pass);
    ASSERT_TRUE(r.form_disagreement.has_value());
    EXPECT_LE(*r.form_disagreement, 1e-10);
    EXPECT_EQ(r.parity->antiunitary, p.antiunitary);
    EXPECT_LE((r.parity->matrix - p.matrix).norm(), 1e-12);
  }
}

TEST(ShiftClock, ThreeLevelShiftIsTheCycleMatrix) {
  CMatrix u = CMatrix::Zero(3, 3);
  u(1, 0) = u(2, 1) = u(0, 2) = 1.0;
  EXPECT_EQ(shift_clock(3).u, u);
}

TEST(ShiftClock, QubitIsPauli) {
  const ShiftClock sc = shift_clock(2);
  EXPECT_LE((sc.u - pauli_x()).norm(), 0.0);
  EXPECT_LE((sc.v - diag2(1.0, -1.0)).norm(), 1e-15);
  EXPECT_LE((sc.v * sc.u + sc.u * sc.v).norm(), 1e-15);
}

TEST(ShiftClock, WeylRelationAndFourier) {
  for (const Index m : {2, 3, 5, 8}) {
    const ShiftClock sc = shift_clock(m);
    const Complex r = std::polar(1.0, 2.0 * std::numbers::pi / static_cast<double>(m));
    EXPECT_LE((sc.v * sc.u - r * sc.u * sc.v).norm(), 1e-12) << m;
    EXPECT_LE((sc.v - sc.f.adjoint() * sc.u * sc.f).norm(), 1e-12) << m;
  }
  EXPECT_THROW(shift_clock(1), InvalidOperator);
}
