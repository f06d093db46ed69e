#include "subqaoa/symmetry.hpp"

#include <gtest/gtest.h>

#include "subqaoa/errors.hpp"
#include "subqaoa/subspace.hpp"
#include "test_support.hpp"

using namespace subqaoa;
namespace oracle = subqaoa::testing;

namespace {

/// Permutation matrix swapping qubits a and b in the computational basis.
Mat qubit_swap_matrix(int n, int a, int b) {
  const std::uint64_t dim = 1ULL << n;
  Mat p = Mat::Zero(dim, dim);
  const std::uint64_t bit_a = 1ULL << (n - 1 - a);
  const std::uint64_t bit_b = 1ULL << (n - 1 - b);
  for (std::uint64_t x = 0; x < dim; ++x) {
    std::uint64_t y = x;
    const bool va = x & bit_a;
    const bool vb = x & bit_b;
    if (va != vb) y = (x ^ bit_a) ^ bit_b;
    p(y, x) = 1.0;
  }
  return p;
}

OperatorSum transverse_mixer(int n) { return mixer_hamiltonian(n, {}); }

}  // namespace

TEST(CommutantNullspace, GenericSingleQubitIsTrivial) {
  const OperatorSum hc(1, {{0.35, "I"}, {-0.8, "Z"}});
  const OperatorSum hm(1, {{1.3, "X"}});
  const CommutantBasis basis = commutant_nullspace(hc, hm);
  EXPECT_EQ(basis.dimension, 1);
}

TEST(CommutantNullspace, SingleEdgeContainsSwap) {
  const QuboInstance q = maxcut_to_qubo(make_graph(GraphFamily::Complete, 2, 0));
  const CommutantBasis basis = commutant_nullspace(cost_hamiltonian(q), transverse_mixer(2));
  EXPECT_GE(basis.dimension, 2);
  EXPECT_LT(commutant_projection_residual(basis, qubit_swap_matrix(2, 0, 1)), 1e-10);
  EXPECT_LT(commutant_projection_residual(basis, Mat::Identity(4, 4)), 1e-12);
}

TEST(CommutantNullspace, TotalZConservedUnderXYMixer) {
  const QuboInstance q = maxcut_to_qubo(make_graph(GraphFamily::ErdosRenyi, 3, 21));
  const OperatorSum hm = mixer_hamiltonian(3, {ConstraintKind::HammingWeight, 1});
  const CommutantBasis basis = commutant_nullspace(cost_hamiltonian(q), hm);
  std::vector<PauliTerm> terms;
  for (int i = 0; i < 3; ++i) {
    std::string word = identity_word(3);
    word[i] = 'Z';
    terms.push_back({1.0, word});
  }
  const Mat total_z = to_dense(OperatorSum(3, terms));
  EXPECT_LT(commutant_projection_residual(basis, total_z), 1e-10);
}

TEST(CommutantNullspace, GeneratorsCommuteWithBothHamiltonians) {
  const QuboInstance q = maxcut_to_qubo(make_graph(GraphFamily::Complete, 3, 0));
  const OperatorSum hc = cost_hamiltonian(q);
  const OperatorSum hm = transverse_mixer(3);
  const CommutantBasis basis = commutant_nullspace(hc, hm);
  const Mat hc_d = to_dense(hc);
  const Mat hm_d = to_dense(hm);
  for (const Mat& g : basis.generators) {
    EXPECT_LT((g * hc_d - hc_d * g).norm(), 1e-10);
    EXPECT_LT((g * hm_d - hm_d * g).norm(), 1e-10);
    EXPECT_LT((g - g.adjoint()).norm(), 1e-12);  // Hermitian generators
  }
  // Trace-orthonormality.
  for (std::size_t i = 0; i < basis.generators.size(); ++i) {
    for (std::size_t j = 0; j <= i; ++j) {
      const cxd overlap = (basis.generators[i].adjoint() * basis.generators[j]).trace();
      EXPECT_NEAR(overlap.real(), i == j ? 1.0 : 0.0, 1e-10);
      EXPECT_NEAR(overlap.imag(), 0.0, 1e-10);
    }
  }
}

TEST(CommutantNullspace, CompleteGraphTranspositionsLieInside) {
  const QuboInstance q = maxcut_to_qubo(make_graph(GraphFamily::Complete, 4, 0));
  const CommutantBasis basis = commutant_nullspace(cost_hamiltonian(q), transverse_mixer(4));
  for (int a = 0; a < 4; ++a) {
    for (int b = a + 1; b < 4; ++b) {
      EXPECT_LT(commutant_projection_residual(basis, qubit_swap_matrix(4, a, b)), 1e-10)
          << "transposition (" << a << "," << b << ")";
    }
  }
}

TEST(CommutantNullspace, OracleLimitEnforced) {
  const QuboInstance q = maxcut_to_qubo(make_graph(GraphFamily::Cycle, 7, 0));
  EXPECT_THROW(commutant_nullspace(cost_hamiltonian(q), transverse_mixer(7)), ResourceError);
}

TEST(CommutantNullspace, AgreesWithClosureOnRandomInstances) {
  // commutant_dim = 1 exactly when the closure from the uniform state spans
  // the full space.
  SplitMix64 rng(77);
  for (int rep = 0; rep < 6; ++rep) {
    const int n = 3;
    RMat w(n, n);
    RVec c(n);
    for (int i = 0; i < n; ++i) {
      c[i] = rng.next_uniform(-1, 1);
      for (int j = 0; j < n; ++j) w(i, j) = rng.next_uniform(-1, 1);
    }
    const QuboInstance q = make_qubo(n, w, c, 0.0);
    const OperatorSum hc = cost_hamiltonian(q);
    const OperatorSum hm = transverse_mixer(n);
    const int commutant_dim = commutant_nullspace(hc, hm).dimension;
    const int closure_dim = krylov_closure(hc, hm, initial_state(n, {})).dimension;
    EXPECT_EQ(commutant_dim == 1, closure_dim == (1 << n))
        << "commutant_dim=" << commutant_dim << " closure_dim=" << closure_dim;
  }
}

TEST(LieClosure, SingleQubitSu2PlusIdentity) {
  // H_C carries an identity component, so the closure picks up the identity
  // direction on top of su(2).
  const OperatorSum hc(1, {{0.5, "I"}, {-0.5, "Z"}});
  const OperatorSum hm(1, {{1.0, "X"}});
  const LieClosureResult r = lie_closure_dim(hc, hm, 64);
  EXPECT_FALSE(r.saturated);
  EXPECT_EQ(r.dimension, 4);
}

TEST(LieClosure, PureZPureXSpansSu2) {
  const OperatorSum hc(1, {{1.0, "Z"}});
  const OperatorSum hm(1, {{1.0, "X"}});
  const LieClosureResult r = lie_closure_dim(hc, hm, 64);
  EXPECT_FALSE(r.saturated);
  EXPECT_EQ(r.dimension, 3);
}

TEST(LieClosure, CommutingPairStopsAtTwo) {
  const OperatorSum a(2, {{1.0, "ZI"}});
  const OperatorSum b(2, {{1.0, "IZ"}});
  const LieClosureResult r = lie_closure_dim(a, b, 64);
  EXPECT_FALSE(r.saturated);
  EXPECT_LE(r.dimension, 2);
}

TEST(LieClosure, SingleEdgePairIsProperSubalgebra) {
  const QuboInstance q = maxcut_to_qubo(make_graph(GraphFamily::Complete, 2, 0));
  const LieClosureResult r =
      lie_closure_dim(cost_hamiltonian(q), transverse_mixer(2), 256);
  EXPECT_FALSE(r.saturated);
  EXPECT_LT(r.dimension, 16);
}

TEST(LieClosure, CapSaturates) {
  const OperatorSum hc(1, {{1.0, "Z"}});
  const OperatorSum hm(1, {{1.0, "X"}});
  const LieClosureResult r = lie_closure_dim(hc, hm, 2);
  EXPECT_TRUE(r.saturated);
  EXPECT_EQ(r.dimension, 2);
}

TEST(Classify, HammingConstraintIsReducibleOutright) {
  const QuboInstance q = maxcut_to_qubo(make_graph(GraphFamily::ErdosRenyi, 12, 5));
  const OperatorSum hc = cost_hamiltonian(q);
  const OperatorSum hm = mixer_hamiltonian(12, {ConstraintKind::HammingWeight, 3});
  const ReducibilityVerdict v = classify(hc, hm, {ConstraintKind::HammingWeight, 3});
  EXPECT_TRUE(v.reducible);
  EXPECT_EQ(v.evidence, ReducibilityEvidence::WeightSector);
}

TEST(Classify, GenericRandomQuboIsIrreducible) {
  SplitMix64 rng(5150);
  const int n = 4;
  RMat w(n, n);
  RVec c(n);
  for (int i = 0; i < n; ++i) {
    c[i] = rng.next_uniform(-1, 1);
    for (int j = 0; j < n; ++j) w(i, j) = rng.next_uniform(-1, 1);
  }
  const QuboInstance q = make_qubo(n, w, c, 0.0);
  const ReducibilityVerdict v =
      classify(cost_hamiltonian(q), transverse_mixer(n), {});
  EXPECT_FALSE(v.reducible);
  EXPECT_EQ(v.commutant_dim, 1);
  EXPECT_EQ(v.evidence, ReducibilityEvidence::TrivialCommutant);
}

TEST(Classify, CompleteGraphIsReducible) {
  const QuboInstance q = maxcut_to_qubo(make_graph(GraphFamily::Complete, 4, 0));
  const ReducibilityVerdict v =
      classify(cost_hamiltonian(q), transverse_mixer(4), {});
  EXPECT_TRUE(v.reducible);
  EXPECT_GT(v.commutant_dim, 1);
  EXPECT_EQ(v.evidence, ReducibilityEvidence::ConservedQuantity);
}

TEST(Classify, LargeInstanceUsesClosure) {
  const QuboInstance q = maxcut_to_qubo(make_graph(GraphFamily::Complete, 8, 0));
  const ReducibilityVerdict v =
      classify(cost_hamiltonian(q), transverse_mixer(8), {});
  EXPECT_TRUE(v.reducible);
  EXPECT_EQ(v.commutant_dim, -1);  // exact oracle not run at this size
}
