#include "subqaoa/equivalence.hpp"

#include <gtest/gtest.h>

#include <bit>

#include "subqaoa/errors.hpp"
#include "subqaoa/experiment.hpp"
#include "subqaoa/problem.hpp"
#include "test_support.hpp"

using namespace subqaoa;
namespace oracle = subqaoa::testing;

namespace {

struct Pipeline {
  OperatorSum hc;
  OperatorSum hm;
  Vec psi0;
  InvariantSubspace sub;
  Isometry iso;
  ReducedSystem red;
};

Pipeline reduce_maxcut(GraphFamily family, int n, std::uint64_t seed,
                       ConstraintSpec constraint = {}, bool fast_path = true) {
  const QuboInstance q = maxcut_to_qubo(make_graph(family, n, seed));
  Pipeline p{cost_hamiltonian(q),
             mixer_hamiltonian(n, constraint),
             initial_state(n, constraint),
             {},
             {},
             {}};
  ClosureOptions opts;
  opts.allow_dicke_fast_path = fast_path;
  p.sub = krylov_closure(p.hc, p.hm, p.psi0, opts);
  p.iso = build_isometry(p.sub);
  p.red = induce_hamiltonians(p.hc, p.hm, p.iso, p.psi0);
  return p;
}

}  // namespace

TEST(Fidelity, BasicsAndGlobalPhase) {
  Vec a = Vec::Zero(4), b = Vec::Zero(4);
  a[0] = 1.0;
  b[0] = 1.0;
  EXPECT_NEAR(fidelity(a, b), 1.0, 1e-15);
  b.setZero();
  b[1] = 1.0;
  EXPECT_NEAR(fidelity(a, b), 0.0, 1e-15);
  const Vec phased = std::exp(cxd(0, 0.37)) * a;
  EXPECT_NEAR(fidelity(a, phased), 1.0, 1e-15);
  SplitMix64 rng(1);
  const Vec u = oracle::random_state(rng, 8);
  const Vec v = oracle::random_state(rng, 8);
  EXPECT_DOUBLE_EQ(fidelity(u, v), fidelity(v, u));
}

TEST(Fidelity, RejectsBadInputs) {
  Vec a = Vec::Zero(2), b = Vec::Zero(4);
  a[0] = 1.0;
  b[0] = 1.0;
  EXPECT_THROW(fidelity(a, b), StructuralError);
  Vec c = Vec::Constant(2, 0.9);
  EXPECT_THROW(fidelity(a.head(2).eval(), c), StructuralError);
}

TEST(Tvd, FormulaAndEdgeCases) {
  using Dist = std::map<std::string, double>;
  const Dist p{{"00", 0.5}, {"01", 0.5}};
  EXPECT_NEAR(tvd(p, p), 0.0, 1e-15);
  const Dist q{{"00", 1.0}};
  EXPECT_NEAR(tvd(p, q), 0.5, 1e-15);
  const Dist r{{"10", 1.0}};
  EXPECT_NEAR(tvd(q, r), 1.0, 1e-15);
  EXPECT_THROW(tvd(p, Dist{{"00", 0.6}}), StructuralError);
}

TEST(Tvd, TriangleInequalityOnRandomTriples) {
  SplitMix64 rng(2);
  for (int rep = 0; rep < 20; ++rep) {
    auto random_dist = [&] {
      std::map<std::string, double> d;
      double total = 0.0;
      for (int i = 0; i < 8; ++i) {
        const double w = rng.next_double();
        d[bitstring(i, 3)] = w;
        total += w;
      }
      for (auto& [_, v] : d) v /= total;
      return d;
    };
    const auto p = random_dist(), q = random_dist(), r = random_dist();
    EXPECT_LE(tvd(p, r), tvd(p, q) + tvd(q, r) + 1e-12);
  }
}

TEST(CertifyPair, ZeroParamsGiveZeroMetrics) {
  const Pipeline p = reduce_maxcut(GraphFamily::Complete, 4, 0);
  const FullEvolver full(p.hc, p.hm);
  const ReducedEvolver reduced(p.red);
  QaoaParams params;
  params.gammas = {0.0, 0.0};
  params.betas = {0.0, 0.0};
  const EquivalenceReport rep = certify_pair(full, p.psi0, reduced, p.iso, params);
  EXPECT_LE(std::abs(rep.fidelity_offset), 1e-12);
  EXPECT_LE(rep.delta_e, 1e-12);
  EXPECT_LE(rep.tvd, 1e-12);
  EXPECT_LE(rep.intertwine_max_column, 1e-12);
}

TEST(CertifyPair, RandomParamsAcrossStructures) {
  SplitMix64 rng(3);
  const std::vector<Pipeline> cases = {
      reduce_maxcut(GraphFamily::Complete, 6, 0),
      reduce_maxcut(GraphFamily::Cycle, 6, 0),
      reduce_maxcut(GraphFamily::ErdosRenyi, 6, 5),
      reduce_maxcut(GraphFamily::ErdosRenyi, 6, 6, {ConstraintKind::HammingWeight, 2}),
  };
  for (const Pipeline& p : cases) {
    const FullEvolver full(p.hc, p.hm);
    const ReducedEvolver reduced(p.red);
    for (int rep = 0; rep < 3; ++rep) {
      const QaoaParams params = draw_params(2, rng);
      const EquivalenceReport r = certify_pair(full, p.psi0, reduced, p.iso, params);
      EXPECT_LE(std::abs(r.fidelity_offset), 1e-10);
      EXPECT_LE(r.delta_e, 1e-10 * (1.0 + std::abs(r.delta_e)));
      EXPECT_LE(r.tvd, 1e-10);
      EXPECT_LE(r.intertwine_max_column, 1e-10);
      EXPECT_LE(r.lemma2_vtv, 1e-12);
      EXPECT_LE(r.lemma2_vvt, 1e-10);
    }
  }
}

TEST(CertifyPair, IntertwiningCanBeSkipped) {
  const Pipeline p = reduce_maxcut(GraphFamily::Complete, 4, 0);
  const FullEvolver full(p.hc, p.hm);
  const ReducedEvolver reduced(p.red);
  SplitMix64 rng(4);
  CertifyOptions opts;
  opts.with_intertwining = false;
  const EquivalenceReport r =
      certify_pair(full, p.psi0, reduced, p.iso, draw_params(2, rng), opts);
  EXPECT_LT(r.intertwine_residual, 0.0);
  EXPECT_LT(r.intertwine_max_column, 0.0);
}

TEST(NegativeControl, CorruptedIsometryIsDetected) {
  const Pipeline p = reduce_maxcut(GraphFamily::Complete, 6, 0);
  SplitMix64 rng(5);
  const QaoaParams params = draw_params(2, rng);
  const EquivalenceReport r =
      corrupted_reduction_certificate(p.hc, p.hm, p.psi0, p.iso, params, 1e-3);
  const double worst =
      std::max({std::abs(r.fidelity_offset), r.delta_e, r.tvd,
                r.intertwine_max_column, r.lemma2_vtv, r.lemma2_vvt});
  EXPECT_GE(worst, 1e-6);
  EXPECT_GE(std::max(r.lemma2_vtv, r.lemma2_vvt), 1e-4);
}

TEST(NegativeControl, CorruptHelperMeasuresResiduals) {
  const Pipeline p = reduce_maxcut(GraphFamily::Complete, 4, 0);
  const Isometry bad = corrupt_isometry_column(p.iso, 0, 1e-3);
  EXPECT_GE(bad.vtv_residual, 1e-4);
  EXPECT_THROW(corrupt_isometry_column(p.iso, 99, 1e-3), StructuralError);
}

TEST(OrthogonalExclusion, ConstrainedRunExcludesOtherSectors) {
  const int n = 6, k = 2;
  const Pipeline p =
      reduce_maxcut(GraphFamily::ErdosRenyi, n, 7, {ConstraintKind::HammingWeight, k});
  const FullEvolver full(p.hc, p.hm);
  SplitMix64 rng(6);
  const EvolutionResult res = full.evolve(p.psi0, draw_params(2, rng));
  const ExclusionReport excl = certify_orthogonal_exclusion(p.sub, res);
  EXPECT_TRUE(excl.passed);
  EXPECT_LE(excl.worst_probability, 1e-12);
  // At minimum every off-sector basis state is excluded.
  EXPECT_GE(excl.excluded_count, (1ULL << n) - binomial(n, k));
}

TEST(OrthogonalExclusion, FullSupportMeansVacuousPass) {
  const Pipeline p = reduce_maxcut(GraphFamily::ErdosRenyi, 5, 9, {}, false);
  const FullEvolver full(p.hc, p.hm);
  SplitMix64 rng(7);
  const EvolutionResult res = full.evolve(p.psi0, draw_params(2, rng));
  const ExclusionReport excl = certify_orthogonal_exclusion(p.sub, res);
  EXPECT_TRUE(excl.passed);
  EXPECT_EQ(excl.excluded_count, 0u);
}

TEST(ProjectorCommutation, HoldsOnRandomDraws) {
  const Pipeline p = reduce_maxcut(GraphFamily::Cycle, 6, 0);
  const FullEvolver full(p.hc, p.hm);
  const Mat projector = subspace_projector(p.sub);
  SplitMix64 rng(8);
  for (int draw = 0; draw < 5; ++draw) {
    const Mat u = assemble_dense_unitary(full, draw_params(2, rng));
    EXPECT_LT(commutation_residual(projector, u), 1e-9);
  }
}

TEST(ProjectorCommutation, DenseAssemblyMatchesStateEvolution) {
  const Pipeline p = reduce_maxcut(GraphFamily::ErdosRenyi, 4, 3);
  const FullEvolver full(p.hc, p.hm);
  SplitMix64 rng(9);
  const QaoaParams params = draw_params(2, rng);
  const Mat u = assemble_dense_unitary(full, params);
  EXPECT_LT((u * p.psi0 - full.evolve_state(p.psi0, params)).norm(), 1e-12);
  EXPECT_LT((u.adjoint() * u - Mat::Identity(16, 16)).norm(), 1e-11);
}
