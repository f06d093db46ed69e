#include "subqaoa/qaoa.hpp"

#include <gtest/gtest.h>

#include <bit>

#include "subqaoa/errors.hpp"
#include "subqaoa/problem.hpp"
#include "test_support.hpp"

using namespace subqaoa;
namespace oracle = subqaoa::testing;

namespace {

struct Problem {
  OperatorSum hc;
  OperatorSum hm;
  Vec psi0;
};

Problem maxcut_problem(GraphFamily family, int n, std::uint64_t seed,
                   ConstraintSpec constraint = {}) {
  const QuboInstance q = maxcut_to_qubo(make_graph(family, n, seed));
  return {cost_hamiltonian(q), mixer_hamiltonian(n, constraint),
          initial_state(n, constraint)};
}

QaoaParams zero_params(int layers) {
  QaoaParams p;
  p.gammas.assign(layers, 0.0);
  p.betas.assign(layers, 0.0);
  return p;
}

/// Layer-by-layer evolution through dense eigendecompositions (Eigen's own
/// solver), the reference for every evolution path.
Vec dense_evolution_oracle(const Problem& s, const QaoaParams& params) {
  const Mat hc = oracle::dense_sum(s.hc);
  const Mat hm = oracle::dense_sum(s.hm);
  Vec state = s.psi0;
  for (int p = 0; p < params.layers(); ++p) {
    state = oracle::expm_apply(hc, params.gammas[p], state);
    state = oracle::expm_apply(hm, params.betas[p], state);
  }
  return state;
}

}  // namespace

TEST(FullEvolver, ZeroParamsIsIdentity) {
  const Problem s = maxcut_problem(GraphFamily::Complete, 2, 0);
  const EvolutionResult r = evolve_full(s.hc, s.hm, s.psi0, zero_params(1));
  EXPECT_LT((r.final_state - s.psi0).norm(), 1e-14);
  EXPECT_NEAR(r.energy, -0.5, 1e-14);
}

TEST(FullEvolver, TransverseRotationKeepsPlusState) {
  // exp(-i (pi/2) X) |+> = -i |+>, so the energy is untouched.
  const Problem s = maxcut_problem(GraphFamily::Complete, 2, 0);
  QaoaParams p;
  p.gammas = {0.0};
  p.betas = {M_PI / 2.0};
  const EvolutionResult r = evolve_full(s.hc, s.hm, s.psi0, p);
  EXPECT_NEAR(r.energy, -0.5, 1e-12);
  const double overlap = std::norm(r.final_state.dot(s.psi0));
  EXPECT_NEAR(overlap, 1.0, 1e-12);
}

TEST(FullEvolver, UniformEnergyOnTriangle) {
  const Problem s = maxcut_problem(GraphFamily::Complete, 3, 0);
  const FullEvolver ev(s.hc, s.hm);
  EXPECT_NEAR(ev.energy(s.psi0), -1.5, 1e-12);
}

TEST(FullEvolver, MatchesDenseOracleWithXMixer) {
  const Problem s = maxcut_problem(GraphFamily::ErdosRenyi, 3, 9);
  SplitMix64 rng(3);
  const QaoaParams params = draw_params(2, rng);
  const Vec got = FullEvolver(s.hc, s.hm).evolve_state(s.psi0, params);
  const Vec expected = dense_evolution_oracle(s, params);
  EXPECT_LT((got - expected).norm(), 1e-12);
}

TEST(FullEvolver, MatchesDenseOracleWithXYMixer) {
  const Problem s =
      maxcut_problem(GraphFamily::ErdosRenyi, 4, 10, {ConstraintKind::HammingWeight, 2});
  SplitMix64 rng(4);
  const QaoaParams params = draw_params(3, rng);
  const FullEvolver ev(s.hc, s.hm);
  EXPECT_STREQ(ev.mixer_plan_name(), "weight_blocked");
  const Vec got = ev.evolve_state(s.psi0, params);
  const Vec expected = dense_evolution_oracle(s, params);
  EXPECT_LT((got - expected).norm(), 1e-12);
}

TEST(FullEvolver, MatchesDenseOracleWithGenericMixer) {
  // A Hermitian mixer that neither splits per qubit nor preserves weight.
  const QuboInstance q = maxcut_to_qubo(make_graph(GraphFamily::Cycle, 3, 0));
  const OperatorSum hc = cost_hamiltonian(q);
  const OperatorSum hm(3, {{1.0, "XXI"}, {0.5, "ZXI"}, {0.25, "IXX"}});
  const Vec psi0 = initial_state(3, {});
  const FullEvolver ev(hc, hm);
  EXPECT_STREQ(ev.mixer_plan_name(), "dense_eig");
  SplitMix64 rng(5);
  const QaoaParams params = draw_params(2, rng);
  const Vec got = ev.evolve_state(psi0, params);
  const Vec expected = dense_evolution_oracle({hc, hm, psi0}, params);
  EXPECT_LT((got - expected).norm(), 1e-12);
}

TEST(FullEvolver, DiagonalPhaseIsExact) {
  const Problem s = maxcut_problem(GraphFamily::Cycle, 4, 0);
  const double gamma = 0.613;
  QaoaParams p;
  p.gammas = {gamma};
  p.betas = {0.0};
  const Vec got = FullEvolver(s.hc, s.hm).evolve_state(s.psi0, p);
  const QuboInstance q = maxcut_to_qubo(make_graph(GraphFamily::Cycle, 4, 0));
  for (std::uint64_t x = 0; x < 16; ++x) {
    const cxd expected =
        s.psi0[x] * std::exp(cxd(0, -1) * gamma * objective_value(q, x));
    EXPECT_LT(std::abs(got[x] - expected), 1e-15);
  }
}

TEST(FullEvolver, UnitarityOverDeepCircuits) {
  const Problem s = maxcut_problem(GraphFamily::ErdosRenyi, 5, 12);
  SplitMix64 rng(6);
  const QaoaParams params = draw_params(8, rng);
  const Vec state = FullEvolver(s.hc, s.hm).evolve_state(s.psi0, params);
  EXPECT_NEAR(state.norm(), 1.0, 1e-10);
}

TEST(FullEvolver, LayerComposition) {
  const Problem s = maxcut_problem(GraphFamily::Cycle, 5, 0);
  SplitMix64 rng(7);
  const QaoaParams both = draw_params(2, rng);
  QaoaParams first, second;
  first.gammas = {both.gammas[0]};
  first.betas = {both.betas[0]};
  second.gammas = {both.gammas[1]};
  second.betas = {both.betas[1]};
  const FullEvolver ev(s.hc, s.hm);
  const Vec direct = ev.evolve_state(s.psi0, both);
  const Vec staged = ev.evolve_state(ev.evolve_state(s.psi0, first), second);
  EXPECT_LT((direct - staged).norm(), 1e-12);
}

TEST(FullEvolver, WeightSectorProbabilityConserved) {
  const int n = 6, k = 2;
  const Problem s =
      maxcut_problem(GraphFamily::ErdosRenyi, n, 13, {ConstraintKind::HammingWeight, k});
  SplitMix64 rng(8);
  const Vec state = FullEvolver(s.hc, s.hm).evolve_state(s.psi0, draw_params(3, rng));
  double in_sector = 0.0;
  for (std::uint64_t x = 0; x < (1u << n); ++x) {
    if (std::popcount(x) == k) in_sector += std::norm(state[x]);
  }
  EXPECT_NEAR(in_sector, 1.0, 1e-12);
}

TEST(FullEvolver, ResourceLimits) {
  const OperatorSum hc(15, {{1.0, std::string(15, 'Z')}});
  const OperatorSum hm = mixer_hamiltonian(15, {ConstraintKind::HammingWeight, 7});
  EXPECT_THROW(FullEvolver(hc, hm), ResourceError);  // dense mixer above limit
  EXPECT_THROW(FullEvolver(OperatorSum(21, {{1.0, std::string(21, 'Z')}}),
                           mixer_hamiltonian(21, {})),
               ResourceError);  // statevector limit
  EXPECT_THROW(FullEvolver(OperatorSum(2, {{1.0, "XI"}}), mixer_hamiltonian(2, {})),
               StructuralError);  // cost must be diagonal
}

TEST(MeasureDistribution, UniformAndDicke) {
  const auto uniform = measure_distribution(initial_state(2, {}));
  ASSERT_EQ(uniform.size(), 4u);
  for (const auto& [key, p] : uniform) EXPECT_NEAR(p, 0.25, 1e-15);

  const auto dicke = measure_distribution(initial_state(3, {ConstraintKind::HammingWeight, 1}));
  ASSERT_EQ(dicke.size(), 3u);
  EXPECT_NEAR(dicke.at("001"), 1.0 / 3.0, 1e-15);
  EXPECT_NEAR(dicke.at("010"), 1.0 / 3.0, 1e-15);
  EXPECT_NEAR(dicke.at("100"), 1.0 / 3.0, 1e-15);
}

TEST(ReducedEvolver, ZeroParamsKeepsEnergy) {
  const Problem s = maxcut_problem(GraphFamily::Complete, 2, 0);
  const InvariantSubspace sub = krylov_closure(s.hc, s.hm, s.psi0);
  const Isometry iso = build_isometry(sub);
  const ReducedSystem red = induce_hamiltonians(s.hc, s.hm, iso, s.psi0);
  const EvolutionResult r = evolve_reduced(red, zero_params(1));
  EXPECT_NEAR(r.energy, -0.5, 1e-13);
  EXPECT_LT((r.final_state - red.psi0_red).norm(), 1e-13);
}

TEST(ReducedEvolver, EnergyMatchesFullOnRandomParams) {
  const Problem s = maxcut_problem(GraphFamily::Complete, 2, 0);
  const InvariantSubspace sub = krylov_closure(s.hc, s.hm, s.psi0);
  const Isometry iso = build_isometry(sub);
  const ReducedSystem red = induce_hamiltonians(s.hc, s.hm, iso, s.psi0);
  const FullEvolver full(s.hc, s.hm);
  const ReducedEvolver reduced(red);
  SplitMix64 rng(9);
  for (int rep = 0; rep < 5; ++rep) {
    const QaoaParams params = draw_params(2, rng);
    const EvolutionResult rf = full.evolve(s.psi0, params);
    const EvolutionResult rr = reduced.evolve(params);
    EXPECT_NEAR(rf.energy, rr.energy, 1e-12);
    // Theorem-level state match: V maps the reduced trajectory onto the full one.
    const Vec mapped = isometry_apply(iso, rr.final_state);
    EXPECT_NEAR(std::norm(mapped.dot(rf.final_state)), 1.0, 1e-12);
  }
}

TEST(ReducedEvolver, PaddingStaysEmpty) {
  const Problem s = maxcut_problem(GraphFamily::Complete, 2, 0);
  const InvariantSubspace sub = krylov_closure(s.hc, s.hm, s.psi0);
  const ReducedSystem red =
      induce_hamiltonians(s.hc, s.hm, build_isometry(sub), s.psi0);
  SplitMix64 rng(10);
  const EvolutionResult r = evolve_reduced(red, draw_params(4, rng));
  EXPECT_EQ(r.final_state.size(), 4);
  EXPECT_EQ(r.final_state[3], cxd(0.0, 0.0));
}

TEST(Optimize, DeterministicTraces) {
  const Problem s = maxcut_problem(GraphFamily::Complete, 3, 0);
  const FullEvolver ev(s.hc, s.hm);
  const EnergyFn fn = [&](const QaoaParams& p) {
    return ev.energy(ev.evolve_state(s.psi0, p));
  };
  const OptimizationRun a = optimize(fn, 1, 3, 1234);
  const OptimizationRun b = optimize(fn, 1, 3, 1234);
  EXPECT_EQ(a.best_energy, b.best_energy);
  EXPECT_EQ(a.best_params.gammas, b.best_params.gammas);
  EXPECT_EQ(a.best_params.betas, b.best_params.betas);
  ASSERT_EQ(a.trace.size(), b.trace.size());
  for (std::size_t i = 0; i < a.trace.size(); ++i) EXPECT_EQ(a.trace[i], b.trace[i]);
}

TEST(Optimize, SingleEdgeReachesAnalyticOptimum) {
  // Grid oracle first: scan 200x200 over [0, pi)^2 to confirm the optimum,
  // then require the optimizer to match it to three decimal places.
  const Problem s = maxcut_problem(GraphFamily::Complete, 2, 0);
  const FullEvolver ev(s.hc, s.hm);
  auto energy_at = [&](double gamma, double beta) {
    QaoaParams p;
    p.gammas = {gamma};
    p.betas = {beta};
    return ev.energy(ev.evolve_state(s.psi0, p));
  };
  double grid_min = 0.0;
  for (int i = 0; i < 200; ++i) {
    for (int j = 0; j < 200; ++j) {
      grid_min = std::min(grid_min, energy_at(M_PI * i / 200.0, M_PI * j / 200.0));
    }
  }
  EXPECT_LE(grid_min, -0.999);

  const OptimizationRun run = optimize(
      [&](const QaoaParams& p) { return ev.energy(ev.evolve_state(s.psi0, p)); },
      1, 5, oracle::kDefaultSeedForTests);
  EXPECT_LE(run.best_energy, -0.999);
}

TEST(Optimize, K4WithinTwoPercentOfBruteForce) {
  const Problem s = maxcut_problem(GraphFamily::Complete, 4, 0);
  const FullEvolver ev(s.hc, s.hm);
  const OptimizationRun run = optimize(
      [&](const QaoaParams& p) { return ev.energy(ev.evolve_state(s.psi0, p)); },
      2, 5, oracle::kDefaultSeedForTests);
  EXPECT_LE(run.best_energy, -4.0 * 0.98);
  EXPECT_GE(run.best_energy, -4.0 - 1e-9);
}

TEST(Optimize, RejectsBadArguments) {
  const EnergyFn fn = [](const QaoaParams&) { return 0.0; };
  EXPECT_THROW(optimize(fn, 0, 1, 0), StructuralError);
  EXPECT_THROW(optimize(fn, 1, 0, 0), StructuralError);
}
