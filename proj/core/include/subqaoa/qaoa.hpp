#pragma once

#include <cstdint>
#include <functional>
#include <map>
#include <string>
#include <vector>

#include "subqaoa/rng.hpp"
#include "subqaoa/subspace.hpp"

namespace subqaoa {

// Layered QAOA evolution in the full 2^n space and in the reduced register,
// plus the derivative-free parameter optimizer.

struct QaoaParams {
  std::vector<double> gammas;
  std::vector<double> betas;

  int layers() const { return static_cast<int>(gammas.size()); }
  void validate() const;
};

struct EvolutionResult {
  Vec final_state;
  double energy = 0.0;  // <H_C> in the operator's own space
  std::map<std::string, double> distribution;
  double wall_seconds = 0.0;
};

/// |amplitude|^2 per basis index, keyed by bitstring; entries below 1e-15
/// are omitted.  The state dimension must be a power of two.
std::map<std::string, double> measure_distribution(const Vec& state);

struct EvolverLimits {
  int statevector_limit = 20;  // max n for any evolution
  int dense_limit = 14;        // max n when dense mixer exponentials are needed
};

/// Full-space evolution.  The cost layer is an exact diagonal phase.  The
/// mixer layer picks the cheapest exact plan at construction:
///  - per-qubit rotations when the mixer is a sum of single-qubit X terms
///    (the terms commute, so the product form is exact),
///  - per-Hamming-weight-sector eigendecomposition when the mixer commutes
///    with sum_q Z_q (the XY ring mixer),
///  - one dense eigendecomposition otherwise.
/// No Trotterization anywhere.
class FullEvolver {
 public:
  FullEvolver(OperatorSum hc, OperatorSum hm, EvolverLimits limits = {});

  int num_qubits() const { return n_; }
  const RVec& cost_diagonal() const { return cost_diag_; }
  const char* mixer_plan_name() const;

  Vec evolve_state(const Vec& psi0, const QaoaParams& params) const;
  Mat evolve_block(const Mat& columns, const QaoaParams& params) const;
  EvolutionResult evolve(const Vec& psi0, const QaoaParams& params) const;
  double energy(const Vec& state) const;

 private:
  enum class MixerPlan { ProductX, WeightBlocked, DenseEig };

  struct WeightBlock {
    std::vector<std::uint64_t> states;  // ascending basis indices of the sector
    Eigensystem eig;
  };

  void apply_mixer(Vec& state, double beta) const;

  int n_ = 0;
  RVec cost_diag_;
  MixerPlan plan_ = MixerPlan::ProductX;
  std::vector<double> x_coeffs_;          // ProductX
  std::vector<WeightBlock> blocks_;       // WeightBlocked
  Eigensystem dense_eig_;                 // DenseEig
};

/// Evolution inside the reduced register via eigendecompositions of the
/// active M x M blocks (computed once at construction).  Padding amplitudes
/// stay exactly zero; leakage above 1e-10 throws.
class ReducedEvolver {
 public:
  explicit ReducedEvolver(ReducedSystem sys);

  const ReducedSystem& system() const { return sys_; }

  Vec evolve_state(const Vec& reduced, const QaoaParams& params) const;
  Mat evolve_block(const Mat& active_columns, const QaoaParams& params) const;
  EvolutionResult evolve(const QaoaParams& params) const;  // from psi0_red
  double energy(const Vec& reduced) const;

 private:
  ReducedSystem sys_;
  Eigensystem hc_eig_;
  Eigensystem hm_eig_;
};

EvolutionResult evolve_full(const OperatorSum& hc, const OperatorSum& hm,
                            const Vec& psi0, const QaoaParams& params);
EvolutionResult evolve_reduced(const ReducedSystem& sys, const QaoaParams& params);

struct OptimizationRun {
  int restarts = 0;
  QaoaParams best_params;
  double best_energy = 0.0;
  std::vector<double> trace;  // best-so-far energy per optimizer iteration
  std::uint64_t seed = 0;
  bool budget_exhausted = false;
};

using EnergyFn = std::function<double(const QaoaParams&)>;

/// Uniform draw from [0, pi) per coordinate, gammas first.
QaoaParams draw_params(int layers, SplitMix64& rng);

/// Nelder-Mead over the 2P-dimensional parameter vector.  Each restart draws
/// its starting point from the seeded stream (identical seeds give identical
/// parameter sequences regardless of which evolver backs the energy), runs
/// for at most 200*P evaluations and stops early once the simplex energy
/// spread falls below 1e-8.  Best restart wins; ties keep the earliest.
OptimizationRun optimize(const EnergyFn& energy, int layers, int restarts,
                         std::uint64_t seed);

}  // namespace subqaoa
