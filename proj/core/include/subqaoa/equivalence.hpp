#pragma once

#include <cstdint>
#include <map>
#include <string>

#include "subqaoa/qaoa.hpp"

namespace subqaoa {

// Quantitative certificates that the reduced evolution reproduces the full
// one: fidelity offset, observable gap, total variation distance, and the
// operator-level intertwining residual U V = V U~.

struct EquivalenceReport {
  double fidelity_offset = 0.0;      // F - 1, clamped to <= 0
  double delta_e = 0.0;              // |<H_C>_full - <H~_C>_red|
  double tvd = 0.0;
  double intertwine_residual = -1.0;     // ||U V - V U~||_F / sqrt(M); -1 if skipped
  double intertwine_max_column = -1.0;   // max_k ||U V e_k - V U~ e_k||
  double lemma2_vtv = 0.0;
  double lemma2_vvt = 0.0;
  int n = 0;
  int m = 0;
  int M = 0;
  std::uint64_t dim_full = 0;
  std::uint64_t dim_reduced = 0;
  QaoaParams params;
};

/// |<a|b>|^2; global-phase invariant.  Both states must be normalized.
double fidelity(const Vec& a, const Vec& b);

/// 0.5 * sum_x |p(x) - q(x)| over the union of supports; inputs must each
/// sum to 1 within 1e-8.
double tvd(const std::map<std::string, double>& p,
           const std::map<std::string, double>& q);

struct CertifyOptions {
  bool with_intertwining = true;
};

/// Runs both evolutions with identical parameters and compares the final
/// states, energies and measurement distributions; the reduced state is
/// mapped through V before comparison.  The intertwining residual is
/// evaluated column-action-wise on the reduced basis.
EquivalenceReport certify_pair(const FullEvolver& full, const Vec& psi0,
                               const ReducedEvolver& reduced, const Isometry& iso,
                               const QaoaParams& params,
                               const CertifyOptions& options = {});

struct IntertwiningResidual {
  double frobenius_scaled = 0.0;  // ||U V - V U~||_F / sqrt(M)
  double max_column = 0.0;        // worst single reduced basis vector
};

IntertwiningResidual intertwining_residual(const FullEvolver& full,
                                           const ReducedEvolver& reduced,
                                           const Isometry& iso,
                                           const QaoaParams& params);

struct ExclusionReport {
  bool passed = true;
  double worst_probability = 0.0;       // largest Pr(x) on excluded basis states
  std::uint64_t worst_index = 0;
  double total_excluded_probability = 0.0;
  std::uint64_t excluded_count = 0;     // basis states with ||Pi_eff |x>|| <= 1e-10
};

/// Basis states orthogonal to the subspace must carry no probability in the
/// full-space result (threshold 1e-12); failures are reported, not thrown.
ExclusionReport certify_orthogonal_exclusion(const InvariantSubspace& sub,
                                             const EvolutionResult& full_result);

/// Negative-control helper: adds epsilon times a neighbouring column to one
/// isometry column, re-measuring (not enforcing) the Lemma-2 residuals.
Isometry corrupt_isometry_column(const Isometry& iso, int column, double epsilon);

/// Dense full-space unitary assembled by evolving identity columns; meant
/// for small n (guarded at n <= 12).
Mat assemble_dense_unitary(const FullEvolver& full, const QaoaParams& params);

/// ||P U - U P||_F for a projector and a dense unitary.
double commutation_residual(const Mat& projector, const Mat& unitary);

/// Projector Pi_eff = sum_k |phi_k><phi_k| of a subspace (dense).
Mat subspace_projector(const InvariantSubspace& sub);

}  // namespace subqaoa
