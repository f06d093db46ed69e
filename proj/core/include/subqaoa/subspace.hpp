#pragma once

#include <cstdint>
#include <string>

#include "subqaoa/pauli.hpp"

namespace subqaoa {

// Construction of the minimal invariant subspace containing the initial
// state, the isometry onto a reduced qubit register, and the induced
// Hamiltonians that drive the reduced evolution.

struct ClosureLog {
  std::string method;      // "krylov" or "dicke"
  int sweeps = 0;          // basis vectors whose images were expanded
  int candidates = 0;      // orthogonalization attempts
  int accepted = 0;
  int rejected = 0;
  bool exhausted_space = false;  // stopped because the span is everything
};

/// Orthonormal basis of a subspace of the 2^n-dimensional space that is
/// closed under both Hamiltonians and contains the seeding state.
struct InvariantSubspace {
  int n = 0;
  int dimension = 0;  // M
  Mat basis;          // 2^n x M, columns orthonormal
  ClosureLog log;
};

struct ClosureOptions {
  double rank_tol = 1e-9;   // residual norm below this is "already in span"
  bool allow_dicke_fast_path = true;
  std::uint64_t cap = 0;    // 0 means 2^n
};

/// Breadth-first closure: seed with psi0, repeatedly apply H_C then H_M to
/// each basis vector in FIFO order, orthogonalize with two-pass modified
/// Gram-Schmidt and admit directions whose residual exceeds rank_tol.
///
/// Fast path: when the cost diagonal is constant on Hamming-weight classes,
/// the mixer is a uniform transverse field and psi0 is the uniform
/// superposition, the Dicke basis (uniform weight-w states, w = 0..n) is
/// used instead and verified against the closure invariant before being
/// accepted.
InvariantSubspace krylov_closure(const OperatorSum& hc, const OperatorSum& hm,
                                 const Vec& psi0, const ClosureOptions& options = {});

/// ceil(log2 M) with m = 0 for M = 1.
int qubit_count(std::uint64_t subspace_dim);

/// 2^n / M, the full-to-effective dimension ratio.
double compression_ratio(int n, std::uint64_t subspace_dim);

/// Column-orthonormal map from the m-qubit register onto the subspace;
/// reduced basis state k maps to subspace basis vector k, and the 2^m - M
/// padding directions are outside the active range.
struct Isometry {
  int n = 0;
  int m = 0;
  int M = 0;
  Mat v;                 // 2^n x M active block
  double vtv_residual = 0.0;  // ||V^dagger V - I_M||_F
  double vvt_residual = 0.0;  // ||V V^dagger - Pi_eff||_F (action check for large dims)
};

Isometry build_isometry(const InvariantSubspace& sub);

/// V applied to a reduced 2^m state (padding amplitudes must be ~0).
Vec isometry_apply(const Isometry& iso, const Vec& reduced);

/// V^dagger applied to a full state; padding components are exactly zero.
Vec isometry_adjoint_apply(const Isometry& iso, const Vec& full);

/// Active M x M blocks of V^dagger H V plus the mapped initial state.
/// The 2^m embedding zero-couples the padding directions.
struct ReducedSystem {
  int n = 0;
  int m = 0;
  int M = 0;
  Mat hc_red;    // M x M, Hermitian
  Mat hm_red;    // M x M, Hermitian
  Vec psi0_red;  // 2^m, zero on padding
};

ReducedSystem induce_hamiltonians(const OperatorSum& hc, const OperatorSum& hm,
                                  const Isometry& iso, const Vec& psi0);

}  // namespace subqaoa
