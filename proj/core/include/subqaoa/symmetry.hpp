#pragma once

#include <vector>

#include "subqaoa/pauli.hpp"
#include "subqaoa/problem.hpp"

namespace subqaoa {

// Reducibility detection: the joint commutant of {H_C, H_M}, the dynamical
// Lie algebra dimension, and the structural classification of instances.

/// Hermitian generators of the commutant, orthonormal under the trace inner
/// product.  Always contains the identity direction, so dimension >= 1.
struct CommutantBasis {
  int n = 0;
  int dimension = 0;
  std::vector<Mat> generators;
};

/// Exact oracle scale: the commutation constraints live in the 4^n-dim
/// operator space, solved as one stacked singular-value problem.
inline constexpr int kCommutantOracleLimit = 6;

/// Orthonormal Hermitian basis of {Q : [Q, H_C] = 0, [Q, H_M] = 0}, computed
/// as the SVD null space of the stacked adjoint maps in the Pauli coefficient
/// basis (singular values below 1e-9 * sigma_max count as zero).
CommutantBasis commutant_nullspace(const OperatorSum& hc, const OperatorSum& hm);

struct LieClosureResult {
  int dimension = 0;
  bool saturated = false;  // dimension cap was hit before closure
};

/// Dimension of the real Lie algebra generated by {iH_C, iH_M} under nested
/// commutators (iterated symbolic brackets + Gram-Schmidt in coefficient
/// space).  Limited to n <= 5.
LieClosureResult lie_closure_dim(const OperatorSum& hc, const OperatorSum& hm, int cap);

enum class ReducibilityEvidence { TrivialCommutant, ConservedQuantity, WeightSector };

const char* evidence_name(ReducibilityEvidence e);

struct ReducibilityVerdict {
  bool reducible = false;
  int commutant_dim = -1;  // -1 when the exact oracle was not run
  ReducibilityEvidence evidence = ReducibilityEvidence::TrivialCommutant;
};

/// Hamming-weight constraints are reducible outright; n <= 6 uses the exact
/// commutant oracle; larger instances fall back to the Krylov closure
/// dimension (reducible iff M < 2^n).
ReducibilityVerdict classify(const OperatorSum& hc, const OperatorSum& hm,
                             const ConstraintSpec& constraint);

/// Frobenius residual of projecting an operator onto the span of the basis
/// under the trace inner product; near zero means the operator lies in the
/// commutant span.
double commutant_projection_residual(const CommutantBasis& basis, const Mat& op);

}  // namespace subqaoa
