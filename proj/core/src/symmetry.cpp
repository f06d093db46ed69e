#include "subqaoa/symmetry.hpp"

#include <cmath>
#include <deque>
#include <string>

#include "subqaoa/errors.hpp"
#include "subqaoa/subspace.hpp"

namespace subqaoa {

namespace {

constexpr char kLetters[4] = {'I', 'X', 'Y', 'Z'};

int letter_digit(char c) {
  switch (c) {
    case 'I': return 0;
    case 'X': return 1;
    case 'Y': return 2;
    case 'Z': return 3;
  }
  throw StructuralError("invalid Pauli letter");
}

// Word <-> integer in base 4, qubit 0 as the most significant digit so that
// numeric order equals lexicographic word order.
std::uint64_t word_index(const std::string& word) {
  std::uint64_t idx = 0;
  for (char c : word) idx = 4 * idx + letter_digit(c);
  return idx;
}

std::string index_word(std::uint64_t idx, int n) {
  std::string word(n, 'I');
  for (int q = n - 1; q >= 0; --q) {
    word[q] = kLetters[idx & 3];
    idx >>= 2;
  }
  return word;
}

// Adds the adjoint map A -> [A, H] in the Pauli coefficient basis to rows
// [row_offset, row_offset + 4^n) of the stacked superoperator.
void fill_adjoint_block(Mat& super, std::uint64_t row_offset, const OperatorSum& h, int n) {
  const std::uint64_t words = 1ULL << (2 * n);
  for (std::uint64_t p = 0; p < words; ++p) {
    const std::string word = index_word(p, n);
    for (const auto& t : h.terms()) {
      if (words_commute(word, t.word)) continue;
      // [P, T] = 2 P T for anticommuting words.
      PauliTerm prod = pauli_multiply({1.0, word}, t);
      super(row_offset + word_index(prod.word), p) += 2.0 * prod.coeff;
    }
  }
}

RVec real_coefficient_vector(const OperatorSum& op) {
  const std::uint64_t words = 1ULL << (2 * op.num_qubits());
  RVec v = RVec::Zero(words);
  for (const auto& t : op.terms()) {
    if (std::abs(t.coeff.imag()) > 1e-10) {
      throw NumericalIntegrityError("expected a real-coefficient Pauli sum");
    }
    v[word_index(t.word)] = t.coeff.real();
  }
  return v;
}

OperatorSum sum_from_vector(const RVec& coeffs, int n) {
  std::vector<PauliTerm> terms;
  for (Eigen::Index p = 0; p < coeffs.size(); ++p) {
    if (std::abs(coeffs[p]) >= OperatorSum::kMergeTol) {
      terms.push_back({coeffs[p], index_word(static_cast<std::uint64_t>(p), n)});
    }
  }
  return OperatorSum(n, std::move(terms));
}

}  // namespace

CommutantBasis commutant_nullspace(const OperatorSum& hc, const OperatorSum& hm) {
  const int n = hc.num_qubits();
  if (hm.num_qubits() != n) {
    throw StructuralError("commutant_nullspace: qubit count mismatch");
  }
  if (n > kCommutantOracleLimit) {
    throw ResourceError(
        "commutant_nullspace: exact oracle is limited to n <= " +
        std::to_string(kCommutantOracleLimit) +
        "; use krylov_closure for constructive reduction at larger n");
  }

  const std::uint64_t words = 1ULL << (2 * n);
  Mat super = Mat::Zero(2 * words, words);
  fill_adjoint_block(super, 0, hc, n);
  fill_adjoint_block(super, words, hm, n);
  const Mat null_basis = svd_nullspace(super, 1e-9);
  super.resize(0, 0);

  // Hermitian elements have real Pauli coefficients, so the Hermitian part of
  // the null space is the real span of {Re q, Im q} over the null vectors.
  const auto nullity = null_basis.cols();
  std::vector<RVec> hermitian;
  auto admit = [&](RVec v) {
    for (int pass = 0; pass < 2; ++pass) {
      for (const RVec& b : hermitian) v -= b.dot(v) * b;
    }
    const double norm = v.norm();
    if (norm > 1e-9) hermitian.push_back(v / norm);
  };
  for (Eigen::Index j = 0; j < nullity; ++j) {
    admit(null_basis.col(j).real());
    admit(null_basis.col(j).imag());
  }
  if (static_cast<Eigen::Index>(hermitian.size()) != nullity) {
    throw NumericalIntegrityError(
        "commutant_nullspace: Hermitian basis dimension does not match the nullity");
  }

  CommutantBasis basis;
  basis.n = n;
  basis.dimension = static_cast<int>(hermitian.size());
  if (basis.dimension < 1) {
    throw NumericalIntegrityError("commutant_nullspace: identity direction missing");
  }

  const Mat hc_dense = to_dense(hc);
  const Mat hm_dense = to_dense(hm);
  const double norm_factor = std::sqrt(std::ldexp(1.0, n));  // tr(P^2) = 2^n
  for (const RVec& coeffs : hermitian) {
    Mat g = to_dense(sum_from_vector(coeffs / norm_factor, n));
    if ((g * hc_dense - hc_dense * g).norm() > 1e-10 ||
        (g * hm_dense - hm_dense * g).norm() > 1e-10) {
      throw NumericalIntegrityError(
          "commutant_nullspace: candidate generator fails the commutation check");
    }
    basis.generators.push_back(std::move(g));
  }
  return basis;
}

LieClosureResult lie_closure_dim(const OperatorSum& hc, const OperatorSum& hm, int cap) {
  const int n = hc.num_qubits();
  if (hm.num_qubits() != n) {
    throw StructuralError("lie_closure_dim: qubit count mismatch");
  }
  if (n > 5) {
    throw ResourceError("lie_closure_dim: limited to n <= 5");
  }
  if (cap < 1) throw StructuralError("lie_closure_dim: cap must be positive");

  // Anti-Hermitian elements iH are tracked through their Hermitian part H
  // (real Pauli coefficients); [iA, iB] = i * (i [A, B]).
  std::vector<OperatorSum> elements;
  std::vector<RVec> span;
  bool saturated = false;
  auto admit = [&](const OperatorSum& h) {
    RVec v = real_coefficient_vector(h);
    const double scale = v.norm();
    if (scale < OperatorSum::kMergeTol) return false;
    for (int pass = 0; pass < 2; ++pass) {
      for (const RVec& b : span) v -= b.dot(v) * b;
    }
    if (v.norm() <= 1e-9 * scale) return false;
    if (static_cast<int>(elements.size()) >= cap) {
      saturated = true;  // a new direction exists but the cap forbids it
      return false;
    }
    v /= v.norm();
    span.push_back(v);
    elements.push_back(sum_from_vector(v, n));
    return true;
  };

  std::deque<std::pair<int, int>> pending;
  auto push_pairs_for = [&](int t) {
    for (int k = 0; k < t; ++k) pending.emplace_back(k, t);
  };
  for (const OperatorSum* h : {&hc, &hm}) {
    if (admit(*h)) push_pairs_for(static_cast<int>(elements.size()) - 1);
  }

  while (!pending.empty() && !saturated) {
    auto [a, b] = pending.front();
    pending.pop_front();
    const OperatorSum bracket =
        commutator(elements[a], elements[b]).scaled(cxd(0.0, 1.0));
    if (admit(bracket)) push_pairs_for(static_cast<int>(elements.size()) - 1);
  }
  return {static_cast<int>(elements.size()), saturated};
}

const char* evidence_name(ReducibilityEvidence e) {
  switch (e) {
    case ReducibilityEvidence::TrivialCommutant: return "trivial_commutant";
    case ReducibilityEvidence::ConservedQuantity: return "conserved_quantity";
    case ReducibilityEvidence::WeightSector: return "weight_sector";
  }
  throw StructuralError("unknown evidence tag");
}

ReducibilityVerdict classify(const OperatorSum& hc, const OperatorSum& hm,
                             const ConstraintSpec& constraint) {
  if (constraint.kind == ConstraintKind::HammingWeight) {
    return {true, -1, ReducibilityEvidence::WeightSector};
  }
  const int n = hc.num_qubits();
  if (n <= kCommutantOracleLimit) {
    const CommutantBasis basis = commutant_nullspace(hc, hm);
    return {basis.dimension > 1, basis.dimension,
            basis.dimension > 1 ? ReducibilityEvidence::ConservedQuantity
                                : ReducibilityEvidence::TrivialCommutant};
  }
  const InvariantSubspace sub = krylov_closure(hc, hm, initial_state(n, constraint));
  const bool reducible = (1ULL << n) > static_cast<std::uint64_t>(sub.dimension);
  return {reducible, -1,
          reducible ? ReducibilityEvidence::ConservedQuantity
                    : ReducibilityEvidence::TrivialCommutant};
}

double commutant_projection_residual(const CommutantBasis& basis, const Mat& op) {
  Mat residual = op;
  for (const Mat& g : basis.generators) {
    const cxd overlap = (g.adjoint() * op).trace();
    residual -= overlap * g;
  }
  return residual.norm();
}

}  // namespace subqaoa
