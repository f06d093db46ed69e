#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "subqaoa/linalg.hpp"

namespace subqaoa {

// n-qubit Pauli strings with complex coefficients.  Qubit q occupies bit
// (n-1-q) of a computational basis index, so the leftmost character of a
// rendered bitstring is qubit 0 and |001> on three qubits is index 1.

/// Coefficient times a tensor product of single-qubit Paulis.  word[q] is the
/// letter ('I', 'X', 'Y' or 'Z') acting on qubit q.
struct PauliTerm {
  cxd coeff;
  std::string word;

  int num_qubits() const { return static_cast<int>(word.size()); }
};

/// Normalized sum of Pauli terms: words are unique, sorted lexicographically,
/// and terms with |coeff| below kMergeTol are dropped.  Immutable after
/// construction and safe to share across threads.
class OperatorSum {
 public:
  static constexpr double kMergeTol = 1e-12;

  explicit OperatorSum(int num_qubits);
  OperatorSum(int num_qubits, std::vector<PauliTerm> terms);

  int num_qubits() const { return n_; }
  const std::vector<PauliTerm>& terms() const { return terms_; }
  bool empty() const { return terms_.empty(); }

  /// True when every word uses only {I, Z}.
  bool diagonal() const;

  /// Hermiticity test: Pauli words are Hermitian, so the sum is Hermitian
  /// exactly when all coefficients are real.
  bool real_coefficients(double tol = kMergeTol) const;

  OperatorSum scaled(cxd factor) const;
  friend OperatorSum operator+(const OperatorSum& a, const OperatorSum& b);
  friend OperatorSum operator-(const OperatorSum& a, const OperatorSum& b);

  std::string str() const;

 private:
  int n_;
  std::vector<PauliTerm> terms_;

  void normalize();
};

/// Single-term operator product a*b with the phase folded into the
/// coefficient (X*Y = iZ and so on, factor by factor).
PauliTerm pauli_multiply(const PauliTerm& a, const PauliTerm& b);

/// True when the words commute as operators (even number of positions where
/// both letters are non-identity and different).
bool words_commute(const std::string& a, const std::string& b);

/// ab - ba, symbolically cancelled; empty exactly when a and b commute.
OperatorSum commutator(const OperatorSum& a, const OperatorSum& b);

inline constexpr int kDenseLimit = 14;

/// Dense 2^n x 2^n matrix of the sum.  Each term is scattered with one
/// bit-indexed pass over the basis, never as an explicit Kronecker product.
Mat to_dense(const OperatorSum& op, int dense_limit = kDenseLimit);

/// Matrix-free operator action on a statevector (not renormalized).
Vec apply_operator(const OperatorSum& op, const Vec& v);

/// Operator action on each column.
Mat apply_columns(const OperatorSum& op, const Mat& columns);

/// Diagonal entries of a {I,Z}-only sum, evaluated in one pass per term.
RVec diagonal_of(const OperatorSum& op);

/// Identity on n qubits: the all-'I' word.
std::string identity_word(int num_qubits);

/// Renders basis index x as an n-character bitstring (qubit 0 leftmost).
std::string bitstring(std::uint64_t x, int num_qubits);

}  // namespace subqaoa
