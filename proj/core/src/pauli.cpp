#include "subqaoa/pauli.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <sstream>

#include "subqaoa/errors.hpp"

namespace subqaoa {

namespace {

bool valid_letter(char c) { return c == 'I' || c == 'X' || c == 'Y' || c == 'Z'; }

void check_word(const std::string& word, int n) {
  if (static_cast<int>(word.size()) != n) {
    throw StructuralError("Pauli word length " + std::to_string(word.size()) +
                          " does not match qubit count " + std::to_string(n));
  }
  for (char c : word) {
    if (!valid_letter(c)) {
      throw StructuralError(std::string("invalid Pauli letter '") + c + "'");
    }
  }
}

// Single-qubit product a*b -> (phase exponent of i, letter).
std::pair<int, char> letter_product(char a, char b) {
  if (a == 'I') return {0, b};
  if (b == 'I') return {0, a};
  if (a == b) return {0, 'I'};
  // Cyclic rule: XY = iZ, YZ = iX, ZX = iY; reversed order flips the sign.
  auto cyclic = [](char x, char y) -> char {
    if ((x == 'X' && y == 'Y') || (x == 'Y' && y == 'X')) return 'Z';
    if ((x == 'Y' && y == 'Z') || (x == 'Z' && y == 'Y')) return 'X';
    return 'Y';
  };
  const bool forward = (a == 'X' && b == 'Y') || (a == 'Y' && b == 'Z') ||
                       (a == 'Z' && b == 'X');
  return {forward ? 1 : 3, cyclic(a, b)};
}

constexpr cxd kIPowers[4] = {cxd(1, 0), cxd(0, 1), cxd(-1, 0), cxd(0, -1)};

struct TermMasks {
  std::uint64_t flip = 0;  // X or Y positions
  std::uint64_t sign = 0;  // Z or Y positions
  cxd coeff{0.0, 0.0};     // term coefficient times i^(#Y)
};

TermMasks make_masks(const PauliTerm& t) {
  TermMasks m;
  const int n = t.num_qubits();
  int y_count = 0;
  for (int q = 0; q < n; ++q) {
    const std::uint64_t bit = 1ULL << (n - 1 - q);
    switch (t.word[q]) {
      case 'X': m.flip |= bit; break;
      case 'Y': m.flip |= bit; m.sign |= bit; ++y_count; break;
      case 'Z': m.sign |= bit; break;
      default: break;
    }
  }
  m.coeff = t.coeff * kIPowers[y_count & 3];
  return m;
}

double parity_sign(std::uint64_t bits) {
  return (std::popcount(bits) & 1) ? -1.0 : 1.0;
}

}  // namespace

OperatorSum::OperatorSum(int num_qubits) : n_(num_qubits) {
  if (n_ < 1) throw StructuralError("operator needs at least one qubit");
}

OperatorSum::OperatorSum(int num_qubits, std::vector<PauliTerm> terms)
    : n_(num_qubits), terms_(std::move(terms)) {
  if (n_ < 1) throw StructuralError("operator needs at least one qubit");
  for (const auto& t : terms_) check_word(t.word, n_);
  normalize();
}

void OperatorSum::normalize() {
  std::sort(terms_.begin(), terms_.end(),
            [](const PauliTerm& a, const PauliTerm& b) { return a.word < b.word; });
  std::vector<PauliTerm> merged;
  merged.reserve(terms_.size());
  for (auto& t : terms_) {
    if (!merged.empty() && merged.back().word == t.word) {
      merged.back().coeff += t.coeff;
    } else {
      merged.push_back(std::move(t));
    }
  }
  std::erase_if(merged, [](const PauliTerm& t) {
    return std::abs(t.coeff) < kMergeTol;
  });
  terms_ = std::move(merged);
}

bool OperatorSum::diagonal() const {
  for (const auto& t : terms_) {
    for (char c : t.word) {
      if (c == 'X' || c == 'Y') return false;
    }
  }
  return true;
}

bool OperatorSum::real_coefficients(double tol) const {
  for (const auto& t : terms_) {
    if (std::abs(t.coeff.imag()) > tol) return false;
  }
  return true;
}

OperatorSum OperatorSum::scaled(cxd factor) const {
  std::vector<PauliTerm> terms = terms_;
  for (auto& t : terms) t.coeff *= factor;
  return OperatorSum(n_, std::move(terms));
}

OperatorSum operator+(const OperatorSum& a, const OperatorSum& b) {
  if (a.n_ != b.n_) throw StructuralError("qubit count mismatch in operator sum");
  std::vector<PauliTerm> terms = a.terms_;
  terms.insert(terms.end(), b.terms_.begin(), b.terms_.end());
  return OperatorSum(a.n_, std::move(terms));
}

OperatorSum operator-(const OperatorSum& a, const OperatorSum& b) {
  return a + b.scaled(cxd(-1.0, 0.0));
}

std::string OperatorSum::str() const {
  if (terms_.empty()) return "0";
  std::ostringstream os;
  for (std::size_t i = 0; i < terms_.size(); ++i) {
    if (i > 0) os << " + ";
    os << "(" << terms_[i].coeff.real();
    if (terms_[i].coeff.imag() != 0.0) os << (terms_[i].coeff.imag() > 0 ? "+" : "") << terms_[i].coeff.imag() << "i";
    os << ")*" << terms_[i].word;
  }
  return os.str();
}

PauliTerm pauli_multiply(const PauliTerm& a, const PauliTerm& b) {
  if (a.word.size() != b.word.size()) {
    throw StructuralError("pauli_multiply: word length mismatch");
  }
  std::string word(a.word.size(), 'I');
  int phase = 0;
  for (std::size_t q = 0; q < a.word.size(); ++q) {
    auto [p, letter] = letter_product(a.word[q], b.word[q]);
    phase += p;
    word[q] = letter;
  }
  return PauliTerm{a.coeff * b.coeff * kIPowers[phase & 3], std::move(word)};
}

bool words_commute(const std::string& a, const std::string& b) {
  if (a.size() != b.size()) {
    throw StructuralError("words_commute: word length mismatch");
  }
  int anti = 0;
  for (std::size_t q = 0; q < a.size(); ++q) {
    if (a[q] != 'I' && b[q] != 'I' && a[q] != b[q]) ++anti;
  }
  return (anti & 1) == 0;
}

OperatorSum commutator(const OperatorSum& a, const OperatorSum& b) {
  if (a.num_qubits() != b.num_qubits()) {
    throw StructuralError("commutator: qubit count mismatch");
  }
  std::vector<PauliTerm> terms;
  for (const auto& ta : a.terms()) {
    for (const auto& tb : b.terms()) {
      if (words_commute(ta.word, tb.word)) continue;
      // ab - ba = 2ab when the words anticommute.
      PauliTerm prod = pauli_multiply(ta, tb);
      prod.coeff *= 2.0;
      terms.push_back(std::move(prod));
    }
  }
  return OperatorSum(a.num_qubits(), std::move(terms));
}

Mat to_dense(const OperatorSum& op, int dense_limit) {
  const int n = op.num_qubits();
  if (n > dense_limit) {
    throw ResourceError("to_dense: " + std::to_string(n) +
                        " qubits exceeds dense limit " + std::to_string(dense_limit));
  }
  const std::uint64_t dim = 1ULL << n;
  Mat out = Mat::Zero(dim, dim);
  for (const auto& t : op.terms()) {
    const TermMasks m = make_masks(t);
    for (std::uint64_t x = 0; x < dim; ++x) {
      out(x ^ m.flip, x) += m.coeff * parity_sign(x & m.sign);
    }
  }
  return out;
}

Vec apply_operator(const OperatorSum& op, const Vec& v) {
  const std::uint64_t dim = 1ULL << op.num_qubits();
  if (static_cast<std::uint64_t>(v.size()) != dim) {
    throw StructuralError("apply: statevector dimension mismatch");
  }
  Vec out = Vec::Zero(dim);
  for (const auto& t : op.terms()) {
    const TermMasks m = make_masks(t);
    for (std::uint64_t x = 0; x < dim; ++x) {
      out[x ^ m.flip] += m.coeff * parity_sign(x & m.sign) * v[x];
    }
  }
  return out;
}

Mat apply_columns(const OperatorSum& op, const Mat& columns) {
  const std::uint64_t dim = 1ULL << op.num_qubits();
  if (static_cast<std::uint64_t>(columns.rows()) != dim) {
    throw StructuralError("apply_columns: dimension mismatch");
  }
  Mat out = Mat::Zero(columns.rows(), columns.cols());
  std::vector<TermMasks> masks;
  masks.reserve(op.terms().size());
  for (const auto& t : op.terms()) masks.push_back(make_masks(t));
  for (Eigen::Index j = 0; j < columns.cols(); ++j) {
    const auto& v = columns.col(j);
    auto o = out.col(j);
    for (const TermMasks& m : masks) {
      for (std::uint64_t x = 0; x < dim; ++x) {
        o[x ^ m.flip] += m.coeff * parity_sign(x & m.sign) * v[x];
      }
    }
  }
  return out;
}

RVec diagonal_of(const OperatorSum& op) {
  if (!op.diagonal()) {
    throw StructuralError("diagonal_of: operator has off-diagonal terms");
  }
  const std::uint64_t dim = 1ULL << op.num_qubits();
  RVec diag = RVec::Zero(dim);
  double imag_leak = 0.0;
  for (const auto& t : op.terms()) {
    const TermMasks m = make_masks(t);
    imag_leak = std::max(imag_leak, std::abs(t.coeff.imag()));
    for (std::uint64_t x = 0; x < dim; ++x) {
      diag[x] += m.coeff.real() * parity_sign(x & m.sign);
    }
  }
  if (imag_leak > 1e-10) {
    throw NumericalIntegrityError("diagonal_of: non-real diagonal coefficients");
  }
  return diag;
}

std::string identity_word(int num_qubits) {
  return std::string(static_cast<std::size_t>(num_qubits), 'I');
}

std::string bitstring(std::uint64_t x, int num_qubits) {
  std::string s(static_cast<std::size_t>(num_qubits), '0');
  for (int q = 0; q < num_qubits; ++q) {
    if ((x >> (num_qubits - 1 - q)) & 1ULL) s[q] = '1';
  }
  return s;
}

}  // namespace subqaoa
