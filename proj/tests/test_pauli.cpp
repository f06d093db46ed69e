#include "subqaoa/pauli.hpp"

#include <gtest/gtest.h>

#include "subqaoa/errors.hpp"
#include "test_support.hpp"

using namespace subqaoa;
namespace oracle = subqaoa::testing;

namespace {

void expect_term_eq(const PauliTerm& got, cxd coeff, const std::string& word) {
  EXPECT_EQ(got.word, word);
  EXPECT_NEAR(std::abs(got.coeff - coeff), 0.0, 1e-14);
}

}  // namespace

TEST(PauliMultiply, SingleQubitRules) {
  expect_term_eq(pauli_multiply({1.0, "X"}, {1.0, "Y"}), cxd(0, 1), "Z");
  expect_term_eq(pauli_multiply({1.0, "Z"}, {1.0, "Z"}), cxd(1, 0), "I");
  expect_term_eq(pauli_multiply({1.0, "Y"}, {1.0, "X"}), cxd(0, -1), "Z");
}

TEST(PauliMultiply, TensorFactorProduct) {
  // Checked against explicit 4x4 matrix multiplication below.
  const PauliTerm a{2.0, "XZ"};
  const PauliTerm b{0.5, "YI"};
  const PauliTerm prod = pauli_multiply(a, b);
  expect_term_eq(prod, cxd(0, 1), "ZZ");
  const Mat lhs = oracle::dense_term(a) * oracle::dense_term(b);
  EXPECT_LT((lhs - oracle::dense_term(prod)).norm(), 1e-14);
}

TEST(PauliMultiply, LengthMismatchThrows) {
  EXPECT_THROW(pauli_multiply({1.0, "X"}, {1.0, "XY"}), StructuralError);
}

TEST(PauliMultiply, MatchesDenseProductOnRandomPairs) {
  SplitMix64 rng(7);
  for (int n = 1; n <= 6; ++n) {
    for (int rep = 0; rep < 20; ++rep) {
      const PauliTerm a = oracle::random_term(rng, n);
      const PauliTerm b = oracle::random_term(rng, n);
      const PauliTerm prod = pauli_multiply(a, b);
      const Mat expected = oracle::dense_term(a) * oracle::dense_term(b);
      EXPECT_LT((expected - oracle::dense_term(prod)).norm(), 1e-12);
    }
  }
}

TEST(OperatorSum, MergesAndDropsTerms) {
  const OperatorSum sum(2, {{1.0, "XZ"}, {2.0, "XZ"}, {1e-15, "YY"}, {0.5, "IZ"}});
  ASSERT_EQ(sum.terms().size(), 2u);
  EXPECT_EQ(sum.terms()[0].word, "IZ");
  EXPECT_EQ(sum.terms()[1].word, "XZ");
  EXPECT_NEAR(sum.terms()[1].coeff.real(), 3.0, 1e-14);
}

TEST(OperatorSum, CanonicalOrderIsLexicographic) {
  const OperatorSum sum(2, {{1.0, "ZI"}, {1.0, "IX"}, {1.0, "XI"}});
  ASSERT_EQ(sum.terms().size(), 3u);
  EXPECT_EQ(sum.terms()[0].word, "IX");
  EXPECT_EQ(sum.terms()[1].word, "XI");
  EXPECT_EQ(sum.terms()[2].word, "ZI");
}

TEST(OperatorSum, RejectsBadWords) {
  EXPECT_THROW(OperatorSum(2, {{1.0, "XQ"}}), StructuralError);
  EXPECT_THROW(OperatorSum(2, {{1.0, "X"}}), StructuralError);
}

TEST(Commutator, CanonicalPauliPair) {
  // [Z, X] = 2i Y
  const OperatorSum z(1, {{1.0, "Z"}});
  const OperatorSum x(1, {{1.0, "X"}});
  const OperatorSum c = commutator(z, x);
  ASSERT_EQ(c.terms().size(), 1u);
  expect_term_eq(c.terms()[0], cxd(0, 2), "Y");
}

TEST(Commutator, TwoAnticommutingFactorsCompose) {
  const OperatorSum zz(2, {{1.0, "ZZ"}});
  const OperatorSum xx(2, {{1.0, "XX"}});
  EXPECT_TRUE(commutator(zz, xx).empty());
}

TEST(Commutator, DisjointSupportsCommute) {
  const OperatorSum z1(2, {{1.0, "ZI"}});
  const OperatorSum x2(2, {{1.0, "IX"}});
  EXPECT_TRUE(commutator(z1, x2).empty());
}

TEST(Commutator, AntisymmetricAfterNormalization) {
  SplitMix64 rng(11);
  for (int rep = 0; rep < 10; ++rep) {
    const OperatorSum a = oracle::random_sum(rng, 4, 5);
    const OperatorSum b = oracle::random_sum(rng, 4, 5);
    const OperatorSum lhs = commutator(a, b);
    const OperatorSum rhs = commutator(b, a).scaled(-1.0);
    EXPECT_TRUE((lhs - rhs).empty());
  }
}

TEST(Commutator, JacobiIdentityOnSingleTerms) {
  SplitMix64 rng(13);
  for (int rep = 0; rep < 20; ++rep) {
    const OperatorSum a(3, {oracle::random_term(rng, 3)});
    const OperatorSum b(3, {oracle::random_term(rng, 3)});
    const OperatorSum c(3, {oracle::random_term(rng, 3)});
    const OperatorSum jacobi = commutator(a, commutator(b, c)) +
                               commutator(b, commutator(c, a)) +
                               commutator(c, commutator(a, b));
    EXPECT_TRUE(jacobi.empty()) << jacobi.str();
  }
}

TEST(Commutator, QubitCountMismatchThrows) {
  const OperatorSum a(1, {{1.0, "Z"}});
  const OperatorSum b(2, {{1.0, "ZZ"}});
  EXPECT_THROW(commutator(a, b), StructuralError);
}

TEST(ToDense, SingleQubitMatrices) {
  const Mat z = to_dense(OperatorSum(1, {{1.0, "Z"}}));
  EXPECT_NEAR(std::abs(z(0, 0) - cxd(1)), 0.0, 1e-15);
  EXPECT_NEAR(std::abs(z(1, 1) - cxd(-1)), 0.0, 1e-15);
  EXPECT_NEAR(std::abs(z(0, 1)), 0.0, 1e-15);

  const Mat x = to_dense(OperatorSum(1, {{1.0, "X"}}));
  Mat expected(2, 2);
  expected << 0, 1, 1, 0;
  EXPECT_LT((x - expected).norm(), 1e-15);
}

TEST(ToDense, MatchesKroneckerOracle) {
  SplitMix64 rng(17);
  for (int n = 1; n <= 5; ++n) {
    const OperatorSum op = oracle::random_sum(rng, n, 6);
    EXPECT_LT((to_dense(op) - oracle::dense_sum(op)).norm(), 1e-12);
  }
}

TEST(ToDense, RespectsDenseLimit) {
  const OperatorSum op(15, {{1.0, std::string(15, 'Z')}});
  EXPECT_THROW(to_dense(op), ResourceError);
  const OperatorSum small(3, {{1.0, "ZZZ"}});
  EXPECT_THROW(to_dense(small, 2), ResourceError);
  EXPECT_NO_THROW(to_dense(small, 3));
}

TEST(ApplyOperator, BitFlipAndSign) {
  // X on |0> gives |1>.
  Vec v0 = Vec::Zero(2);
  v0[0] = 1.0;
  const Vec flipped = apply_operator(OperatorSum(1, {{1.0, "X"}}), v0);
  EXPECT_NEAR(std::abs(flipped[1] - cxd(1.0)), 0.0, 1e-15);

  // (Z_0 + Z_1) annihilates |01>: eigenvalue 1 + (-1) = 0.
  const OperatorSum zsum(2, {{1.0, "ZI"}, {1.0, "IZ"}});
  Vec v01 = Vec::Zero(4);
  v01[1] = 1.0;
  EXPECT_LT(apply_operator(zsum, v01).norm(), 1e-15);
}

TEST(ApplyOperator, MatchesDenseActionOnRandomInputs) {
  SplitMix64 rng(23);
  for (int n : {2, 4, 8, 10}) {
    const OperatorSum op = oracle::random_sum(rng, n, 8);
    const Vec v = oracle::random_state(rng, 1LL << n);
    const Vec direct = apply_operator(op, v);
    Vec dense;
    if (n <= 8) {
      dense = oracle::dense_sum(op) * v;
    } else {
      dense = to_dense(op) * v;
    }
    EXPECT_LT((direct - dense).norm(), 1e-12) << "n=" << n;
  }
}

TEST(ApplyOperator, DimensionMismatchThrows) {
  const OperatorSum op(2, {{1.0, "XX"}});
  EXPECT_THROW(apply_operator(op, Vec::Zero(2)), StructuralError);
}

TEST(DiagonalOf, ExtractsSigns) {
  const OperatorSum op(2, {{-0.5, "II"}, {0.5, "ZZ"}});
  const RVec diag = diagonal_of(op);
  EXPECT_NEAR(diag[0], 0.0, 1e-15);
  EXPECT_NEAR(diag[1], -1.0, 1e-15);
  EXPECT_NEAR(diag[2], -1.0, 1e-15);
  EXPECT_NEAR(diag[3], 0.0, 1e-15);
  EXPECT_THROW(diagonal_of(OperatorSum(1, {{1.0, "X"}})), StructuralError);
}

TEST(Bitstring, QubitZeroIsLeftmost) {
  EXPECT_EQ(bitstring(1, 3), "001");
  EXPECT_EQ(bitstring(4, 3), "100");
  EXPECT_EQ(bitstring(0, 2), "00");
}
