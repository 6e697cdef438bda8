#include <gtest/gtest.h>

#include "oracles.hpp"
#include "qrm/gf2.hpp"

namespace qrm {
namespace {

using testing::Gen;

TEST(BitVector, SetGetFlipAndWeight) {
    BitVector v(70);
    EXPECT_TRUE(v.none());
    v.set(1);
    v.set(64);
    v.set(65);
    v.set(70);
    EXPECT_EQ(v.weight(), 4u);
    EXPECT_TRUE(v.get(64));
    EXPECT_FALSE(v.get(2));
    v.flip(64);
    EXPECT_FALSE(v.get(64));
    EXPECT_EQ(v.first_one(), 1u);
    EXPECT_EQ(v.support(), (std::vector<std::size_t>{1, 65, 70}));
}

TEST(BitVector, IndicesAreOneBased) {
    BitVector v(5);
    EXPECT_THROW(v.get(0), std::out_of_range);
    EXPECT_THROW(v.set(6), std::out_of_range);
    EXPECT_NO_THROW(v.set(5));
}

TEST(BitVector, StringRoundTrip) {
    const auto v = BitVector::from_string("0110100001");
    EXPECT_EQ(v.to_string(), "0110100001");
    EXPECT_EQ(v.size(), 10u);
    EXPECT_EQ(v.weight(), 4u);
}

TEST(BitVector, ConcatSliceAndPuncture) {
    const auto a = BitVector::from_string("101");
    const auto b = BitVector::from_string("0011");
    const auto c = BitVector::concat(a, b);
    EXPECT_EQ(c.to_string(), "1010011");
    EXPECT_EQ(c.slice(4, 4), b);
    EXPECT_EQ(c.punctured().to_string(), "010011");
}

TEST(BitVector, SizeMismatchThrows) {
    BitVector a(3), b(4);
    EXPECT_THROW(a ^= b, std::invalid_argument);
    EXPECT_THROW(a.dot(b), std::invalid_argument);
}

TEST(BitVector, DotMatchesNaiveParity) {
    Gen gen(1);
    for (int t = 0; t < 200; ++t) {
        const std::size_t n = gen.uniform(1, 150);
        const auto a = gen.bits(n), b = gen.bits(n);
        bool p = false;
        for (std::size_t i = 1; i <= n; ++i) p ^= a.get(i) && b.get(i);
        EXPECT_EQ(a.dot(b), p);
    }
}

TEST(BitMatrix, MultiplyAndTranspose) {
    const auto a = BitMatrix::from_strings({"110", "011"});
    const auto b = BitMatrix::from_strings({"10", "01", "11"});
    EXPECT_EQ((a * b).to_string(), "11\n10\n");
    EXPECT_EQ(a.transpose().transpose(), a);
    EXPECT_EQ(a.left_multiply(BitVector::from_string("11")).to_string(), "101");
}

TEST(BitMatrix, KronOfIdentityAndTensorPower) {
    const auto t1 = tensor_power_uut(1);
    EXPECT_EQ(t1.to_string(), "11\n01\n");
    EXPECT_EQ(tensor_power_uut(2), t1.kron(t1));
    EXPECT_EQ(BitMatrix::identity(2).kron(BitMatrix::identity(3)), BitMatrix::identity(6));
}

TEST(BitMatrix, RankMatchesBruteForce) {
    Gen gen(2);
    for (int t = 0; t < 150; ++t) {
        const std::size_t rows = gen.uniform(1, 10), cols = gen.uniform(1, 40);
        const auto m = gen.matrix(rows, cols, gen.coin() ? 0.5 : 0.15);
        EXPECT_EQ(rank(m), testing::brute_rank(m)) << m.to_string();
    }
}

TEST(BitMatrix, RankPlusKernelDimensionIsRowCount) {
    Gen gen(3);
    for (int t = 0; t < 100; ++t) {
        const std::size_t rows = gen.uniform(1, 64), cols = gen.uniform(1, 64);
        const auto m = gen.matrix(rows, cols, gen.coin() ? 0.5 : 0.1);
        const auto k = kernel(m);
        EXPECT_EQ(rank(m) + k.n_rows(), rows);
        for (const auto& x : k.rows()) EXPECT_TRUE(m.left_multiply(x).none());
        EXPECT_EQ(rank(k), k.n_rows());
    }
}

TEST(BitMatrix, RowReduceIsEchelonWithSameRowSpace) {
    Gen gen(4);
    for (int t = 0; t < 60; ++t) {
        const auto m = gen.matrix(gen.uniform(1, 12), gen.uniform(1, 30));
        std::vector<std::size_t> piv;
        const auto r = row_reduce(m, &piv);
        ASSERT_EQ(r.n_rows(), piv.size());
        for (std::size_t i = 1; i <= r.n_rows(); ++i) {
            EXPECT_EQ(r.row(i).first_one(), piv[i - 1]);
            if (i > 1) EXPECT_LT(piv[i - 2], piv[i - 1]);
            for (std::size_t k = 1; k <= r.n_rows(); ++k)
                if (k != i) EXPECT_FALSE(r.get(k, piv[i - 1]));
        }
        EXPECT_EQ(testing::span_set(r.rows(), m.n_cols()), testing::span_set(m.rows(), m.n_cols()));
    }
}

TEST(BitMatrix, TensorPowerIsInvertible) {
    for (unsigned m = 0; m <= 10; ++m) EXPECT_EQ(rank(tensor_power_uut(m)), std::size_t{1} << m) << "m=" << m;
}

TEST(BitMatrix, SolveMembershipRoundTrip) {
    Gen gen(5);
    for (int t = 0; t < 100; ++t) {
        const auto m = gen.matrix(gen.uniform(1, 20), gen.uniform(1, 50));
        const auto x = gen.bits(m.n_rows());
        const auto v = m.left_multiply(x);
        const auto sol = solve_membership(v, m);
        ASSERT_TRUE(sol.has_value());
        EXPECT_EQ(m.left_multiply(*sol), v);
        EXPECT_TRUE(in_row_space(v, m));
    }
}

TEST(BitMatrix, MembershipRejectsVectorsOutsideSpan) {
    Gen gen(6);
    for (int t = 0; t < 100; ++t) {
        const auto m = gen.matrix(gen.uniform(1, 6), gen.uniform(4, 12));
        const auto span = testing::span_set(m.rows(), m.n_cols());
        const auto v = gen.bits(m.n_cols());
        EXPECT_EQ(in_row_space(v, m), span.count(v) == 1);
        EXPECT_EQ(solve_membership(v, m).has_value(), span.count(v) == 1);
    }
}

TEST(BitMatrix, EnumerateRowSpaceMatchesSpan) {
    Gen gen(7);
    const auto m = gen.matrix(5, 9);
    const auto all = enumerate_row_space(m);
    EXPECT_EQ(all.size(), 32u);
    std::unordered_set<BitVector, BitVectorHash> set(all.begin(), all.end());
    EXPECT_EQ(set, testing::span_set(m.rows(), 9));
}

TEST(BitMatrix, ParseRoundTrip) {
    Gen gen(8);
    const auto m = gen.matrix(7, 13);
    EXPECT_EQ(BitMatrix::parse(m.to_string()), m);
}

}  // namespace
}  // namespace qrm
