#include <gtest/gtest.h>

#include <random>

#include "relucert/exact.hpp"

using namespace relucert;

namespace {

Matrix mat(std::initializer_list<std::initializer_list<long>> rows)
{
    std::vector<Vector> out;
    for (auto r : rows) {
        Vector v;
        for (long x : r) v.emplace_back(x);
        out.push_back(v);
    }
    return Matrix::from_rows(out);
}

Vector vec(std::initializer_list<long> xs)
{
    Vector v;
    for (long x : xs) v.emplace_back(x);
    return v;
}

} // namespace

TEST(Exact, RankOfDependentRows)
{
    EXPECT_EQ(rank(mat({{1, 2}, {2, 4}})), 1u);
    EXPECT_EQ(rank(mat({{1, 0}, {0, 1}, {1, 1}})), 2u);
    EXPECT_EQ(rank(Matrix(0, 3)), 0u);
    EXPECT_EQ(rank(mat({{0, 0, 0}})), 0u);
}

TEST(Exact, KernelOfSingleRow)
{
    auto k = kernel_basis(mat({{1, 1}}));
    ASSERT_EQ(k.size(), 1u);
    EXPECT_EQ(dot(k[0], vec({1, 1})), 0);
    EXPECT_FALSE(is_zero(k[0]));
}

TEST(Exact, InSpan)
{
    std::vector<Vector> rows{vec({1, 0, 0}), vec({0, 1, 0})};
    EXPECT_TRUE(in_span(vec({3, -2, 0}), rows));
    EXPECT_FALSE(in_span(vec({0, 0, 1}), rows));
    EXPECT_TRUE(in_span(vec({0, 0, 0}), {}));
}

TEST(Exact, RationalArithmeticIsExact)
{
    Rational third(1, 3);
    EXPECT_EQ(third + third + third, 1);
    auto q = parse_rational("-7/21");
    ASSERT_TRUE(q);
    EXPECT_EQ(*q, Rational(-1, 3));
    EXPECT_EQ(*parse_rational("0.25"), Rational(1, 4));
    EXPECT_FALSE(parse_rational("1e3"));
    EXPECT_FALSE(parse_rational("1/0"));
    EXPECT_FALSE(parse_rational("abc"));
}

TEST(Exact, RaggedRowsRejected)
{
    try {
        Matrix::from_rows({vec({1, 2}), vec({3})});
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.code(), ErrorCode::DimensionMismatch);
    }
}

TEST(Exact, PrimitiveKeepsDirection)
{
    Vector v{Rational(2, 3), Rational(-4, 9), Rational(0)};
    auto p = primitive(v);
    EXPECT_EQ(p, vec({3, -2, 0}));
}

// Property: rank + nullity = columns, and kernel vectors are annihilated.
TEST(Exact, RankNullityOnRandomMatrices)
{
    std::mt19937 rng(11);
    std::uniform_int_distribution<int> entry(-3, 3), size(1, 6);
    for (int trial = 0; trial < 200; ++trial) {
        std::size_t m = size(rng), n = size(rng);
        Matrix a(m, n);
        for (std::size_t i = 0; i < m; ++i)
            for (std::size_t j = 0; j < n; ++j) a(i, j) = entry(rng);
        if (trial % 3 == 0 && m > 1)
            for (std::size_t j = 0; j < n; ++j) a(m - 1, j) = a(0, j) * 2;
        auto k = kernel_basis(a);
        EXPECT_EQ(rank(a) + k.size(), n);
        for (const auto& v : k) EXPECT_TRUE(is_zero(multiply(a, v)));
        EXPECT_EQ(rank(a), rank(a.transpose()));
        EXPECT_EQ(rank(a), row_space_basis(a).size());
    }
}
