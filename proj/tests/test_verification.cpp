#include <gtest/gtest.h>

#include "relucert/random.hpp"

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

Polyhedron box(std::size_t d, const Rational& lo, const Rational& hi)
{
    Polyhedron p(d);
    for (std::size_t k = 0; k < d; ++k) {
        p.ge(unit_vector(d, k), Rational(-lo));
        p.ge(-unit_vector(d, k), hi);
    }
    return p;
}

} // namespace

TEST(Verification, MaxOfRelu)
{
    TwoLayerScalarNet net(mat({{1}}), vec({1}));
    auto m = exact_max(net, box(1, -1, 1));
    EXPECT_FALSE(m.unbounded);
    EXPECT_EQ(m.value, 1);
    EXPECT_EQ(m.point, vec({1}));
}

TEST(Verification, MaxUnbounded)
{
    TwoLayerScalarNet id(mat({{1}, {-1}}), vec({1, -1}));
    Polyhedron half(1);
    half.ge(vec({1}), Rational(0));
    auto m = exact_max(id, half);
    EXPECT_TRUE(m.unbounded);
    auto v = verify(id, half, Rational(100));
    EXPECT_FALSE(v.verified);
    auto& viol = std::get<Violation>(v.certificate);
    EXPECT_GT(id.evaluate(viol.point), 100);
    EXPECT_TRUE(half.contains(viol.point));
}

TEST(Verification, MaxOfTriangleCutNetwork)
{
    WeightedGraph k3{3, {{0, 1, Integer(1)}, {0, 2, Integer(1)}, {1, 2, Integer(1)}}};
    auto m = exact_max(positive_cut_to_network(k3), box(3, 0, 1));
    EXPECT_EQ(m.value, 2);
}

TEST(Verification, VerifyExamples)
{
    TwoLayerScalarNet net(mat({{1}}), vec({1}));
    EXPECT_TRUE(verify(net, box(1, -1, 1), Rational(1)).verified);
    auto v = verify(net, box(1, -1, 1), Rational(1, 2));
    EXPECT_FALSE(v.verified);
    EXPECT_EQ(std::get<Violation>(v.certificate).point, vec({1}));
    TwoLayerScalarNet zero(mat({{1, 1}}), vec({0}));
    EXPECT_TRUE(verify(zero, box(2, -3, 3), Rational(0)).verified);
}

TEST(Verification, EmptyDomainRejected)
{
    TwoLayerScalarNet net(mat({{1}}), vec({1}));
    try {
        exact_max(net, box(1, 1, -1));
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.code(), ErrorCode::EmptyDomain);
    }
}

TEST(Verification, BuildFromIdentity)
{
    TwoLayerScalarNet pos(mat({{1}, {-1}}), vec({1, -1}));
    BallInSubspace ball{vec({0}), {vec({1})}, Rational(1)};
    auto g = build_verification_instance(pos, ball, Rational(0));
    EXPECT_EQ(g.evaluate(vec({1})), 1);
    EXPECT_FALSE(verify(g, box(1, -1, 1), Rational(0)).verified);
    EXPECT_TRUE(positivity(pos).answer);
}

TEST(Verification, BuildFromNegativeAbs)
{
    TwoLayerScalarNet pos(mat({{1}, {-1}}), vec({-1, -1}));
    BallInSubspace ball{vec({3, 1}), {vec({1, 2})}, Rational(2)};
    auto g = build_verification_instance(pos, ball, Rational(5));
    auto v = verify(g, inscribed_box(ball), Rational(5));
    EXPECT_TRUE(v.verified);
    EXPECT_EQ(std::get<MaxCertified>(v.certificate).value, 5);
}

TEST(Verification, TriangleEmbeddedInFiveDimensions)
{
    WeightedGraph k3{3, {{0, 1, Integer(-1)}, {0, 2, Integer(-1)}, {1, 2, Integer(-1)}}};
    auto pos = positive_cut_to_network(k3);
    gen::Rng rng(3);
    auto ball = gen::random_ball(rng, 3, 5);
    auto g = build_verification_instance(pos, ball, Rational(0));
    EXPECT_FALSE(positivity(pos).answer);
    EXPECT_TRUE(verify(g, inscribed_box(ball), Rational(0)).verified);
}

TEST(Verification, DependentBasisRejected)
{
    TwoLayerScalarNet pos(mat({{1, 0}}), vec({1}));
    BallInSubspace ball{vec({0, 0, 0}), {vec({1, 1, 0}), vec({2, 2, 0})}, Rational(1)};
    try {
        build_verification_instance(pos, ball, Rational(0));
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.code(), ErrorCode::DependentBasis);
    }
}

TEST(Verification, InscribedBoxInsideBall)
{
    gen::Rng rng(14);
    for (int trial = 0; trial < 20; ++trial) {
        std::size_t d = 2 + trial % 4, k = 1 + trial % std::min<std::size_t>(d, 3);
        auto ball = gen::random_ball(rng, k, d);
        auto b = inscribed_box(ball);
        EXPECT_TRUE(b.contains(ball.center));
        // Maximize each coordinate direction; corners stay within radius.
        for (std::size_t c = 0; c < d; ++c) {
            auto r = maximize(unit_vector(d, c), b);
            ASSERT_TRUE(std::holds_alternative<Optimal>(r));
            Vector diff = std::get<Optimal>(r).point - ball.center;
            EXPECT_LE(dot(diff, diff), ball.radius * ball.radius);
        }
    }
}

TEST(Verification, EquivalenceOnRandomTriples)
{
    gen::Rng rng(1);
    for (int trial = 0; trial < 40; ++trial) {
        std::size_t k = 1 + trial % 3, d = k + trial % (6 - k);
        auto pos = gen::random_scalar_net(rng, 1 + trial % 4, k);
        auto ball = gen::random_ball(rng, k, d);
        Rational t = gen::small_rational(rng);
        auto g = build_verification_instance(pos, ball, t);
        EXPECT_EQ(positivity(pos).answer, !verify(g, inscribed_box(ball), t).verified) << "trial " << trial;
    }
}

TEST(Verification, GridLowerBound)
{
    gen::Rng rng(19);
    for (int trial = 0; trial < 12; ++trial) {
        std::size_t d = 1 + trial % 2;
        auto net = gen::random_scalar_net(rng, 3, d, true);
        auto X = box(d, -1, 1);
        auto m = exact_max(net, X);
        ASSERT_FALSE(m.unbounded);
        EXPECT_TRUE(X.contains(m.point));
        EXPECT_EQ(net.evaluate(m.point), m.value);
        std::vector<Vector> grid{{}};
        for (std::size_t c = 0; c < d; ++c) {
            std::vector<Vector> next;
            for (const auto& g : grid)
                for (int s = -8; s <= 8; ++s) {
                    auto h = g;
                    Rational q(s, 8);
                    q.canonicalize();
                    h.push_back(q);
                    next.push_back(h);
                }
            grid = next;
        }
        for (const auto& x : grid) EXPECT_LE(net.evaluate(x), m.value);
    }
}

TEST(Verification, MaxMonotoneUnderShrinking)
{
    gen::Rng rng(23);
    for (int trial = 0; trial < 20; ++trial) {
        std::size_t d = 1 + trial % 3;
        auto net = gen::random_scalar_net(rng, 3, d, true);
        auto X = box(d, -2, 2);
        auto Y = X;
        Y.ge(gen::random_vector(rng, d), Rational(1));
        if (!is_feasible(Y)) continue;
        EXPECT_LE(exact_max(net, Y).value, exact_max(net, X).value);
    }
}

TEST(Verification, ComponentwiseLoop)
{
    Matrix w1 = mat({{1}, {-1}});
    Matrix w2 = mat({{1, 0}, {0, 1}});
    auto res = verify_componentwise(w1, vec({0, 0}), w2, vec({0, 0}), box(1, -1, 2), vec({2, 0}));
    ASSERT_EQ(res.size(), 2u);
    EXPECT_TRUE(res[0].verified);
    EXPECT_FALSE(res[1].verified);
}
