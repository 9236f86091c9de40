#include <gtest/gtest.h>

#include "relucert/injectivity.hpp"
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

void expect_sound(const ReluLayer& layer, const InjectivityVerdict& v)
{
    if (v.injective) return;
    ASSERT_TRUE(v.witness);
    auto check = verify_noninjectivity_witness(layer, v.witness->point);
    EXPECT_TRUE(check.valid);
    ASSERT_TRUE(v.collision);
    EXPECT_NE(v.collision->first, v.collision->second);
    EXPECT_EQ(layer.evaluate(v.collision->first), layer.evaluate(v.collision->second));
}

} // namespace

TEST(Injectivity, ShiftedPairIsInjective)
{
    ReluLayer layer(mat({{1}, {-1}}), vec({-1, 1}));
    EXPECT_TRUE(injective_oracle(layer).injective);
    EXPECT_TRUE(layer_injectivity(layer).injective);
}

TEST(Injectivity, ZeroRowLayerIsNotInjective)
{
    ReluLayer layer = ReluLayer::bias_free(mat({{0}, {-1}}));
    auto a = injective_oracle(layer);
    auto b = layer_injectivity(layer);
    EXPECT_FALSE(a.injective);
    EXPECT_FALSE(b.injective);
    expect_sound(layer, a);
    expect_sound(layer, b);
    EXPECT_GT(a.witness->point[0], 0);
    EXPECT_EQ(a.witness->active_rank, 0u);
}

TEST(Injectivity, IdentityIsNotInjective)
{
    ReluLayer layer = ReluLayer::bias_free(Matrix::identity(2));
    auto v = injective_oracle(layer);
    EXPECT_FALSE(v.injective);
    EXPECT_TRUE(v.witness->active.empty());
    EXPECT_LT(v.witness->point[0], 0);
    EXPECT_LT(v.witness->point[1], 0);
    expect_sound(layer, layer_injectivity(layer));
}

TEST(Injectivity, CentralPairIsInjective)
{
    EXPECT_TRUE(layer_injectivity(ReluLayer::bias_free(mat({{1}, {-1}}))).injective);
}

TEST(Injectivity, ThreeLinesNotInjective)
{
    ReluLayer layer = ReluLayer::bias_free(mat({{1, 0}, {0, 1}, {-1, -1}}));
    auto b = layer_injectivity(layer);
    EXPECT_FALSE(b.injective);
    expect_sound(layer, b);
    EXPECT_FALSE(injective_oracle(layer).injective);
    EXPECT_LT(b.witness->active_rank, 2u);
}

TEST(Injectivity, PlusMinusCoordinatesInjective)
{
    ReluLayer layer = ReluLayer::bias_free(mat({{1, 0}, {0, 1}, {-1, 0}, {0, -1}}));
    EXPECT_TRUE(layer_injectivity(layer).injective);
    EXPECT_TRUE(injective_oracle(layer).injective);
}

TEST(Injectivity, FindCellBaseCases)
{
    ReluLayer layer = ReluLayer::bias_free(mat({{1}}));
    SearchStats stats;
    auto x = find_cell(layer, {}, {0}, stats);
    ASSERT_TRUE(x);
    EXPECT_LT((*x)[0], 0);
    SearchStats s2;
    EXPECT_FALSE(find_cell(layer, {0}, {}, s2));
}

TEST(Injectivity, WitnessCheckExamples)
{
    auto id = verify_noninjectivity_witness(ReluLayer::bias_free(Matrix::identity(2)), vec({-1, -1}));
    EXPECT_TRUE(id.valid);
    ASSERT_TRUE(id.collision);
    EXPECT_EQ(id.collision->first, vec({-1, -1}));
    EXPECT_EQ(id.collision->second, vec({-2, -1}));

    EXPECT_FALSE(verify_noninjectivity_witness(ReluLayer::bias_free(mat({{1}, {-1}})), vec({1})).valid);

    ReluLayer three = ReluLayer::bias_free(mat({{1, 0}, {0, 1}, {-1, -1}}));
    auto c = verify_noninjectivity_witness(three, vec({2, -1}));
    EXPECT_TRUE(c.valid);
    EXPECT_EQ(c.active, (std::vector<std::size_t>{0}));
    ASSERT_TRUE(c.collision);
    EXPECT_EQ(c.collision->second[0], 2); // moves inside ker(e1)
}

TEST(Injectivity, DeepCollisionOnZeroRowLayer)
{
    auto net = LayeredNetwork::from_layer(ReluLayer::bias_free(mat({{0}, {-1}})));
    SignVector s{Sign::Pos, Sign::Neg}; // zero row counts as active
    auto pair = deep_collision_check(net, {s}, {s});
    ASSERT_TRUE(pair);
    EXPECT_NE(pair->first, pair->second);
    EXPECT_EQ(net.evaluate(pair->first), net.evaluate(pair->second));
}

TEST(Injectivity, DeepIdentityNetworkInjective)
{
    // x -> [x]_+ - [-x]_+ = x
    LayeredNetwork net({AffineLayer{mat({{1}, {-1}}), vec({0, 0})}, AffineLayer{mat({{1, -1}}), vec({0})}});
    auto v = deep_injectivity_bruteforce(net);
    EXPECT_TRUE(v.injective);
    for (const auto& a : enumerate_regions(net))
        for (const auto& b : enumerate_regions(net)) EXPECT_FALSE(deep_collision_check(net, a.signs, b.signs));
}

TEST(Injectivity, DeepShiftedReluNotInjective)
{
    auto net = LayeredNetwork::from_layer(ReluLayer(mat({{1}}), vec({-1})));
    auto pair = deep_collision_check(net, {{Sign::Pos}}, {{Sign::Neg}});
    ASSERT_TRUE(pair);
    EXPECT_EQ(net.evaluate(pair->first), net.evaluate(pair->second));
    EXPECT_NE(pair->first, pair->second);
    auto v = deep_injectivity_bruteforce(net);
    EXPECT_FALSE(v.injective);
    ASSERT_TRUE(v.collision);
    EXPECT_EQ(net.evaluate(v.collision->first), net.evaluate(v.collision->second));
}

TEST(Injectivity, DeepCapEnforced)
{
    auto net = LayeredNetwork::from_layer(ReluLayer::bias_free(Matrix::identity(3)));
    try {
        deep_injectivity_bruteforce(net, 2);
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.code(), ErrorCode::CapExceeded);
    }
}

TEST(Injectivity, RandomAgreementAndTreeBound)
{
    gen::Rng rng(2024);
    for (int trial = 0; trial < 200; ++trial) {
        std::size_t d = 1 + trial % 4, m = 1 + (trial * 7) % 10;
        auto layer = gen::random_layer(rng, m, d);
        auto fast = layer_injectivity(layer);
        auto slow = injective_oracle(layer);
        ASSERT_EQ(fast.injective, slow.injective) << "trial " << trial;
        EXPECT_LE(fast.examined, search_tree_bound(d));
        expect_sound(layer, fast);
        expect_sound(layer, slow);
    }
    EXPECT_EQ(lp_stats().helly_oversize, 0u);
    EXPECT_EQ(lp_stats().helly_verify_failures, 0u);
}

TEST(Injectivity, DeepBruteforceAgreesOnLayers)
{
    gen::Rng rng(99);
    for (int trial = 0; trial < 25; ++trial) {
        std::size_t d = 1 + trial % 2, m = 1 + trial % 4;
        auto layer = gen::random_layer(rng, m, d);
        EXPECT_EQ(deep_injectivity_bruteforce(LayeredNetwork::from_layer(layer)).injective, layer_injectivity(layer).injective)
            << "trial " << trial;
    }
}

// Injective verdicts survive random collision probes.
TEST(Injectivity, InjectiveVerdictsSurviveProbes)
{
    gen::Rng rng(31);
    int probed = 0;
    for (int trial = 0; trial < 200 && probed < 10; ++trial) {
        std::size_t d = 1 + trial % 3;
        auto layer = gen::random_layer(rng, 2 * d + 2, d);
        if (!layer_injectivity(layer).injective) continue;
        ++probed;
        for (int k = 0; k < 1000; ++k) {
            Vector x = gen::random_vector(rng, d, -6, 6, 4), y = gen::random_vector(rng, d, -6, 6, 4);
            if (x == y) continue;
            EXPECT_NE(layer.evaluate(x), layer.evaluate(y));
        }
    }
    EXPECT_GT(probed, 0);
}

TEST(Injectivity, AppendingSignedCoordinatesMakesInjective)
{
    gen::Rng rng(12);
    for (int trial = 0; trial < 40; ++trial) {
        std::size_t d = 1 + trial % 3, m = 1 + trial % 5;
        auto layer = gen::random_layer(rng, m, d);
        auto rows = layer.weights.row_list();
        Vector bias = layer.bias;
        for (std::size_t k = 0; k < d; ++k) {
            rows.push_back(unit_vector(d, k));
            bias.emplace_back(0);
        }
        for (std::size_t k = 0; k < d; ++k) {
            rows.push_back(-unit_vector(d, k));
            bias.emplace_back(0);
        }
        EXPECT_TRUE(layer_injectivity(ReluLayer(Matrix::from_rows(rows, d), bias)).injective);
    }
}
