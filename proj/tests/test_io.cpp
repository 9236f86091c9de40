#include <gtest/gtest.h>

#include "relucert/io.hpp"
#include "relucert/random.hpp"

using namespace relucert;

namespace {

const char* counterexample = R"(relu-cert v1
kind: layer
rows: 2
cols: 1
1
-1
bias: -1 1
)";

template <class F>
void expect_parse_error(const std::string& text, std::size_t line, F&& extra = [](const ParseError&) {})
{
    try {
        parse_instance(text);
        FAIL() << "parsed:\n" << text;
    } catch (const ParseError& e) {
        EXPECT_EQ(e.line(), line) << e.what();
        extra(e);
    }
}

void expect_parse_error(const std::string& text, std::size_t line)
{
    expect_parse_error(text, line, [](const ParseError&) {});
}

InstanceFile both_ways(const InstanceFile& f)
{
    auto a = parse_instance(emit_text(f));
    auto b = parse_instance(emit_object(f));
    EXPECT_EQ(a, f);
    EXPECT_EQ(b, f);
    return a;
}

} // namespace

TEST(Io, CounterexampleLayer)
{
    auto f = parse_instance(std::string(counterexample));
    ASSERT_EQ(f.kind(), "layer");
    const auto& l = std::get<ReluLayer>(f.payload);
    EXPECT_EQ(l.weights, Matrix::from_rows({{Rational(1)}, {Rational(-1)}}));
    EXPECT_EQ(l.bias, (Vector{Rational(-1), Rational(1)}));
}

TEST(Io, DecimalAndFraction)
{
    auto f = parse_instance(std::string("relu-cert v1\nkind: layer\nrows: 1\ncols: 2\n0.5 6/4\nbias: -0.25\n"));
    const auto& l = std::get<ReluLayer>(f.payload);
    EXPECT_EQ(l.weights(0, 0), Rational(1, 2));
    EXPECT_EQ(l.weights(0, 1), Rational(3, 2));
    EXPECT_EQ(l.bias[0], Rational(-1, 4));
}

TEST(Io, RaggedRowsRejected)
{
    expect_parse_error("relu-cert v1\nkind: layer\nrows: 2\ncols: 2\n1 2\n3\nbias: 0 0\n", 6);
    expect_parse_error("relu-cert v1\nkind: layer\nrows: 2\ncols: 2\n1 2\n3 4 5\nbias: 0 0\n", 6,
                       [](const ParseError& e) { EXPECT_EQ(e.column(), 5u); });
}

TEST(Io, MalformedInputs)
{
    expect_parse_error("relu-cert v2\n", 1);
    expect_parse_error("relu-cert v1\nkind: tensor\n", 2);
    expect_parse_error("relu-cert v1\nkind: layer\nrows: 1\ncols: 1\n1e3\nbias: 0\n", 5);
    expect_parse_error("relu-cert v1\nkind: layer\nrows: 1\ncols: 1\n1/0\nbias: 0\n", 5);
    expect_parse_error("relu-cert v1\nkind: layer\nrows: 1\ncols: 1\n1\nbias: 0 1\n", 6);
    expect_parse_error("relu-cert v1\nkind: layer\nrows: 1\ncols: 1\n1\n", 6);
    expect_parse_error("relu-cert v1\nkind: layer\nrows: 1\ncols: 1\n1\nbias: 0\nextra\n", 7);
    expect_parse_error("relu-cert v1\nkind: graph\n3\n1 2 1\n2 4 1\n", 5);
    expect_parse_error("relu-cert v1\nkind: digraph\n3\n1 2\n1 2\n", 5);
    expect_parse_error("relu-cert v1\nkind: hypergraph\n3\n1 2 2\n", 4);
    expect_parse_error("{\"format\": \"relu-cert\", \"version\": 1,\n \"kind\": \"layer\" \"x\"}", 2);
    expect_parse_error(R"({"format":"relu-cert","version":1,"kind":"layer","weights":{"rows":1,"cols":1,"data":[["1e3"]]},"bias":["0"]})", 1);
}

TEST(Io, DimensionMismatchOnLoad)
{
    std::string text = "relu-cert v1\nkind: zonotope-pair\nsection: inner\nrows: 1\ncols: 2\n1 1\nsection: outer\nrows: 1\ncols: 1\n1\n";
    try {
        parse_instance(text);
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.code(), ErrorCode::DimensionMismatch);
    }
    std::string net = "relu-cert v1\nkind: network\nlayers: 2\nrows: 2\ncols: 1\n1\n2\nbias: 0 0\nrows: 1\ncols: 3\n1 1 1\nbias: 0\n";
    try {
        parse_instance(net);
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.code(), ErrorCode::DimensionMismatch);
    }
}

TEST(Io, CommentsAndWhitespace)
{
    auto f = parse_instance(std::string("# a layer\nrelu-cert v1\n\n  kind:   layer  \nrows: 2 # two\ncols: 1\n 1\n\t-1\nbias: -1 1\n"));
    EXPECT_EQ(f, parse_instance(std::string(counterexample)));
}

TEST(Io, TextRoundTripIsCanonical)
{
    std::string messy = "relu-cert v1\nkind: layer\nrows: 1\ncols: 2\n  2/4   -0.50\nbias: 3/1\n";
    std::string canonical = "relu-cert v1\nkind: layer\nrows: 1\ncols: 2\n1/2 -1/2\nbias: 3\n";
    EXPECT_EQ(emit_text(parse_instance(messy)), canonical);
    EXPECT_EQ(emit_text(parse_instance(canonical)), canonical);
}

TEST(Io, RoundTripEveryKind)
{
    gen::Rng rng(11);
    for (int rep = 0; rep < 20; ++rep) {
        both_ways({1, gen::random_layer(rng, 3, 2)});
        both_ways({1, gen::random_scalar_net(rng, 4, 3, true).to_network()});
        both_ways({1, ZonotopePair{gen::random_zonotope(rng, 3, 2), gen::random_zonotope(rng, 4, 2)}});
        both_ways({1, gen::random_graph(rng, 5)});
        both_ways({1, gen::random_digraph(rng, 5)});
        Polyhedron box(2);
        box.ge(gen::random_vector(rng, 2), gen::small_rational(rng));
        box.eq(gen::random_vector(rng, 2), gen::small_rational(rng));
        both_ways({1, VerificationInstance{gen::random_scalar_net(rng, 3, 2, true).to_network(), box, gen::small_rational(rng)}});
    }
    both_ways({1, Hypergraph3{5, {{0, 1, 2}, {2, 3, 4}}}});
    both_ways({1, WeightedGraph{4, {}}});
}

TEST(Io, ParsersAgree)
{
    gen::Rng rng(5);
    for (int rep = 0; rep < 10; ++rep) {
        InstanceFile f{1, gen::random_scalar_net(rng, 3, 2, true).to_network()};
        EXPECT_EQ(parse_text(emit_text(f)), parse_object(emit_object(f)));
    }
}

TEST(Io, GraphNodesAreOneBased)
{
    auto f = parse_instance(std::string("relu-cert v1\nkind: graph\n3\n1 2 5\n2 3 -4\n"));
    const auto& g = std::get<WeightedGraph>(f.payload);
    ASSERT_EQ(g.edges.size(), 2u);
    EXPECT_EQ(g.edges[0].u, 0u);
    EXPECT_EQ(g.edges[1].v, 2u);
    EXPECT_EQ(g.edges[1].weight, -4);
    expect_parse_error("relu-cert v1\nkind: graph\n3\n0 2 5\n", 4);
}

TEST(Io, ReportFormats)
{
    Report r{"injectivity", false, {}};
    r.add_point("witness", Vector{Rational(1, 3), Rational(-2)});
    std::string text = emit_report_text(r);
    EXPECT_NE(text.find("answer: no\n"), std::string::npos);
    EXPECT_NE(text.find("witness: 1/3 -2\n"), std::string::npos);
    EXPECT_NE(text.find("witness.approx: 0.333333"), std::string::npos);
    auto j = nlohmann::json::parse(emit_report_object(r));
    EXPECT_EQ(j["answer"], false);
    EXPECT_EQ(j["fields"]["witness"], "1/3 -2");
}
