#include <gtest/gtest.h>

#include <filesystem>

#include "relucert/cli.hpp"

using namespace relucert;
namespace fs = std::filesystem;

namespace {

struct Run {
    int code;
    std::string out, err;
};

Run run(std::string command, std::string input = "", std::function<void(cli::Options&)> tweak = {})
{
    cli::Options o;
    o.command = std::move(command);
    o.input = input.empty() ? input : (input.front() == '/' ? input : std::string(RELUCERT_SAMPLES) + "/" + input);
    if (tweak) tweak(o);
    std::ostringstream out, err;
    int code = cli::run(o, out, err);
    return {code, out.str(), err.str()};
}

std::string field(const std::string& report, const std::string& key)
{
    std::istringstream in(report);
    std::string line;
    while (std::getline(in, line))
        if (line.rfind(key + ": ", 0) == 0) return line.substr(key.size() + 2);
    return "<missing>";
}

fs::path temp_file(const std::string& name)
{
    auto dir = fs::temp_directory_path() / "relucert-test";
    fs::create_directories(dir);
    return dir / name;
}

} // namespace

TEST(Cli, CounterexampleLayers)
{
    auto a = run("injectivity", "counterexample.layer");
    EXPECT_EQ(a.code, 0) << a.err;
    EXPECT_EQ(field(a.out, "answer"), "yes");

    auto b = run("injectivity", "zerorow.layer");
    EXPECT_EQ(b.code, 1) << b.err;
    EXPECT_EQ(field(b.out, "answer"), "no");
    EXPECT_NE(field(b.out, "witness"), "<missing>");
    EXPECT_NE(field(b.out, "witness.approx"), "<missing>");
    EXPECT_NE(field(b.out, "collision.first"), "<missing>");

    EXPECT_EQ(run("injectivity-oracle", "counterexample.layer").code, 0);
    EXPECT_EQ(run("injectivity-oracle", "zerorow.layer").code, 1);
}

TEST(Cli, ReportHeaderAndStats)
{
    auto r = run("injectivity", "counterexample.layer");
    EXPECT_EQ(r.out.rfind("relu-cert-report v1\n", 0), 0u);
    EXPECT_EQ(field(r.out, "problem"), "injectivity");
    EXPECT_NE(field(r.out, "stats.seconds"), "<missing>");
    EXPECT_NE(field(r.out, "stats.search_nodes"), "<missing>");
}

TEST(Cli, ObjectReports)
{
    auto r = run("injectivity", "zerorow.layer", [](cli::Options& o) { o.format = "object"; });
    EXPECT_EQ(r.code, 1);
    auto j = nlohmann::json::parse(r.out);
    EXPECT_EQ(j["answer"], false);
    EXPECT_EQ(j["problem"], "injectivity");
    EXPECT_TRUE(j["fields"].contains("witness"));
}

TEST(Cli, RangeCommands)
{
    EXPECT_EQ(run("surjectivity", "identity.net").code, 0);
    EXPECT_EQ(run("surjectivity", "abs.net").code, 1);
    EXPECT_EQ(run("positivity", "identity.net").code, 0);
    EXPECT_EQ(run("zero-map", "identity.net").code, 1);
    // positivity and the zero-map test are defined on bias-free networks
    EXPECT_EQ(run("positivity", "abs.net").code, 2);
}

TEST(Cli, ZonotopeAndVerification)
{
    EXPECT_EQ(run("zonotope-contain", "squares.zono").code, 0);
    auto seg = run("zonotope-contain", "segment.zono");
    EXPECT_EQ(seg.code, 1);
    EXPECT_EQ(field(seg.out, "support.inner"), "2");
    EXPECT_EQ(field(seg.out, "support.outer"), "1");

    EXPECT_EQ(run("verify", "relu-box.verify").code, 0);
    auto tight = run("verify", "relu-box.verify", [](cli::Options& o) { o.threshold = "3/2"; });
    EXPECT_EQ(tight.code, 1);
    EXPECT_EQ(field(tight.out, "violation.value"), "2");
    auto m = run("max", "relu-box.verify");
    EXPECT_EQ(m.code, 0);
    EXPECT_EQ(field(m.out, "max"), "2");
}

TEST(Cli, Oracles)
{
    EXPECT_EQ(run("oracle:positive-cut", "k3.graph").code, 1);
    auto p = run("oracle:positive-cut", "path.graph");
    EXPECT_EQ(p.code, 0);
    EXPECT_EQ(field(p.out, "weight"), "2");
    EXPECT_EQ(run("oracle:acyclic-2-disconnection", "cycle.digraph").code, 1);
    EXPECT_EQ(run("oracle:acyclic-permutation", "cycle.digraph").code, 1);
    EXPECT_EQ(run("oracle:acyclic-2-disconnection", "path.digraph").code, 0);
    EXPECT_EQ(run("oracle:coloring", "single.hypergraph").code, 0);
    EXPECT_EQ(run("oracle:positive-cut", "path.graph", [](cli::Options& o) { o.cap = 3; }).code, 2);
}

TEST(Cli, Errors)
{
    EXPECT_EQ(run("frobnicate", "k3.graph").code, 2);
    EXPECT_EQ(run("injectivity", "no-such-file.layer").code, 2);
    EXPECT_EQ(run("injectivity", "k3.graph").code, 2);
    EXPECT_EQ(run("injectivity").code, 2);
    EXPECT_EQ(run("reduce:densest-cut", "path.graph").code, 2);
    auto bad = temp_file("ragged.layer");
    std::ofstream(bad) << "relu-cert v1\nkind: layer\nrows: 2\ncols: 2\n1 2\n3\nbias: 0 0\n";
    auto r = run("injectivity", bad.string());
    EXPECT_EQ(r.code, 2);
    EXPECT_NE(r.err.find("line 6"), std::string::npos) << r.err;
}

TEST(Cli, ReduceThenDecideMatchesOracle)
{
    auto net = temp_file("k3.net");
    auto r = run("reduce:positive-cut", "k3.graph", [&](cli::Options& o) { o.output = net.string(); });
    EXPECT_EQ(r.code, 0) << r.err;
    EXPECT_EQ(run("positivity", net.string()).code, run("oracle:positive-cut", "k3.graph").code);

    gen::Rng rng(8);
    for (int trial = 0; trial < 15; ++trial) {
        auto g = gen::random_graph(rng, 2 + trial % 4);
        if (g.edges.empty()) continue;
        auto gf = temp_file("g.graph"), nf = temp_file("g.net");
        std::ofstream(gf) << emit_text({1, g});
        ASSERT_EQ(run("reduce:positive-cut", gf.string(), [&](cli::Options& o) { o.output = nf.string(); }).code, 0);
        EXPECT_EQ(run("positivity", nf.string()).code, run("oracle:positive-cut", gf.string()).code) << "trial " << trial;
    }
}

TEST(Cli, DigraphChain)
{
    auto layer = temp_file("cycle.layer");
    ASSERT_EQ(run("reduce:acyclic", "cycle.digraph", [&](cli::Options& o) { o.output = layer.string(); }).code, 0);
    // injective iff no acyclic 2-disconnection: exit codes are complementary
    EXPECT_EQ(run("injectivity", layer.string()).code, 0);
    EXPECT_EQ(run("oracle:acyclic-2-disconnection", "cycle.digraph").code, 1);
}

TEST(Cli, ReduceToStdoutParses)
{
    for (const char* fmt : {"text", "object"}) {
        auto r = run("reduce:hypergraph", "single.hypergraph", [&](cli::Options& o) { o.format = fmt; });
        ASSERT_EQ(r.code, 0) << r.err;
        auto f = parse_instance(r.out);
        EXPECT_EQ(f.kind(), "digraph");
        EXPECT_EQ(std::get<Digraph>(f.payload).nodes, 26u);
    }
}

TEST(Cli, ReduceVerificationAgreesWithPositivity)
{
    for (const char* name : {"identity.net"}) {
        for (std::uint64_t seed = 1; seed <= 4; ++seed) {
            auto vf = temp_file("embedded.verify");
            auto r = run("reduce:verification", name, [&](cli::Options& o) {
                o.output = vf.string();
                o.dim = 3;
                o.seed = seed;
                o.threshold = "1/3";
            });
            ASSERT_EQ(r.code, 0) << r.err;
            // positive somewhere <=> the bound fails
            EXPECT_EQ(run("verify", vf.string()).code, 1);
        }
    }
    auto k3 = temp_file("k3b.net"), vf = temp_file("k3.verify");
    ASSERT_EQ(run("reduce:positive-cut", "k3.graph", [&](cli::Options& o) { o.output = k3.string(); }).code, 0);
    ASSERT_EQ(run("reduce:verification", k3.string(), [&](cli::Options& o) {
                  o.output = vf.string();
                  o.dim = 5;
              }).code,
              0);
    EXPECT_EQ(run("verify", vf.string()).code, 0);
}

TEST(Cli, Selftest)
{
    auto r = run("selftest");
    EXPECT_EQ(r.code, 0) << r.out;
    EXPECT_NE(field(r.out, "suite.injectivity"), "<missing>");
}
