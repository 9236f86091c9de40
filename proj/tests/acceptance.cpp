// Acceptance suite: one PASS/FAIL line per criterion. Sizes, seeds and
// time limits are fixed here; exit status is nonzero if any line fails.

#include <cstdio>
#include <iostream>

#include "relucert/checks.hpp"

using namespace relucert;
using Clock = std::chrono::steady_clock;

namespace {

// Time limits in seconds.
constexpr double limit_counterexample = 1;
constexpr double limit_layers = 120;
constexpr double limit_large_layer = 10;
constexpr double limit_graph_chain = 120;
constexpr double limit_hypergraph = 1800;

constexpr std::uint64_t seed = 20240601;

int failures = 0;
std::vector<SuiteResult> all_suites;

double since(Clock::time_point t) { return std::chrono::duration<double>(Clock::now() - t).count(); }

void report(int id, bool ok, const std::string& detail)
{
    std::printf("[%s] criterion %2d: %s\n", ok ? "PASS" : "FAIL", id, detail.c_str());
    std::fflush(stdout);
    if (!ok) ++failures;
}

std::string describe(const SuiteResult& r)
{
    all_suites.push_back(r);
    char buf[256];
    std::snprintf(buf, sizeof buf, "%s %zu cases, %zu mismatches, %zu bad certificates, %.1fs", r.name.c_str(), r.cases, r.mismatches,
                  r.bad_certificates, r.seconds);
    std::string s = buf;
    if (!r.first_failure.empty()) s += " (first: " + r.first_failure + ")";
    return s;
}

bool no_proof_violation(const SuiteResult& r) { return r.first_failure.find("ProofViolation") == std::string::npos; }

Matrix column(std::initializer_list<long> xs)
{
    std::vector<Vector> rows;
    for (long x : xs) rows.push_back({Rational(x)});
    return Matrix::from_rows(rows);
}

void counterexample()
{
    auto t = Clock::now();
    ReluLayer shifted(column({1, -1}), {Rational(-1), Rational(1)});
    ReluLayer zero_row(column({0, -1}), {Rational(0), Rational(0)});
    auto a1 = injective_oracle(shifted), a2 = layer_injectivity(shifted);
    auto b1 = injective_oracle(zero_row), b2 = layer_injectivity(zero_row);
    bool ok = a1.injective && a2.injective && !b1.injective && !b2.injective;
    for (const auto* v : {&b1, &b2})
        ok = ok && v->collision && recheck::collision(zero_row, *v->collision) && recheck::injectivity(zero_row, *v);
    double s = since(t);
    report(1, ok && s < limit_counterexample,
           std::string("[(x-1,-x+1)]_+ injective, [(0,-x)]_+ not, by both procedures with a collision pair; ") + std::to_string(s) + "s");
}

void layers()
{
    std::size_t over_bound = 0;
    auto r = injectivity_suite(seed, 500, &over_bound);
    report(2, r.ok() && r.cases >= 500 && r.seconds < limit_layers, describe(r));

    // Full search trees on wide layers; the cell oracle would scan on the order of m^3 cells.
    gen::Rng rng(seed + 100);
    bool ok = over_bound == 0;
    double worst = 0;
    std::size_t nodes = 0;
    for (int i = 0; i < 3; ++i) {
        auto layer = gen::random_layer(rng, 200, 3);
        auto t = Clock::now();
        auto v = layer_injectivity(layer);
        double s = since(t);
        worst = std::max(worst, s);
        nodes = std::max(nodes, v.examined);
        ok = ok && s < limit_large_layer && v.examined <= search_tree_bound(3) && recheck::injectivity(layer, v);
    }
    report(3, ok,
           "node count within sum_k (d+1)^k on all " + std::to_string(r.cases) + " layers (" + std::to_string(over_bound) +
               " over); d=3 m=200: max " + std::to_string(nodes) + " nodes of bound " + std::to_string(search_tree_bound(3)) +
               ", slowest " + std::to_string(worst) + "s");
}

void graph_chain()
{
    auto r = positive_cut_suite(seed + 5, 300, 6);
    report(5, r.ok() && r.seconds < limit_graph_chain, describe(r));
}

void digraph_chain()
{
    auto a = digraph_chain_suite(seed + 6, 300, 5);
    auto b = disconnection_oracles_suite(seed + 7, 300, 6);
    report(6, a.ok() && b.ok(), describe(a) + "; " + describe(b));
}

void hypergraphs()
{
    auto r = hypergraph_suite(4);
    // Fano plane: not 2-colorable, so its digraph has no acyclic 2-disconnection.
    auto t = Clock::now();
    Hypergraph3 fano{7, {{0, 1, 2}, {0, 3, 4}, {0, 5, 6}, {1, 3, 5}, {1, 4, 6}, {2, 3, 6}, {2, 4, 5}}};
    auto hd = hypergraph_to_digraph(fano);
    bool fano_ok = !coloring_oracle(fano) && !acyclic_2disconnection_oracle(hd.digraph);
    double s = since(t);
    report(7, r.ok() && fano_ok && r.seconds + s < limit_hypergraph,
           describe(r) + "; Fano plane (" + std::to_string(hd.digraph.nodes) + " nodes): " + (fano_ok ? "agree" : "DISAGREE") + ", " +
               std::to_string(s) + "s");
}

void surjectivity_checks()
{
    auto r = bias_invariance_suite(seed + 8, 200);
    std::string text = describe(r);
    bool clean = std::all_of(all_suites.begin(), all_suites.end(), no_proof_violation);
    Matrix w = column({1, -1});
    bool identity = surjectivity(TwoLayerScalarNet(w, {Rational(1), Rational(-1)})).answer;
    bool abs_val = surjectivity(TwoLayerScalarNet(w, {Rational(1), Rational(1)})).answer;
    bool neg_abs = surjectivity(TwoLayerScalarNet(w, {Rational(-1), Rational(-1)})).answer;
    bool ok = r.ok() && clean && identity && !abs_val && !neg_abs;
    report(8, ok,
           text + "; no proof violation in " + std::to_string(all_suites.size()) + " suites; identity onto: " +
               (identity ? "yes" : "no") + ", |x| onto: " + (abs_val ? "yes" : "no") + ", -|x| onto: " + (neg_abs ? "yes" : "no"));
}

void zonotopes()
{
    auto r = zonotope_suite(seed + 9, 200);
    report(9, r.ok(), describe(r));
}

void verification()
{
    auto a = verification_suite(seed + 10, 120);
    auto b = grid_suite(seed + 11, 40, 12);
    report(10, a.ok() && b.ok() && a.cases >= 100, describe(a) + "; " + describe(b));
}

} // namespace

int main()
{
    lp_stats() = {};
    auto start = Clock::now();
    counterexample();
    layers();
    graph_chain();
    digraph_chain();
    hypergraphs();
    zonotopes();
    verification();
    surjectivity_checks();

    // Criterion 4 audits every helly_cover call made above.
    const auto& st = lp_stats();
    report(4, st.helly_calls > 0 && st.helly_oversize == 0 && st.helly_verify_failures == 0,
           std::to_string(st.helly_calls) + " covers, largest " + std::to_string(st.helly_max_support) + " (d+1 bound violated " +
               std::to_string(st.helly_oversize) + " times), coverage LP failures " + std::to_string(st.helly_verify_failures));

    std::printf("total %.1fs, %d failing\n", since(start), failures);
    return failures == 0 ? 0 : 1;
}
