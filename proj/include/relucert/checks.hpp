#pragma once

// Independent certificate rechecks and seeded cross-module agreement
// suites. The CLI runs the rechecks before printing anything; `selftest`
// and the acceptance binary run the suites.

#include <chrono>
#include <functional>

#include "relucert/injectivity.hpp"
#include "relucert/random.hpp"

namespace relucert {

namespace recheck {

/// Distinct inputs with equal outputs.
inline bool collision(const LayeredNetwork& net, const CollisionPair& c)
{
    return c.first != c.second && net.evaluate(c.first) == net.evaluate(c.second);
}

inline bool collision(const ReluLayer& layer, const CollisionPair& c)
{
    return c.first != c.second && layer.evaluate(c.first) == layer.evaluate(c.second);
}

inline bool injectivity(const ReluLayer& layer, const InjectivityVerdict& v)
{
    if (v.injective) return true;
    if (!v.witness || !verify_noninjectivity_witness(layer, v.witness->point).valid) return false;
    return !v.collision || collision(layer, *v.collision);
}

inline bool range(const TwoLayerScalarNet& net, const RangeVerdict& v)
{
    const auto f0 = net.without_biases();
    if (auto* r = std::get_if<PositiveRay>(&v.certificate)) return f0.evaluate(r->direction) > 0;
    if (auto* p = std::get_if<RayPair>(&v.certificate)) return f0.evaluate(p->positive) > 0 && f0.evaluate(p->negative) < 0;
    if (auto* w = std::get_if<NonzeroWitness>(&v.certificate)) return f0.evaluate(w->point) == w->value && w->value != 0;
    return true;
}

inline bool cut(const WeightedGraph& g, const Cut& c)
{
    std::vector<bool> in(g.nodes, false);
    for (auto v : c.side) in[v] = true;
    return g.cut_weight(in) == c.weight && c.weight > 0;
}

/// A' acyclic, V1 proper and nonempty, and every arc leaving or entering
/// V1 lies in A'.
inline bool disconnection(const Digraph& d, const Disconnection& w)
{
    std::vector<bool> removed(d.arcs.size(), false), side(d.nodes, false);
    for (auto k : w.removed) {
        if (k >= d.arcs.size()) return false;
        removed[k] = true;
    }
    for (auto v : w.side) {
        if (v >= d.nodes) return false;
        side[v] = true;
    }
    if (w.side.empty() || w.side.size() >= d.nodes) return false;
    if (!detail::acyclic_subset(d.nodes, d.arcs, [&](std::size_t k) { return removed[k]; })) return false;
    for (std::size_t k = 0; k < d.arcs.size(); ++k)
        if (!removed[k] && side[d.arcs[k].first] != side[d.arcs[k].second]) return false;
    return true;
}

inline bool coloring(const Hypergraph3& h, const std::vector<int>& colors)
{
    if (colors.size() != h.nodes) return false;
    for (const auto& e : h.edges)
        if (colors[e[0]] == colors[e[1]] && colors[e[1]] == colors[e[2]]) return false;
    return true;
}

} // namespace recheck

// ---------------------------------------------------------------------------
// Oracles used only for cross-checking

/// Inner in outer iff every vertex of the inner zonotope is a member.
inline bool containment_by_vertices(const Zonotope& outer, const Zonotope& inner)
{
    for (const auto& v : vertices(inner))
        if (!membership(outer, v)) return false;
    return true;
}

/// All 3-uniform hypergraphs on n labelled nodes.
inline std::vector<Hypergraph3> all_hypergraphs(std::size_t n)
{
    std::vector<std::array<std::size_t, 3>> triples;
    for (std::size_t a = 0; a < n; ++a)
        for (std::size_t b = a + 1; b < n; ++b)
            for (std::size_t c = b + 1; c < n; ++c) triples.push_back({a, b, c});
    std::vector<Hypergraph3> out;
    for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << triples.size()); ++mask) {
        Hypergraph3 h{n, {}};
        for (std::size_t k = 0; k < triples.size(); ++k)
            if (mask >> k & 1) h.edges.push_back(triples[k]);
        out.push_back(std::move(h));
    }
    return out;
}

// ---------------------------------------------------------------------------
// Agreement suites

struct SuiteResult {
    std::string name;
    std::size_t cases = 0;
    std::size_t mismatches = 0;
    std::size_t bad_certificates = 0;
    double seconds = 0;
    std::string first_failure;

    bool ok() const { return cases > 0 && mismatches == 0 && bad_certificates == 0; }

    void mismatch(const std::string& what)
    {
        if (first_failure.empty()) first_failure = what;
        ++mismatches;
    }
    void bad(const std::string& what)
    {
        if (first_failure.empty()) first_failure = what;
        ++bad_certificates;
    }
};

namespace detail {

template <class F>
SuiteResult timed_suite(std::string name, F body)
{
    SuiteResult r;
    r.name = std::move(name);
    auto start = std::chrono::steady_clock::now();
    try {
        body(r);
    } catch (const Error& e) {
        r.bad(std::string("exception: ") + e.what());
    }
    r.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    return r;
}

} // namespace detail

/// Layer oracle vs branching procedure; d in [1,4], m in [1,10].
/// `bound_violations` counts instances whose node count exceeds the bound.
inline SuiteResult injectivity_suite(std::uint64_t seed, std::size_t count, std::size_t* bound_violations = nullptr)
{
    return detail::timed_suite("injectivity", [&](SuiteResult& r) {
        gen::Rng rng(seed);
        std::uniform_int_distribution<std::size_t> dd(1, 4), mm(1, 10);
        for (std::size_t trial = 0; trial < count; ++trial) {
            std::size_t d = dd(rng), m = mm(rng);
            auto layer = gen::random_layer(rng, m, d);
            auto fast = layer_injectivity(layer);
            auto slow = injective_oracle(layer);
            ++r.cases;
            if (fast.injective != slow.injective) r.mismatch("trial " + std::to_string(trial));
            if (!recheck::injectivity(layer, fast) || !recheck::injectivity(layer, slow))
                r.bad("witness, trial " + std::to_string(trial));
            if (fast.examined > search_tree_bound(d)) {
                if (bound_violations) ++*bound_violations;
                r.bad("search tree bound, trial " + std::to_string(trial));
            }
        }
    });
}

/// positivity(network of G) vs brute-force positive cut; n in [2, max_n].
inline SuiteResult positive_cut_suite(std::uint64_t seed, std::size_t count, std::size_t max_n = 6)
{
    return detail::timed_suite("positive-cut-chain", [&](SuiteResult& r) {
        gen::Rng rng(seed);
        std::uniform_int_distribution<std::size_t> nn(2, max_n);
        while (r.cases < count) {
            auto g = gen::random_graph(rng, nn(rng));
            if (g.edges.empty()) continue;
            auto net = positive_cut_to_network(g);
            auto v = positivity(net);
            auto c = positive_cut_oracle(g);
            ++r.cases;
            if (v.answer != c.has_value()) r.mismatch("graph " + std::to_string(r.cases));
            if (!recheck::range(net, v) || (c && !recheck::cut(g, *c))) r.bad("certificate, graph " + std::to_string(r.cases));
        }
    });
}

/// layer_injectivity(layer of D) vs NOT bipartition oracle; n in [2, max_n].
inline SuiteResult digraph_chain_suite(std::uint64_t seed, std::size_t count, std::size_t max_n = 5)
{
    return detail::timed_suite("digraph-chain", [&](SuiteResult& r) {
        gen::Rng rng(seed);
        std::uniform_int_distribution<std::size_t> nn(2, max_n);
        std::uniform_real_distribution<double> dens(0.2, 0.7);
        for (std::size_t trial = 0; trial < count; ++trial) {
            auto d = gen::random_digraph(rng, nn(rng), dens(rng));
            auto layer = digraph_to_layer(d);
            auto v = layer_injectivity(layer);
            auto w = acyclic_2disconnection_oracle(d);
            ++r.cases;
            if (v.injective == w.has_value()) r.mismatch("digraph " + std::to_string(trial));
            if (!recheck::injectivity(layer, v) || (w && !recheck::disconnection(d, *w)))
                r.bad("certificate, digraph " + std::to_string(trial));
        }
    });
}

/// Bipartition oracle vs permutation oracle; n in [2, max_n].
inline SuiteResult disconnection_oracles_suite(std::uint64_t seed, std::size_t count, std::size_t max_n = 6)
{
    return detail::timed_suite("disconnection-oracles", [&](SuiteResult& r) {
        gen::Rng rng(seed);
        std::uniform_int_distribution<std::size_t> nn(2, max_n);
        std::uniform_real_distribution<double> dens(0.2, 0.7);
        for (std::size_t trial = 0; trial < count; ++trial) {
            auto d = gen::random_digraph(rng, nn(rng), dens(rng));
            auto a = acyclic_2disconnection_oracle(d);
            auto b = acyclic_2disconnection_permutation_oracle(d);
            ++r.cases;
            if (a.has_value() != b.has_value()) r.mismatch("digraph " + std::to_string(trial));
            if ((a && !recheck::disconnection(d, *a)) || (b && !recheck::disconnection(d, *b)))
                r.bad("certificate, digraph " + std::to_string(trial));
        }
    });
}

/// Every 3-uniform hypergraph on at most `max_n` nodes: 2-colorability vs
/// the bipartition oracle on the constructed digraph, and the part sizes.
inline SuiteResult hypergraph_suite(std::size_t max_n = 4, unsigned threads = 1)
{
    return detail::timed_suite("hypergraph-chain", [&](SuiteResult& r) {
        for (std::size_t n = 1; n <= max_n; ++n)
            for (const auto& h : all_hypergraphs(n)) {
                auto hd = hypergraph_to_digraph(h);
                const std::size_t m = h.edges.size();
                std::string tag = "n=" + std::to_string(n) + " m=" + std::to_string(m);
                bool sizes = hd.u_size == n + 2 * m && hd.q_size == 4 * m && hd.x_sizes.size() == n;
                for (std::size_t v = 0; sizes && v < n; ++v) {
                    std::size_t deg = 0;
                    for (const auto& e : h.edges) deg += (e[0] == v || e[1] == v || e[2] == v);
                    sizes = hd.x_sizes[v] == 2 * deg + 2;
                }
                std::size_t total = 2 * hd.u_size + hd.q_size;
                for (auto x : hd.x_sizes) total += x;
                if (!sizes || total != hd.digraph.nodes) r.bad("part sizes, " + tag);
                auto c = coloring_oracle(h, 24, threads);
                auto w = acyclic_2disconnection_oracle(hd.digraph, 26, threads);
                ++r.cases;
                if (c.has_value() != w.has_value()) r.mismatch(tag);
                if ((c && !recheck::coloring(h, *c)) || (w && !recheck::disconnection(hd.digraph, *w))) r.bad("certificate, " + tag);
            }
    });
}

/// Surjectivity with and without biases; also counts proof-violation
/// signals raised by the zero-map test.
inline SuiteResult bias_invariance_suite(std::uint64_t seed, std::size_t count)
{
    return detail::timed_suite("bias-invariance", [&](SuiteResult& r) {
        gen::Rng rng(seed);
        std::uniform_int_distribution<std::size_t> dd(1, 4), nn(1, 6);
        for (std::size_t trial = 0; trial < count; ++trial) {
            auto net = gen::random_scalar_net(rng, nn(rng), dd(rng), true);
            ++r.cases;
            try {
                auto with = surjectivity(net);
                auto without = surjectivity(net.without_biases());
                if (with.answer != without.answer) r.mismatch("net " + std::to_string(trial));
                if (!recheck::range(net, with)) r.bad("certificate, net " + std::to_string(trial));
                auto zm = zero_map_check(net);
                if (auto* w = std::get_if<NonzeroWitness>(&zm); w && net.without_biases().evaluate(w->point) == 0)
                    r.bad("zero-map witness, net " + std::to_string(trial));
            } catch (const Error& e) {
                if (e.code() != ErrorCode::ProofViolation) throw;
                r.bad("proof violation, net " + std::to_string(trial));
            }
        }
    });
}

/// contains() vs vertex membership; d in [1,3], sizes in [1,6].
inline SuiteResult zonotope_suite(std::uint64_t seed, std::size_t count)
{
    return detail::timed_suite("zonotope-containment", [&](SuiteResult& r) {
        gen::Rng rng(seed);
        std::uniform_int_distribution<std::size_t> dd(1, 3), nn(1, 6);
        for (std::size_t trial = 0; trial < count; ++trial) {
            std::size_t d = dd(rng);
            auto outer = gen::random_zonotope(rng, nn(rng), d);
            auto inner = gen::random_zonotope(rng, nn(rng), d);
            auto c = contains(outer, inner);
            ++r.cases;
            if (c.contained != containment_by_vertices(outer, inner)) r.mismatch("pair " + std::to_string(trial));
            if (!c.contained && !(c.separating_direction && support(inner, *c.separating_direction) > support(outer, *c.separating_direction)))
                r.bad("separating direction, pair " + std::to_string(trial));
        }
    });
}

/// positivity(f) vs NOT verify(embedded instance, inscribed box, t);
/// k in [1,3], d in [k,5].
inline SuiteResult verification_suite(std::uint64_t seed, std::size_t count)
{
    return detail::timed_suite("verification-equivalence", [&](SuiteResult& r) {
        gen::Rng rng(seed);
        std::uniform_int_distribution<std::size_t> kk(1, 3), nn(1, 4);
        for (std::size_t trial = 0; trial < count; ++trial) {
            std::size_t k = kk(rng);
            std::size_t d = std::uniform_int_distribution<std::size_t>(k, 5)(rng);
            auto pos = gen::random_scalar_net(rng, nn(rng), k);
            auto ball = gen::random_ball(rng, k, d);
            Rational t = gen::small_rational(rng);
            auto g = build_verification_instance(pos, ball, t);
            auto box = inscribed_box(ball);
            auto p = positivity(pos);
            auto v = verify(g, box, t);
            ++r.cases;
            if (p.answer == v.verified) r.mismatch("triple " + std::to_string(trial));
            bool cert = recheck::range(pos, p);
            if (auto* x = std::get_if<Violation>(&v.certificate))
                cert = cert && box.contains(x->point) && g.evaluate(x->point) > t;
            if (auto* m = std::get_if<MaxCertified>(&v.certificate))
                cert = cert && box.contains(m->point) && g.evaluate(m->point) == m->value && m->value <= t;
            if (!cert) r.bad("certificate, triple " + std::to_string(trial));
        }
    });
}

/// exact_max against a uniform grid on [-1,1]^d, d in {1,2}.
inline SuiteResult grid_suite(std::uint64_t seed, std::size_t count, int steps = 8)
{
    return detail::timed_suite("max-vs-grid", [&](SuiteResult& r) {
        gen::Rng rng(seed);
        for (std::size_t trial = 0; trial < count; ++trial) {
            std::size_t d = 1 + trial % 2;
            auto net = gen::random_scalar_net(rng, 1 + trial % 4, d, true);
            Polyhedron box(d);
            for (std::size_t c = 0; c < d; ++c) {
                box.ge(unit_vector(d, c), Rational(1));
                box.ge(-unit_vector(d, c), Rational(1));
            }
            auto m = exact_max(net, box);
            ++r.cases;
            if (m.unbounded || !box.contains(m.point) || net.evaluate(m.point) != m.value) {
                r.bad("maximizer, net " + std::to_string(trial));
                continue;
            }
            std::vector<Vector> grid{{}};
            for (std::size_t c = 0; c < d; ++c) {
                std::vector<Vector> next;
                for (const auto& g : grid)
                    for (int s = -steps; s <= steps; ++s) {
                        auto h = g;
                        Rational q(s, steps);
                        q.canonicalize();
                        h.push_back(std::move(q));
                        next.push_back(std::move(h));
                    }
                grid = std::move(next);
            }
            for (const auto& x : grid)
                if (net.evaluate(x) > m.value) {
                    r.mismatch("grid point above max, net " + std::to_string(trial));
                    break;
                }
        }
    });
}

} // namespace relucert
