#pragma once

// Command-line driver. Exit codes: 0 the property holds, 1 it fails (a
// certificate is printed), 2 any error, including a certificate that does
// not survive its recheck.

#include <CLI11.hpp>
#include <chrono>
#include <cstdio>
#include <iomanip>
#include <iostream>

#include "relucert/checks.hpp"
#include "relucert/io.hpp"

namespace relucert::cli {

inline constexpr const char* commands[] = {
    "injectivity",          "injectivity-oracle",  "surjectivity",          "positivity",
    "zero-map",             "zonotope-contain",    "verify",                "max",
    "reduce:positive-cut",  "reduce:densest-cut",  "reduce:acyclic",        "reduce:hypergraph",
    "reduce:verification",  "oracle:positive-cut", "oracle:acyclic-2-disconnection",
    "oracle:acyclic-permutation", "oracle:coloring", "selftest",
};

struct Options {
    std::string command;
    std::string input;
    unsigned threads = 1;
    std::optional<std::size_t> cap;
    std::string format = "text";
    bool verbose = false;
    std::string output;
    std::optional<std::string> a, b;       // densest-cut target ratio a/b
    std::optional<std::size_t> dim;        // ambient dimension for reduce:verification
    std::uint64_t seed = 1;
    std::optional<std::string> threshold;
    std::optional<std::string> radius;
    std::size_t scale = 1;                 // selftest multiplier
};

struct Outcome {
    Report report;
    bool holds = true;
    std::optional<InstanceFile> generated;
};

namespace detail {

inline void require(bool ok, const char* what)
{
    if (!ok) throw Error(ErrorCode::ProofViolation, std::string("certificate recheck failed: ") + what);
}

inline Rational rational_flag(const std::optional<std::string>& s, const char* flag, Rational fallback)
{
    if (!s) return fallback;
    auto q = parse_rational(*s);
    if (!q) throw Error(ErrorCode::InvalidArgument, std::string("--") + flag + " is not an exact rational: '" + *s + "'");
    return *q;
}

template <class T>
const T& payload_as(const InstanceFile& f, const char* expected)
{
    if (auto* p = std::get_if<T>(&f.payload)) return *p;
    throw Error(ErrorCode::InvalidArgument, "expected a '" + std::string(expected) + "' instance, got '" + f.kind() + "'");
}

inline TwoLayerScalarNet scalar_net(const InstanceFile& f)
{
    return TwoLayerScalarNet::from_network(payload_as<LayeredNetwork>(f, "network"));
}

inline bool has_biases(const TwoLayerScalarNet& n)
{
    return (n.b1 && !is_zero(*n.b1)) || (n.b2 && *n.b2 != 0);
}

inline std::string arcs_string(const Digraph& d, const std::vector<std::size_t>& idx)
{
    std::string s;
    for (std::size_t i = 0; i < idx.size(); ++i)
        s += (i ? " " : "") + std::to_string(d.arcs[idx[i]].first + 1) + "->" + std::to_string(d.arcs[idx[i]].second + 1);
    return s;
}

inline std::string signs_string(const SignVector& s)
{
    std::string out;
    for (auto x : s) out += sign_char(x);
    return out;
}

inline void injectivity_fields(Report& r, const InjectivityVerdict& v, bool verbose, const ReluLayer* layer)
{
    if (v.witness) {
        r.add_point("witness", v.witness->point);
        r.add("witness.active", join_indices(v.witness->active));
        r.add("witness.active_rank", std::to_string(v.witness->active_rank));
    }
    if (v.collision) {
        r.add_point("collision.first", v.collision->first);
        r.add_point("collision.second", v.collision->second);
    }
    if (verbose && v.regions) {
        std::string a, b;
        for (const auto& s : v.regions->first) a += (a.empty() ? "" : "|") + signs_string(s);
        for (const auto& s : v.regions->second) b += (b.empty() ? "" : "|") + signs_string(s);
        r.add("regions.first", a);
        r.add("regions.second", b);
    }
    if (verbose && layer && v.witness) {
        Vector pre(layer->neurons());
        for (std::size_t i = 0; i < pre.size(); ++i) pre[i] = layer->pre_activation(i, v.witness->point);
        r.add_point("witness.pre_activation", pre);
    }
    if (verbose && layer && v.collision) r.add_point("collision.output", layer->evaluate(v.collision->first));
}

inline Outcome run_injectivity(const Options& o, const InstanceFile& f, bool oracle)
{
    Outcome out;
    out.report.problem = o.command;
    if (auto* layer = std::get_if<ReluLayer>(&f.payload)) {
        auto v = oracle ? injective_oracle(*layer) : layer_injectivity(*layer);
        require(recheck::injectivity(*layer, v), "non-injectivity witness");
        out.holds = v.injective;
        injectivity_fields(out.report, v, o.verbose, layer);
        out.report.add(oracle ? "stats.cells_scanned" : "stats.search_nodes", std::to_string(v.examined));
        if (!oracle) out.report.add("stats.search_bound", std::to_string(search_tree_bound(layer->input_dim())));
        return out;
    }
    if (oracle) throw Error(ErrorCode::InvalidArgument, "injectivity-oracle expects a 'layer' instance");
    const auto& net = payload_as<LayeredNetwork>(f, "layer' or 'network");
    auto v = deep_injectivity_bruteforce(net, o.cap.value_or(24));
    if (!v.injective) require(v.collision && recheck::collision(net, *v.collision), "collision pair");
    out.holds = v.injective;
    injectivity_fields(out.report, v, o.verbose, nullptr);
    if (o.verbose && v.collision) out.report.add_point("collision.output", net.evaluate(v.collision->first));
    out.report.add("stats.region_pairs", std::to_string(v.examined));
    return out;
}

inline Outcome run_range(const Options& o, const InstanceFile& f)
{
    Outcome out;
    out.report.problem = o.command;
    auto net = scalar_net(f);
    if (o.command != "surjectivity" && has_biases(net))
        throw Error(ErrorCode::InvalidArgument, o.command + " expects a bias-free network");
    Report& r = out.report;
    if (o.command == "zero-map") {
        auto z = zero_map_check(net);
        out.holds = std::holds_alternative<ZeroMap>(z);
        if (auto* w = std::get_if<NonzeroWitness>(&z)) {
            require(recheck::range(net, {false, *w}), "nonzero witness");
            r.add_point("witness", w->point);
            r.add("witness.value", to_string(w->value));
        }
        return out;
    }
    auto v = o.command == "positivity" ? positivity(net) : surjectivity(net);
    require(recheck::range(net, v), "range certificate");
    out.holds = v.answer;
    std::visit(
        [&](const auto& c) {
            using T = std::decay_t<decltype(c)>;
            const auto f0 = net.without_biases();
            if constexpr (std::is_same_v<T, PositiveRay>) {
                r.add("certificate", "positive-ray");
                r.add_point("ray", c.direction);
                r.add("ray.value", to_string(f0.evaluate(c.direction)));
            } else if constexpr (std::is_same_v<T, RayPair>) {
                r.add("certificate", "ray-pair");
                r.add_point("ray.positive", c.positive);
                r.add("ray.positive.value", to_string(f0.evaluate(c.positive)));
                r.add_point("ray.negative", c.negative);
                r.add("ray.negative.value", to_string(f0.evaluate(c.negative)));
            } else if constexpr (std::is_same_v<T, SignUniform>) {
                r.add("certificate", "sign-uniform");
                r.add("sign", c.sign > 0 ? "nonnegative" : "nonpositive");
                r.add("stats.rays_checked", std::to_string(c.rays_checked));
            } else if constexpr (std::is_same_v<T, ZeroMap>) {
                r.add("certificate", "zero-map");
            }
        },
        v.certificate);
    return out;
}

inline Outcome run_zonotope(const Options& o, const InstanceFile& f)
{
    Outcome out;
    out.report.problem = o.command;
    const auto& p = payload_as<ZonotopePair>(f, "zonotope-pair");
    auto c = contains(p.outer, p.inner);
    out.holds = c.contained;
    if (!c.contained) {
        require(c.separating_direction && support(p.inner, *c.separating_direction) > support(p.outer, *c.separating_direction),
                "separating direction");
        out.report.add_point("direction", *c.separating_direction);
        out.report.add("support.inner", to_string(c.inner_support));
        out.report.add("support.outer", to_string(c.outer_support));
    }
    if (o.verbose) out.report.add("generators", std::to_string(p.inner.size()) + " inner, " + std::to_string(p.outer.size()) + " outer");
    return out;
}

inline Outcome run_verify(const Options& o, const InstanceFile& f)
{
    Outcome out;
    out.report.problem = o.command;
    const auto& inst = payload_as<VerificationInstance>(f, "verification");
    auto net = TwoLayerScalarNet::from_network(inst.network);
    Report& r = out.report;
    if (o.command == "max") {
        auto m = exact_max(net, inst.domain);
        out.holds = !m.unbounded;
        r.add("stats.pieces", std::to_string(m.pieces));
        if (m.unbounded) {
            require(inst.domain.contains(m.point), "ray base point");
            r.add_point("ray.base", m.point);
            r.add_point("ray", m.ray);
        } else {
            require(inst.domain.contains(m.point) && net.evaluate(m.point) == m.value, "maximizer");
            r.add("max", to_string(m.value));
            r.add("max.approx", to_decimal(m.value));
            r.add_point("argmax", m.point);
        }
        return out;
    }
    Rational t = rational_flag(o.threshold, "threshold", inst.threshold);
    auto v = verify(net, inst.domain, t);
    out.holds = v.verified;
    r.add("threshold", to_string(t));
    if (auto* x = std::get_if<Violation>(&v.certificate)) {
        require(inst.domain.contains(x->point) && net.evaluate(x->point) == x->value && x->value > t, "violation");
        r.add_point("violation", x->point);
        r.add("violation.value", to_string(x->value));
    } else {
        const auto& m = std::get<MaxCertified>(v.certificate);
        require(inst.domain.contains(m.point) && net.evaluate(m.point) == m.value && m.value <= t, "certified maximum");
        r.add("max", to_string(m.value));
        r.add_point("argmax", m.point);
    }
    return out;
}

inline Outcome run_reduce(const Options& o, const InstanceFile& f)
{
    Outcome out;
    Report& r = out.report;
    r.problem = o.command;
    const std::string name = o.command.substr(std::string("reduce:").size());
    if (name == "positive-cut") {
        auto net = positive_cut_to_network(payload_as<WeightedGraph>(f, "graph"));
        r.add("hidden", std::to_string(net.hidden()));
        out.generated = InstanceFile{1, net.to_network()};
    } else if (name == "densest-cut") {
        if (!o.a || !o.b) throw Error(ErrorCode::InvalidArgument, "reduce:densest-cut needs --a and --b");
        auto a = parse_rational(*o.a), b = parse_rational(*o.b);
        if (!a || !b || a->get_den() != 1 || b->get_den() != 1) throw Error(ErrorCode::InvalidArgument, "--a and --b must be integers");
        auto g = densest_cut_to_positive_cut(payload_as<WeightedGraph>(f, "graph"), a->get_num(), b->get_num());
        r.add("edges", std::to_string(g.edges.size()));
        out.generated = InstanceFile{1, std::move(g)};
    } else if (name == "acyclic") {
        auto layer = digraph_to_layer(payload_as<Digraph>(f, "digraph"));
        r.add("neurons", std::to_string(layer.neurons()));
        out.generated = InstanceFile{1, std::move(layer)};
    } else if (name == "hypergraph") {
        auto hd = hypergraph_to_digraph(payload_as<Hypergraph3>(f, "hypergraph"));
        r.add("nodes", std::to_string(hd.digraph.nodes));
        r.add("arcs", std::to_string(hd.digraph.arcs.size()));
        r.add("part.u", std::to_string(hd.u_size));
        std::vector<std::size_t> xs(hd.x_sizes.begin(), hd.x_sizes.end());
        r.add("part.x", join_indices(xs, 0));
        r.add("part.q", std::to_string(hd.q_size));
        if (o.verbose) {
            std::string labels;
            for (std::size_t i = 0; i < hd.labels.size(); ++i) labels += (i ? " " : "") + std::to_string(i + 1) + "=" + hd.labels[i];
            r.add("labels", labels);
        }
        out.generated = InstanceFile{1, std::move(hd.digraph)};
    } else if (name == "verification") {
        auto pos = scalar_net(f);
        if (has_biases(pos)) throw Error(ErrorCode::InvalidArgument, "reduce:verification expects a bias-free network");
        const std::size_t k = pos.input_dim();
        const std::size_t d = o.dim.value_or(k);
        if (d < k) throw Error(ErrorCode::InvalidArgument, "--dim must be at least the network input dimension");
        gen::Rng rng(o.seed);
        auto ball = gen::random_ball(rng, k, d);
        ball.radius = rational_flag(o.radius, "radius", Rational(1));
        Rational t = rational_flag(o.threshold, "threshold", Rational(0));
        auto g = build_verification_instance(pos, ball, t);
        r.add_point("ball.center", ball.center);
        for (std::size_t i = 0; i < ball.basis.size(); ++i) {
            std::string s;
            for (std::size_t c = 0; c < ball.basis[i].size(); ++c) s += (c ? " " : "") + to_string(ball.basis[i][c]);
            r.add("ball.basis." + std::to_string(i + 1), s);
        }
        r.add("ball.radius", to_string(ball.radius));
        r.add("threshold", to_string(t));
        out.generated = InstanceFile{1, VerificationInstance{g.to_network(), inscribed_box(ball), t}};
    } else {
        throw Error(ErrorCode::InvalidArgument, "unknown reduction '" + name + "'");
    }
    r.add("generated", out.generated->kind());
    return out;
}

inline Outcome run_oracle(const Options& o, const InstanceFile& f)
{
    Outcome out;
    Report& r = out.report;
    r.problem = o.command;
    const std::string name = o.command.substr(std::string("oracle:").size());
    if (name == "positive-cut") {
        const auto& g = payload_as<WeightedGraph>(f, "graph");
        auto c = positive_cut_oracle(g, o.cap.value_or(24), o.threads);
        out.holds = c.has_value();
        if (c) {
            require(recheck::cut(g, *c), "cut");
            r.add("side", join_indices(c->side));
            r.add("weight", c->weight.get_str());
        }
    } else if (name == "acyclic-2-disconnection" || name == "acyclic-permutation") {
        const auto& d = payload_as<Digraph>(f, "digraph");
        auto w = name == "acyclic-permutation" ? acyclic_2disconnection_permutation_oracle(d, o.cap.value_or(8))
                                               : acyclic_2disconnection_oracle(d, o.cap.value_or(26), o.threads);
        out.holds = w.has_value();
        if (w) {
            require(recheck::disconnection(d, *w), "disconnection");
            r.add("removed", arcs_string(d, w->removed));
            r.add("side", join_indices(w->side));
        }
    } else if (name == "coloring") {
        const auto& h = payload_as<Hypergraph3>(f, "hypergraph");
        auto c = coloring_oracle(h, o.cap.value_or(24), o.threads);
        out.holds = c.has_value();
        if (c) {
            require(recheck::coloring(h, *c), "coloring");
            std::string s;
            for (std::size_t i = 0; i < c->size(); ++i) s += (i ? " " : "") + std::to_string((*c)[i]);
            r.add("colors", s);
        }
    } else {
        throw Error(ErrorCode::InvalidArgument, "unknown oracle '" + name + "'");
    }
    return out;
}

inline Outcome run_selftest(const Options& o)
{
    Outcome out;
    out.report.problem = "selftest";
    const std::size_t s = o.scale;
    const std::uint64_t seed = o.seed;
    std::vector<SuiteResult> suites{
        injectivity_suite(seed, 40 * s),
        positive_cut_suite(seed + 1, 30 * s),
        digraph_chain_suite(seed + 2, 30 * s),
        disconnection_oracles_suite(seed + 3, 20 * s),
        hypergraph_suite(s > 1 ? 4 : 3, o.threads),
        bias_invariance_suite(seed + 4, 30 * s),
        zonotope_suite(seed + 5, 30 * s),
        verification_suite(seed + 6, 15 * s),
        grid_suite(seed + 7, 6 * s),
    };
    for (const auto& r : suites) {
        out.holds = out.holds && r.ok();
        std::string v = std::to_string(r.cases) + " cases, " + std::to_string(r.mismatches) + " mismatches, " +
                        std::to_string(r.bad_certificates) + " bad certificates";
        if (!r.first_failure.empty()) v += " (first: " + r.first_failure + ")";
        out.report.add("suite." + r.name, v);
    }
    const auto& st = lp_stats();
    out.report.add("helly.calls", std::to_string(st.helly_calls));
    out.report.add("helly.max_support", std::to_string(st.helly_max_support));
    out.report.add("helly.violations", std::to_string(st.helly_oversize + st.helly_verify_failures));
    out.holds = out.holds && st.helly_oversize == 0 && st.helly_verify_failures == 0;
    return out;
}

inline void write_file(const std::string& path, const std::string& text)
{
    std::ofstream f(path);
    if (!f) throw Error(ErrorCode::InvalidArgument, "cannot write '" + path + "'");
    f << text;
    if (!f) throw Error(ErrorCode::InvalidArgument, "failed writing '" + path + "'");
}

} // namespace detail

/// Runs one command; returns the exit code.
inline int run(const Options& o, std::ostream& out, std::ostream& err)
{
    try {
        if (std::find(std::begin(commands), std::end(commands), o.command) == std::end(commands))
            throw Error(ErrorCode::InvalidArgument, "unknown command '" + o.command + "'");
        if (o.format != "text" && o.format != "object") throw Error(ErrorCode::InvalidArgument, "--format must be text or object");
        if (o.threads == 0) throw Error(ErrorCode::InvalidArgument, "--threads must be positive");

        lp_stats() = {};
        auto start = std::chrono::steady_clock::now();
        Outcome res;
        if (o.command == "selftest") {
            res = detail::run_selftest(o);
        } else {
            if (o.input.empty()) throw Error(ErrorCode::InvalidArgument, o.command + " needs an instance file");
            InstanceFile f = o.input == "-" ? parse_instance(std::cin) : load_instance(o.input);
            const std::string& c = o.command;
            if (c == "injectivity" || c == "injectivity-oracle") res = detail::run_injectivity(o, f, c == "injectivity-oracle");
            else if (c == "surjectivity" || c == "positivity" || c == "zero-map") res = detail::run_range(o, f);
            else if (c == "zonotope-contain") res = detail::run_zonotope(o, f);
            else if (c == "verify" || c == "max") res = detail::run_verify(o, f);
            else if (c.starts_with("reduce:")) res = detail::run_reduce(o, f);
            else res = detail::run_oracle(o, f);
        }
        double seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();

        Report& r = res.report;
        if (!res.generated) r.answer = res.holds;
        const auto& st = lp_stats();
        r.add("stats.lp_feasibility", std::to_string(st.feasibility_calls));
        r.add("stats.lp_maximize", std::to_string(st.maximize_calls));
        r.add("stats.helly_calls", std::to_string(st.helly_calls));
        std::ostringstream secs;
        secs << std::fixed << std::setprecision(3) << seconds;
        r.add("stats.seconds", secs.str());

        std::string report = o.format == "object" ? emit_report_object(r) : emit_report_text(r);
        if (res.generated) {
            std::string inst = o.format == "object" ? emit_object(*res.generated) : emit_text(*res.generated);
            if (o.output.empty()) {
                out << inst;
                if (o.verbose) err << report;
            } else {
                detail::write_file(o.output, inst);
                out << report;
            }
            return 0;
        }
        if (o.output.empty()) out << report;
        else detail::write_file(o.output, report);
        return res.holds ? 0 : 1;
    } catch (const Error& e) {
        err << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << "\n";
        return 2;
    }
}

inline int main_entry(int argc, char** argv)
{
    CLI::App app{"Exact decision procedures and certificates for small ReLU networks"};
    app.set_version_flag("--version", "relu-cert 1");
    Options o;
    std::string list;
    for (const char* c : commands) list += std::string("\n  ") + c;
    app.add_option("command", o.command, "One of:" + list)->required();
    app.add_option("instance", o.input, "Instance file ('-' reads stdin)");
    app.add_option("--threads", o.threads, "Worker threads for the brute-force oracles")->check(CLI::PositiveNumber);
    app.add_option("--cap", o.cap, "Size guard for exponential oracles");
    app.add_option("--format", o.format, "Report and instance format")->check(CLI::IsMember({"text", "object"}));
    app.add_flag("--verbose,-v", o.verbose, "Dump additional certificate detail");
    app.add_option("--output,-o", o.output, "Write the report, or the generated instance for reduce:*, to this file");
    app.add_option("--a", o.a, "Densest cut numerator a (target ratio a/b)");
    app.add_option("--b", o.b, "Densest cut denominator b");
    app.add_option("--dim", o.dim, "Ambient dimension for reduce:verification");
    app.add_option("--seed", o.seed, "Seed for reduce:verification and selftest");
    app.add_option("--threshold", o.threshold, "Threshold t (exact rational)");
    app.add_option("--radius", o.radius, "Ball radius for reduce:verification (exact rational)");
    app.add_option("--scale", o.scale, "Selftest size multiplier")->check(CLI::PositiveNumber);
    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }
    return run(o, std::cout, std::cerr);
}

} // namespace relucert::cli
