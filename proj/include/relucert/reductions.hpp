#pragma once

// Combinatorial source problems, the instance maps into ReLU questions,
// and brute-force oracles for each source problem.
//
// Nodes are 0-based here; instance files number them from 1.
//
// Acyclic 2-disconnection via bipartitions: if A' is acyclic and
// (V, A \ A') is not weakly connected, pick a weak component V1 of the
// remainder; every arc between V1 and V2 = V \ V1 lies in A', so the
// crossing arcs form an acyclic set. Conversely, if the crossing arcs of a
// nontrivial bipartition are acyclic, removing exactly them leaves no arc
// between V1 and V2. Two nodes joined by a 2-cycle always fall on the same
// side of such a bipartition, so the scan runs over classes of the
// 2-cycle relation.

#include <algorithm>
#include <array>
#include <atomic>
#include <map>
#include <numeric>
#include <set>
#include <string>
#include <thread>

#include "relucert/arrangement.hpp"
#include "relucert/range.hpp"

namespace relucert {

struct WeightedEdge {
    std::size_t u = 0, v = 0;
    Integer weight;
    friend bool operator==(const WeightedEdge&, const WeightedEdge&) = default;
};

struct WeightedGraph {
    std::size_t nodes = 0;
    std::vector<WeightedEdge> edges;

    void validate() const
    {
        std::set<std::pair<std::size_t, std::size_t>> seen;
        for (const auto& e : edges) {
            if (e.u >= nodes || e.v >= nodes) throw Error(ErrorCode::InvalidArgument, "edge endpoint out of range");
            if (e.u == e.v) throw Error(ErrorCode::InvalidArgument, "self-loop");
            if (!seen.insert(std::minmax(e.u, e.v)).second) throw Error(ErrorCode::InvalidArgument, "duplicate edge");
        }
    }

    Integer cut_weight(const std::vector<bool>& in_s) const
    {
        Integer w = 0;
        for (const auto& e : edges)
            if (in_s[e.u] != in_s[e.v]) w += e.weight;
        return w;
    }

    friend bool operator==(const WeightedGraph&, const WeightedGraph&) = default;
};

struct Digraph {
    std::size_t nodes = 0;
    std::vector<std::pair<std::size_t, std::size_t>> arcs;

    void validate() const
    {
        std::set<std::pair<std::size_t, std::size_t>> seen;
        for (const auto& [u, v] : arcs) {
            if (u >= nodes || v >= nodes) throw Error(ErrorCode::InvalidArgument, "arc endpoint out of range");
            if (u == v) throw Error(ErrorCode::InvalidArgument, "self-loop");
            if (!seen.insert({u, v}).second) throw Error(ErrorCode::InvalidArgument, "duplicate arc");
        }
    }

    friend bool operator==(const Digraph&, const Digraph&) = default;
};

struct Hypergraph3 {
    std::size_t nodes = 0;
    std::vector<std::array<std::size_t, 3>> edges;

    void validate() const
    {
        std::set<std::array<std::size_t, 3>> seen;
        for (auto e : edges) {
            std::sort(e.begin(), e.end());
            if (e[2] >= nodes) throw Error(ErrorCode::InvalidArgument, "hyperedge node out of range");
            if (e[0] == e[1] || e[1] == e[2]) throw Error(ErrorCode::InvalidArgument, "hyperedge needs 3 distinct nodes");
            if (!seen.insert(e).second) throw Error(ErrorCode::InvalidArgument, "duplicate hyperedge");
        }
    }

    friend bool operator==(const Hypergraph3&, const Hypergraph3&) = default;
};

namespace detail {

/// Smallest index in [0, count) satisfying pred, scanned by `threads`
/// workers over contiguous slices.
template <class Pred>
std::optional<std::uint64_t> first_index(std::uint64_t count, unsigned threads, Pred pred)
{
    if (threads <= 1 || count < 1024) {
        for (std::uint64_t i = 0; i < count; ++i)
            if (pred(i)) return i;
        return std::nullopt;
    }
    std::atomic<std::uint64_t> best{count};
    std::vector<std::thread> pool;
    std::uint64_t slice = (count + threads - 1) / threads;
    for (unsigned t = 0; t < threads; ++t) {
        std::uint64_t lo = t * slice, hi = std::min(count, lo + slice);
        pool.emplace_back([&, lo, hi] {
            for (std::uint64_t i = lo; i < hi && i < best.load(std::memory_order_relaxed); ++i) {
                if (!pred(i)) continue;
                std::uint64_t cur = best.load();
                while (i < cur && !best.compare_exchange_weak(cur, i)) {
                }
                return;
            }
        });
    }
    for (auto& th : pool) th.join();
    if (best.load() == count) return std::nullopt;
    return best.load();
}

inline void check_cap(std::size_t n, std::size_t cap, const char* what)
{
    if (n > cap)
        throw Error(ErrorCode::CapExceeded, std::string(what) + ": " + std::to_string(n) + " exceeds cap " + std::to_string(cap));
}

} // namespace detail

struct Cut {
    std::vector<std::size_t> side; ///< S, ascending
    Integer weight;
};

/// First positive cut in mask order over nodes 0..n-2 (node n-1 stays
/// outside S).
inline std::optional<Cut> positive_cut_oracle(const WeightedGraph& g, std::size_t cap = 24, unsigned threads = 1)
{
    g.validate();
    detail::check_cap(g.nodes, cap, "positive cut oracle node count");
    if (g.nodes < 2) return std::nullopt;
    const std::uint64_t count = std::uint64_t{1} << (g.nodes - 1);
    auto members = [&](std::uint64_t mask) {
        std::vector<bool> in(g.nodes, false);
        for (std::size_t i = 0; i + 1 < g.nodes; ++i) in[i] = mask >> i & 1;
        return in;
    };
    auto hit = detail::first_index(count, threads, [&](std::uint64_t mask) { return g.cut_weight(members(mask)) > 0; });
    if (!hit) return std::nullopt;
    auto in = members(*hit);
    Cut c{{}, g.cut_weight(in)};
    for (std::size_t i = 0; i < g.nodes; ++i)
        if (in[i]) c.side.push_back(i);
    return c;
}

/// f(x) = sum_{ij in E} w_ij ([x_i - x_j]_+ + [x_j - x_i]_+)
inline TwoLayerScalarNet positive_cut_to_network(const WeightedGraph& g)
{
    g.validate();
    if (g.edges.empty()) throw Error(ErrorCode::InvalidArgument, "graph without edges gives an empty network");
    std::vector<Vector> rows;
    Vector w2;
    for (const auto& e : g.edges) {
        Vector r(g.nodes, Rational(0));
        r[e.u] = 1;
        r[e.v] = -1;
        rows.push_back(r);
        rows.push_back(-r);
        w2.emplace_back(e.weight);
        w2.emplace_back(e.weight);
    }
    return TwoLayerScalarNet(Matrix::from_rows(rows, g.nodes), std::move(w2));
}

/// Complete graph with weight (b-a)b on edges of g and -ab on non-edges; a
/// cut S gets b^2 |E(S, V-S)| - ab |S| |V-S|.
inline WeightedGraph densest_cut_to_positive_cut(const WeightedGraph& g, const Integer& a, const Integer& b)
{
    g.validate();
    if (a < 0 || !(a < b)) throw Error(ErrorCode::InvalidArgument, "need 0 <= a < b");
    std::set<std::pair<std::size_t, std::size_t>> present;
    for (const auto& e : g.edges) present.insert(std::minmax(e.u, e.v));
    WeightedGraph out{g.nodes, {}};
    for (std::size_t u = 0; u < g.nodes; ++u)
        for (std::size_t v = u + 1; v < g.nodes; ++v)
            out.edges.push_back({u, v, present.count({u, v}) ? Integer((b - a) * b) : Integer(-a * b)});
    return out;
}

/// Row per arc (i, j): +1 at column i, -1 at column j; the last node is
/// pinned to 0 and has no column.
inline ReluLayer digraph_to_layer(const Digraph& d)
{
    d.validate();
    if (d.nodes < 2) throw Error(ErrorCode::InvalidArgument, "digraph needs at least 2 nodes");
    if (d.arcs.empty()) throw Error(ErrorCode::InvalidArgument, "digraph needs at least one arc");
    const std::size_t cols = d.nodes - 1;
    Matrix w(d.arcs.size(), cols);
    for (std::size_t k = 0; k < d.arcs.size(); ++k) {
        auto [i, j] = d.arcs[k];
        if (i < cols) w(k, i) = 1;
        if (j < cols) w(k, j) = -1;
    }
    return ReluLayer::bias_free(std::move(w));
}

struct Disconnection {
    std::vector<std::size_t> removed; ///< arc indices of A'
    std::vector<std::size_t> side;    ///< V1, ascending
};

namespace detail {

/// Kahn's algorithm over the arcs selected by `keep`.
template <class Keep>
bool acyclic_subset(std::size_t nodes, const std::vector<std::pair<std::size_t, std::size_t>>& arcs, Keep keep)
{
    std::vector<std::size_t> indeg(nodes, 0);
    std::vector<std::vector<std::size_t>> out(nodes);
    std::size_t total = 0;
    for (std::size_t k = 0; k < arcs.size(); ++k) {
        if (!keep(k)) continue;
        out[arcs[k].first].push_back(arcs[k].second);
        ++indeg[arcs[k].second];
        ++total;
    }
    std::vector<std::size_t> stack;
    for (std::size_t v = 0; v < nodes; ++v)
        if (indeg[v] == 0) stack.push_back(v);
    std::size_t removed = 0;
    while (!stack.empty()) {
        auto v = stack.back();
        stack.pop_back();
        for (auto w : out[v]) {
            ++removed;
            if (--indeg[w] == 0) stack.push_back(w);
        }
    }
    return removed == total;
}

inline bool weakly_connected(std::size_t nodes, const std::vector<std::pair<std::size_t, std::size_t>>& arcs,
                             const std::vector<bool>& keep)
{
    if (nodes == 0) return true;
    std::vector<std::size_t> parent(nodes);
    std::iota(parent.begin(), parent.end(), 0);
    std::function<std::size_t(std::size_t)> find = [&](std::size_t x) { return parent[x] == x ? x : parent[x] = find(parent[x]); };
    std::size_t comps = nodes;
    for (std::size_t k = 0; k < arcs.size(); ++k) {
        if (!keep[k]) continue;
        auto a = find(arcs[k].first), b = find(arcs[k].second);
        if (a != b) {
            parent[a] = b;
            --comps;
        }
    }
    return comps == 1;
}

} // namespace detail

/// Bipartition scan over classes of the 2-cycle relation, in mask order.
inline std::optional<Disconnection> acyclic_2disconnection_oracle(const Digraph& d, std::size_t cap = 26, unsigned threads = 1)
{
    d.validate();
    const std::size_t n = d.nodes;
    std::vector<std::size_t> parent(n);
    std::iota(parent.begin(), parent.end(), 0);
    std::function<std::size_t(std::size_t)> find = [&](std::size_t x) { return parent[x] == x ? x : parent[x] = find(parent[x]); };
    std::set<std::pair<std::size_t, std::size_t>> arcset(d.arcs.begin(), d.arcs.end());
    for (const auto& [u, v] : d.arcs)
        if (arcset.count({v, u})) parent[find(u)] = find(v);

    std::vector<std::size_t> cls(n), reps;
    for (std::size_t v = 0; v < n; ++v) {
        auto r = find(v);
        auto it = std::find(reps.begin(), reps.end(), r);
        cls[v] = static_cast<std::size_t>(it - reps.begin());
        if (it == reps.end()) reps.push_back(r);
    }
    const std::size_t s = reps.size();
    detail::check_cap(s, cap, "bipartition oracle class count");
    if (s < 2) return std::nullopt;

    std::vector<std::pair<std::size_t, std::size_t>> class_arcs;
    for (const auto& [u, v] : d.arcs) class_arcs.push_back({cls[u], cls[v]});
    auto crossing_acyclic = [&](std::uint64_t mask) {
        return detail::acyclic_subset(n, d.arcs, [&](std::size_t k) {
            return ((mask >> class_arcs[k].first) & 1) != ((mask >> class_arcs[k].second) & 1);
        });
    };
    // Masks 1..2^{s-1}-1 select V1 among the first s-1 classes.
    const std::uint64_t count = (std::uint64_t{1} << (s - 1)) - 1;
    auto hit = detail::first_index(count, threads, [&](std::uint64_t i) { return crossing_acyclic(i + 1); });
    if (!hit) return std::nullopt;
    std::uint64_t mask = *hit + 1;
    Disconnection out;
    for (std::size_t v = 0; v < n; ++v)
        if (mask >> cls[v] & 1) out.side.push_back(v);
    for (std::size_t k = 0; k < d.arcs.size(); ++k)
        if (((mask >> class_arcs[k].first) & 1) != ((mask >> class_arcs[k].second) & 1)) out.removed.push_back(k);
    return out;
}

/// Independent check: D is a yes-instance iff for some node order pi the
/// arcs pointing backwards along pi leave a disconnected digraph (the
/// forward arcs form the acyclic A').
inline std::optional<Disconnection> acyclic_2disconnection_permutation_oracle(const Digraph& d, std::size_t cap = 8)
{
    d.validate();
    detail::check_cap(d.nodes, cap, "permutation oracle node count");
    std::vector<std::size_t> order(d.nodes);
    std::iota(order.begin(), order.end(), 0);
    std::vector<std::size_t> pos(d.nodes);
    do {
        for (std::size_t k = 0; k < d.nodes; ++k) pos[order[k]] = k;
        std::vector<bool> keep(d.arcs.size());
        for (std::size_t k = 0; k < d.arcs.size(); ++k) keep[k] = pos[d.arcs[k].first] > pos[d.arcs[k].second];
        if (!detail::weakly_connected(d.nodes, d.arcs, keep)) {
            Disconnection out;
            for (std::size_t k = 0; k < d.arcs.size(); ++k)
                if (!keep[k]) out.removed.push_back(k);
            // Report the weak component of node 0 in the remainder.
            std::vector<bool> seen(d.nodes, false);
            std::vector<std::size_t> stack{0};
            seen[0] = true;
            while (!stack.empty()) {
                auto v = stack.back();
                stack.pop_back();
                for (std::size_t k = 0; k < d.arcs.size(); ++k) {
                    if (!keep[k]) continue;
                    auto [a, b] = d.arcs[k];
                    for (auto [x, y] : {std::pair{a, b}, std::pair{b, a}})
                        if (x == v && !seen[y]) {
                            seen[y] = true;
                            stack.push_back(y);
                        }
                }
            }
            for (std::size_t v = 0; v < d.nodes; ++v)
                if (seen[v]) out.side.push_back(v);
            return out;
        }
    } while (std::next_permutation(order.begin(), order.end()));
    return std::nullopt;
}

/// Digraph built from a 3-uniform hypergraph, with the block layout kept
/// for inspection.
struct HypergraphDigraph {
    Digraph digraph;
    std::vector<std::string> labels;
    std::size_t u_size = 0;                ///< |U_0| = |U_1|
    std::vector<std::size_t> x_sizes;      ///< |X_v|
    std::size_t q_size = 0;
};

/// Layout: U_0, U_1, X_0..X_{n-1}, Q. Within U_i: v_i for all v, then
/// e_i, e_i' per hyperedge. Within X_v: x_v, x_v', then x_{v,e,0},
/// x_{v,e,1} per incident hyperedge. Within Q: q_{e,0}, q'_{e,0},
/// q_{e,1}, q'_{e,1} per hyperedge. Hyperedges are taken sorted, and each
/// e = {u, v, w} is read with u < v < w.
inline HypergraphDigraph hypergraph_to_digraph(const Hypergraph3& h)
{
    h.validate();
    const std::size_t n = h.nodes, m = h.edges.size();
    std::vector<std::array<std::size_t, 3>> edges;
    for (auto e : h.edges) {
        std::sort(e.begin(), e.end());
        edges.push_back(e);
    }
    std::sort(edges.begin(), edges.end());

    HypergraphDigraph out;
    auto& labels = out.labels;
    auto add = [&](std::string label) {
        labels.push_back(std::move(label));
        return labels.size() - 1;
    };
    auto ename = [&](std::size_t k) { return "e" + std::to_string(k + 1); };
    auto vname = [&](std::size_t v) { return std::to_string(v + 1); };

    std::array<std::vector<std::size_t>, 2> u_blocks;
    std::vector<std::array<std::size_t, 2>> vnode(n), enode(m), enode_p(m);
    for (std::size_t i = 0; i < 2; ++i) {
        auto si = std::to_string(i);
        for (std::size_t v = 0; v < n; ++v) u_blocks[i].push_back(vnode[v][i] = add("v" + vname(v) + "_" + si));
        for (std::size_t k = 0; k < m; ++k) {
            u_blocks[i].push_back(enode[k][i] = add(ename(k) + "_" + si));
            u_blocks[i].push_back(enode_p[k][i] = add(ename(k) + "'_" + si));
        }
    }
    std::vector<std::vector<std::size_t>> x_blocks(n);
    std::vector<std::size_t> xv(n), xv_p(n);
    std::map<std::pair<std::size_t, std::size_t>, std::array<std::size_t, 2>> xve;
    for (std::size_t v = 0; v < n; ++v) {
        x_blocks[v].push_back(xv[v] = add("x" + vname(v)));
        x_blocks[v].push_back(xv_p[v] = add("x" + vname(v) + "'"));
        for (std::size_t k = 0; k < m; ++k) {
            if (std::find(edges[k].begin(), edges[k].end(), v) == edges[k].end()) continue;
            std::array<std::size_t, 2> pair{};
            for (std::size_t i = 0; i < 2; ++i)
                x_blocks[v].push_back(pair[i] = add("x" + vname(v) + "," + ename(k) + "," + std::to_string(i)));
            xve[{v, k}] = pair;
        }
    }
    std::vector<std::array<std::size_t, 2>> q(m), q_p(m);
    for (std::size_t k = 0; k < m; ++k)
        for (std::size_t i = 0; i < 2; ++i) {
            q[k][i] = add("q" + ename(k) + "," + std::to_string(i));
            q_p[k][i] = add("q'" + ename(k) + "," + std::to_string(i));
        }

    auto& arcs = out.digraph.arcs;
    auto path = [&](const std::vector<std::size_t>& block) {
        for (std::size_t j = 0; j + 1 < block.size(); ++j) {
            arcs.push_back({block[j], block[j + 1]});
            arcs.push_back({block[j + 1], block[j]});
        }
    };
    path(u_blocks[0]);
    path(u_blocks[1]);
    for (const auto& b : x_blocks) path(b);
    for (std::size_t v = 0; v < n; ++v) {
        arcs.push_back({vnode[v][0], xv[v]});
        arcs.push_back({xv[v], vnode[v][1]});
        arcs.push_back({vnode[v][1], xv_p[v]});
        arcs.push_back({xv_p[v], vnode[v][0]});
    }
    for (std::size_t k = 0; k < m; ++k) {
        auto [u, v, w] = edges[k];
        for (std::size_t i = 0; i < 2; ++i) {
            auto xu = xve[{u, k}][i], xvv = xve[{v, k}][i], xw = xve[{w, k}][i];
            arcs.push_back({q[k][i], q_p[k][i]});
            arcs.push_back({q_p[k][i], q[k][i]});
            arcs.push_back({xu, enode[k][i]});
            arcs.push_back({enode[k][i], q[k][i]});
            arcs.push_back({q[k][i], enode_p[k][i]});
            arcs.push_back({enode_p[k][i], xu});
            arcs.push_back({xvv, q[k][i]});
            arcs.push_back({q[k][i], xw});
            arcs.push_back({xw, q_p[k][i]});
            arcs.push_back({q_p[k][i], xvv});
        }
    }
    out.digraph.nodes = labels.size();
    out.u_size = u_blocks[0].size();
    for (const auto& b : x_blocks) out.x_sizes.push_back(b.size());
    out.q_size = 4 * m;
    out.digraph.validate();
    return out;
}

/// First proper 2-coloring in mask order (node n-1 keeps color 0).
inline std::optional<std::vector<int>> coloring_oracle(const Hypergraph3& h, std::size_t cap = 24, unsigned threads = 1)
{
    h.validate();
    detail::check_cap(h.nodes, cap, "coloring oracle node count");
    if (h.nodes == 0) return std::vector<int>{};
    const std::uint64_t count = std::uint64_t{1} << (h.nodes - 1);
    auto ok = [&](std::uint64_t mask) {
        for (const auto& e : h.edges) {
            auto c = [&](std::size_t v) { return v + 1 < h.nodes ? int(mask >> v & 1) : 0; };
            if (c(e[0]) == c(e[1]) && c(e[1]) == c(e[2])) return false;
        }
        return true;
    };
    auto hit = detail::first_index(count, threads, ok);
    if (!hit) return std::nullopt;
    std::vector<int> colors(h.nodes, 0);
    for (std::size_t v = 0; v + 1 < h.nodes; ++v) colors[v] = int(*hit >> v & 1);
    return colors;
}

} // namespace relucert
