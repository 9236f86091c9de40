#pragma once

// Injectivity of ReLU layers: the cell scan based on the rank criterion,
// the bounded-depth branching search, and certificate checks.

#include <optional>
#include <vector>

#include "relucert/arrangement.hpp"

namespace relucert {

/// x lies in a closed cell whose active rows have rank < d.
struct NonInjectiveWitness {
    Vector point;
    std::vector<std::size_t> active;
    std::size_t active_rank = 0;
};

struct CollisionPair {
    Vector first;
    Vector second;
};

struct InjectivityVerdict {
    bool injective = true;
    std::optional<NonInjectiveWitness> witness;
    std::optional<CollisionPair> collision;
    std::optional<std::pair<NestedSigns, NestedSigns>> regions; ///< deep certificate
    std::size_t examined = 0; ///< cells, search-tree nodes or region pairs
};

inline std::vector<std::size_t> active_rows(const ReluLayer& layer, std::span<const Rational> x)
{
    std::vector<std::size_t> act;
    for (std::size_t i = 0; i < layer.neurons(); ++i)
        if (layer.pre_activation(i, x) >= 0) act.push_back(i);
    return act;
}

inline std::vector<Vector> select_rows(const Matrix& w, const std::vector<std::size_t>& idx)
{
    std::vector<Vector> rows;
    rows.reserve(idx.size());
    for (auto i : idx) rows.push_back(w.row_vector(i));
    return rows;
}

struct WitnessCheck {
    bool valid = false;
    std::vector<std::size_t> active;
    std::size_t rank = 0;
    std::optional<CollisionPair> collision;
};

/// Valid iff the rows active at x (pre-activation >= 0) have rank < d. The
/// collision partner is x + lambda*v for the first kernel vector v of the
/// active rows, with lambda = 1, 1/2, 1/4, ... and +v tried before -v,
/// until every inactive row stays strictly negative.
inline WitnessCheck verify_noninjectivity_witness(const ReluLayer& layer, std::span<const Rational> x)
{
    if (x.size() != layer.input_dim()) throw Error(ErrorCode::DimensionMismatch, "witness has wrong dimension");
    WitnessCheck out;
    out.active = active_rows(layer, x);
    out.rank = rank(select_rows(layer.weights, out.active), layer.input_dim());
    out.valid = out.rank < layer.input_dim();
    if (!out.valid) return out;

    auto kernel = kernel_basis(Matrix::from_rows(select_rows(layer.weights, out.active), layer.input_dim()));
    const Vector& v = kernel.front();
    Vector base(x.begin(), x.end());
    for (Rational lambda = 1;; lambda /= 2) {
        for (int dir : {1, -1}) {
            Vector y = base + Rational(lambda * dir) * v;
            bool ok = true;
            for (std::size_t i = 0; i < layer.neurons() && ok; ++i) {
                if (std::binary_search(out.active.begin(), out.active.end(), i)) continue;
                ok = layer.pre_activation(i, y) < 0;
            }
            if (!ok) continue;
            if (layer.evaluate(base) != layer.evaluate(y))
                throw Error(ErrorCode::ProofViolation, "collision partner has a different image");
            out.collision = CollisionPair{base, y};
            return out;
        }
    }
}

inline InjectivityVerdict non_injective_at(const ReluLayer& layer, Vector x, std::size_t examined)
{
    auto check = verify_noninjectivity_witness(layer, x);
    if (!check.valid) throw Error(ErrorCode::ProofViolation, "reported witness has full-rank active set");
    InjectivityVerdict v;
    v.injective = false;
    v.witness = NonInjectiveWitness{std::move(x), check.active, check.rank};
    v.collision = check.collision;
    v.examined = examined;
    return v;
}

/// Scans the cells in canonical order and reports the first whose active
/// rows are rank deficient.
inline InjectivityVerdict injective_oracle(const ReluLayer& layer)
{
    auto cells = enumerate_cells(layer);
    std::size_t seen = 0;
    for (const auto& cell : cells) {
        ++seen;
        auto r = active_matrix(layer, cell);
        if (rank(r.weights) < layer.input_dim()) return non_injective_at(layer, cell.witness, seen);
    }
    InjectivityVerdict v;
    v.examined = seen;
    return v;
}

struct SearchStats {
    std::size_t nodes = 0;
};

/// Upper bound on the number of find_cell invocations: sum_{k=0..d} (d+1)^k.
inline std::size_t search_tree_bound(std::size_t d)
{
    std::size_t total = 0, power = 1;
    for (std::size_t k = 0; k <= d; ++k) {
        total += power;
        power *= d + 1;
    }
    return total;
}

/// Searches for a point where the rows in `chosen` are >= 0 and every row
/// in `candidates` outside span(chosen) is < 0, while the chosen rows have
/// rank < d. Rows are indices into the layer.
inline std::optional<Vector> find_cell(const ReluLayer& layer, const std::vector<std::size_t>& chosen,
                                       const std::vector<std::size_t>& candidates, SearchStats& stats)
{
    ++stats.nodes;
    const std::size_t d = layer.input_dim();
    auto chosen_rows = select_rows(layer.weights, chosen);
    if (rank(chosen_rows, d) == d) return std::nullopt;

    std::vector<std::size_t> rest;
    for (auto i : candidates)
        if (!in_span(layer.weights.row_vector(i), chosen_rows)) rest.push_back(i);

    Polyhedron search(d);
    for (auto i : chosen) search.ge(layer.weights.row_vector(i), layer.bias[i]);
    Polyhedron strict = search;
    for (auto i : rest) strict.gt(-layer.weights.row_vector(i), Rational(-layer.bias[i]));
    if (auto x = feasible_point(strict)) return x;

    std::vector<HalfSpace> hs;
    for (auto i : rest) hs.push_back({layer.weights.row_vector(i), layer.bias[i]});
    auto cover = helly_cover(search, hs);
    for (auto k : cover) {
        auto next_chosen = chosen;
        next_chosen.push_back(rest[k]);
        std::vector<std::size_t> next_candidates;
        for (auto i : rest)
            if (i != rest[k]) next_candidates.push_back(i);
        if (auto x = find_cell(layer, next_chosen, next_candidates, stats)) return x;
    }
    return std::nullopt;
}

/// Branching decision procedure: O((d+1)^d) LP-sized nodes.
inline InjectivityVerdict layer_injectivity(const ReluLayer& layer)
{
    const std::size_t d = layer.input_dim();
    if (rank(layer.weights) < d) return non_injective_at(layer, Vector(d, Rational(0)), 0);

    Polyhedron negative(d);
    for (std::size_t i = 0; i < layer.neurons(); ++i)
        negative.gt(-layer.weights.row_vector(i), Rational(-layer.bias[i]));
    if (auto x = feasible_point(negative)) return non_injective_at(layer, *x, 0);

    SearchStats stats;
    std::vector<std::size_t> all(layer.neurons());
    for (std::size_t i = 0; i < all.size(); ++i) all[i] = i;
    if (auto x = find_cell(layer, {}, all, stats)) return non_injective_at(layer, *x, stats.nodes);
    InjectivityVerdict v;
    v.examined = stats.nodes;
    return v;
}

/// Points x in P_{s1}, x' in P_{s2} with equal images and x != x'. One LP
/// per coordinate k and orientation, demanding x_k - x'_k > 0 (resp. < 0).
inline std::optional<CollisionPair> deep_collision_check(const LayeredNetwork& net, const NestedSigns& s1, const NestedSigns& s2)
{
    const std::size_t d = net.input_dim();
    auto r1 = region_polyhedron(net, s1);
    auto r2 = region_polyhedron(net, s2);

    Polyhedron joint(2 * d);
    auto lift = [d](const Constraint& c, std::size_t shift) {
        Vector n(2 * d, Rational(0));
        for (std::size_t k = 0; k < d; ++k) n[shift + k] = c.normal[k];
        return Constraint{std::move(n), c.offset, c.relation};
    };
    for (const auto& c : r1.polyhedron.constraints) joint.add(lift(c, 0));
    for (const auto& c : r2.polyhedron.constraints) joint.add(lift(c, d));
    for (std::size_t o = 0; o < r1.map.linear.rows(); ++o) {
        Vector n(2 * d);
        for (std::size_t k = 0; k < d; ++k) {
            n[k] = r1.map.linear(o, k);
            n[d + k] = -r2.map.linear(o, k);
        }
        joint.eq(std::move(n), r1.map.offset[o] - r2.map.offset[o]);
    }

    for (std::size_t k = 0; k < d; ++k) {
        for (int dir : {1, -1}) {
            Polyhedron p = joint;
            Vector n(2 * d, Rational(0));
            n[k] = dir;
            n[d + k] = -dir;
            p.gt(std::move(n), Rational(0));
            if (auto z = feasible_point(p)) {
                CollisionPair pair{Vector(z->begin(), z->begin() + static_cast<long>(d)), Vector(z->begin() + static_cast<long>(d), z->end())};
                if (net.evaluate(pair.first) != net.evaluate(pair.second))
                    throw Error(ErrorCode::ProofViolation, "collision pair has different images");
                return pair;
            }
        }
    }
    return std::nullopt;
}

/// Exponential region-pair search; only for small networks.
inline InjectivityVerdict deep_injectivity_bruteforce(const LayeredNetwork& net, std::size_t cap = 24)
{
    if (net.hidden_neurons() > cap)
        throw Error(ErrorCode::CapExceeded, std::to_string(net.hidden_neurons()) + " hidden neurons exceed cap " + std::to_string(cap));
    auto regions = enumerate_regions(net);
    InjectivityVerdict v;
    for (std::size_t i = 0; i < regions.size(); ++i)
        for (std::size_t j = i; j < regions.size(); ++j) {
            ++v.examined;
            if (auto pair = deep_collision_check(net, regions[i].signs, regions[j].signs)) {
                v.injective = false;
                v.collision = std::move(pair);
                v.regions = std::make_pair(regions[i].signs, regions[j].signs);
                return v;
            }
        }
    return v;
}

} // namespace relucert
