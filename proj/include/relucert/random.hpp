#pragma once

// Seeded instance generators shared by the tests, the acceptance suite and
// `selftest`.

#include <random>

#include "relucert/reductions.hpp"
#include "relucert/verification.hpp"
#include "relucert/zonotope.hpp"

namespace relucert::gen {

using Rng = std::mt19937_64;

/// p/q with p in [lo, hi], q in [1, max_den].
inline Rational small_rational(Rng& rng, int lo = -3, int hi = 3, int max_den = 3)
{
    std::uniform_int_distribution<int> num(lo, hi), den(1, max_den);
    Rational q(num(rng), den(rng));
    q.canonicalize();
    return q;
}

inline Matrix random_matrix(Rng& rng, std::size_t rows, std::size_t cols, int lo = -3, int hi = 3, int max_den = 3)
{
    Matrix m(rows, cols);
    for (std::size_t i = 0; i < rows; ++i)
        for (std::size_t j = 0; j < cols; ++j) {
            m(i, j) = small_rational(rng, lo, hi, max_den);
        }
    return m;
}

inline Vector random_vector(Rng& rng, std::size_t n, int lo = -3, int hi = 3, int max_den = 3)
{
    Vector v(n);
    for (auto& q : v) q = small_rational(rng, lo, hi, max_den);
    return v;
}

inline ReluLayer random_layer(Rng& rng, std::size_t m, std::size_t d)
{
    return {random_matrix(rng, m, d), random_vector(rng, m)};
}

inline TwoLayerScalarNet random_scalar_net(Rng& rng, std::size_t n, std::size_t d, bool biases = false)
{
    if (!biases) return {random_matrix(rng, n, d), random_vector(rng, n)};
    return {random_matrix(rng, n, d), random_vector(rng, n), random_vector(rng, n), small_rational(rng)};
}

/// Each edge present with probability 1/2, weight uniform in [lo, hi].
inline WeightedGraph random_graph(Rng& rng, std::size_t n, int lo = -3, int hi = 3)
{
    std::uniform_int_distribution<int> coin(0, 1), w(lo, hi);
    WeightedGraph g{n, {}};
    for (std::size_t u = 0; u < n; ++u)
        for (std::size_t v = u + 1; v < n; ++v)
            if (coin(rng)) g.edges.push_back({u, v, Integer(w(rng))});
    return g;
}

/// Each ordered pair present with probability `density`; at least one arc.
inline Digraph random_digraph(Rng& rng, std::size_t n, double density = 0.35)
{
    std::bernoulli_distribution coin(density);
    Digraph d{n, {}};
    while (d.arcs.empty()) {
        for (std::size_t u = 0; u < n; ++u)
            for (std::size_t v = 0; v < n; ++v)
                if (u != v && coin(rng)) d.arcs.push_back({u, v});
    }
    return d;
}

inline Zonotope random_zonotope(Rng& rng, std::size_t n, std::size_t d)
{
    return Zonotope(random_matrix(rng, n, d, -2, 2, 2));
}

/// Ball around a random center in a random k-dimensional subspace of R^d.
inline BallInSubspace random_ball(Rng& rng, std::size_t k, std::size_t d)
{
    for (;;) {
        BallInSubspace b{random_vector(rng, d), {}, Rational(std::uniform_int_distribution<int>(1, 4)(rng))};
        for (std::size_t i = 0; i < k; ++i) b.basis.push_back(random_vector(rng, d, -2, 2, 1));
        if (rank(b.basis, d) == k) return b;
    }
}

} // namespace relucert::gen
