#pragma once

// Origin-anchored zonotopes Z(G) = { sum_i lambda_i g_i : lambda in [0,1]^n }.

#include <set>

#include "relucert/range.hpp"

namespace relucert {

struct Zonotope {
    Matrix generators; ///< one generator per row

    Zonotope() = default;
    explicit Zonotope(Matrix g) : generators(std::move(g))
    {
        if (generators.cols() == 0) throw Error(ErrorCode::InvalidArgument, "zonotope needs ambient dimension >= 1");
    }

    std::size_t dim() const { return generators.cols(); }
    std::size_t size() const { return generators.rows(); }

    friend bool operator==(const Zonotope&, const Zonotope&) = default;
};

/// h_Z(x) = sum_i [g_i . x]_+
inline Rational support(const Zonotope& z, std::span<const Rational> x)
{
    if (x.size() != z.dim()) throw Error(ErrorCode::DimensionMismatch, "direction has wrong dimension");
    Rational s = 0;
    for (std::size_t i = 0; i < z.size(); ++i) {
        Rational v = dot(z.generators.row(i), x);
        if (v > 0) s += v;
    }
    return s;
}

struct ContainmentResult {
    bool contained = true;
    std::optional<Vector> separating_direction;
    Rational inner_support;
    Rational outer_support;
};

/// inner in outer iff h_inner - h_outer never gets positive, which is a
/// positivity question for the network with output weights (+1.., -1..).
inline ContainmentResult contains(const Zonotope& outer, const Zonotope& inner)
{
    if (outer.dim() != inner.dim()) throw Error(ErrorCode::DimensionMismatch, "zonotopes live in different dimensions");
    const std::size_t d = outer.dim();
    std::vector<Vector> rows;
    Vector w2;
    for (std::size_t i = 0; i < inner.size(); ++i) {
        rows.push_back(inner.generators.row_vector(i));
        w2.emplace_back(1);
    }
    for (std::size_t i = 0; i < outer.size(); ++i) {
        rows.push_back(outer.generators.row_vector(i));
        w2.emplace_back(-1);
    }
    ContainmentResult res;
    if (rows.empty()) return res;
    auto verdict = positivity(TwoLayerScalarNet(Matrix::from_rows(rows, d), w2));
    if (!verdict.answer) return res;
    Vector r = std::get<PositiveRay>(verdict.certificate).direction;
    res.contained = false;
    res.inner_support = support(inner, r);
    res.outer_support = support(outer, r);
    if (!(res.inner_support > res.outer_support)) throw Error(ErrorCode::ProofViolation, "separating direction does not separate");
    res.separating_direction = std::move(r);
    return res;
}

inline bool membership(const Zonotope& z, std::span<const Rational> p)
{
    if (p.size() != z.dim()) throw Error(ErrorCode::DimensionMismatch, "point has wrong dimension");
    const std::size_t n = z.size();
    Polyhedron lam(n);
    for (std::size_t i = 0; i < n; ++i) {
        lam.ge(unit_vector(n, i), Rational(0));
        lam.ge(-unit_vector(n, i), Rational(1));
    }
    for (std::size_t k = 0; k < z.dim(); ++k) {
        Vector row(n);
        for (std::size_t i = 0; i < n; ++i) row[i] = z.generators(i, k);
        lam.eq(std::move(row), Rational(-p[k]));
    }
    return is_feasible(lam);
}

/// Extreme points among the 2^n corner sums, each confirmed by a strictly
/// separating linear functional.
inline std::vector<Vector> vertices(const Zonotope& z, std::size_t cap = 20)
{
    if (z.size() > cap) throw Error(ErrorCode::CapExceeded, std::to_string(z.size()) + " generators exceed cap " + std::to_string(cap));
    const std::size_t d = z.dim();
    std::set<Vector> corners;
    for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << z.size()); ++mask) {
        Vector s(d, Rational(0));
        for (std::size_t i = 0; i < z.size(); ++i)
            if (mask >> i & 1) s = s + z.generators.row_vector(i);
        corners.insert(std::move(s));
    }
    std::vector<Vector> pts(corners.begin(), corners.end());
    if (pts.size() == 1) return pts;
    std::vector<Vector> out;
    for (const auto& p : pts) {
        Polyhedron sep(d);
        for (const auto& q : pts)
            if (q != p) sep.gt(p - q, Rational(0));
        if (is_feasible(sep)) out.push_back(p);
    }
    return out;
}

} // namespace relucert
