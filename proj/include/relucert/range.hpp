#pragma once

// Range questions for two-layer scalar networks f(x) = W2 [W1 x + b1]_+ + b2:
// is f identically zero, does f0 (biases removed) take a positive value,
// and is f onto R.

#include <map>
#include <variant>

#include "relucert/arrangement.hpp"

namespace relucert {

struct TwoLayerScalarNet {
    Matrix w1;
    Vector w2;
    std::optional<Vector> b1;
    std::optional<Rational> b2;

    TwoLayerScalarNet() = default;
    TwoLayerScalarNet(Matrix first, Vector second, std::optional<Vector> bias1 = std::nullopt,
                      std::optional<Rational> bias2 = std::nullopt)
        : w1(std::move(first)), w2(std::move(second)), b1(std::move(bias1)), b2(std::move(bias2))
    {
        if (w1.rows() == 0) throw Error(ErrorCode::InvalidArgument, "network needs at least one hidden neuron");
        if (w2.size() != w1.rows()) throw Error(ErrorCode::DimensionMismatch, "output weights differ from hidden width");
        if (b1 && b1->size() != w1.rows()) throw Error(ErrorCode::DimensionMismatch, "hidden bias differs from hidden width");
    }

    /// Accepts L = 2 layered networks with one output.
    static TwoLayerScalarNet from_network(const LayeredNetwork& net)
    {
        if (net.layers.size() != 2 || net.output_dim() != 1)
            throw Error(ErrorCode::InvalidArgument, "expected two layers and a single output");
        const auto& out = net.layers[1];
        return TwoLayerScalarNet(net.layers[0].weights, out.weights.row_vector(0), net.layers[0].bias, out.bias[0]);
    }

    LayeredNetwork to_network() const
    {
        Matrix out = Matrix::from_rows({w2}, w2.size());
        return LayeredNetwork({AffineLayer{w1, b1.value_or(Vector(w1.rows(), Rational(0)))},
                               AffineLayer{std::move(out), Vector{b2.value_or(Rational(0))}}});
    }

    std::size_t input_dim() const { return w1.cols(); }
    std::size_t hidden() const { return w1.rows(); }

    Rational evaluate(std::span<const Rational> x) const
    {
        Rational y = b2.value_or(Rational(0));
        for (std::size_t i = 0; i < hidden(); ++i) {
            Rational pre = dot(w1.row(i), x);
            if (b1) pre += (*b1)[i];
            if (pre > 0) y += w2[i] * pre;
        }
        return y;
    }

    TwoLayerScalarNet without_biases() const { return {w1, w2}; }

    TwoLayerScalarNet negated() const
    {
        TwoLayerScalarNet n = *this;
        for (auto& q : n.w2) q = -q;
        if (n.b2) *n.b2 = -*n.b2;
        return n;
    }

    friend bool operator==(const TwoLayerScalarNet&, const TwoLayerScalarNet&) = default;
};

struct ZeroMap {};
struct NonzeroWitness {
    Vector point;
    Rational value;
};
struct PositiveRay {
    Vector direction;
};
/// f0(positive) > 0 > f0(negative).
struct RayPair {
    Vector positive;
    Vector negative;
};
/// Every ray generator evaluated with one sign; `sign` is the sign f0
/// keeps everywhere (+1: f0 >= 0, -1: f0 <= 0).
struct SignUniform {
    int sign = 0;
    std::size_t rays_checked = 0;
};

using ZeroMapResult = std::variant<ZeroMap, NonzeroWitness>;
using RangeCertificate = std::variant<PositiveRay, RayPair, SignUniform, ZeroMap, NonzeroWitness>;

struct RangeVerdict {
    bool answer = false;
    RangeCertificate certificate;
};

namespace detail {

/// f0 rewritten as sum_k sigma_k [u_k . x]_+ with pairwise non-parallel-and-
/// codirected rows u_k (rows on a common open ray merged), sigma in {-1, 1}.
struct NormalForm {
    std::vector<Vector> rows;
    std::vector<int> signs;
    std::vector<Vector> keys;       ///< primitive direction of each row
    std::vector<Rational> weights;  ///< signed multiple of the key
};

inline NormalForm normal_form(const TwoLayerScalarNet& net)
{
    std::map<Vector, Rational> merged;
    for (std::size_t i = 0; i < net.hidden(); ++i) {
        if (net.w2[i] == 0) continue;
        Vector w = net.w1.row_vector(i);
        if (is_zero(w)) continue;
        Vector key = primitive(w);
        std::size_t lead = 0;
        while (key[lead] == 0) ++lead;
        merged[key] += net.w2[i] * (w[lead] / key[lead]);
    }
    NormalForm nf;
    for (auto& [key, kappa] : merged) {
        if (kappa == 0) continue;
        Rational mag = abs(kappa);
        nf.rows.push_back(mag * key);
        nf.signs.push_back(kappa > 0 ? 1 : -1);
        nf.keys.push_back(key);
        nf.weights.push_back(kappa);
    }
    return nf;
}

inline Vector gradient_at(const NormalForm& nf, std::span<const Rational> x)
{
    Vector g(x.size(), Rational(0));
    for (std::size_t k = 0; k < nf.rows.size(); ++k)
        if (dot(nf.rows[k], x) > 0)
            for (std::size_t i = 0; i < g.size(); ++i) g[i] += nf.signs[k] * nf.rows[k][i];
    return g;
}

inline Rational half_min_ratio(const std::vector<Vector>& rows, std::span<const Rational> x, std::span<const Rational> dir)
{
    std::optional<Rational> best;
    for (const auto& r : rows) {
        Rational num = dot(r, x), den = dot(r, dir);
        if (num == 0 || den == 0) continue;
        Rational q = abs(num) / abs(den);
        if (!best || q < *best) best = q;
    }
    return best ? Rational(*best / 2) : Rational(1);
}

} // namespace detail

/// Decides f0 == 0 for the bias-free part of `net`.
inline ZeroMapResult zero_map_check(const TwoLayerScalarNet& net)
{
    const TwoLayerScalarNet f0 = net.without_biases();
    const std::size_t d = f0.input_dim();
    auto nf = detail::normal_form(f0);
    if (nf.rows.empty()) return ZeroMap{};

    auto find_key = [&](const Vector& key) -> std::optional<std::size_t> {
        for (std::size_t k = 0; k < nf.keys.size(); ++k)
            if (nf.keys[k] == key) return k;
        return std::nullopt;
    };

    std::optional<std::size_t> unmatched;
    for (std::size_t k = 0; k < nf.keys.size() && !unmatched; ++k) {
        auto partner = find_key(-nf.keys[k]);
        if (!partner || nf.weights[*partner] != -nf.weights[k]) unmatched = k;
    }

    if (!unmatched) {
        // Each pair contributes kappa_u (u . x); halve the doubled sum.
        Vector linear(d, Rational(0));
        for (std::size_t k = 0; k < nf.keys.size(); ++k) linear = linear + Rational(nf.weights[k] / 2) * nf.keys[k];
        if (is_zero(linear)) return ZeroMap{};
        Rational v = f0.evaluate(linear);
        if (v == 0) throw Error(ErrorCode::ProofViolation, "linear part nonzero but evaluates to zero");
        return NonzeroWitness{linear, v};
    }

    const std::size_t j = *unmatched;
    const Vector& wj = nf.rows[j];
    std::vector<Vector> others;
    for (std::size_t k = 0; k < nf.keys.size(); ++k)
        if (nf.keys[k] != nf.keys[j] && nf.keys[k] != -nf.keys[j]) others.push_back(nf.rows[k]);

    // x on H_j off all other hyperplanes: moment-curve combinations of a
    // kernel basis of w_j avoid any finite union of proper subspaces.
    Vector x(d, Rational(0));
    auto basis = kernel_basis(Matrix::from_rows({wj}, d));
    for (long t = 1; !basis.empty(); ++t) {
        Vector cand(d, Rational(0));
        Rational coef = 1;
        for (const auto& b : basis) {
            cand = cand + coef * b;
            coef *= t;
        }
        bool off = std::all_of(others.begin(), others.end(), [&](const Vector& r) { return dot(r, cand) != 0; });
        if (off) {
            x = std::move(cand);
            break;
        }
    }

    Rational eps = detail::half_min_ratio(others, x, wj);
    std::vector<Vector> probes{x + eps * wj, x - eps * wj};
    for (const auto& p : probes) {
        Rational v = f0.evaluate(p);
        if (v != 0) return NonzeroWitness{p, v};
    }
    // Both probes may sit in cells where f0 is linear but happens to vanish
    // at the probe; moving along the cell gradient exposes the nonzero form.
    for (const auto& p : probes) {
        Vector g = detail::gradient_at(nf, p);
        if (is_zero(g)) continue;
        Rational delta = detail::half_min_ratio(nf.rows, p, g);
        Vector q = p + delta * g;
        Rational v = f0.evaluate(q);
        if (v == 0) throw Error(ErrorCode::ProofViolation, "gradient step left f0 at zero");
        return NonzeroWitness{q, v};
    }
    throw Error(ErrorCode::ProofViolation, "both probes across an unmatched hyperplane evaluate to zero");
}

/// Decides whether f0 takes a positive value; ray generators of the
/// W1 fan suffice since f0 is linear on every cone of the fan.
inline RangeVerdict positivity(const TwoLayerScalarNet& net)
{
    const TwoLayerScalarNet f0 = net.without_biases();
    auto q = quotient_lineality(f0.w1);
    const std::size_t dq = q.reduced_dim();
    if (dq == 0) return {false, SignUniform{-1, 0}};

    std::vector<Vector> candidates;
    if (dq == 1) {
        candidates = {Vector{Rational(-1)}, Vector{Rational(1)}};
    } else {
        for (auto& r : enumerate_rays(q.reduced)) candidates.push_back(std::move(r.direction));
    }
    std::size_t checked = 0;
    for (const auto& t : candidates) {
        ++checked;
        Rational v = 0;
        for (std::size_t i = 0; i < f0.hidden(); ++i) {
            Rational pre = dot(q.reduced.row(i), t);
            if (pre > 0) v += f0.w2[i] * pre;
        }
        if (v > 0) {
            Vector r = primitive(q.lift(t));
            if (f0.evaluate(r) <= 0) throw Error(ErrorCode::ProofViolation, "lifted ray lost its positive value");
            return {true, PositiveRay{std::move(r)}};
        }
    }
    return {false, SignUniform{-1, checked}};
}

/// f is onto R iff f0 takes both signs.
inline RangeVerdict surjectivity(const TwoLayerScalarNet& net)
{
    const TwoLayerScalarNet f0 = net.without_biases();
    auto zm = zero_map_check(f0);
    if (std::holds_alternative<ZeroMap>(zm)) return {false, ZeroMap{}};
    const auto& star = std::get<NonzeroWitness>(zm);
    const bool flip = star.value > 0;
    auto pos = positivity(flip ? f0.negated() : f0);
    if (!pos.answer) {
        auto su = std::get<SignUniform>(pos.certificate);
        return {false, SignUniform{flip ? 1 : -1, su.rays_checked}};
    }
    Vector r = std::get<PositiveRay>(pos.certificate).direction;
    RayPair pair = flip ? RayPair{star.point, r} : RayPair{r, star.point};
    if (!(f0.evaluate(pair.positive) > 0 && f0.evaluate(pair.negative) < 0))
        throw Error(ErrorCode::ProofViolation, "surjectivity certificate fails re-evaluation");
    return {true, pair};
}

} // namespace relucert
