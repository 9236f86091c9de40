#pragma once

// Exact output-range verification of two-layer scalar networks over
// polyhedral input sets, and the embedding of positivity instances into
// verification instances over a ball inside an affine subspace.

#include <functional>

#include "relucert/range.hpp"

namespace relucert {

/// Ball of `radius` around `center`, intersected with center + span(basis).
struct BallInSubspace {
    Vector center;
    std::vector<Vector> basis;
    Rational radius;
};

struct MaxResult {
    bool unbounded = false;
    Rational value;       ///< meaningless when unbounded
    Vector point;         ///< attaining point, or base point of the ray
    Vector ray;           ///< improving recession direction when unbounded
    std::size_t pieces = 0;
};

/// Maximum of f over X: the W1 arrangement splits X into closed pieces on
/// which f is affine; each nonempty piece is one LP.
inline MaxResult exact_max(const TwoLayerScalarNet& net, const Polyhedron& domain)
{
    const std::size_t d = net.input_dim();
    if (domain.dim != d) throw Error(ErrorCode::DimensionMismatch, "domain dimension differs from network input");
    if (domain.has_strict()) throw Error(ErrorCode::InvalidArgument, "domain constraints must be non-strict");
    auto root = feasible_point(domain);
    if (!root) throw Error(ErrorCode::EmptyDomain, "input domain is empty");

    const std::size_t n = net.hidden();
    auto bias = [&](std::size_t i) { return net.b1 ? (*net.b1)[i] : Rational(0); };

    MaxResult best;
    bool have = false;
    Polyhedron piece = domain;
    std::vector<bool> active;

    std::function<bool(std::size_t, const Vector&)> walk = [&](std::size_t k, const Vector& witness) -> bool {
        if (k == n) {
            ++best.pieces;
            Vector grad(d, Rational(0));
            Rational constant = net.b2.value_or(Rational(0));
            for (std::size_t i = 0; i < n; ++i) {
                if (!active[i]) continue;
                for (std::size_t c = 0; c < d; ++c) grad[c] += net.w2[i] * net.w1(i, c);
                constant += net.w2[i] * bias(i);
            }
            auto r = maximize(grad, piece);
            if (auto* u = std::get_if<Unbounded>(&r)) {
                best.unbounded = true;
                best.point = u->point;
                best.ray = u->ray;
                return false;
            }
            if (auto* o = std::get_if<Optimal>(&r)) {
                Rational v = o->value + constant;
                if (!have || v > best.value || (v == best.value && o->point < best.point)) {
                    best.value = v;
                    best.point = o->point;
                    have = true;
                }
            }
            return true;
        }
        auto w = net.w1.row(k);
        for (Sign s : {Sign::Neg, Sign::Pos}) {
            auto c = detail::closed_side(w, bias(k), s);
            piece.add(c);
            std::optional<Vector> child = c.satisfied_by(witness) ? std::optional<Vector>(witness) : feasible_point(piece);
            bool go_on = true;
            if (child) {
                active.push_back(s == Sign::Pos);
                go_on = walk(k + 1, *child);
                active.pop_back();
            }
            piece.constraints.pop_back();
            if (!go_on) return false;
        }
        return true;
    };
    walk(0, *root);
    if (!best.unbounded) {
        Rational check = net.evaluate(best.point);
        if (check != best.value || !domain.contains(best.point))
            throw Error(ErrorCode::ProofViolation, "maximizer fails re-evaluation");
    }
    return best;
}

struct Violation {
    Vector point;
    Rational value;
};
struct MaxCertified {
    Rational value;
    Vector point;
};

struct VerificationVerdict {
    bool verified = false;
    std::variant<Violation, MaxCertified> certificate;
};

/// Is f(x) <= t for all x in X?
inline VerificationVerdict verify(const TwoLayerScalarNet& net, const Polyhedron& domain, const Rational& t)
{
    auto m = exact_max(net, domain);
    if (m.unbounded) {
        // f grows along the ray at a positive rate; step far enough past t.
        Vector p = m.point;
        Rational step = 1;
        while (net.evaluate(p) <= t) {
            p = m.point + step * m.ray;
            step *= 2;
        }
        return {false, Violation{p, net.evaluate(p)}};
    }
    if (m.value > t) return {false, Violation{m.point, m.value}};
    return {true, MaxCertified{m.value, m.point}};
}

/// One scalar verification per output row of W2: x_i <= t_i for all i.
inline std::vector<VerificationVerdict> verify_componentwise(const Matrix& w1, const Vector& b1, const Matrix& w2, const Vector& b2,
                                                             const Polyhedron& domain, const Vector& thresholds)
{
    if (w2.rows() != thresholds.size() || b2.size() != w2.rows())
        throw Error(ErrorCode::DimensionMismatch, "threshold count differs from output dimension");
    std::vector<VerificationVerdict> out;
    for (std::size_t o = 0; o < w2.rows(); ++o)
        out.push_back(verify(TwoLayerScalarNet(w1, w2.row_vector(o), b1, b2[o]), domain, thresholds[o]));
    return out;
}

namespace detail {

/// (B^T B)^{-1} B^T, the coordinate map of span(B) extended by zero on
/// its orthogonal complement.
inline Matrix coordinate_map(const BallInSubspace& ball)
{
    const std::size_t k = ball.basis.size();
    const std::size_t d = ball.center.size();
    for (const auto& b : ball.basis)
        if (b.size() != d) throw Error(ErrorCode::DimensionMismatch, "basis vector has wrong dimension");
    Matrix bt = Matrix::from_rows(ball.basis, d); // k x d
    Matrix gram = multiply(bt, bt.transpose());
    auto inv = solve(gram, Matrix::identity(k));
    if (!inv || rank(bt) < k) throw Error(ErrorCode::DependentBasis, "subspace basis is linearly dependent");
    return multiply(*inv, bt);
}

} // namespace detail

/// g(x) = W2 [W1 A (x - z)]_+ + t with A the coordinate map of the
/// subspace, so g(z + B c) > t iff f0(c) > 0.
inline TwoLayerScalarNet build_verification_instance(const TwoLayerScalarNet& pos, const BallInSubspace& ball, const Rational& t)
{
    if (ball.basis.size() != pos.input_dim())
        throw Error(ErrorCode::DimensionMismatch, "subspace dimension differs from positivity input dimension");
    if (ball.radius <= 0) throw Error(ErrorCode::InvalidArgument, "radius must be positive");
    Matrix a = detail::coordinate_map(ball);
    Matrix w1 = multiply(pos.w1, a);
    Vector az = multiply(a, ball.center);
    Vector b1 = -multiply(pos.w1, az);
    return TwoLayerScalarNet(std::move(w1), pos.w2, std::move(b1), t);
}

/// Box z + B c, |c_i| <= h, h = r / (2 sum_i |b_i|_1), which lies inside
/// the ball since |B c|_2 <= h sum_i |b_i|_2.
inline Polyhedron inscribed_box(const BallInSubspace& ball)
{
    const std::size_t d = ball.center.size();
    Matrix a = detail::coordinate_map(ball);
    Rational norm_sum = 0;
    for (const auto& b : ball.basis)
        for (const auto& q : b) norm_sum += abs(q);
    Rational h = ball.radius / (2 * norm_sum);

    Polyhedron box(d);
    for (const auto& n : kernel_basis(Matrix::from_rows(ball.basis, d))) box.eq(n, Rational(-dot(n, ball.center)));
    for (std::size_t i = 0; i < a.rows(); ++i) {
        Vector row = a.row_vector(i);
        Rational at_center = dot(row, ball.center);
        box.ge(row, Rational(h - at_center));  // c_i >= -h
        box.ge(-row, Rational(h + at_center)); // c_i <= h
    }
    return box;
}

} // namespace relucert
