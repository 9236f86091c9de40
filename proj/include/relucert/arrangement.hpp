#pragma once

// Hyperplane arrangements induced by ReLU layers: cells with interior
// witnesses, restricted matrices W_C / b_C, rays of the central fan, and
// the linear regions of layered networks.

#include <cstdint>
#include <functional>
#include <map>
#include <set>
#include <utility>
#include <vector>

#include "relucert/exact.hpp"
#include "relucert/lp.hpp"

namespace relucert {

/// Neg < Pos, which fixes the canonical order of sign vectors.
enum class Sign : std::uint8_t { Neg, Pos };
using SignVector = std::vector<Sign>;

inline char sign_char(Sign s) { return s == Sign::Pos ? '+' : '-'; }

/// x -> [W x + b]_+
struct ReluLayer {
    Matrix weights;
    Vector bias;

    ReluLayer() = default;
    ReluLayer(Matrix w, Vector b) : weights(std::move(w)), bias(std::move(b))
    {
        if (weights.rows() == 0 || weights.cols() == 0)
            throw Error(ErrorCode::InvalidArgument, "layer needs at least one neuron and one input");
        if (bias.size() != weights.rows()) throw Error(ErrorCode::DimensionMismatch, "bias length differs from neuron count");
    }

    static ReluLayer bias_free(Matrix w)
    {
        Vector b(w.rows(), Rational(0));
        return {std::move(w), std::move(b)};
    }

    std::size_t neurons() const { return weights.rows(); }
    std::size_t input_dim() const { return weights.cols(); }

    Rational pre_activation(std::size_t i, std::span<const Rational> x) const { return dot(weights.row(i), x) + bias[i]; }

    Vector evaluate(std::span<const Rational> x) const
    {
        Vector y(neurons());
        for (std::size_t i = 0; i < neurons(); ++i) {
            Rational v = pre_activation(i, x);
            y[i] = v > 0 ? v : Rational(0);
        }
        return y;
    }

    friend bool operator==(const ReluLayer&, const ReluLayer&) = default;
};

struct AffineLayer {
    Matrix weights;
    Vector bias;
    friend bool operator==(const AffineLayer&, const AffineLayer&) = default;
};

/// W_L (... [W_2 [W_1 x + b_1]_+ + b_2]_+ ...) + b_L; every layer except
/// the last is rectified.
struct LayeredNetwork {
    std::vector<AffineLayer> layers;

    LayeredNetwork() = default;
    explicit LayeredNetwork(std::vector<AffineLayer> ls) : layers(std::move(ls))
    {
        if (layers.empty()) throw Error(ErrorCode::InvalidArgument, "network needs at least one layer");
        for (std::size_t i = 0; i < layers.size(); ++i) {
            if (layers[i].bias.size() != layers[i].weights.rows())
                throw Error(ErrorCode::DimensionMismatch, "bias length differs from layer width");
            if (i > 0 && layers[i].weights.cols() != layers[i - 1].weights.rows())
                throw Error(ErrorCode::DimensionMismatch, "consecutive layer dimensions do not chain");
        }
    }

    /// A single ReLU layer followed by the identity readout.
    static LayeredNetwork from_layer(const ReluLayer& layer)
    {
        auto m = layer.neurons();
        return LayeredNetwork({AffineLayer{layer.weights, layer.bias},
                               AffineLayer{Matrix::identity(m), Vector(m, Rational(0))}});
    }

    std::size_t input_dim() const { return layers.front().weights.cols(); }
    std::size_t output_dim() const { return layers.back().weights.rows(); }
    std::size_t hidden_layers() const { return layers.size() - 1; }
    std::size_t hidden_neurons() const
    {
        std::size_t n = 0;
        for (std::size_t i = 0; i + 1 < layers.size(); ++i) n += layers[i].weights.rows();
        return n;
    }

    Vector evaluate(std::span<const Rational> x) const
    {
        Vector cur(x.begin(), x.end());
        for (std::size_t i = 0; i < layers.size(); ++i) {
            Vector next = multiply(layers[i].weights, cur);
            for (std::size_t j = 0; j < next.size(); ++j) {
                next[j] += layers[i].bias[j];
                if (i + 1 < layers.size() && next[j] < 0) next[j] = 0;
            }
            cur = std::move(next);
        }
        return cur;
    }

    friend bool operator==(const LayeredNetwork&, const LayeredNetwork&) = default;
};

struct AffineMap {
    Matrix linear;
    Vector offset;

    Vector apply(std::span<const Rational> x) const
    {
        Vector y = multiply(linear, x);
        for (std::size_t i = 0; i < y.size(); ++i) y[i] += offset[i];
        return y;
    }
};

/// Full-dimensional cell of a layer's arrangement. A neuron whose weight
/// row is zero has a constant pre-activation; it gets sign + when its bias
/// is >= 0 (zero activations count as active), - otherwise.
struct Cell {
    SignVector signs;
    Vector witness;
};

namespace detail {

inline Constraint strict_side(std::span<const Rational> w, const Rational& b, Sign s)
{
    Vector n(w.begin(), w.end());
    if (s == Sign::Pos) return {std::move(n), b, Relation::GT};
    return {-n, Rational(-b), Relation::GT};
}

inline Constraint closed_side(std::span<const Rational> w, const Rational& b, Sign s)
{
    Vector n(w.begin(), w.end());
    if (s == Sign::Pos) return {std::move(n), b, Relation::GE};
    return {-n, Rational(-b), Relation::GE};
}

inline bool strictly_on_side(const Rational& value, Sign s) { return s == Sign::Pos ? value > 0 : value < 0; }

} // namespace detail

/// Depth-first sign-prefix extension; a prefix is extended only while its
/// strict system stays feasible, and a parent witness that already lies on
/// the requested side is reused without an LP. Output is in canonical
/// (lexicographic, - before +) order.
inline std::vector<Cell> enumerate_cells(const ReluLayer& layer)
{
    const std::size_t m = layer.neurons();
    const std::size_t d = layer.input_dim();
    std::vector<Cell> out;
    Polyhedron prefix(d);
    SignVector signs;

    std::function<void(std::size_t, const Vector&)> extend = [&](std::size_t k, const Vector& witness) {
        if (k == m) {
            out.push_back({signs, witness});
            return;
        }
        auto w = layer.weights.row(k);
        const Rational& b = layer.bias[k];
        if (is_zero(w)) {
            signs.push_back(b >= 0 ? Sign::Pos : Sign::Neg);
            extend(k + 1, witness);
            signs.pop_back();
            return;
        }
        for (Sign s : {Sign::Neg, Sign::Pos}) {
            prefix.add(detail::strict_side(w, b, s));
            std::optional<Vector> child;
            if (detail::strictly_on_side(dot(w, witness) + b, s))
                child = witness;
            else
                child = feasible_point(prefix);
            if (child) {
                signs.push_back(s);
                extend(k + 1, *child);
                signs.pop_back();
            }
            prefix.constraints.pop_back();
        }
    };
    extend(0, Vector(d, Rational(0)));
    return out;
}

struct ActiveRestriction {
    Matrix weights;                  ///< W_C: inactive rows zeroed
    Vector bias;                     ///< b_C
    std::vector<std::size_t> active; ///< I_C, ascending
};

inline ActiveRestriction active_matrix(const ReluLayer& layer, const Cell& cell)
{
    if (cell.signs.size() != layer.neurons()) throw Error(ErrorCode::DimensionMismatch, "sign vector length differs from neuron count");
    ActiveRestriction r{Matrix(layer.neurons(), layer.input_dim()), Vector(layer.neurons(), Rational(0)), {}};
    for (std::size_t j = 0; j < layer.neurons(); ++j) {
        if (cell.signs[j] != Sign::Pos) continue;
        std::copy(layer.weights.row(j).begin(), layer.weights.row(j).end(), r.weights.row(j).begin());
        r.bias[j] = layer.bias[j];
        r.active.push_back(j);
    }
    return r;
}

/// Generator of a ray of the central fan of W. `direction` has coprime
/// integer entries; `zero_set` lists the rows vanishing on it.
struct RayGenerator {
    Vector direction;
    std::vector<std::size_t> zero_set;
};

/// Rays of the fan cut out by the rows of W (bias-free, pointed). Every
/// ray is the kernel line of some rank-(d-1) set of rows; both
/// orientations of each such line are rays. Sorted by direction.
inline std::vector<RayGenerator> enumerate_rays(const Matrix& w)
{
    const std::size_t d = w.cols();
    if (d == 0) return {};
    if (rank(w) < d) throw Error(ErrorCode::NotPointed, "rows have a nontrivial common kernel; quotient the lineality first");

    // One representative per hyperplane: scale so the first nonzero is positive.
    std::set<Vector> unique_rows;
    for (std::size_t i = 0; i < w.rows(); ++i) {
        Vector r = primitive(w.row_vector(i));
        if (is_zero(r)) continue;
        auto lead = std::find_if(r.begin(), r.end(), [](const Rational& q) { return q != 0; });
        if (*lead < 0) r = -r;
        unique_rows.insert(std::move(r));
    }
    std::vector<Vector> hyper(unique_rows.begin(), unique_rows.end());

    std::set<Vector> directions;
    if (d == 1) {
        directions.insert(Vector{Rational(1)});
        directions.insert(Vector{Rational(-1)});
    } else {
        std::vector<Vector> chosen;
        std::function<void(std::size_t)> pick = [&](std::size_t start) {
            if (chosen.size() == d - 1) {
                auto k = kernel_basis(Matrix::from_rows(chosen, d));
                directions.insert(k.front());
                directions.insert(-k.front());
                return;
            }
            for (std::size_t i = start; i < hyper.size(); ++i) {
                if (hyper.size() - i < d - 1 - chosen.size()) break;
                if (in_span(hyper[i], chosen)) continue;
                chosen.push_back(hyper[i]);
                pick(i + 1);
                chosen.pop_back();
            }
        };
        pick(0);
    }

    std::vector<RayGenerator> rays;
    for (const auto& dir : directions) {
        RayGenerator g{dir, {}};
        for (std::size_t i = 0; i < w.rows(); ++i)
            if (dot(w.row(i), dir) == 0) g.zero_set.push_back(i);
        rays.push_back(std::move(g));
    }
    return rays;
}

/// W restricted to a complement of its common kernel N. Points split as
/// x = sum_k t_k u_k + n with u_k spanning the row space, so that
/// W x = reduced * t.
struct LinealityQuotient {
    Matrix reduced;                      ///< m x d'
    std::vector<Vector> complement_basis; ///< u_1..u_d' in R^d
    std::vector<Vector> lineality;        ///< basis of N

    std::size_t reduced_dim() const { return complement_basis.size(); }

    Vector lift(std::span<const Rational> t) const
    {
        std::size_t d = complement_basis.empty() ? lineality.front().size() : complement_basis.front().size();
        Vector x(d, Rational(0));
        for (std::size_t k = 0; k < t.size(); ++k)
            for (std::size_t i = 0; i < d; ++i) x[i] += t[k] * complement_basis[k][i];
        return x;
    }
};

inline LinealityQuotient quotient_lineality(const Matrix& w)
{
    LinealityQuotient q;
    q.lineality = kernel_basis(w);
    if (q.lineality.empty()) {
        q.reduced = w;
        for (std::size_t k = 0; k < w.cols(); ++k) q.complement_basis.push_back(unit_vector(w.cols(), k));
        return q;
    }
    q.complement_basis = row_space_basis(w);
    q.reduced = Matrix(w.rows(), q.complement_basis.size());
    for (std::size_t i = 0; i < w.rows(); ++i)
        for (std::size_t k = 0; k < q.complement_basis.size(); ++k) q.reduced(i, k) = dot(w.row(i), q.complement_basis[k]);
    return q;
}

/// One sign vector per rectified layer.
using NestedSigns = std::vector<SignVector>;

/// Closed region P_s and the network's affine map on it.
struct Region {
    Polyhedron polyhedron;
    AffineMap map;
};

namespace detail {

/// Affine map of the current layer's post-activations, plus the region
/// constraints collected so far.
struct ForwardState {
    Matrix linear;
    Vector offset;
    Polyhedron polyhedron;
};

inline AffineMap pre_activation_map(const AffineLayer& layer, const Matrix& linear, const Vector& offset)
{
    AffineMap pre{multiply(layer.weights, linear), multiply(layer.weights, offset)};
    for (std::size_t j = 0; j < pre.offset.size(); ++j) pre.offset[j] += layer.bias[j];
    return pre;
}

} // namespace detail

inline Region region_polyhedron(const LayeredNetwork& net, const NestedSigns& s)
{
    if (s.size() != net.hidden_layers()) throw Error(ErrorCode::DimensionMismatch, "sign assignment has wrong layer count");
    const std::size_t d = net.input_dim();
    Matrix linear = Matrix::identity(d);
    Vector offset(d, Rational(0));
    Polyhedron p(d);
    for (std::size_t i = 0; i < net.hidden_layers(); ++i) {
        const auto& layer = net.layers[i];
        if (s[i].size() != layer.weights.rows()) throw Error(ErrorCode::DimensionMismatch, "sign assignment has wrong layer width");
        auto pre = detail::pre_activation_map(layer, linear, offset);
        Matrix next(layer.weights.rows(), d);
        Vector next_offset(layer.weights.rows(), Rational(0));
        for (std::size_t j = 0; j < layer.weights.rows(); ++j) {
            p.add(detail::closed_side(pre.linear.row(j), pre.offset[j], s[i][j]));
            if (s[i][j] == Sign::Pos) {
                std::copy(pre.linear.row(j).begin(), pre.linear.row(j).end(), next.row(j).begin());
                next_offset[j] = pre.offset[j];
            }
        }
        linear = std::move(next);
        offset = std::move(next_offset);
    }
    auto out = detail::pre_activation_map(net.layers.back(), linear, offset);
    return {std::move(p), std::move(out)};
}

struct RegionEntry {
    NestedSigns signs;
    Region region;
    Vector witness;
};

/// All sign assignments whose closed region is nonempty, in canonical
/// order, found by forward prefix extension with LP pruning.
inline std::vector<RegionEntry> enumerate_regions(const LayeredNetwork& net)
{
    const std::size_t d = net.input_dim();
    std::vector<RegionEntry> out;
    NestedSigns signs(net.hidden_layers());

    std::function<void(std::size_t, std::size_t, detail::ForwardState&, const AffineMap&, Matrix&, Vector&, const Vector&)> step;
    step = [&](std::size_t layer_idx, std::size_t neuron, detail::ForwardState& st, const AffineMap& pre, Matrix& next,
               Vector& next_offset, const Vector& witness) {
        const std::size_t width = net.layers[layer_idx].weights.rows();
        if (neuron == width) {
            detail::ForwardState child{next, next_offset, st.polyhedron};
            if (layer_idx + 1 == net.hidden_layers()) {
                out.push_back({signs, region_polyhedron(net, signs), witness});
                return;
            }
            auto child_pre = detail::pre_activation_map(net.layers[layer_idx + 1], child.linear, child.offset);
            const std::size_t w2 = net.layers[layer_idx + 1].weights.rows();
            Matrix child_next(w2, d);
            Vector child_offset(w2, Rational(0));
            step(layer_idx + 1, 0, child, child_pre, child_next, child_offset, witness);
            return;
        }
        for (Sign s : {Sign::Neg, Sign::Pos}) {
            auto c = detail::closed_side(pre.linear.row(neuron), pre.offset[neuron], s);
            st.polyhedron.add(c);
            std::optional<Vector> w = c.satisfied_by(witness) ? std::optional<Vector>(witness) : feasible_point(st.polyhedron);
            if (w) {
                signs[layer_idx].push_back(s);
                if (s == Sign::Pos) {
                    std::copy(pre.linear.row(neuron).begin(), pre.linear.row(neuron).end(), next.row(neuron).begin());
                    next_offset[neuron] = pre.offset[neuron];
                }
                step(layer_idx, neuron + 1, st, pre, next, next_offset, *w);
                for (auto& q : next.row(neuron)) q = 0;
                next_offset[neuron] = 0;
                signs[layer_idx].pop_back();
            }
            st.polyhedron.constraints.pop_back();
        }
    };

    if (net.hidden_layers() == 0) {
        out.push_back({{}, region_polyhedron(net, {}), Vector(d, Rational(0))});
        return out;
    }
    detail::ForwardState root{Matrix::identity(d), Vector(d, Rational(0)), Polyhedron(d)};
    auto pre = detail::pre_activation_map(net.layers[0], root.linear, root.offset);
    const std::size_t w0 = net.layers[0].weights.rows();
    Matrix next(w0, d);
    Vector next_offset(w0, Rational(0));
    step(0, 0, root, pre, next, next_offset, Vector(d, Rational(0)));
    return out;
}

} // namespace relucert
