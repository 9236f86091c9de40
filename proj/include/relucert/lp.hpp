#pragma once

// Exact rational linear programming.
//
// Two simplex engines live here:
//  * a dictionary simplex over free variables and inequality rows
//    (a.x + c >= 0). Pivots cost O(rows * dim), which suits the
//    "few variables, many constraints" systems arising from arrangements;
//  * a standard-form tableau simplex (A v = rhs, v >= 0) used for the dual
//    cone of the Helly cover, where the row count is dim + 1.
// Both use Bland's rule, so they terminate on degenerate inputs.

#include <algorithm>
#include <cstdint>
#include <optional>
#include <utility>
#include <variant>
#include <vector>

#include "relucert/exact.hpp"

namespace relucert {

/// normal . x + offset {>=, >, =} 0
enum class Relation { GE, GT, EQ };

struct Constraint {
    Vector normal;
    Rational offset;
    Relation relation = Relation::GE;

    Rational evaluate(std::span<const Rational> x) const { return dot(normal, x) + offset; }

    bool satisfied_by(std::span<const Rational> x) const
    {
        Rational v = evaluate(x);
        switch (relation) {
        case Relation::GE: return v >= 0;
        case Relation::GT: return v > 0;
        case Relation::EQ: return v == 0;
        }
        return false;
    }

    friend bool operator==(const Constraint&, const Constraint&) = default;
};

struct Polyhedron {
    std::size_t dim = 0;
    std::vector<Constraint> constraints;

    Polyhedron() = default;
    explicit Polyhedron(std::size_t d) : dim(d) {}

    Polyhedron& add(Constraint c)
    {
        if (c.normal.size() != dim) throw Error(ErrorCode::DimensionMismatch, "constraint normal has wrong dimension");
        constraints.push_back(std::move(c));
        return *this;
    }
    Polyhedron& ge(Vector normal, Rational offset) { return add({std::move(normal), std::move(offset), Relation::GE}); }
    Polyhedron& gt(Vector normal, Rational offset) { return add({std::move(normal), std::move(offset), Relation::GT}); }
    Polyhedron& eq(Vector normal, Rational offset) { return add({std::move(normal), std::move(offset), Relation::EQ}); }

    Polyhedron& append(const Polyhedron& other)
    {
        if (other.dim != dim) throw Error(ErrorCode::DimensionMismatch, "appending polyhedron of other dimension");
        constraints.insert(constraints.end(), other.constraints.begin(), other.constraints.end());
        return *this;
    }

    bool contains(std::span<const Rational> x) const
    {
        return std::all_of(constraints.begin(), constraints.end(), [&](const Constraint& c) { return c.satisfied_by(x); });
    }

    bool has_strict() const
    {
        return std::any_of(constraints.begin(), constraints.end(), [](const Constraint& c) { return c.relation == Relation::GT; });
    }

    friend bool operator==(const Polyhedron&, const Polyhedron&) = default;
};

struct Infeasible {};
struct Optimal {
    Vector point;
    Rational value;
};
/// `ray` strictly increases the objective and is a recession direction.
struct Unbounded {
    Vector point;
    Vector ray;
};
using LpOutcome = std::variant<Infeasible, Optimal, Unbounded>;

/// Per-thread counters. The Helly fields back the audit that every cover
/// has at most dim + 1 members and passes its emptiness check.
struct LpStats {
    std::uint64_t feasibility_calls = 0;
    std::uint64_t maximize_calls = 0;
    std::uint64_t helly_calls = 0;
    std::uint64_t helly_oversize = 0;
    std::uint64_t helly_verify_failures = 0;
    std::size_t helly_max_support = 0;
};

inline LpStats& lp_stats()
{
    thread_local LpStats stats;
    return stats;
}

namespace detail {

/// Dictionary  basic_i = beta_i + sum_j T_ij * nonbasic_j  over variables
/// 0..nfree-1 (free) and one nonnegative slack per row.
class Dictionary {
public:
    enum class Status { Optimal, Unbounded, Infeasible };

    Dictionary(const std::vector<Vector>& rows, const std::vector<Rational>& offsets, std::size_t nfree)
        : nfree_(nfree), aux_(nfree + rows.size())
    {
        const std::size_t m = rows.size();
        basic_.resize(m);
        nonbasic_.resize(nfree);
        for (std::size_t j = 0; j < nfree; ++j) nonbasic_[j] = j;
        table_.assign(m, std::vector<Rational>(nfree));
        beta_.resize(m);
        for (std::size_t i = 0; i < m; ++i) {
            basic_[i] = nfree + i;
            for (std::size_t j = 0; j < nfree; ++j) table_[i][j] = rows[i][j];
            beta_[i] = offsets[i];
        }
        gamma_.assign(nfree, Rational(0));
    }

    Status phase_one()
    {
        std::size_t worst = rows();
        for (std::size_t i = 0; i < rows(); ++i)
            if (beta_[i] < 0 && (worst == rows() || beta_[i] < beta_[worst])) worst = i;
        if (worst == rows()) return Status::Optimal;

        for (auto& r : table_) r.push_back(Rational(1));
        nonbasic_.push_back(aux_);
        gamma_.assign(cols(), Rational(0));
        gamma_.back() = -1;
        z0_ = 0;
        pivot(worst, cols() - 1);
        optimize();
        if (z0_ < 0) return Status::Infeasible;

        for (std::size_t i = 0; i < rows(); ++i) {
            if (basic_[i] != aux_) continue;
            std::size_t j = 0;
            while (j < cols() && table_[i][j] == 0) ++j;
            if (j < cols()) {
                pivot(i, j);
            } else {
                table_.erase(table_.begin() + static_cast<long>(i));
                beta_.erase(beta_.begin() + static_cast<long>(i));
                basic_.erase(basic_.begin() + static_cast<long>(i));
            }
            break;
        }
        auto it = std::find(nonbasic_.begin(), nonbasic_.end(), aux_);
        auto col = static_cast<std::size_t>(it - nonbasic_.begin());
        nonbasic_.erase(it);
        for (auto& r : table_) r.erase(r.begin() + static_cast<long>(col));
        gamma_.assign(cols(), Rational(0));
        z0_ = 0;
        return Status::Optimal;
    }

    /// Objective over the free variables, rewritten in the current basis.
    void set_objective(std::span<const Rational> objective)
    {
        gamma_.assign(cols(), Rational(0));
        z0_ = 0;
        for (std::size_t var = 0; var < nfree_; ++var) {
            if (objective[var] == 0) continue;
            if (auto col = column_of(var)) {
                gamma_[*col] += objective[var];
                continue;
            }
            auto row = *row_of(var);
            z0_ += objective[var] * beta_[row];
            for (std::size_t j = 0; j < cols(); ++j) gamma_[j] += objective[var] * table_[row][j];
        }
    }

    /// Bland's rule, free variables first. A free variable never leaves the
    /// basis, so after at most nfree entries the classical argument applies.
    Status optimize()
    {
        for (;;) {
            std::size_t enter = cols();
            for (std::size_t j = 0; j < cols(); ++j)
                if (is_free(nonbasic_[j]) && gamma_[j] != 0 && (enter == cols() || nonbasic_[j] < nonbasic_[enter])) enter = j;
            if (enter == cols())
                for (std::size_t j = 0; j < cols(); ++j)
                    if (!is_free(nonbasic_[j]) && gamma_[j] > 0 && (enter == cols() || nonbasic_[j] < nonbasic_[enter])) enter = j;
            if (enter == cols()) return Status::Optimal;

            int dir = gamma_[enter] > 0 ? 1 : -1;
            auto leave = ratio_test(enter, dir);
            if (!leave) {
                ray_col_ = enter;
                ray_dir_ = dir;
                return Status::Unbounded;
            }
            pivot(*leave, enter);
        }
    }

    /// Pivots remaining free nonbasic variables into the basis where a row
    /// blocks them, so a pointed optimum is reported at a vertex. Only
    /// valid at an optimum (their reduced costs are zero there).
    void complete_basis()
    {
        bool changed = true;
        while (changed) {
            changed = false;
            for (std::size_t j = 0; j < cols() && !changed; ++j) {
                if (!is_free(nonbasic_[j])) continue;
                for (int dir : {1, -1}) {
                    if (auto leave = ratio_test(j, dir)) {
                        pivot(*leave, j);
                        changed = true;
                        break;
                    }
                }
            }
        }
    }

    Vector point() const
    {
        Vector x(nfree_, Rational(0));
        for (std::size_t i = 0; i < rows(); ++i)
            if (is_free(basic_[i])) x[basic_[i]] = beta_[i];
        return x;
    }

    Vector ray() const
    {
        Vector r(nfree_, Rational(0));
        if (is_free(nonbasic_[ray_col_])) r[nonbasic_[ray_col_]] = ray_dir_;
        for (std::size_t i = 0; i < rows(); ++i)
            if (is_free(basic_[i])) r[basic_[i]] = table_[i][ray_col_] * ray_dir_;
        return r;
    }

    const Rational& value() const { return z0_; }

private:
    std::size_t rows() const { return basic_.size(); }
    std::size_t cols() const { return nonbasic_.size(); }
    bool is_free(std::size_t var) const { return var < nfree_; }

    std::optional<std::size_t> column_of(std::size_t var) const
    {
        for (std::size_t j = 0; j < cols(); ++j)
            if (nonbasic_[j] == var) return j;
        return std::nullopt;
    }
    std::optional<std::size_t> row_of(std::size_t var) const
    {
        for (std::size_t i = 0; i < rows(); ++i)
            if (basic_[i] == var) return i;
        return std::nullopt;
    }

    std::optional<std::size_t> ratio_test(std::size_t enter, int dir) const
    {
        std::optional<std::size_t> leave;
        Rational best;
        for (std::size_t i = 0; i < rows(); ++i) {
            if (is_free(basic_[i])) continue;
            const Rational& a = table_[i][enter];
            if (a == 0 || (dir > 0) == (a > 0)) continue;
            Rational ratio = beta_[i] / (dir > 0 ? Rational(-a) : a);
            if (!leave || ratio < best || (ratio == best && basic_[i] < basic_[*leave])) {
                leave = i;
                best = ratio;
            }
        }
        return leave;
    }

    void pivot(std::size_t r, std::size_t e)
    {
        const std::size_t n = cols();
        Rational p = table_[r][e];
        std::vector<Rational> nr(n);
        for (std::size_t j = 0; j < n; ++j) nr[j] = (j == e) ? Rational(1 / p) : Rational(-table_[r][j] / p);
        Rational nb = -beta_[r] / p;

        auto update = [&](std::vector<Rational>& row, Rational& constant) {
            Rational f = row[e];
            if (f == 0) return;
            for (std::size_t j = 0; j < n; ++j)
                if (j != e && nr[j] != 0) row[j] += f * nr[j];
            row[e] = f * nr[e];
            constant += f * nb;
        };
        for (std::size_t i = 0; i < rows(); ++i)
            if (i != r) update(table_[i], beta_[i]);
        update(gamma_, z0_);

        table_[r] = std::move(nr);
        beta_[r] = nb;
        std::swap(basic_[r], nonbasic_[e]);
    }

    std::size_t nfree_;
    std::size_t aux_;
    std::vector<std::size_t> basic_;
    std::vector<std::size_t> nonbasic_;
    std::vector<std::vector<Rational>> table_;
    std::vector<Rational> beta_;
    std::vector<Rational> gamma_;
    Rational z0_ = 0;
    std::size_t ray_col_ = 0;
    int ray_dir_ = 1;
};

struct InequalitySystem {
    std::vector<Vector> rows;
    std::vector<Rational> offsets;

    void push(Vector row, Rational offset)
    {
        rows.push_back(std::move(row));
        offsets.push_back(std::move(offset));
    }
};

/// Splits equalities into two inequalities; strict rows are rejected.
inline InequalitySystem closed_rows(const Polyhedron& p)
{
    InequalitySystem sys;
    for (const auto& c : p.constraints) {
        if (c.normal.size() != p.dim) throw Error(ErrorCode::DimensionMismatch, "constraint normal has wrong dimension");
        switch (c.relation) {
        case Relation::GE: sys.push(c.normal, c.offset); break;
        case Relation::EQ:
            sys.push(c.normal, c.offset);
            sys.push(-c.normal, Rational(-c.offset));
            break;
        case Relation::GT: throw Error(ErrorCode::InvalidArgument, "strict constraint where only closed ones are allowed");
        }
    }
    return sys;
}

/// Lexicographic maximization over {v >= 0 : A v = rhs} by a two-phase
/// tableau simplex. On success `v` is a basic (vertex) solution.
struct StandardResult {
    enum class Status { Infeasible, Optimal, Unbounded } status;
    Vector v;
};

inline StandardResult lex_maximize_standard(const Matrix& a, const Vector& rhs, const std::vector<Vector>& objectives)
{
    const std::size_t n = a.cols();
    std::size_t m = a.rows();
    const std::size_t total = n + m;

    std::vector<std::vector<Rational>> t(m, std::vector<Rational>(total));
    std::vector<Rational> beta(m);
    std::vector<std::size_t> basis(m);
    for (std::size_t i = 0; i < m; ++i) {
        int s = rhs[i] < 0 ? -1 : 1;
        for (std::size_t j = 0; j < n; ++j) t[i][j] = a(i, j) * s;
        t[i][n + i] = 1;
        beta[i] = rhs[i] * s;
        basis[i] = n + i;
    }

    std::vector<bool> allowed(total, true);

    auto pivot = [&](std::size_t r, std::size_t e) {
        Rational p = t[r][e];
        for (auto& x : t[r]) x /= p;
        beta[r] /= p;
        for (std::size_t i = 0; i < t.size(); ++i) {
            if (i == r || t[i][e] == 0) continue;
            Rational f = t[i][e];
            for (std::size_t j = 0; j < total; ++j)
                if (t[r][j] != 0) t[i][j] -= f * t[r][j];
            beta[i] -= f * beta[r];
        }
        basis[r] = e;
    };

    auto reduced_costs = [&](const std::vector<Rational>& c) {
        std::vector<Rational> d(c);
        for (std::size_t i = 0; i < t.size(); ++i) {
            const Rational& cb = c[basis[i]];
            if (cb == 0) continue;
            for (std::size_t j = 0; j < total; ++j)
                if (t[i][j] != 0) d[j] -= cb * t[i][j];
        }
        return d;
    };

    // Bland: smallest improving column, smallest basic index on ratio ties.
    auto run = [&](const std::vector<Rational>& c) -> bool {
        for (;;) {
            auto d = reduced_costs(c);
            std::size_t enter = total;
            for (std::size_t j = 0; j < total; ++j)
                if (allowed[j] && d[j] > 0) {
                    enter = j;
                    break;
                }
            if (enter == total) return true;
            std::optional<std::size_t> leave;
            Rational best;
            for (std::size_t i = 0; i < t.size(); ++i) {
                if (t[i][enter] <= 0) continue;
                Rational ratio = beta[i] / t[i][enter];
                if (!leave || ratio < best || (ratio == best && basis[i] < basis[*leave])) {
                    leave = i;
                    best = ratio;
                }
            }
            if (!leave) return false;
            pivot(*leave, enter);
        }
    };

    std::vector<Rational> phase1(total, Rational(0));
    for (std::size_t i = 0; i < m; ++i) phase1[n + i] = -1;
    run(phase1);
    Rational infeas = 0;
    for (std::size_t i = 0; i < t.size(); ++i)
        if (basis[i] >= n) infeas += beta[i];
    if (infeas != 0) return {StandardResult::Status::Infeasible, {}};

    for (std::size_t i = 0; i < t.size();) {
        if (basis[i] < n) {
            ++i;
            continue;
        }
        std::size_t j = 0;
        while (j < n && t[i][j] == 0) ++j;
        if (j < n) {
            pivot(i, j);
            ++i;
        } else {
            t.erase(t.begin() + static_cast<long>(i));
            beta.erase(beta.begin() + static_cast<long>(i));
            basis.erase(basis.begin() + static_cast<long>(i));
        }
    }
    for (std::size_t j = n; j < total; ++j) allowed[j] = false;

    for (const auto& objective : objectives) {
        std::vector<Rational> c(total, Rational(0));
        for (std::size_t j = 0; j < n; ++j) c[j] = objective[j];
        if (!run(c)) return {StandardResult::Status::Unbounded, {}};
        auto d = reduced_costs(c);
        for (std::size_t j = 0; j < total; ++j)
            if (d[j] < 0) allowed[j] = false;
    }

    Vector v(n, Rational(0));
    for (std::size_t i = 0; i < t.size(); ++i)
        if (basis[i] < n) v[basis[i]] = beta[i];
    return {StandardResult::Status::Optimal, std::move(v)};
}

} // namespace detail

/// Maximizes objective . x over a closed polyhedron (GE/EQ rows only).
inline LpOutcome maximize(std::span<const Rational> objective, const Polyhedron& p)
{
    if (objective.size() != p.dim) throw Error(ErrorCode::DimensionMismatch, "objective has wrong dimension");
    ++lp_stats().maximize_calls;
    auto sys = detail::closed_rows(p);
    detail::Dictionary dict(sys.rows, sys.offsets, p.dim);
    if (dict.phase_one() == detail::Dictionary::Status::Infeasible) return Infeasible{};
    dict.set_objective(objective);
    if (dict.optimize() == detail::Dictionary::Status::Unbounded) return Unbounded{dict.point(), dict.ray()};
    dict.complete_basis();
    return Optimal{dict.point(), dict.value()};
}

/// A point satisfying every constraint, strict rows strictly. Strict rows
/// share a slack eps (row >= eps, eps <= 1) that is maximized; the open
/// system is feasible iff the optimal eps is positive.
inline std::optional<Vector> feasible_point(const Polyhedron& p)
{
    ++lp_stats().feasibility_calls;
    std::optional<Vector> result;
    if (!p.has_strict()) {
        auto sys = detail::closed_rows(p);
        detail::Dictionary dict(sys.rows, sys.offsets, p.dim);
        if (dict.phase_one() == detail::Dictionary::Status::Infeasible) return std::nullopt;
        result = dict.point();
    } else {
        const std::size_t d = p.dim;
        detail::InequalitySystem sys;
        auto lifted = [d](const Vector& normal, const Rational& eps_coef) {
            Vector row(normal);
            row.resize(d + 1);
            row[d] = eps_coef;
            return row;
        };
        for (const auto& c : p.constraints) {
            if (c.normal.size() != d) throw Error(ErrorCode::DimensionMismatch, "constraint normal has wrong dimension");
            switch (c.relation) {
            case Relation::GE: sys.push(lifted(c.normal, 0), c.offset); break;
            case Relation::GT: sys.push(lifted(c.normal, -1), c.offset); break;
            case Relation::EQ:
                sys.push(lifted(c.normal, 0), c.offset);
                sys.push(lifted(-c.normal, 0), Rational(-c.offset));
                break;
            }
        }
        sys.push(lifted(Vector(d, Rational(0)), -1), Rational(1));
        detail::Dictionary dict(sys.rows, sys.offsets, d + 1);
        if (dict.phase_one() == detail::Dictionary::Status::Infeasible) return std::nullopt;
        dict.set_objective(unit_vector(d + 1, d));
        dict.optimize();
        if (dict.value() <= 0) return std::nullopt;
        auto x = dict.point();
        x.resize(d);
        result = std::move(x);
    }
    if (!p.contains(*result)) throw Error(ErrorCode::ProofViolation, "LP point fails its own constraints");
    return result;
}

inline bool is_feasible(const Polyhedron& p) { return feasible_point(p).has_value(); }

struct ExtremeRay {
    Vector ray;                       ///< coprime integer entries
    std::vector<std::size_t> support; ///< indices with ray_i > 0
};

/// Extreme ray of {v : M v = 0, v >= 0} whose objective values are
/// lexicographically positive (first nonzero value positive). Found as an
/// optimal vertex of the slice 1.v = 1.
inline std::optional<ExtremeRay> extreme_ray_support_lex(const Matrix& cone_equalities, const std::vector<Vector>& objectives)
{
    const std::size_t n = cone_equalities.cols();
    for (const auto& o : objectives)
        if (o.size() != n) throw Error(ErrorCode::DimensionMismatch, "objective has wrong dimension");
    Matrix a(cone_equalities.rows() + 1, n);
    for (std::size_t i = 0; i < cone_equalities.rows(); ++i)
        for (std::size_t j = 0; j < n; ++j) a(i, j) = cone_equalities(i, j);
    for (std::size_t j = 0; j < n; ++j) a(cone_equalities.rows(), j) = 1;
    Vector rhs(a.rows(), Rational(0));
    rhs.back() = 1;

    auto res = detail::lex_maximize_standard(a, rhs, objectives);
    if (res.status != detail::StandardResult::Status::Optimal) return std::nullopt;
    bool positive = false;
    for (const auto& o : objectives) {
        Rational val = dot(o, res.v);
        if (val == 0) continue;
        positive = val > 0;
        break;
    }
    if (!positive) return std::nullopt;
    ExtremeRay out;
    out.ray = primitive(res.v);
    for (std::size_t i = 0; i < n; ++i)
        if (res.v[i] > 0) out.support.push_back(i);
    return out;
}

inline std::optional<ExtremeRay> extreme_ray_support(const Matrix& cone_equalities, const Vector& objective)
{
    return extreme_ray_support_lex(cone_equalities, {objective});
}

/// Closed half-space {x : normal . x + offset >= 0}.
struct HalfSpace {
    Vector normal;
    Rational offset;
};

/// Given C covered by the union of `halfspaces`, returns A with |A| <= dim+1
/// whose half-spaces still cover C.
///
/// The subcover is the y-support of an extreme ray of the dual cone
///   {(y, z) >= 0 : sum_j z_j a_j - sum_i y_i w_i = 0}
/// maximizing (sum_i y_i b_i - sum_j z_j c_j, sum_i y_i) lexicographically.
/// A lexicographically positive ray is exactly a certificate that
/// C n {w_i x + b_i < 0 for all i} is empty; the second component plays
/// the role of an infinitesimal perturbation of the offsets. Every result
/// is re-checked with one emptiness LP.
inline std::vector<std::size_t> helly_cover(const Polyhedron& c, const std::vector<HalfSpace>& halfspaces)
{
    const std::size_t d = c.dim;
    for (const auto& h : halfspaces)
        if (h.normal.size() != d) throw Error(ErrorCode::DimensionMismatch, "half-space normal has wrong dimension");
    auto& stats = lp_stats();
    ++stats.helly_calls;

    auto sys = detail::closed_rows(c);
    const std::size_t n = halfspaces.size();
    const std::size_t cols = n + sys.rows.size();
    Matrix cone(d, cols);
    Vector primary(cols), secondary(cols, Rational(0));
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t k = 0; k < d; ++k) cone(k, i) = -halfspaces[i].normal[k];
        primary[i] = halfspaces[i].offset;
        secondary[i] = 1;
    }
    for (std::size_t j = 0; j < sys.rows.size(); ++j) {
        for (std::size_t k = 0; k < d; ++k) cone(k, n + j) = sys.rows[j][k];
        primary[n + j] = -sys.offsets[j];
    }

    auto ray = extreme_ray_support_lex(cone, {primary, secondary});
    if (!ray) throw Error(ErrorCode::CoverPrecondViolated, "half-spaces do not cover the polyhedron");

    std::vector<std::size_t> cover;
    for (auto idx : ray->support)
        if (idx < n) cover.push_back(idx);

    stats.helly_max_support = std::max(stats.helly_max_support, cover.size());
    if (cover.size() > d + 1) {
        ++stats.helly_oversize;
        throw Error(ErrorCode::CoverPrecondViolated, "cover larger than dim + 1");
    }
    Polyhedron rest = c;
    for (auto i : cover) rest.gt(-halfspaces[i].normal, Rational(-halfspaces[i].offset));
    if (is_feasible(rest)) {
        ++stats.helly_verify_failures;
        throw Error(ErrorCode::CoverPrecondViolated, "cover verification LP found an uncovered point");
    }
    return cover;
}

} // namespace relucert
