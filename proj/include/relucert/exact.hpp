#pragma once

// Exact rational scalars, vectors and matrices, plus the linear-algebra
// kernels (rank, kernel, span membership, solves) every other header uses.
//
// Scalars are GMP rationals. mpq_class keeps values in canonical form after
// each arithmetic operation, so equality is structural.

#include <gmpxx.h>

#include <algorithm>
#include <cstddef>
#include <optional>
#include <ostream>
#include <span>
#include <sstream>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "relucert/error.hpp"

namespace relucert {

using Rational = mpq_class;
using Integer = mpz_class;
using Vector = std::vector<Rational>;

/// Dense row-major rational matrix.
class Matrix {
public:
    Matrix() = default;
    Matrix(std::size_t rows, std::size_t cols) : rows_(rows), cols_(cols), data_(rows * cols) {}

    /// Builds a matrix from a list of equally long rows. `cols` is needed
    /// only when `rows` is empty.
    static Matrix from_rows(const std::vector<Vector>& rows, std::size_t cols = 0)
    {
        if (!rows.empty()) cols = rows.front().size();
        Matrix m(rows.size(), cols);
        for (std::size_t i = 0; i < rows.size(); ++i) {
            if (rows[i].size() != cols)
                throw Error(ErrorCode::DimensionMismatch, "ragged matrix rows");
            std::copy(rows[i].begin(), rows[i].end(), m.data_.begin() + i * cols);
        }
        return m;
    }

    static Matrix identity(std::size_t n)
    {
        Matrix m(n, n);
        for (std::size_t i = 0; i < n; ++i) m(i, i) = 1;
        return m;
    }

    std::size_t rows() const { return rows_; }
    std::size_t cols() const { return cols_; }
    bool empty() const { return rows_ == 0; }

    Rational& operator()(std::size_t i, std::size_t j) { return data_[i * cols_ + j]; }
    const Rational& operator()(std::size_t i, std::size_t j) const { return data_[i * cols_ + j]; }

    std::span<const Rational> row(std::size_t i) const { return {data_.data() + i * cols_, cols_}; }
    std::span<Rational> row(std::size_t i) { return {data_.data() + i * cols_, cols_}; }

    Vector row_vector(std::size_t i) const { return Vector(row(i).begin(), row(i).end()); }

    std::vector<Vector> row_list() const
    {
        std::vector<Vector> out;
        out.reserve(rows_);
        for (std::size_t i = 0; i < rows_; ++i) out.push_back(row_vector(i));
        return out;
    }

    void append_row(std::span<const Rational> r)
    {
        if (rows_ == 0 && cols_ == 0) cols_ = r.size();
        if (r.size() != cols_) throw Error(ErrorCode::DimensionMismatch, "appended row has wrong width");
        data_.insert(data_.end(), r.begin(), r.end());
        ++rows_;
    }

    Matrix transpose() const
    {
        Matrix t(cols_, rows_);
        for (std::size_t i = 0; i < rows_; ++i)
            for (std::size_t j = 0; j < cols_; ++j) t(j, i) = (*this)(i, j);
        return t;
    }

    /// Rows selected by `indices`, in the given order.
    Matrix select_rows(std::span<const std::size_t> indices) const
    {
        Matrix m(indices.size(), cols_);
        for (std::size_t k = 0; k < indices.size(); ++k)
            std::copy(row(indices[k]).begin(), row(indices[k]).end(), m.row(k).begin());
        return m;
    }

    friend bool operator==(const Matrix& a, const Matrix& b)
    {
        return a.rows_ == b.rows_ && a.cols_ == b.cols_ && a.data_ == b.data_;
    }

private:
    std::size_t rows_ = 0;
    std::size_t cols_ = 0;
    std::vector<Rational> data_;
};

// ---------------------------------------------------------------------------
// Scalars

inline int sign(const Rational& q) { return sgn(q); }

/// Parses "p/q", an integer, or a plain decimal such as "-12.375".
/// Exponent notation is rejected: all input must be exact decimal or
/// fraction text.
inline std::optional<Rational> parse_rational(std::string_view text)
{
    if (text.empty()) return std::nullopt;
    auto is_digits = [](std::string_view s) {
        return !s.empty() && std::all_of(s.begin(), s.end(), [](char c) { return c >= '0' && c <= '9'; });
    };
    std::string_view body = text;
    bool negative = false;
    if (body.front() == '+' || body.front() == '-') {
        negative = body.front() == '-';
        body.remove_prefix(1);
    }
    if (body.empty()) return std::nullopt;

    Rational result;
    if (auto slash = body.find('/'); slash != std::string_view::npos) {
        auto num = body.substr(0, slash);
        auto den = body.substr(slash + 1);
        if (!is_digits(num) || !is_digits(den)) return std::nullopt;
        Integer d(std::string(den), 10);
        if (d == 0) return std::nullopt;
        result = Rational(Integer(std::string(num), 10), d);
        result.canonicalize();
    } else if (auto dot = body.find('.'); dot != std::string_view::npos) {
        auto whole = body.substr(0, dot);
        auto frac = body.substr(dot + 1);
        if ((!whole.empty() && !is_digits(whole)) || (!frac.empty() && !is_digits(frac))) return std::nullopt;
        if (whole.empty() && frac.empty()) return std::nullopt;
        Integer scale;
        mpz_ui_pow_ui(scale.get_mpz_t(), 10, frac.size());
        Integer digits(std::string(whole.empty() ? "0" : whole) + std::string(frac), 10);
        result = Rational(digits, scale);
        result.canonicalize();
    } else {
        if (!is_digits(body)) return std::nullopt;
        result = Rational(Integer(std::string(body), 10));
    }
    if (negative) result = -result;
    return result;
}

inline std::string to_string(const Rational& q) { return q.get_str(); }

/// Decimal rendering for human reading only; never parsed back.
inline std::string to_decimal(const Rational& q, int digits = 6)
{
    std::ostringstream os;
    os.precision(digits);
    os << q.get_d();
    return os.str();
}

// ---------------------------------------------------------------------------
// Vectors

inline Rational dot(std::span<const Rational> a, std::span<const Rational> b)
{
    if (a.size() != b.size()) throw Error(ErrorCode::DimensionMismatch, "dot product of unequal lengths");
    Rational s = 0;
    for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
    return s;
}

inline bool is_zero(std::span<const Rational> v)
{
    return std::all_of(v.begin(), v.end(), [](const Rational& q) { return q == 0; });
}

inline Vector operator+(const Vector& a, const Vector& b)
{
    if (a.size() != b.size()) throw Error(ErrorCode::DimensionMismatch, "vector sum of unequal lengths");
    Vector r(a.size());
    for (std::size_t i = 0; i < a.size(); ++i) r[i] = a[i] + b[i];
    return r;
}

inline Vector operator-(const Vector& a, const Vector& b)
{
    if (a.size() != b.size()) throw Error(ErrorCode::DimensionMismatch, "vector difference of unequal lengths");
    Vector r(a.size());
    for (std::size_t i = 0; i < a.size(); ++i) r[i] = a[i] - b[i];
    return r;
}

inline Vector operator-(const Vector& a)
{
    Vector r(a.size());
    for (std::size_t i = 0; i < a.size(); ++i) r[i] = -a[i];
    return r;
}

inline Vector operator*(const Rational& s, const Vector& a)
{
    Vector r(a.size());
    for (std::size_t i = 0; i < a.size(); ++i) r[i] = s * a[i];
    return r;
}

inline Vector unit_vector(std::size_t dim, std::size_t k)
{
    Vector e(dim, Rational(0));
    e[k] = 1;
    return e;
}

/// Positive rescaling of a nonzero vector to coprime integer entries.
/// The zero vector is returned unchanged.
inline Vector primitive(const Vector& v)
{
    Integer den_lcm = 1;
    for (const auto& q : v)
        if (q != 0) mpz_lcm(den_lcm.get_mpz_t(), den_lcm.get_mpz_t(), q.get_den_mpz_t());
    Integer num_gcd = 0;
    for (const auto& q : v) {
        if (q == 0) continue;
        Integer scaled = q.get_num() * (den_lcm / q.get_den());
        mpz_gcd(num_gcd.get_mpz_t(), num_gcd.get_mpz_t(), scaled.get_mpz_t());
    }
    if (num_gcd == 0) return v;
    Vector out(v.size());
    for (std::size_t i = 0; i < v.size(); ++i) {
        Rational scaled = v[i] * Rational(den_lcm) / Rational(num_gcd);
        out[i] = scaled;
    }
    return out;
}

// ---------------------------------------------------------------------------
// Matrix products

inline Vector multiply(const Matrix& m, std::span<const Rational> x)
{
    if (m.cols() != x.size()) throw Error(ErrorCode::DimensionMismatch, "matrix-vector width mismatch");
    Vector y(m.rows());
    for (std::size_t i = 0; i < m.rows(); ++i) y[i] = dot(m.row(i), x);
    return y;
}

inline Matrix multiply(const Matrix& a, const Matrix& b)
{
    if (a.cols() != b.rows()) throw Error(ErrorCode::DimensionMismatch, "matrix product shape mismatch");
    Matrix c(a.rows(), b.cols());
    for (std::size_t i = 0; i < a.rows(); ++i)
        for (std::size_t k = 0; k < a.cols(); ++k) {
            if (a(i, k) == 0) continue;
            for (std::size_t j = 0; j < b.cols(); ++j) c(i, j) += a(i, k) * b(k, j);
        }
    return c;
}

// ---------------------------------------------------------------------------
// Elimination kernels

namespace detail {

/// Rows scaled by the lcm of their denominators, so elimination can run
/// over the integers.
inline std::vector<std::vector<Integer>> integer_rows(const Matrix& m)
{
    std::vector<std::vector<Integer>> out(m.rows(), std::vector<Integer>(m.cols()));
    for (std::size_t i = 0; i < m.rows(); ++i) {
        Integer l = 1;
        for (const auto& q : m.row(i)) mpz_lcm(l.get_mpz_t(), l.get_mpz_t(), q.get_den_mpz_t());
        for (std::size_t j = 0; j < m.cols(); ++j) out[i][j] = m(i, j).get_num() * (l / m(i, j).get_den());
    }
    return out;
}

} // namespace detail

/// Exact rank by fraction-free (Bareiss) elimination. Every intermediate
/// entry is a minor of the integer-scaled input, so the division by the
/// previous pivot is exact.
inline std::size_t rank(const Matrix& m)
{
    auto a = detail::integer_rows(m);
    const std::size_t rows = m.rows();
    const std::size_t cols = m.cols();
    std::size_t r = 0;
    Integer prev = 1;
    for (std::size_t c = 0; c < cols && r < rows; ++c) {
        std::size_t p = r;
        while (p < rows && a[p][c] == 0) ++p;
        if (p == rows) continue;
        std::swap(a[p], a[r]);
        for (std::size_t i = r + 1; i < rows; ++i) {
            for (std::size_t j = c + 1; j < cols; ++j) {
                Integer t = a[r][c] * a[i][j] - a[i][c] * a[r][j];
                mpz_divexact(a[i][j].get_mpz_t(), t.get_mpz_t(), prev.get_mpz_t());
            }
            a[i][c] = 0;
        }
        prev = a[r][c];
        ++r;
    }
    return r;
}

inline std::size_t rank(const std::vector<Vector>& rows, std::size_t dim)
{
    return rank(Matrix::from_rows(rows, dim));
}

/// Reduced row echelon form over the rationals. Returns the pivot columns.
inline std::vector<std::size_t> reduce_to_rref(Matrix& a)
{
    std::vector<std::size_t> pivots;
    std::size_t r = 0;
    for (std::size_t c = 0; c < a.cols() && r < a.rows(); ++c) {
        std::size_t p = r;
        while (p < a.rows() && a(p, c) == 0) ++p;
        if (p == a.rows()) continue;
        if (p != r)
            for (std::size_t j = 0; j < a.cols(); ++j) std::swap(a(p, j), a(r, j));
        Rational inv = 1 / a(r, c);
        for (std::size_t j = c; j < a.cols(); ++j) a(r, j) *= inv;
        for (std::size_t i = 0; i < a.rows(); ++i) {
            if (i == r || a(i, c) == 0) continue;
            Rational f = a(i, c);
            for (std::size_t j = c; j < a.cols(); ++j) a(i, j) -= f * a(r, j);
        }
        pivots.push_back(c);
        ++r;
    }
    return pivots;
}

/// Basis of {x : Mx = 0}, each vector in coprime integer form. Empty iff
/// rank(M) = cols(M).
inline std::vector<Vector> kernel_basis(const Matrix& m)
{
    Matrix a = m;
    auto pivots = reduce_to_rref(a);
    std::vector<bool> is_pivot(m.cols(), false);
    for (auto c : pivots) is_pivot[c] = true;
    std::vector<Vector> basis;
    for (std::size_t free = 0; free < m.cols(); ++free) {
        if (is_pivot[free]) continue;
        Vector v(m.cols(), Rational(0));
        v[free] = 1;
        for (std::size_t k = 0; k < pivots.size(); ++k) v[pivots[k]] = -a(k, free);
        basis.push_back(primitive(v));
    }
    return basis;
}

/// True iff `v` is a rational combination of `span_rows`.
inline bool in_span(const Vector& v, const std::vector<Vector>& span_rows)
{
    for (const auto& s : span_rows)
        if (s.size() != v.size()) throw Error(ErrorCode::DimensionMismatch, "in_span dimension mismatch");
    if (is_zero(v)) return true;
    if (span_rows.empty()) return false;
    auto base = rank(span_rows, v.size());
    auto extended = span_rows;
    extended.push_back(v);
    return rank(extended, v.size()) == base;
}

/// Solves A X = B for square nonsingular A; empty optional if singular.
inline std::optional<Matrix> solve(const Matrix& a, const Matrix& b)
{
    if (a.rows() != a.cols() || b.rows() != a.rows())
        throw Error(ErrorCode::DimensionMismatch, "solve expects square A and matching B");
    const std::size_t n = a.rows();
    Matrix aug(n, n + b.cols());
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < n; ++j) aug(i, j) = a(i, j);
        for (std::size_t j = 0; j < b.cols(); ++j) aug(i, n + j) = b(i, j);
    }
    auto pivots = reduce_to_rref(aug);
    if (pivots.size() < n || pivots.back() != n - 1) {
        if (n != 0) return std::nullopt;
    }
    Matrix x(n, b.cols());
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < b.cols(); ++j) x(i, j) = aug(i, n + j);
    return x;
}

/// Basis of the row space, taken from the nonzero rows of the RREF.
inline std::vector<Vector> row_space_basis(const Matrix& m)
{
    Matrix a = m;
    auto pivots = reduce_to_rref(a);
    std::vector<Vector> out;
    for (std::size_t k = 0; k < pivots.size(); ++k) out.push_back(primitive(a.row_vector(k)));
    return out;
}

inline std::ostream& operator<<(std::ostream& os, const Vector& v)
{
    os << '(';
    for (std::size_t i = 0; i < v.size(); ++i) os << (i ? ", " : "") << v[i].get_str();
    return os << ')';
}

} // namespace relucert
