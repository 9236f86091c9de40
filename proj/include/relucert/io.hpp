#pragma once

// Instance files and verdict reports.
//
// Text instances:
//
//   relu-cert v1
//   kind: layer
//   rows: 2
//   cols: 1
//   1
//   -1
//   bias: -1 1
//
// '#' starts a comment; blank lines are ignored. Other kinds:
//   network       layers: L, then L matrix sections with bias lines
//   zonotope-pair section: inner / section: outer, each a matrix without bias
//   verification  threshold: t, section: network (as above),
//                 section: domain (matrix of normals, bias: offsets,
//                 optional relations: ge|eq per row; rows mean n.x + c >= 0)
//   graph         node count, then "u v w" lines
//   digraph       node count, then "u v" lines
//   hypergraph    node count, then "u v w" lines
// Node numbers in files start at 1.
//
// The object variant is a JSON document with the same content; see
// to_object() for its keys.

#include <fstream>
#include <iterator>
#include <sstream>
#include <string>
#include <variant>

#include <json.hpp>

#include "relucert/reductions.hpp"
#include "relucert/verification.hpp"
#include "relucert/zonotope.hpp"

namespace relucert {

struct ZonotopePair {
    Zonotope inner;
    Zonotope outer;
    friend bool operator==(const ZonotopePair&, const ZonotopePair&) = default;
};

/// Is f(x) <= threshold on the domain? f is a two-layer scalar network.
struct VerificationInstance {
    LayeredNetwork network;
    Polyhedron domain;
    Rational threshold;
    friend bool operator==(const VerificationInstance&, const VerificationInstance&) = default;
};

using InstancePayload = std::variant<ReluLayer, LayeredNetwork, ZonotopePair, WeightedGraph, Digraph, Hypergraph3, VerificationInstance>;

inline constexpr const char* kind_names[] = {"layer", "network", "zonotope-pair", "graph", "digraph", "hypergraph", "verification"};

struct InstanceFile {
    int version = 1;
    InstancePayload payload;

    std::string kind() const { return kind_names[payload.index()]; }
    friend bool operator==(const InstanceFile&, const InstanceFile&) = default;
};

namespace detail {

struct Token {
    std::string text;
    std::size_t column;
};

struct Line {
    std::size_t number = 0;
    std::vector<Token> tokens;
};

class TextReader {
public:
    explicit TextReader(const std::string& text)
    {
        std::istringstream in(text);
        std::string raw;
        std::size_t number = 0;
        while (std::getline(in, raw)) {
            ++number;
            if (auto hash = raw.find('#'); hash != std::string::npos) raw.resize(hash);
            Line line{number, {}};
            std::size_t i = 0;
            while (i < raw.size()) {
                while (i < raw.size() && std::isspace(static_cast<unsigned char>(raw[i]))) ++i;
                std::size_t start = i;
                while (i < raw.size() && !std::isspace(static_cast<unsigned char>(raw[i]))) ++i;
                if (i > start) line.tokens.push_back({raw.substr(start, i - start), start + 1});
            }
            if (!line.tokens.empty()) lines_.push_back(std::move(line));
        }
        last_line_ = number;
    }

    bool done() const { return pos_ == lines_.size(); }

    const Line& next()
    {
        if (done()) throw ParseError(last_line_ + 1, 1, "unexpected end of input");
        return lines_[pos_++];
    }

    const Line& peek() const
    {
        if (done()) throw ParseError(last_line_ + 1, 1, "unexpected end of input");
        return lines_[pos_];
    }

    /// "key: v1 v2 ..." ; returns the value tokens.
    std::vector<Token> keyed(const std::string& key)
    {
        const Line& line = next();
        if (line.tokens.front().text != key + ":")
            throw ParseError(line.number, line.tokens.front().column, "expected '" + key + ":'");
        current_ = line.number;
        return {line.tokens.begin() + 1, line.tokens.end()};
    }

    Token one(const std::string& key)
    {
        auto toks = keyed(key);
        if (toks.size() != 1) throw ParseError(current_, toks.empty() ? 1 : toks[0].column, "expected exactly one value after '" + key + ":'");
        return toks[0];
    }

    std::string single(const std::string& key)
    {
        return one(key).text;
    }

    std::size_t current_line() const { return current_; }
    void set_current(std::size_t l) { current_ = l; }

private:
    std::vector<Line> lines_;
    std::size_t pos_ = 0;
    std::size_t last_line_ = 0;
    std::size_t current_ = 0;
};

inline Rational rational_token(const Token& t, std::size_t line)
{
    auto q = parse_rational(t.text);
    if (!q) throw ParseError(line, t.column, "not an exact rational: '" + t.text + "'");
    return *q;
}

inline std::size_t count_token(const Token& t, std::size_t line)
{
    if (t.text.empty() || !std::all_of(t.text.begin(), t.text.end(), [](char c) { return c >= '0' && c <= '9'; }) || t.text.size() > 9)
        throw ParseError(line, t.column, "expected a nonnegative integer: '" + t.text + "'");
    return std::stoul(t.text);
}

inline Integer integer_token(const Token& t, std::size_t line)
{
    auto q = parse_rational(t.text);
    if (!q || q->get_den() != 1) throw ParseError(line, t.column, "expected an integer: '" + t.text + "'");
    return q->get_num();
}

struct MatrixSection {
    Matrix matrix;
    Vector bias;
    std::vector<Relation> relations;
};

inline MatrixSection read_matrix(TextReader& r, bool with_bias, bool with_relations = false)
{
    std::size_t rows = count_token(r.one("rows"), r.current_line());
    std::size_t cols = count_token(r.one("cols"), r.current_line());
    MatrixSection s{Matrix(rows, cols), {}, {}};
    for (std::size_t i = 0; i < rows; ++i) {
        const Line& line = r.next();
        if (line.tokens.front().text.back() == ':')
            throw ParseError(line.number, 1, "matrix has fewer rows than declared");
        if (line.tokens.size() != cols) {
            std::size_t col = line.tokens.size() > cols ? line.tokens[cols].column : line.tokens.back().column;
            throw ParseError(line.number, col,
                             "row has " + std::to_string(line.tokens.size()) + " entries, expected " + std::to_string(cols));
        }
        for (std::size_t j = 0; j < cols; ++j) s.matrix(i, j) = rational_token(line.tokens[j], line.number);
    }
    if (with_bias) {
        auto b = r.keyed("bias");
        if (b.size() != rows)
            throw ParseError(r.current_line(), 1, "bias has " + std::to_string(b.size()) + " entries, expected " + std::to_string(rows));
        for (const auto& t : b) s.bias.push_back(rational_token(t, r.current_line()));
    }
    if (with_relations) {
        s.relations.assign(rows, Relation::GE);
        if (!r.done() && r.peek().tokens.front().text == "relations:") {
            auto rel = r.keyed("relations");
            if (rel.size() != rows) throw ParseError(r.current_line(), 1, "relations count differs from rows");
            for (std::size_t i = 0; i < rows; ++i) {
                if (rel[i].text == "ge") s.relations[i] = Relation::GE;
                else if (rel[i].text == "eq") s.relations[i] = Relation::EQ;
                else throw ParseError(r.current_line(), rel[i].column, "relation must be 'ge' or 'eq'");
            }
        }
    }
    return s;
}

inline LayeredNetwork read_network(TextReader& r)
{
    std::size_t layers = count_token(r.one("layers"), r.current_line());
    if (layers == 0) throw ParseError(r.current_line(), 1, "network needs at least one layer");
    std::vector<AffineLayer> ls;
    for (std::size_t i = 0; i < layers; ++i) {
        auto s = read_matrix(r, true);
        ls.push_back({std::move(s.matrix), std::move(s.bias)});
    }
    return LayeredNetwork(std::move(ls));
}

inline void expect_section(TextReader& r, const std::string& name)
{
    auto toks = r.keyed("section");
    if (toks.size() != 1 || toks[0].text != name)
        throw ParseError(r.current_line(), toks.empty() ? 1 : toks[0].column, "expected 'section: " + name + "'");
}

inline std::size_t node_token(const Token& t, std::size_t line, std::size_t n)
{
    std::size_t v = count_token(t, line);
    if (v < 1 || v > n) throw ParseError(line, t.column, "node " + t.text + " outside 1.." + std::to_string(n));
    return v - 1;
}

template <class F>
void read_tuples(TextReader& r, std::size_t arity, F f)
{
    while (!r.done()) {
        const Line& line = r.next();
        if (line.tokens.size() != arity)
            throw ParseError(line.number, line.tokens.back().column, "expected " + std::to_string(arity) + " entries per line");
        f(line);
    }
}

inline void rethrow_invalid(const Error& e, std::size_t line)
{
    if (e.code() == ErrorCode::InvalidArgument) throw ParseError(line, 1, e.what());
    throw;
}

} // namespace detail

inline InstanceFile parse_text(const std::string& text)
{
    detail::TextReader r(text);
    {
        const auto& head = r.next();
        if (head.tokens.size() != 2 || head.tokens[0].text != "relu-cert" || head.tokens[1].text != "v1")
            throw ParseError(head.number, 1, "expected header 'relu-cert v1'");
    }
    std::string kind = r.single("kind");
    std::size_t kind_line = r.current_line();
    InstanceFile f;
    try {
        if (kind == "layer") {
            auto s = detail::read_matrix(r, true);
            f.payload = ReluLayer(std::move(s.matrix), std::move(s.bias));
        } else if (kind == "network") {
            f.payload = detail::read_network(r);
        } else if (kind == "zonotope-pair") {
            detail::expect_section(r, "inner");
            Zonotope inner(detail::read_matrix(r, false).matrix);
            detail::expect_section(r, "outer");
            Zonotope outer(detail::read_matrix(r, false).matrix);
            if (inner.dim() != outer.dim()) throw Error(ErrorCode::DimensionMismatch, "inner and outer zonotopes differ in dimension");
            f.payload = ZonotopePair{std::move(inner), std::move(outer)};
        } else if (kind == "verification") {
            Rational t = detail::rational_token(r.one("threshold"), r.current_line());
            detail::expect_section(r, "network");
            auto net = detail::read_network(r);
            detail::expect_section(r, "domain");
            auto s = detail::read_matrix(r, true, true);
            if (s.matrix.cols() != net.input_dim()) throw Error(ErrorCode::DimensionMismatch, "domain dimension differs from network input");
            Polyhedron p(s.matrix.cols());
            for (std::size_t i = 0; i < s.matrix.rows(); ++i) p.add({s.matrix.row_vector(i), s.bias[i], s.relations[i]});
            f.payload = VerificationInstance{std::move(net), std::move(p), t};
        } else if (kind == "graph" || kind == "digraph" || kind == "hypergraph") {
            const auto& nl = r.next();
            if (nl.tokens.size() != 1) throw ParseError(nl.number, 1, "expected the node count on its own line");
            std::size_t n = detail::count_token(nl.tokens[0], nl.number);
            if (kind == "graph") {
                WeightedGraph g{n, {}};
                detail::read_tuples(r, 3, [&](const detail::Line& l) {
                    g.edges.push_back({detail::node_token(l.tokens[0], l.number, n), detail::node_token(l.tokens[1], l.number, n),
                                       detail::integer_token(l.tokens[2], l.number)});
                    try {
                        g.validate();
                    } catch (const Error& e) {
                        detail::rethrow_invalid(e, l.number);
                    }
                });
                f.payload = std::move(g);
            } else if (kind == "digraph") {
                Digraph d{n, {}};
                detail::read_tuples(r, 2, [&](const detail::Line& l) {
                    d.arcs.push_back({detail::node_token(l.tokens[0], l.number, n), detail::node_token(l.tokens[1], l.number, n)});
                    try {
                        d.validate();
                    } catch (const Error& e) {
                        detail::rethrow_invalid(e, l.number);
                    }
                });
                f.payload = std::move(d);
            } else {
                Hypergraph3 h{n, {}};
                detail::read_tuples(r, 3, [&](const detail::Line& l) {
                    h.edges.push_back({detail::node_token(l.tokens[0], l.number, n), detail::node_token(l.tokens[1], l.number, n),
                                       detail::node_token(l.tokens[2], l.number, n)});
                    try {
                        h.validate();
                    } catch (const Error& e) {
                        detail::rethrow_invalid(e, l.number);
                    }
                });
                f.payload = std::move(h);
            }
        } else {
            throw ParseError(kind_line, 7, "unknown kind '" + kind + "'");
        }
    } catch (const ParseError&) {
        throw;
    } catch (const Error& e) {
        if (e.code() == ErrorCode::DimensionMismatch) throw;
        throw ParseError(r.current_line(), 1, e.what());
    }
    if (!r.done()) {
        const auto& extra = r.peek();
        throw ParseError(extra.number, extra.tokens.front().column, "unexpected trailing content");
    }
    return f;
}

namespace detail {

inline void write_matrix(std::ostream& os, const Matrix& m, const Vector* bias)
{
    os << "rows: " << m.rows() << "\ncols: " << m.cols() << "\n";
    for (std::size_t i = 0; i < m.rows(); ++i) {
        for (std::size_t j = 0; j < m.cols(); ++j) os << (j ? " " : "") << to_string(m(i, j));
        os << "\n";
    }
    if (bias) {
        os << "bias:";
        for (const auto& q : *bias) os << " " << to_string(q);
        os << "\n";
    }
}

inline void write_network(std::ostream& os, const LayeredNetwork& net)
{
    os << "layers: " << net.layers.size() << "\n";
    for (const auto& l : net.layers) write_matrix(os, l.weights, &l.bias);
}

} // namespace detail

inline std::string emit_text(const InstanceFile& f)
{
    std::ostringstream os;
    os << "relu-cert v1\nkind: " << f.kind() << "\n";
    std::visit(
        [&](const auto& p) {
            using T = std::decay_t<decltype(p)>;
            if constexpr (std::is_same_v<T, ReluLayer>) {
                detail::write_matrix(os, p.weights, &p.bias);
            } else if constexpr (std::is_same_v<T, LayeredNetwork>) {
                detail::write_network(os, p);
            } else if constexpr (std::is_same_v<T, ZonotopePair>) {
                os << "section: inner\n";
                detail::write_matrix(os, p.inner.generators, nullptr);
                os << "section: outer\n";
                detail::write_matrix(os, p.outer.generators, nullptr);
            } else if constexpr (std::is_same_v<T, VerificationInstance>) {
                os << "threshold: " << to_string(p.threshold) << "\nsection: network\n";
                detail::write_network(os, p.network);
                os << "section: domain\n";
                Matrix m(p.domain.constraints.size(), p.domain.dim);
                Vector offsets;
                bool any_eq = false;
                for (std::size_t i = 0; i < m.rows(); ++i) {
                    const auto& c = p.domain.constraints[i];
                    for (std::size_t j = 0; j < m.cols(); ++j) m(i, j) = c.normal[j];
                    offsets.push_back(c.offset);
                    any_eq = any_eq || c.relation == Relation::EQ;
                }
                detail::write_matrix(os, m, &offsets);
                if (any_eq) {
                    os << "relations:";
                    for (const auto& c : p.domain.constraints) os << (c.relation == Relation::EQ ? " eq" : " ge");
                    os << "\n";
                }
            } else if constexpr (std::is_same_v<T, WeightedGraph>) {
                os << p.nodes << "\n";
                for (const auto& e : p.edges) os << e.u + 1 << " " << e.v + 1 << " " << e.weight.get_str() << "\n";
            } else if constexpr (std::is_same_v<T, Digraph>) {
                os << p.nodes << "\n";
                for (const auto& [u, v] : p.arcs) os << u + 1 << " " << v + 1 << "\n";
            } else if constexpr (std::is_same_v<T, Hypergraph3>) {
                os << p.nodes << "\n";
                for (const auto& e : p.edges) os << e[0] + 1 << " " << e[1] + 1 << " " << e[2] + 1 << "\n";
            }
        },
        f.payload);
    return os.str();
}

// ---------------------------------------------------------------------------
// Object notation

using Json = nlohmann::ordered_json;

namespace detail {

inline Json rationals_json(std::span<const Rational> v)
{
    Json a = Json::array();
    for (const auto& q : v) a.push_back(to_string(q));
    return a;
}

inline Json matrix_json(const Matrix& m)
{
    Json rows = Json::array();
    for (std::size_t i = 0; i < m.rows(); ++i) rows.push_back(rationals_json(m.row(i)));
    return {{"rows", m.rows()}, {"cols", m.cols()}, {"data", rows}};
}

inline Json network_json(const LayeredNetwork& net)
{
    Json layers = Json::array();
    for (const auto& l : net.layers) layers.push_back({{"weights", matrix_json(l.weights)}, {"bias", rationals_json(l.bias)}});
    return {{"layers", layers}};
}

[[noreturn]] inline void object_error(const std::string& what) { throw ParseError(1, 1, "object notation: " + what); }

inline const Json& field(const Json& j, const char* key)
{
    if (!j.is_object() || !j.contains(key)) object_error(std::string("missing key '") + key + "'");
    return j.at(key);
}

inline Rational rational_json(const Json& j)
{
    if (j.is_number_integer()) return Rational(Integer(j.dump(), 10));
    if (!j.is_string()) object_error("rationals must be strings or integers, got " + j.dump());
    auto q = parse_rational(j.get<std::string>());
    if (!q) object_error("not an exact rational: '" + j.get<std::string>() + "'");
    return *q;
}

inline std::size_t count_json(const Json& j)
{
    if (!j.is_number_unsigned()) object_error("expected a nonnegative integer, got " + j.dump());
    return j.get<std::size_t>();
}

inline Vector vector_json(const Json& j)
{
    if (!j.is_array()) object_error("expected an array of rationals");
    Vector v;
    for (const auto& x : j) v.push_back(rational_json(x));
    return v;
}

inline Matrix matrix_from_json(const Json& j)
{
    std::size_t rows = count_json(field(j, "rows")), cols = count_json(field(j, "cols"));
    const Json& data = field(j, "data");
    if (!data.is_array() || data.size() != rows) object_error("matrix data has wrong row count");
    Matrix m(rows, cols);
    for (std::size_t i = 0; i < rows; ++i) {
        Vector r = vector_json(data[i]);
        if (r.size() != cols) object_error("matrix row " + std::to_string(i + 1) + " has " + std::to_string(r.size()) + " entries");
        for (std::size_t k = 0; k < cols; ++k) m(i, k) = r[k];
    }
    return m;
}

inline LayeredNetwork network_from_json(const Json& j)
{
    const Json& layers = field(j, "layers");
    if (!layers.is_array() || layers.empty()) object_error("network needs a nonempty 'layers' array");
    std::vector<AffineLayer> ls;
    for (const auto& l : layers) {
        Matrix w = matrix_from_json(field(l, "weights"));
        Vector b = vector_json(field(l, "bias"));
        if (b.size() != w.rows()) object_error("bias length differs from layer rows");
        ls.push_back({std::move(w), std::move(b)});
    }
    return LayeredNetwork(std::move(ls));
}

inline std::size_t node_json(const Json& j, std::size_t n)
{
    std::size_t v = count_json(j);
    if (v < 1 || v > n) object_error("node " + j.dump() + " outside 1.." + std::to_string(n));
    return v - 1;
}

inline std::size_t byte_to_line(const std::string& text, std::size_t byte, std::size_t& column)
{
    std::size_t line = 1;
    column = 1;
    for (std::size_t i = 0; i < byte && i < text.size(); ++i) {
        if (text[i] == '\n') {
            ++line;
            column = 1;
        } else {
            ++column;
        }
    }
    return line;
}

} // namespace detail

inline Json to_object(const InstanceFile& f)
{
    Json j{{"format", "relu-cert"}, {"version", f.version}, {"kind", f.kind()}};
    std::visit(
        [&](const auto& p) {
            using T = std::decay_t<decltype(p)>;
            if constexpr (std::is_same_v<T, ReluLayer>) {
                j["weights"] = detail::matrix_json(p.weights);
                j["bias"] = detail::rationals_json(p.bias);
            } else if constexpr (std::is_same_v<T, LayeredNetwork>) {
                j["network"] = detail::network_json(p);
            } else if constexpr (std::is_same_v<T, ZonotopePair>) {
                j["inner"] = detail::matrix_json(p.inner.generators);
                j["outer"] = detail::matrix_json(p.outer.generators);
            } else if constexpr (std::is_same_v<T, VerificationInstance>) {
                j["threshold"] = to_string(p.threshold);
                j["network"] = detail::network_json(p.network);
                Json rows = Json::array();
                for (const auto& c : p.domain.constraints)
                    rows.push_back({{"normal", detail::rationals_json(c.normal)},
                                    {"offset", to_string(c.offset)},
                                    {"relation", c.relation == Relation::EQ ? "eq" : "ge"}});
                j["domain"] = {{"dim", p.domain.dim}, {"constraints", rows}};
            } else if constexpr (std::is_same_v<T, WeightedGraph>) {
                j["nodes"] = p.nodes;
                Json e = Json::array();
                for (const auto& x : p.edges) e.push_back({x.u + 1, x.v + 1, x.weight.get_str()});
                j["edges"] = e;
            } else if constexpr (std::is_same_v<T, Digraph>) {
                j["nodes"] = p.nodes;
                Json a = Json::array();
                for (const auto& [u, v] : p.arcs) a.push_back({u + 1, v + 1});
                j["arcs"] = a;
            } else if constexpr (std::is_same_v<T, Hypergraph3>) {
                j["nodes"] = p.nodes;
                Json e = Json::array();
                for (const auto& x : p.edges) e.push_back({x[0] + 1, x[1] + 1, x[2] + 1});
                j["edges"] = e;
            }
        },
        f.payload);
    return j;
}

inline std::string emit_object(const InstanceFile& f) { return to_object(f).dump(2) + "\n"; }

inline InstanceFile parse_object(const std::string& text)
{
    Json j;
    try {
        j = Json::parse(text);
    } catch (const nlohmann::json::parse_error& e) {
        std::size_t col = 1;
        std::size_t line = detail::byte_to_line(text, e.byte == 0 ? 0 : e.byte - 1, col);
        throw ParseError(line, col, "malformed object notation");
    }
    if (!j.is_object() || j.value("format", "") != "relu-cert") detail::object_error("expected \"format\": \"relu-cert\"");
    if (!j.contains("version") || j["version"] != 1) detail::object_error("unsupported version");
    const Json& kj = detail::field(j, "kind");
    if (!kj.is_string()) detail::object_error("kind must be a string");
    std::string kind = kj.get<std::string>();
    InstanceFile f;
    try {
        if (kind == "layer") {
            Matrix w = detail::matrix_from_json(detail::field(j, "weights"));
            f.payload = ReluLayer(std::move(w), detail::vector_json(detail::field(j, "bias")));
        } else if (kind == "network") {
            f.payload = detail::network_from_json(detail::field(j, "network"));
        } else if (kind == "zonotope-pair") {
            Zonotope inner(detail::matrix_from_json(detail::field(j, "inner")));
            Zonotope outer(detail::matrix_from_json(detail::field(j, "outer")));
            if (inner.dim() != outer.dim()) throw Error(ErrorCode::DimensionMismatch, "inner and outer zonotopes differ in dimension");
            f.payload = ZonotopePair{std::move(inner), std::move(outer)};
        } else if (kind == "verification") {
            auto net = detail::network_from_json(detail::field(j, "network"));
            const Json& dom = detail::field(j, "domain");
            Polyhedron p(detail::count_json(detail::field(dom, "dim")));
            if (p.dim != net.input_dim()) throw Error(ErrorCode::DimensionMismatch, "domain dimension differs from network input");
            for (const auto& c : detail::field(dom, "constraints")) {
                Vector n = detail::vector_json(detail::field(c, "normal"));
                if (n.size() != p.dim) detail::object_error("constraint normal has wrong dimension");
                std::string rel = c.value("relation", "ge");
                if (rel != "ge" && rel != "eq") detail::object_error("relation must be 'ge' or 'eq'");
                p.add({std::move(n), detail::rational_json(detail::field(c, "offset")), rel == "eq" ? Relation::EQ : Relation::GE});
            }
            f.payload = VerificationInstance{std::move(net), std::move(p), detail::rational_json(detail::field(j, "threshold"))};
        } else if (kind == "graph") {
            WeightedGraph g{detail::count_json(detail::field(j, "nodes")), {}};
            for (const auto& e : detail::field(j, "edges")) {
                if (!e.is_array() || e.size() != 3) detail::object_error("edges are [u, v, weight] triples");
                Rational w = detail::rational_json(e[2]);
                if (w.get_den() != 1) detail::object_error("edge weights must be integers");
                g.edges.push_back({detail::node_json(e[0], g.nodes), detail::node_json(e[1], g.nodes), w.get_num()});
            }
            g.validate();
            f.payload = std::move(g);
        } else if (kind == "digraph") {
            Digraph d{detail::count_json(detail::field(j, "nodes")), {}};
            for (const auto& a : detail::field(j, "arcs")) {
                if (!a.is_array() || a.size() != 2) detail::object_error("arcs are [u, v] pairs");
                d.arcs.push_back({detail::node_json(a[0], d.nodes), detail::node_json(a[1], d.nodes)});
            }
            d.validate();
            f.payload = std::move(d);
        } else if (kind == "hypergraph") {
            Hypergraph3 h{detail::count_json(detail::field(j, "nodes")), {}};
            for (const auto& e : detail::field(j, "edges")) {
                if (!e.is_array() || e.size() != 3) detail::object_error("hyperedges are [u, v, w] triples");
                h.edges.push_back({detail::node_json(e[0], h.nodes), detail::node_json(e[1], h.nodes), detail::node_json(e[2], h.nodes)});
            }
            h.validate();
            f.payload = std::move(h);
        } else {
            detail::object_error("unknown kind '" + kind + "'");
        }
    } catch (const ParseError&) {
        throw;
    } catch (const Error& e) {
        if (e.code() == ErrorCode::DimensionMismatch) throw;
        detail::object_error(e.what());
    }
    return f;
}

/// Picks the variant by the first non-blank character.
inline InstanceFile parse_instance(const std::string& text)
{
    auto first = text.find_first_not_of(" \t\r\n");
    if (first != std::string::npos && text[first] == '{') return parse_object(text);
    return parse_text(text);
}

inline InstanceFile parse_instance(std::istream& in)
{
    std::string text((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
    return parse_instance(text);
}

inline InstanceFile load_instance(const std::string& path)
{
    std::ifstream in(path);
    if (!in) throw Error(ErrorCode::InvalidArgument, "cannot open '" + path + "'");
    return parse_instance(in);
}

// ---------------------------------------------------------------------------
// Reports

/// Ordered key/value report; `answer` is absent for generator commands.
struct Report {
    std::string problem;
    std::optional<bool> answer;
    std::vector<std::pair<std::string, std::string>> fields;

    void add(std::string key, std::string value) { fields.emplace_back(std::move(key), std::move(value)); }

    void add_point(const std::string& key, std::span<const Rational> p)
    {
        std::string exact, approx;
        for (std::size_t i = 0; i < p.size(); ++i) {
            exact += (i ? " " : "") + to_string(p[i]);
            approx += (i ? " " : "") + to_decimal(p[i]);
        }
        add(key, exact);
        add(key + ".approx", approx);
    }
};

inline std::string join_indices(const std::vector<std::size_t>& idx, std::size_t base = 1)
{
    std::string s;
    for (std::size_t i = 0; i < idx.size(); ++i) s += (i ? " " : "") + std::to_string(idx[i] + base);
    return s;
}

inline std::string emit_report_text(const Report& r)
{
    std::ostringstream os;
    os << "relu-cert-report v1\nproblem: " << r.problem << "\n";
    if (r.answer) os << "answer: " << (*r.answer ? "yes" : "no") << "\n";
    for (const auto& [k, v] : r.fields) os << k << ": " << v << "\n";
    return os.str();
}

inline std::string emit_report_object(const Report& r)
{
    Json j{{"report", "relu-cert-report"}, {"version", 1}, {"problem", r.problem}};
    if (r.answer) j["answer"] = *r.answer;
    Json fields = Json::object();
    for (const auto& [k, v] : r.fields) fields[k] = v;
    j["fields"] = fields;
    return j.dump(2) + "\n";
}

} // namespace relucert
