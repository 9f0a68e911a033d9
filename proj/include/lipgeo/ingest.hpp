#pragma once

#include "lipgeo/arc.hpp"
#include "lipgeo/link_model.hpp"
#include "lipgeo/numeric.hpp"

#include <cmath>
#include <fstream>
#include <istream>
#include <map>
#include <sstream>
#include <string>
#include <vector>

namespace lipgeo {

class IngestError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Named Puiseux arcs, ruled triangles between them, and the gluing order.
/// Consecutive triangles share one boundary arc; a cycle closes back onto
/// the first triangle.
struct GermSurface {
    std::vector<PuiseuxArc> arcs;
    std::vector<RuledTriangleSpec> triangles;  // in gluing order
    Topology gluing = Topology::Segment;

    const PuiseuxArc& arc(const std::string& name) const {
        for (auto& a : arcs)
            if (a.name == name) return a;
        throw IngestError("unknown arc " + name);
    }
};

namespace detail {

inline std::string trim(const std::string& s) {
    auto b = s.find_first_not_of(" \t\r");
    if (b == std::string::npos) return "";
    auto e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
}

inline bool germ_name(const std::string& s) {
    if (s.empty()) return false;
    for (char c : s)
        if (!(std::isalnum(static_cast<unsigned char>(c)) || c == '_')) return false;
    return true;
}

// Splits on commas at parenthesis depth zero.
inline std::vector<std::string> split_top(const std::string& s) {
    std::vector<std::string> out(1);
    int depth = 0;
    for (char c : s) {
        if (c == '(') ++depth;
        if (c == ')') --depth;
        if (c == ',' && depth == 0)
            out.emplace_back();
        else
            out.back() += c;
    }
    return out;
}

}  // namespace detail

inline GermSurface parse_germ(std::istream& in) {
    GermSurface s;
    std::map<std::string, RuledTriangleSpec> declared;
    std::vector<std::string> glue;
    bool have_glue = false;
    std::string raw;
    std::size_t line = 0;
    while (std::getline(in, raw)) {
        ++line;
        std::string text = detail::trim(raw.substr(0, raw.find('#')));
        if (text.empty()) continue;
        std::istringstream ls(text);
        std::string key;
        ls >> key;
        const std::size_t col = raw.find_first_not_of(" \t") + 1;
        if (key == "arc" || key == "triangle") {
            auto eq = text.find('=');
            if (eq == std::string::npos) throw ParseError("expected '='", line, col);
            std::string name = detail::trim(text.substr(key.size(), eq - key.size()));
            std::string rhs = detail::trim(text.substr(eq + 1));
            if (!detail::germ_name(name)) throw ParseError("bad name '" + name + "'", line, col);
            if (key == "arc") {
                for (auto& a : s.arcs)
                    if (a.name == name) throw ParseError("duplicate arc " + name, line, col);
                if (rhs.size() < 2 || rhs.front() != '(' || rhs.back() != ')')
                    throw ParseError("arc needs a parenthesized coordinate tuple", line, col);
                PuiseuxArc a{name, {}};
                for (auto& c : detail::split_top(rhs.substr(1, rhs.size() - 2))) a.coords.push_back(parse_series(c, line));
                if (!s.arcs.empty() && a.dim() != s.arcs.front().dim())
                    throw ParseError("arc " + name + " has a different ambient dimension", line, col);
                if (norm_order(a) != ExpQ(1))
                    throw ParseError("arc " + name + " is not parameterized by distance (|a(t)| ~ t^" +
                                         norm_order(a).str() + ")",
                                     line, col);
                s.arcs.push_back(std::move(a));
            } else {
                if (declared.count(name)) throw ParseError("duplicate triangle " + name, line, col);
                const std::string head = "ruled(";
                if (rhs.compare(0, head.size(), head) != 0 || rhs.back() != ')')
                    throw ParseError("triangle needs ruled(<arc>,<arc>)", line, col);
                auto parts = detail::split_top(rhs.substr(head.size(), rhs.size() - head.size() - 1));
                if (parts.size() != 2) throw ParseError("ruled() takes two arcs", line, col);
                RuledTriangleSpec t{name, detail::trim(parts[0]), detail::trim(parts[1])};
                for (auto* a : {&t.first, &t.second}) {
                    bool known = false;
                    for (auto& x : s.arcs) known |= x.name == *a;
                    if (!known) throw ParseError("unknown arc " + *a, line, col);
                }
                if (t.first == t.second) throw ParseError("triangle " + name + " has equal boundary arcs", line, col);
                declared[name] = t;
            }
        } else if (key == "glue") {
            if (have_glue) throw ParseError("duplicate glue line", line, col);
            have_glue = true;
            std::string mode, t;
            ls >> mode;
            if (mode == "chain")
                s.gluing = Topology::Segment;
            else if (mode == "cycle")
                s.gluing = Topology::Circular;
            else
                throw ParseError("glue mode must be chain or cycle", line, col);
            while (ls >> t) {
                if (!declared.count(t)) throw ParseError("unknown triangle " + t, line, col);
                for (auto& g : glue)
                    if (g == t) throw ParseError("triangle " + t + " glued twice", line, col);
                glue.push_back(t);
            }
            if (glue.empty()) throw ParseError("glue lists no triangles", line, col);
        } else {
            throw ParseError("unknown key '" + key + "'", line, col);
        }
    }
    if (!have_glue) throw ParseError("missing glue line", line, 1);
    if (glue.size() != declared.size()) throw ParseError("every triangle must be glued", line, 1);
    for (auto& t : glue) s.triangles.push_back(declared[t]);
    return s;
}

inline GermSurface parse_germ(const std::string& text) {
    std::istringstream in(text);
    return parse_germ(in);
}

inline GermSurface load_germ(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open " + path);
    return parse_germ(in);
}

/// Boundary arcs of each triangle, oriented along the gluing.
inline std::vector<std::pair<std::string, std::string>> oriented_triangles(const GermSurface& s) {
    std::vector<std::pair<std::string, std::string>> out;
    for (auto& t : s.triangles) out.push_back({t.first, t.second});
    const std::size_t n = out.size();
    auto has = [](const std::pair<std::string, std::string>& t, const std::string& a) {
        return t.first == a || t.second == a;
    };
    if (n >= 2 && !has(out[1], out[0].second)) std::swap(out[0].first, out[0].second);
    for (std::size_t i = 1; i < n; ++i) {
        const std::string& joint = out[i - 1].second;
        if (out[i].second == joint && out[i].first != joint) std::swap(out[i].first, out[i].second);
        if (out[i].first != joint)
            throw IngestError("triangles " + s.triangles[i - 1].name + " and " + s.triangles[i].name +
                              " share no boundary arc");
    }
    if (s.gluing == Topology::Circular && out.back().second != out.front().first)
        throw IngestError("cycle does not close");
    return out;
}

/// Checks a ruled triangle on a grid of ruling arcs: every pair of distinct
/// ruling arcs must have tord equal to the triangle exponent, and no ruling
/// arc may collapse faster than t.
inline void check_triangle(const PuiseuxArc& a, const PuiseuxArc& b, const std::string& name, int points = 33) {
    const ExpQ e = tord_arcs(a, b);
    std::vector<PuiseuxArc> ruling;
    for (int i = 0; i < points; ++i) ruling.push_back(ruling_arc(a, b, Coeff(i, points - 1)));
    for (auto& r : ruling)
        if (norm_order(r) != ExpQ(1)) throw IngestError("triangle " + name + " degenerates at the origin");
    for (int i = 0; i < points; ++i)
        for (int j = i + 1; j < points; ++j)
            if (tord_arcs(ruling[i], ruling[j]) != e) throw IngestError("triangle " + name + " is not normally embedded");
}

/// Pancakes are the triangles with internal exponent tord of their boundary
/// arcs. Contacts are added between marked arcs, highest tord first, until
/// the outer closure matches the symbolic tord of every pair.
inline LinkModel build_linkmodel(const GermSurface& s) {
    auto oriented = oriented_triangles(s);
    LinkModel m;
    m.topology = s.gluing;
    m.beta = ExpQ::inf();
    for (std::size_t i = 0; i < oriented.size(); ++i) {
        auto& [x, y] = oriented[i];
        check_triangle(s.arc(x), s.arc(y), s.triangles[i].name);
        ExpQ e = tord_arcs(s.arc(x), s.arc(y));
        m.pancakes.push_back({s.triangles[i].name, {x, y}, {e}});
        m.beta = min(m.beta, e);
    }
    Geometry g(m);
    std::vector<std::string> names;
    for (auto& a : g.link().arcs()) names.push_back(a.id);
    std::vector<PairTarget> target;
    for (std::size_t i = 0; i < names.size(); ++i)
        for (std::size_t j = i + 1; j < names.size(); ++j) {
            ExpQ q = tord_arcs(s.arc(names[i]), s.arc(names[j]));
            ExpQ inner = g.inner_tord(names[i], names[j]);
            if (q < inner)
                throw IngestError("tord(" + names[i] + "," + names[j] + ") = " + q.str() + " is below the inner order " +
                                  inner.str());
            if (q > inner) target.push_back({{names[i], names[j]}, q});
        }
    fill_contacts(m, target);
    m.beta = exponent_mu(m);
    Geometry built(m);
    for (auto& [pair, q] : target)
        if (built.outer_tord(pair.first, pair.second) != q)
            throw IngestError("marked-arc tangency orders are not ultrametric at " + pair.first + "," +
                              pair.second);
    return m;
}

struct NumericEstimate {
    double slope = 0;
    double residual = 0;
};

/// Numeric tord of two named arcs of the surface.
inline NumericEstimate numeric_tord(const GermSurface& s, const std::string& a, const std::string& b,
                                    const NumericGrid& grid = {}) {
    const PuiseuxArc& x = s.arc(a);
    const PuiseuxArc& y = s.arc(b);
    auto fit = loglog_fit([&](long double t) { return euclid_distance(x.evaluate(t), y.evaluate(t)); }, grid);
    return {fit.slope, fit.residual};
}

struct PairCheck {
    std::string a, b;
    ExpQ symbolic;
    double numeric = 0;
    bool ok = false;
};

struct CrossReport {
    std::vector<PairCheck> pairs;
    std::vector<PairCheck> mismatches() const {
        std::vector<PairCheck> out;
        for (auto& p : pairs)
            if (!p.ok) out.push_back(p);
        return out;
    }
    bool ok() const { return mismatches().empty(); }
};

/// Compares the model's outer tord with the numeric slope on every pair of
/// marked arcs.
inline CrossReport cross_validate(const GermSurface& s, const LinkModel& m, double tolerance = 0.05,
                                  const NumericGrid& grid = {}) {
    Geometry g(m);
    CrossReport r;
    auto& arcs = g.link().arcs();
    for (std::size_t i = 0; i < arcs.size(); ++i)
        for (std::size_t j = i + 1; j < arcs.size(); ++j) {
            PairCheck c{arcs[i].id, arcs[j].id, g.outer_tord(arcs[i].id, arcs[j].id), 0, false};
            c.numeric = numeric_tord(s, c.a, c.b, grid).slope;
            c.ok = c.symbolic.is_inf() ? std::isinf(c.numeric) : std::abs(c.numeric - c.symbolic.to_double()) <= tolerance;
            r.pairs.push_back(c);
        }
    return r;
}

}  // namespace lipgeo
