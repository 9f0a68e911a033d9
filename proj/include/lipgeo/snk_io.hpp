#pragma once

#include "lipgeo/link_model.hpp"
#include "lipgeo/series.hpp"

#include <fstream>
#include <map>
#include <sstream>
#include <string>
#include <vector>

namespace lipgeo {

namespace detail {

inline std::vector<std::string> split_words(const std::string& line) {
    std::istringstream is(line);
    std::vector<std::string> out;
    for (std::string w; is >> w;) out.push_back(w);
    return out;
}

}  // namespace detail

/// Parses the line-oriented .snk format. Internal exponents that are not
/// given default to beta.
inline LinkModel parse_snk(std::istream& in) {
    LinkModel m;
    bool have_beta = false;
    struct PendingInternal {
        std::string pancake, a, b;
        ExpQ q;
        std::size_t line;
    };
    std::vector<PendingInternal> internals;
    std::map<std::string, std::size_t> pancake_line;
    std::string raw;
    for (std::size_t ln = 1; std::getline(in, raw); ++ln) {
        if (auto h = raw.find('#'); h != std::string::npos) raw.erase(h);
        auto w = detail::split_words(raw);
        if (w.empty()) continue;
        auto exp = [&](const std::string& s) {
            auto q = ExpQ::parse(s);
            if (!q) throw ParseError("bad exponent '" + s + "'", ln, raw.find(s) + 1);
            return *q;
        };
        auto arity = [&](std::size_t n) {
            if (w.size() != n)
                throw ParseError("'" + w[0] + "' expects " + std::to_string(n - 1) + " fields", ln, 1);
        };
        const std::string& key = w[0];
        if (key == "beta") {
            arity(2);
            m.beta = exp(w[1]);
            have_beta = true;
        } else if (key == "topology") {
            arity(2);
            if (w[1] == "circular") m.topology = Topology::Circular;
            else if (w[1] == "segment") m.topology = Topology::Segment;
            else throw ParseError("unknown topology '" + w[1] + "'", ln, raw.find(w[1]) + 1);
        } else if (key == "pancake") {
            if (w.size() < 4) throw ParseError("pancake needs an id and at least two arcs", ln, 1);
            if (pancake_line.count(w[1])) throw ParseError("duplicate pancake " + w[1], ln, 1);
            pancake_line[w[1]] = m.pancakes.size();
            PancakeSpec pc{w[1], {w.begin() + 2, w.end()}, {}};
            pc.internal.assign(pc.arcs.size() - 1, ExpQ::inf());
            m.pancakes.push_back(std::move(pc));
        } else if (key == "internal") {
            arity(5);
            internals.push_back({w[1], w[2], w[3], exp(w[4]), ln});
        } else if (key == "contact") {
            arity(4);
            m.contacts.push_back({w[1], w[2], exp(w[3])});
        } else if (key == "singular") {
            arity(2);
            m.singular_arcs.push_back(w[1]);
        } else {
            throw ParseError("unknown key '" + key + "'", ln, raw.find(key) + 1);
        }
    }
    if (!have_beta) throw ParseError("missing beta", 0, 0);
    for (auto& it : internals) {
        auto p = pancake_line.find(it.pancake);
        if (p == pancake_line.end()) throw ParseError("internal for unknown pancake " + it.pancake, it.line, 1);
        auto& pc = m.pancakes[p->second];
        // the same pair may occur twice in a one-pancake loop: fill slots in order
        bool placed = false;
        for (int reversed = 0; reversed < 2 && !placed; ++reversed)
            for (std::size_t i = 0; i + 1 < pc.arcs.size() && !placed; ++i) {
                const auto& x = reversed ? it.b : it.a;
                const auto& y = reversed ? it.a : it.b;
                if (pc.arcs[i] == x && pc.arcs[i + 1] == y && pc.internal[i].is_inf()) {
                    pc.internal[i] = it.q;
                    placed = true;
                }
            }
        if (!placed)
            throw ParseError("internal " + it.a + " " + it.b + " is not a consecutive pair of " +
                                 it.pancake, it.line, 1);
    }
    for (auto& pc : m.pancakes)
        for (auto& e : pc.internal)
            if (e.is_inf()) e = m.beta;
    return m;
}

inline LinkModel parse_snk(const std::string& text) {
    std::istringstream is(text);
    return parse_snk(is);
}

inline LinkModel load_snk(const std::string& path) {
    std::ifstream f(path);
    if (!f) throw std::runtime_error("cannot open " + path);
    return parse_snk(f);
}

inline std::string print_snk(const LinkModel& m) {
    std::ostringstream os;
    os << "beta " << m.beta.str() << "\n";
    os << "topology " << (m.topology == Topology::Circular ? "circular" : "segment") << "\n";
    for (auto& pc : m.pancakes) {
        os << "pancake " << pc.id;
        for (auto& a : pc.arcs) os << ' ' << a;
        os << "\n";
    }
    for (auto& pc : m.pancakes)
        for (std::size_t i = 0; i < pc.internal.size(); ++i)
            os << "internal " << pc.id << ' ' << pc.arcs[i] << ' ' << pc.arcs[i + 1] << ' '
               << pc.internal[i].str() << "\n";
    for (auto& c : m.contacts) os << "contact " << c.a << ' ' << c.b << ' ' << c.q.str() << "\n";
    for (auto& s : m.singular_arcs) os << "singular " << s << "\n";
    return os.str();
}

}  // namespace lipgeo
