#pragma once

#include "lipgeo/pizza.hpp"
#include "lipgeo/zones.hpp"

#include "json.hpp"

#include <cmath>
#include <cstdio>
#include <set>
#include <sstream>
#include <string>
#include <vector>

namespace lipgeo {

using Json = nlohmann::ordered_json;

/// Invariants of one model, ready for printing. Zone data is empty unless
/// the class admits a segment / nodal zone decomposition.
struct AnalysisReport {
    struct ZoneRow {
        std::string interval;
        int multiplicity = 0;
    };
    struct NodeRow {
        std::vector<std::string> members;  // nodal zone intervals
        std::vector<std::string> arcs;     // marked arcs inside those zones
        std::vector<ExpQ> spectrum;
    };
    struct ArcRow {
        std::string name;
        int multiplicity = 0;
        bool abnormal = false;
    };

    SurfaceClass cls = SurfaceClass::Other;
    std::string diagnosis;
    ExpQ beta;
    Topology topology = Topology::Circular;
    std::vector<std::pair<std::string, std::pair<std::string, std::string>>> pancake_edges;  // link intervals
    std::vector<std::string> edge_labels;
    std::vector<ArcRow> arcs;
    std::vector<ZoneRow> segments, nodal_zones;
    std::vector<NodeRow> nodes;
};

inline AnalysisReport analyze(const LinkModel& m) {
    Geometry g(m);
    ZoneAnalysis z(g);
    const Link& l = g.link();
    AnalysisReport r;
    r.cls = z.recognize().cls;
    r.diagnosis = z.recognize().diagnosis;
    r.beta = m.beta;
    r.topology = m.topology;
    for (auto& iv : l.intervals()) {
        r.pancake_edges.push_back({m.pancakes[iv.pancake].id, {l.arcs()[iv.left].id, l.arcs()[iv.right].id}});
        r.edge_labels.push_back(m.pancakes[iv.pancake].id + " " + iv.exponent.str());
    }
    for (std::size_t i = 0; i < l.arcs().size(); ++i)
        r.arcs.push_back({l.arcs()[i].id, z.multiplicity(Link::arc_cell(i)), z.abnormal(Link::arc_cell(i))});
    if (r.cls == SurfaceClass::Other) return r;
    for (auto& s : z.segments()) r.segments.push_back({z.zone_interval(s), s.multiplicity});
    auto nz = z.nodal_zones();
    for (auto& n : nz) r.nodal_zones.push_back({z.zone_interval(n), n.multiplicity});
    for (auto& node : z.nodes()) {
        AnalysisReport::NodeRow row;
        for (auto i : node.zones) {
            row.members.push_back(z.zone_interval(nz[i]));
            for (auto c : nz[i].cells) row.arcs.push_back(l.cell_name(c));
        }
        row.spectrum.assign(node.spectrum.begin(), node.spectrum.end());
        r.nodes.push_back(row);
    }
    return r;
}

namespace detail {

inline std::string join(const std::vector<std::string>& v, const std::string& sep) {
    std::string out;
    for (std::size_t i = 0; i < v.size(); ++i) out += (i ? sep : "") + v[i];
    return out;
}

inline std::string spectrum_str(const std::vector<ExpQ>& s) {
    std::vector<std::string> parts;
    for (auto& q : s) parts.push_back(q.str());
    return "{" + join(parts, ", ") + "}";
}

inline std::string dot_id(const std::string& s) { return "\"" + s + "\""; }

}  // namespace detail

inline std::string to_text(const AnalysisReport& r) {
    std::ostringstream os;
    os << "class " << to_string(r.cls) << "\n";
    if (!r.diagnosis.empty()) os << "diagnosis " << r.diagnosis << "\n";
    os << "beta " << r.beta << "\n";
    os << "arcs\n";
    for (auto& a : r.arcs) os << "  " << a.name << " multiplicity " << a.multiplicity << (a.abnormal ? " abnormal" : "") << "\n";
    if (r.cls == SurfaceClass::Other) return os.str();
    os << "segments " << r.segments.size() << "\n";
    for (auto& s : r.segments) os << "  " << s.interval << " multiplicity " << s.multiplicity << "\n";
    os << "nodal_zones " << r.nodal_zones.size() << "\n";
    for (auto& n : r.nodal_zones) os << "  " << n.interval << " multiplicity " << n.multiplicity << "\n";
    os << "nodes " << r.nodes.size() << "\n";
    for (auto& n : r.nodes)
        os << "  [" << detail::join(n.members, "; ") << "] spectrum " << detail::spectrum_str(n.spectrum) << "\n";
    return os.str();
}

inline Json to_json(const AnalysisReport& r) {
    Json j;
    j["class"] = to_string(r.cls);
    if (!r.diagnosis.empty()) j["diagnosis"] = r.diagnosis;
    j["beta"] = r.beta.str();
    j["arcs"] = Json::array();
    for (auto& a : r.arcs) j["arcs"].push_back({{"name", a.name}, {"multiplicity", a.multiplicity}, {"abnormal", a.abnormal}});
    j["segments"] = Json::array();
    for (auto& s : r.segments) j["segments"].push_back({{"interval", s.interval}, {"multiplicity", s.multiplicity}});
    j["nodal_zones"] = Json::array();
    for (auto& n : r.nodal_zones) j["nodal_zones"].push_back({{"interval", n.interval}, {"multiplicity", n.multiplicity}});
    j["nodes"] = Json::array();
    for (auto& n : r.nodes) {
        Json spec = Json::array();
        for (auto& q : n.spectrum) spec.push_back(q.str());
        j["nodes"].push_back({{"members", n.members}, {"spectrum", spec}});
    }
    return j;
}

/// Link diagram: pancake intervals as edges between marked arcs, one shaded
/// cluster per node labelled with its spectrum.
inline std::string to_dot(const AnalysisReport& r) {
    std::ostringstream os;
    os << "graph link {\n";
    os << "  layout=neato;\n  node [shape=point, xlabel=\"\\N\"];\n";
    std::set<std::string> in_cluster;
    for (std::size_t i = 0; i < r.nodes.size(); ++i) {
        os << "  subgraph cluster_node" << i + 1 << " {\n";
        os << "    style=filled; color=lightgrey;\n";
        os << "    label=" << detail::dot_id("spectrum " + detail::spectrum_str(r.nodes[i].spectrum)) << ";\n";
        for (auto& a : r.nodes[i].arcs) {
            os << "    " << detail::dot_id(a) << ";\n";
            in_cluster.insert(a);
        }
        os << "  }\n";
    }
    for (auto& a : r.arcs)
        if (!in_cluster.count(a.name)) os << "  " << detail::dot_id(a.name) << ";\n";
    for (std::size_t i = 0; i < r.pancake_edges.size(); ++i) {
        auto& [u, v] = r.pancake_edges[i].second;
        os << "  " << detail::dot_id(u) << " -- " << detail::dot_id(v) << " [label=" << detail::dot_id(r.edge_labels[i])
           << "];\n";
    }
    os << "}\n";
    return os.str();
}

inline std::string width_str(const Width& w) {
    if (w.a == 0) return w.b.str();
    if (w.b == ExpQ(0)) return "q";
    if (w.b < ExpQ(0)) {
        auto r = w.b.rational();
        return "q - " + ExpQ(-r.numerator(), r.denominator()).str();
    }
    return "q + " + w.b.str();
}

inline std::string monotone_str(Monotone m) {
    switch (m) {
    case Monotone::Constant: return "constant";
    case Monotone::Increasing: return "increasing";
    case Monotone::Decreasing: return "decreasing";
    }
    return "";
}

inline std::string to_text(const OrderFunction& f, const Pizza& p) {
    std::ostringstream os;
    os << "pizza on " << f.geometry().model().pancakes[p.pancake].id << " for " << f.geometry().model().pancakes[p.target].id
       << (p.minimal ? " (minimal)" : "") << ", " << p.slices.size() << " slices\n";
    os << "from\tto\tQ\twidth\texponent\tdirection\n";
    for (auto& s : p.slices) {
        std::string q = s.q_point() ? s.q_lo.str() : "[" + s.q_lo.str() + ", " + s.q_hi.str() + "]";
        os << f.boundary_name(s.from) << "\t" << f.boundary_name(s.to) << "\t" << q << "\t" << width_str(s.width) << "\t"
           << s.exponent << "\t" << monotone_str(s.direction) << "\n";
    }
    return os.str();
}

inline Json to_json(const OrderFunction& f, const Pizza& p) {
    Json j;
    j["pancake"] = f.geometry().model().pancakes[p.pancake].id;
    j["target"] = f.geometry().model().pancakes[p.target].id;
    j["minimal"] = p.minimal;
    j["slices"] = Json::array();
    for (auto& s : p.slices)
        j["slices"].push_back({{"from", f.boundary_name(s.from)},
                               {"to", f.boundary_name(s.to)},
                               {"q", {s.q_lo.str(), s.q_hi.str()}},
                               {"width", width_str(s.width)},
                               {"exponent", s.exponent.str()},
                               {"direction", monotone_str(s.direction)}});
    return j;
}

inline std::string fixed(double x, int digits = 4) {
    if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.*f", digits, x);
    return buf;
}

}  // namespace lipgeo
