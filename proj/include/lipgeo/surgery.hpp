#pragma once

#include "lipgeo/link_model.hpp"
#include "lipgeo/zones.hpp"

#include <algorithm>
#include <map>
#include <string>
#include <vector>

namespace lipgeo {

class SurgeryError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

struct SurgeryResult {
    LinkModel model;
    std::map<std::string, std::string> origin;  // new cell name -> cell name in the source model
};

namespace detail {

inline void require_circular_snake(const ZoneAnalysis& z) {
    if (z.recognize().cls != SurfaceClass::CircularSnake)
        throw SurgeryError("surgery needs a circular snake: " + z.recognize().diagnosis);
    if (z.nodes().size() < 2) throw SurgeryError("surgery needs at least two nodes");
}

inline std::string cell_key(const std::string& a, const std::string& b) { return a + "~" + b; }

/// Adds contacts, largest target first, until the outer closure reaches
/// `target` on every listed pair.
}  // namespace detail

/// Re-pancakes a circular snake so that the pancake boundaries are one
/// marked arc per nodal zone (the first in link order). X_k = T(gamma_{k-1},
/// gamma_k) with gamma_0 = gamma_p at the lowest link position.
inline LinkModel intrinsic_decomposition(const LinkModel& m) {
    Geometry g(m);
    ZoneAnalysis z(g);
    detail::require_circular_snake(z);
    const Link& l = g.link();
    std::vector<std::size_t> chosen;  // arc positions
    for (auto& nz : z.nodal_zones())
        for (std::size_t c : nz.cells)
            if (Link::is_arc_cell(c)) {
                chosen.push_back(Link::cell_index(c));
                break;
            }
    std::sort(chosen.begin(), chosen.end());
    LinkModel out;
    out.beta = m.beta;
    out.topology = Topology::Circular;
    out.contacts = m.contacts;
    out.singular_arcs = m.singular_arcs;
    const std::size_t na = l.arc_count();
    for (std::size_t k = 0; k < chosen.size(); ++k) {
        std::size_t from = chosen[k], to = chosen[(k + 1) % chosen.size()];
        PancakeSpec pc{"X" + std::to_string(k + 1), {l.arcs()[from].id}, {}};
        std::size_t pos = from;
        do {
            pc.internal.push_back(l.intervals()[pos].exponent);
            pos = (pos + 1) % na;
            pc.arcs.push_back(l.arcs()[pos].id);
        } while (pos != to);
        out.pancakes.push_back(pc);
    }
    return out;
}

/// Boundary arcs gamma_0..gamma_{p-1} of an intrinsic decomposition.
inline std::vector<std::string> gluing_arcs(const LinkModel& m) {
    std::vector<std::string> out;
    for (auto& pc : m.pancakes) out.push_back(pc.arcs.front());
    return out;
}

namespace detail {

/// Chain of pancakes k+1, ..., p, 1, ..., k-1 (1-based k) of a circular model.
inline std::vector<PancakeSpec> chain_without(const LinkModel& m, std::size_t k) {
    std::vector<PancakeSpec> out;
    const std::size_t p = m.pancakes.size();
    for (std::size_t i = 1; i < p; ++i) out.push_back(m.pancakes[(k - 1 + i) % p]);
    return out;
}

}  // namespace detail

/// X(k): the circular snake with pancake X_k removed (1-based k), as a chain
/// from gamma_k to gamma_{k-1}. Pass an intrinsic decomposition.
inline SurgeryResult remove_segment(const LinkModel& m, std::size_t k) {
    const std::size_t p = m.pancakes.size();
    if (k < 1 || k > p) throw SurgeryError("segment index out of range");
    if (m.topology != Topology::Circular) throw SurgeryError("remove_segment needs a circular model");
    Geometry g(m);
    const auto& removed = m.pancakes[k - 1];
    std::set<std::string> dropped(removed.arcs.begin() + 1, removed.arcs.end() - 1);
    if (p == 1) throw SurgeryError("cannot remove the only pancake");
    SurgeryResult r;
    r.model.beta = m.beta;
    r.model.topology = Topology::Segment;
    r.model.pancakes = detail::chain_without(m, k);
    for (auto& c : m.contacts)
        if (!dropped.count(c.a) && !dropped.count(c.b)) r.model.contacts.push_back(c);
    for (auto& s : m.singular_arcs)
        if (!dropped.count(s)) r.model.singular_arcs.push_back(s);
    std::vector<std::string> kept;
    for (auto& pc : r.model.pancakes)
        for (std::size_t i = 0; i < pc.arcs.size(); ++i) {
            if (kept.empty() || kept.back() != pc.arcs[i]) kept.push_back(pc.arcs[i]);
            r.origin[pc.arcs[i]] = pc.arcs[i];
            if (i + 1 < pc.arcs.size()) {
                auto key = detail::cell_key(pc.arcs[i], pc.arcs[i + 1]);
                r.origin[key] = key;
            }
        }
    std::vector<PairTarget> target;
    for (std::size_t i = 0; i < kept.size(); ++i)
        for (std::size_t j = i + 1; j < kept.size(); ++j)
            target.push_back({{kept[i], kept[j]}, g.outer_tord(kept[i], kept[j])});
    fill_contacts(r.model, target);
    return r;
}

/// X_{alpha,k}: removes the interior of an alpha-triangle around gamma_k
/// (1-based k, gamma_k = last arc of X_k), replacing gamma_k by two chain
/// ends gamma_k- (X_k side) and gamma_k+ (X_{k+1} side).
inline SurgeryResult cut_nodal(const LinkModel& m, std::size_t k, const ExpQ& alpha) {
    const std::size_t p = m.pancakes.size();
    if (k < 1 || k > p) throw SurgeryError("nodal index out of range");
    if (!(alpha > m.beta)) throw SurgeryError("alpha must exceed beta");
    if (alpha.is_inf()) throw SurgeryError("alpha must be finite");
    if (m.topology != Topology::Circular) throw SurgeryError("cut_nodal needs a circular model");
    Geometry g(m);
    const Link& l = g.link();
    const std::string gk = m.pancakes[k - 1].arcs.back();
    const std::size_t ck = Link::arc_cell(l.arc_position(gk));
    const std::string minus = gk + "-", plus = gk + "+";

    // walk the link once around, starting right after gamma_k
    const std::size_t na = l.arc_count();
    const std::size_t start = l.arc_position(gk);
    std::vector<std::size_t> order;  // arc positions after gamma_k, ending before it
    for (std::size_t i = 1; i < na; ++i) order.push_back((start + i) % na);
    auto removed = [&](std::size_t pos) {
        return g.inner(Link::arc_cell(pos), ck) > alpha;
    };
    std::size_t lo = 0, hi = order.size();
    while (lo < hi && removed(order[lo])) ++lo;
    while (hi > lo && removed(order[hi - 1])) --hi;
    if (lo >= hi) throw SurgeryError("cut removes the whole link");
    std::set<std::string> dropped{gk};
    for (std::size_t i = 0; i < lo; ++i) dropped.insert(l.arcs()[order[i]].id);
    for (std::size_t i = hi; i < order.size(); ++i) dropped.insert(l.arcs()[order[i]].id);

    // new chain: plus, order[lo..hi), minus, split at the old pancake boundaries
    std::vector<std::string> seq{plus};
    std::vector<ExpQ> edge;
    std::vector<std::size_t> owner;  // pancake of each edge
    std::vector<std::string> source; // original interval name of each edge
    auto interval_after = [&](std::size_t pos) -> const Interval& { return l.intervals()[pos]; };
    auto interval_before = [&](std::size_t pos) -> const Interval& { return l.intervals()[(pos + na - 1) % na]; };
    auto iv_name = [&](const Interval& iv) { return detail::cell_key(l.arcs()[iv.left].id, l.arcs()[iv.right].id); };
    {
        const Interval& first = interval_before(order[lo]);
        seq.push_back(l.arcs()[order[lo]].id);
        edge.push_back(g.inner(Link::arc_cell(order[lo]), ck));
        owner.push_back(first.pancake);
        source.push_back(iv_name(first));
    }
    for (std::size_t i = lo + 1; i < hi; ++i) {
        const Interval& iv = interval_before(order[i]);
        seq.push_back(l.arcs()[order[i]].id);
        edge.push_back(iv.exponent);
        owner.push_back(iv.pancake);
        source.push_back(iv_name(iv));
    }
    {
        const Interval& last = interval_after(order[hi - 1]);
        seq.push_back(minus);
        edge.push_back(g.inner(Link::arc_cell(order[hi - 1]), ck));
        owner.push_back(last.pancake);
        source.push_back(iv_name(last));
    }

    SurgeryResult r;
    r.model.beta = m.beta;
    r.model.topology = Topology::Segment;
    for (std::size_t i = 0; i < edge.size(); ++i) {
        if (i == 0 || owner[i] != owner[i - 1])
            r.model.pancakes.push_back({m.pancakes[owner[i]].id, {seq[i]}, {}});
        r.model.pancakes.back().arcs.push_back(seq[i + 1]);
        r.model.pancakes.back().internal.push_back(edge[i]);
        r.origin[detail::cell_key(seq[i], seq[i + 1])] = source[i];
    }
    for (auto& a : seq) r.origin[a] = a;
    r.origin[plus] = gk;
    r.origin[minus] = gk;

    for (auto& c : m.contacts)
        if (!dropped.count(c.a) && !dropped.count(c.b)) r.model.contacts.push_back(c);
    r.model.contacts.push_back({minus, plus, alpha});
    {
        Geometry cut(r.model);
        for (auto& c : m.contacts) {
            std::string other;
            if (c.a == gk) other = c.b;
            else if (c.b == gk) other = c.a;
            else continue;
            if (dropped.count(other)) continue;
            ExpQ q = min(c.q, alpha);
            for (auto& end : {minus, plus})
                if (q > cut.inner_tord(end, other)) r.model.contacts.push_back({end, other, q});
        }
    }
    for (auto& s : m.singular_arcs)
        if (!dropped.count(s)) r.model.singular_arcs.push_back(s);

    std::vector<std::string> kept(seq.begin() + 1, seq.end() - 1);
    std::vector<PairTarget> target;
    for (std::size_t i = 0; i < kept.size(); ++i)
        for (std::size_t j = i + 1; j < kept.size(); ++j)
            target.push_back({{kept[i], kept[j]}, g.outer_tord(kept[i], kept[j])});
    for (auto& end : {minus, plus})
        for (auto& w : kept) target.push_back({{end, w}, min(alpha, g.outer_tord(gk, w))});
    target.push_back({{minus, plus}, alpha});
    fill_contacts(r.model, target);
    return r;
}

namespace detail {

/// Whether every listed source cell is abnormal in the surgered model.
inline bool all_abnormal(const SurgeryResult& r, const std::set<std::string>& cells) {
    Geometry g(r.model);
    ZoneAnalysis z(g);
    const Link& l = g.link();
    for (std::size_t c = 0; c < l.cell_count(); ++c) {
        auto it = r.origin.find(l.cell_name(c));
        if (it != r.origin.end() && cells.count(it->second) && !z.abnormal(c)) return false;
    }
    return true;
}

inline std::set<std::string> names(const Link& l, const std::vector<std::size_t>& cells) {
    std::set<std::string> out;
    for (std::size_t c : cells) out.insert(l.cell_name(c));
    return out;
}

/// Cells of the nodal zone containing gamma_j (0-based j, modulo p).
inline std::set<std::string> nodal_zone_of(const Geometry& g, const ZoneAnalysis& z, const LinkModel& m, long j) {
    const long p = static_cast<long>(m.pancakes.size());
    const std::string arc = m.pancakes[((j % p) + p - 1 + p) % p].arcs.back();
    return names(g.link(), z.clusters()[z.cluster_of(Link::arc_cell(g.link().arc_position(arc)))]);
}

/// Segment cells of pancake k (1-based).
inline std::set<std::string> segment_of(const Geometry& g, const ZoneAnalysis& z, std::size_t k) {
    const Link& l = g.link();
    auto kind = z.classify_arcs();
    std::vector<std::size_t> cells;
    for (std::size_t c = 0; c < l.cell_count(); ++c)
        if (kind[c] == ArcKind::Segment && !Link::is_arc_cell(c) && l.intervals()[Link::cell_index(c)].pancake == k - 1)
            cells.push_back(c);
    for (std::size_t c = 0; c < l.cell_count(); ++c)
        if (kind[c] == ArcKind::Segment && Link::is_arc_cell(c)) {
            const auto& pcs = l.arcs()[Link::cell_index(c)].pancakes;
            if (pcs.size() == 1 && pcs[0] == k - 1) cells.push_back(c);
        }
    return names(l, cells);
}

}  // namespace detail

/// X(k) is a snake iff N_{k-2} and N_{k+1} contain no normal arcs of X(k).
/// Pass an intrinsic decomposition.
inline bool criterion_remove_segment(const LinkModel& m, std::size_t k) {
    Geometry g(m);
    ZoneAnalysis z(g);
    auto r = remove_segment(m, k);
    auto cells = detail::nodal_zone_of(g, z, m, static_cast<long>(k) - 2);
    auto more = detail::nodal_zone_of(g, z, m, static_cast<long>(k) + 1);
    cells.insert(more.begin(), more.end());
    return detail::all_abnormal(r, cells);
}

/// X_{alpha,k} is a snake iff S_k and S_{k+1} are abnormal in it.
inline bool criterion_cut_nodal(const LinkModel& m, std::size_t k, const ExpQ& alpha) {
    const std::size_t p = m.pancakes.size();
    Geometry g(m);
    ZoneAnalysis z(g);
    auto r = cut_nodal(m, k, alpha);
    auto cells = detail::segment_of(g, z, k);
    auto more = detail::segment_of(g, z, k % p + 1);
    cells.insert(more.begin(), more.end());
    return detail::all_abnormal(r, cells);
}

}  // namespace lipgeo
