#pragma once

#include "lipgeo/link_model.hpp"

#include <numeric>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

namespace lipgeo {

enum class SurfaceClass { NeHorn, CircularSnake, Snake, Other };

inline std::string to_string(SurfaceClass c) {
    switch (c) {
        case SurfaceClass::NeHorn: return "NE_HORN";
        case SurfaceClass::CircularSnake: return "CIRCULAR_SNAKE";
        case SurfaceClass::Snake: return "SNAKE";
        case SurfaceClass::Other: return "OTHER";
    }
    return "OTHER";
}

enum class ArcKind { Segment, Nodal };

struct Zone {
    std::vector<std::size_t> cells;  // in link order
    ExpQ order;
    ArcKind kind = ArcKind::Segment;
    int multiplicity = 0;
};

struct Node {
    std::vector<std::size_t> zones;  // indices into the nodal zone list
    std::set<ExpQ> spectrum;
};

struct Recognition {
    SurfaceClass cls = SurfaceClass::Other;
    std::string diagnosis;
};

class ClassificationError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Zone-level invariants of a link model. Everything is computed eagerly
/// from the closures of a Geometry that must outlive this object.
class ZoneAnalysis {
public:
    explicit ZoneAnalysis(const Geometry& g) : g_(g), n_(g.link().cell_count()) {
        compute_multiplicity();
        compute_clusters();
        compute_ne_stretches();
        compute_abnormal();
        recognition_ = do_recognize();
    }

    const Geometry& geometry() const { return g_; }
    int multiplicity(std::size_t c) const { return mult_[c]; }
    int multiplicity(const std::string& arc) const {
        return mult_[Link::arc_cell(g_.link().arc_position(arc))];
    }

    /// Maximal runs of cells joined by link edges of weight > beta.
    const std::vector<std::vector<std::size_t>>& clusters() const { return clusters_; }
    std::size_t cluster_of(std::size_t c) const { return cluster_id_[c]; }

    /// Whether the stretch of `len` link edges starting at cell c is normally embedded.
    bool stretch_ne(std::size_t c, std::size_t len) const { return ne_[c][len]; }

    bool abnormal(std::size_t c) const { return abnormal_[c]; }
    std::vector<std::size_t> abnormal_set() const {
        std::vector<std::size_t> out;
        for (std::size_t c = 0; c < n_; ++c)
            if (abnormal_[c]) out.push_back(c);
        return out;
    }

    const Recognition& recognize() const { return recognition_; }

    std::vector<ArcKind> classify_arcs() const {
        require_classifiable();
        const Link& l = g_.link();
        std::vector<ArcKind> kind(n_, ArcKind::Segment);
        for (std::size_t k = 0; k < clusters_.size(); ++k) {
            const auto& cl = clusters_[k];
            bool nodal = false;
            auto before = l.prev(cl.front());
            auto after = l.next(cl.back());
            bool wraps_all = cl.size() == n_;
            if (wraps_all || (cl.size() == 1 && !Link::is_arc_cell(cl[0]))) {
                nodal = false;  // generic cells of beta-intervals
            } else if (!before || !after) {
                nodal = true;  // chain ends are nodal
            } else {
                int m = mult_[cl.front()];
                nodal = mult_[*before] != m || mult_[*after] != m;
            }
            if (nodal)
                for (std::size_t c : cl) kind[c] = ArcKind::Nodal;
        }
        return kind;
    }

    std::vector<Zone> segments() const { return zones_of(ArcKind::Segment); }
    std::vector<Zone> nodal_zones() const { return zones_of(ArcKind::Nodal); }

    std::vector<Node> nodes() const {
        auto nz = nodal_zones();
        std::vector<std::size_t> parent(nz.size());
        std::iota(parent.begin(), parent.end(), 0);
        auto find = [&](std::size_t x) {
            while (parent[x] != x) x = parent[x] = parent[parent[x]];
            return x;
        };
        for (std::size_t i = 0; i < nz.size(); ++i)
            for (std::size_t j = i + 1; j < nz.size(); ++j)
                if (zone_tord(nz[i], nz[j]) > g_.beta()) parent[find(i)] = find(j);
        std::vector<Node> out;
        std::vector<int> slot(nz.size(), -1);
        for (std::size_t i = 0; i < nz.size(); ++i) {
            std::size_t r = find(i);
            if (slot[r] < 0) {
                slot[r] = static_cast<int>(out.size());
                out.push_back({});
            }
            out[slot[r]].zones.push_back(i);
        }
        for (auto& node : out)
            for (std::size_t a = 0; a < node.zones.size(); ++a)
                for (std::size_t b = a + 1; b < node.zones.size(); ++b)
                    node.spectrum.insert(zone_tord(nz[node.zones[a]], nz[node.zones[b]]));
        return out;
    }

    /// Largest outer order between cells of two zones.
    ExpQ zone_tord(const Zone& a, const Zone& b) const {
        ExpQ best = ExpQ(0);
        for (std::size_t x : a.cells)
            for (std::size_t y : b.cells) best = max(best, g_.outer(x, y));
        return best;
    }

    std::string zone_interval(const Zone& z) const {
        const Link& l = g_.link();
        if (z.cells.size() == 1) return l.cell_name(z.cells.front());
        return l.cell_name(z.cells.front()) + " .. " + l.cell_name(z.cells.back());
    }

private:
    void require_classifiable() const {
        auto c = recognition_.cls;
        if (c == SurfaceClass::Other)
            throw ClassificationError("segments and nodal zones are defined for snakes and circular snakes only (" +
                                      recognition_.diagnosis + ")");
    }

    void compute_multiplicity() {
        const Link& l = g_.link();
        mult_.assign(n_, 0);
        for (std::size_t x = 0; x < n_; ++x) {
            std::vector<bool> q(n_);
            for (std::size_t y = 0; y < n_; ++y) q[y] = y == x || g_.outer(x, y) > g_.beta();
            int runs = 0;
            bool all = true;
            for (std::size_t y = 0; y < n_; ++y) {
                if (!q[y]) {
                    all = false;
                    continue;
                }
                auto p = l.prev(y);
                if (!p || !q[*p]) ++runs;
            }
            mult_[x] = all ? 1 : runs;
        }
    }

    void compute_clusters() {
        const Link& l = g_.link();
        cluster_id_.assign(n_, 0);
        // start after a beta edge so clusters do not straddle the cycle origin
        std::size_t start = 0;
        bool found = !l.circular();
        if (l.circular())
            for (std::size_t c = 0; c < n_; ++c)
                if (!(l.forward_weight(l.prev(c).value()) > g_.beta())) {
                    start = c;
                    found = true;
                    break;
                }
        if (!found) {  // every edge above beta: one cluster
            clusters_.push_back({});
            for (std::size_t c = 0; c < n_; ++c) clusters_.back().push_back(c);
            return;
        }
        for (std::size_t i = 0; i < n_; ++i) {
            std::size_t c = (start + i) % n_;
            auto p = l.prev(c);
            bool joined = i > 0 && p && l.forward_weight(*p) > g_.beta();
            if (!joined) clusters_.push_back({});
            clusters_.back().push_back(c);
            cluster_id_[c] = clusters_.size() - 1;
        }
    }

    std::size_t fwd(std::size_t c, std::size_t k) const { return (c + k) % n_; }

    std::size_t max_len(std::size_t c) const {
        if (g_.link().circular()) return n_ - 1;
        return n_ - 1 - c;
    }

    void compute_ne_stretches() {
        const Link& l = g_.link();
        ne_.assign(n_, std::vector<bool>(n_, false));
        // along[c][len]: minimum edge weight on the stretch
        for (std::size_t len = 0; len < n_; ++len)
            for (std::size_t c = 0; c < n_; ++c) {
                if (len > max_len(c)) continue;
                if (len == 0) {
                    ne_[c][0] = true;
                    continue;
                }
                if (!ne_[c][len - 1] || !ne_[fwd(c, 1)][len - 1]) continue;
                ExpQ along = ExpQ::inf();
                for (std::size_t k = 0; k < len; ++k) along = min(along, l.forward_weight(fwd(c, k)));
                ne_[c][len] = g_.outer(c, fwd(c, len)) == along;
            }
    }

    void compute_abnormal() {
        const Link& l = g_.link();
        abnormal_.assign(n_, false);
        for (std::size_t x = 0; x < n_; ++x) {
            if (l.cell_singular(x)) continue;
            if (!l.circular() && (x == 0 || x + 1 == n_)) continue;
            std::size_t back_max = l.circular() ? n_ - 1 : x;
            std::size_t fwd_max = l.circular() ? n_ - 1 : n_ - 1 - x;
            bool found = false;
            for (std::size_t i = 1; i <= back_max && !found; ++i) {
                std::size_t a = (x + n_ - i) % n_;
                if (i > 1 && l.cell_singular(fwd(a, 1))) break;
                if (!ne_[a][i]) break;
                for (std::size_t j = 1; j <= fwd_max; ++j) {
                    if (l.circular() && i + j >= n_) break;  // the stretch may not close up
                    if (j > 1 && l.cell_singular(fwd(x, j - 1))) break;
                    if (!ne_[x][j]) break;
                    if (!ne_[a][i + j]) {
                        found = true;
                        break;
                    }
                }
            }
            abnormal_[x] = found;
        }
    }

    std::vector<bool> end_cluster_mask() const {
        std::vector<bool> m(n_, false);
        if (g_.link().circular()) return m;
        for (std::size_t c : clusters_[cluster_id_[0]]) m[c] = true;
        for (std::size_t c : clusters_[cluster_id_[n_ - 1]]) m[c] = true;
        return m;
    }

    Recognition do_recognize() const {
        const Link& l = g_.link();
        for (std::size_t c = 0; c < n_; ++c)
            if (l.cell_singular(c)) return {SurfaceClass::Other, "contains a Lipschitz singular arc"};
        if (l.circular()) {
            if (g_.is_normally_embedded()) return {SurfaceClass::NeHorn, "normally embedded circular link"};
            for (std::size_t c = 0; c < n_; ++c)
                if (!abnormal_[c]) return {SurfaceClass::Other, "normal arc " + l.cell_name(c) + " in a circular link"};
            return {SurfaceClass::CircularSnake, "every arc is abnormal"};
        }
        auto ends = end_cluster_mask();
        for (std::size_t c = 0; c < n_; ++c) {
            if (abnormal_[c] && ends[c])
                return {SurfaceClass::Other, "abnormal arc " + l.cell_name(c) + " next to a boundary arc"};
            if (!abnormal_[c] && !ends[c])
                return {SurfaceClass::Other, "normal generic arc " + l.cell_name(c)};
        }
        bool any = false;
        for (std::size_t c = 0; c < n_; ++c) any |= !ends[c];
        if (!any) return {SurfaceClass::Other, "no generic arcs"};
        return {SurfaceClass::Snake, "abnormal set equals the generic arcs"};
    }

    std::vector<Zone> zones_of(ArcKind want) const {
        auto kind = classify_arcs();
        const Link& l = g_.link();
        std::vector<Zone> out;
        std::size_t start = 0;
        if (l.circular()) {
            bool uniform = true;
            for (std::size_t c = 0; c < n_; ++c) uniform &= kind[c] == kind[0];
            if (uniform) {
                if (kind[0] != want) return out;
                Zone z;
                for (std::size_t c = 0; c < n_; ++c) z.cells.push_back(c);
                finish_zone(z, want);
                out.push_back(z);
                return out;
            }
            while (kind[(start + n_ - 1) % n_] == kind[start]) ++start;
        }
        for (std::size_t i = 0; i < n_; ++i) {
            std::size_t c = (start + i) % n_;
            bool opens = i == 0 || kind[(c + n_ - 1) % n_] != kind[c];
            if (kind[c] != want) continue;
            if (opens) out.push_back({});
            out.back().cells.push_back(c);
        }
        for (auto& z : out) finish_zone(z, want);
        return out;
    }

    void finish_zone(Zone& z, ArcKind k) const {
        z.kind = k;
        z.multiplicity = mult_[z.cells.front()];
        // nodal zones are open, so pairs near their ends approach beta
        ExpQ order = k == ArcKind::Nodal ? g_.beta() : ExpQ::inf();
        for (std::size_t a : z.cells)
            for (std::size_t b : z.cells) order = min(order, g_.outer(a, b));
        if (z.cells.size() == 1 && k == ArcKind::Segment) order = g_.beta();
        z.order = order;
    }

    const Geometry& g_;
    std::size_t n_;
    std::vector<int> mult_;
    std::vector<std::vector<std::size_t>> clusters_;
    std::vector<std::size_t> cluster_id_;
    std::vector<std::vector<bool>> ne_;
    std::vector<bool> abnormal_;
    Recognition recognition_;
};

inline int multiplicity(const LinkModel& m, const std::string& arc) {
    Geometry g(m);
    return ZoneAnalysis(g).multiplicity(arc);
}

inline Recognition recognize(const LinkModel& m) {
    Geometry g(m);
    return ZoneAnalysis(g).recognize();
}

}  // namespace lipgeo
