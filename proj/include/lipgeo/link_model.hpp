#pragma once

#include "lipgeo/expq.hpp"

#include <algorithm>
#include <map>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

namespace lipgeo {

enum class Topology { Circular, Segment };

/// A normally embedded piece of the link: consecutive marked arcs with the
/// inner tangency order of each consecutive pair.
struct PancakeSpec {
    std::string id;
    std::vector<std::string> arcs;
    std::vector<ExpQ> internal;  // internal[i] joins arcs[i] and arcs[i+1]

    friend bool operator==(const PancakeSpec&, const PancakeSpec&) = default;
};

struct ContactEdge {
    std::string a;
    std::string b;
    ExpQ q;

    friend bool operator==(const ContactEdge&, const ContactEdge&) = default;
};

struct LinkModel {
    ExpQ beta = ExpQ(1);
    Topology topology = Topology::Circular;
    std::vector<PancakeSpec> pancakes;
    std::vector<ContactEdge> contacts;
    std::vector<std::string> singular_arcs;

    friend bool operator==(const LinkModel&, const LinkModel&) = default;
};

class ModelError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

struct MarkedArc {
    std::string id;
    std::vector<std::size_t> pancakes;  // one, or two for gluing arcs
    bool is_boundary = false;           // end of a segment-topology chain
    bool is_lipschitz_singular = false;
};

struct Interval {
    std::size_t left;  // arc positions
    std::size_t right;
    std::size_t pancake;
    ExpQ exponent;
};

/// The link as an alternating sequence of cells: marked arcs at even indices,
/// open elementary intervals at odd indices. Interval cells stand for their
/// generic interior arcs.
class Link {
public:
    explicit Link(const LinkModel& m) : circular_(m.topology == Topology::Circular) {
        if (m.pancakes.empty()) throw ModelError("model has no pancakes");
        for (std::size_t k = 0; k < m.pancakes.size(); ++k) {
            const auto& pc = m.pancakes[k];
            if (pc.arcs.size() < 2)
                throw ModelError("pancake " + pc.id + " needs at least two marked arcs");
            if (pc.internal.size() + 1 != pc.arcs.size())
                throw ModelError("pancake " + pc.id + " has wrong number of internal exponents");
            if (k == 0) {
                push_arc(pc.arcs[0], k);
            } else if (pc.arcs[0] != arcs_.back().id) {
                throw ModelError("pancake chain broken: " + pc.id + " does not start at " +
                                 arcs_.back().id);
            } else {
                arcs_.back().pancakes.push_back(k);
            }
            for (std::size_t i = 1; i < pc.arcs.size(); ++i) {
                bool closing = circular_ && k + 1 == m.pancakes.size() && i + 1 == pc.arcs.size();
                if (closing) {
                    if (pc.arcs[i] != arcs_.front().id)
                        throw ModelError("circular chain does not close: " + pc.arcs[i] +
                                         " != " + arcs_.front().id);
                    arcs_.front().pancakes.push_back(k);
                    intervals_.push_back({arcs_.size() - 1, 0, k, pc.internal[i - 1]});
                } else {
                    std::size_t prev = arcs_.size() - 1;
                    push_arc(pc.arcs[i], k);
                    intervals_.push_back({prev, arcs_.size() - 1, k, pc.internal[i - 1]});
                }
            }
        }
        if (!circular_) {
            arcs_.front().is_boundary = true;
            arcs_.back().is_boundary = true;
        }
        for (auto& s : m.singular_arcs) {
            auto it = index_.find(s);
            if (it == index_.end()) throw ModelError("unknown singular arc " + s);
            arcs_[it->second].is_lipschitz_singular = true;
        }
    }

    bool circular() const { return circular_; }
    std::size_t arc_count() const { return arcs_.size(); }
    std::size_t cell_count() const { return arcs_.size() + intervals_.size(); }
    const std::vector<MarkedArc>& arcs() const { return arcs_; }
    const std::vector<Interval>& intervals() const { return intervals_; }

    std::optional<std::size_t> find_arc(const std::string& id) const {
        auto it = index_.find(id);
        if (it == index_.end()) return std::nullopt;
        return it->second;
    }
    std::size_t arc_position(const std::string& id) const {
        auto p = find_arc(id);
        if (!p) throw ModelError("unknown arc " + id);
        return *p;
    }

    static bool is_arc_cell(std::size_t c) { return c % 2 == 0; }
    static std::size_t arc_cell(std::size_t pos) { return 2 * pos; }
    static std::size_t interval_cell(std::size_t i) { return 2 * i + 1; }
    static std::size_t cell_index(std::size_t c) { return c / 2; }

    std::optional<std::size_t> next(std::size_t c) const {
        if (c + 1 < cell_count()) return c + 1;
        if (circular_) return 0;
        return std::nullopt;
    }
    std::optional<std::size_t> prev(std::size_t c) const {
        if (c > 0) return c - 1;
        if (circular_) return cell_count() - 1;
        return std::nullopt;
    }
    /// Inner weight of the link edge between c and next(c).
    ExpQ forward_weight(std::size_t c) const { return intervals_[cell_index(c)].exponent; }

    std::string cell_name(std::size_t c) const {
        if (is_arc_cell(c)) return arcs_[cell_index(c)].id;
        const auto& iv = intervals_[cell_index(c)];
        return arcs_[iv.left].id + "~" + arcs_[iv.right].id;
    }

    bool cell_in_pancake(std::size_t c, std::size_t k) const {
        if (is_arc_cell(c)) {
            const auto& p = arcs_[cell_index(c)].pancakes;
            return std::find(p.begin(), p.end(), k) != p.end();
        }
        return intervals_[cell_index(c)].pancake == k;
    }

    bool cell_singular(std::size_t c) const {
        return is_arc_cell(c) && arcs_[cell_index(c)].is_lipschitz_singular;
    }

    /// Cells from `from` to `to` walking forward (inclusive).
    std::vector<std::size_t> stretch(std::size_t from, std::size_t to) const {
        std::vector<std::size_t> out{from};
        std::size_t c = from;
        while (c != to) {
            auto n = next(c);
            if (!n) throw std::logic_error("stretch runs past the end of the chain");
            c = *n;
            out.push_back(c);
        }
        return out;
    }

private:
    void push_arc(const std::string& id, std::size_t pancake) {
        if (index_.count(id)) throw ModelError("marked arc " + id + " appears twice in the link");
        index_[id] = arcs_.size();
        arcs_.push_back({id, {pancake}, false, false});
    }

    bool circular_;
    std::vector<MarkedArc> arcs_;
    std::vector<Interval> intervals_;
    std::map<std::string, std::size_t> index_;
};

using ExpMatrix = std::vector<std::vector<ExpQ>>;

/// All-pairs bottleneck (max-min) closure, in place.
inline void maxmin_closure(ExpMatrix& d) {
    const std::size_t n = d.size();
    for (std::size_t k = 0; k < n; ++k)
        for (std::size_t i = 0; i < n; ++i) {
            if (d[i][k] == ExpQ(0)) continue;
            for (std::size_t j = 0; j < n; ++j) {
                ExpQ via = min(d[i][k], d[k][j]);
                if (d[i][j] < via) d[i][j] = via;
            }
        }
}

/// Link plus the inner and outer tangency-order closures over its cells.
/// Immutable once built.
class Geometry {
public:
    explicit Geometry(LinkModel m) : model_(std::move(m)), link_(model_) {
        const std::size_t n = link_.cell_count();
        inner_.assign(n, std::vector<ExpQ>(n, ExpQ(0)));
        for (std::size_t c = 0; c < n; ++c) {
            inner_[c][c] = ExpQ::inf();
            if (auto nx = link_.next(c)) {
                ExpQ w = link_.forward_weight(c);
                inner_[c][*nx] = max(inner_[c][*nx], w);
                inner_[*nx][c] = inner_[c][*nx];
            }
        }
        maxmin_closure(inner_);
        outer_ = inner_;
        for (auto& e : model_.contacts) {
            auto a = link_.find_arc(e.a);
            auto b = link_.find_arc(e.b);
            if (!a || !b) throw ModelError("contact references unknown arc");
            std::size_t ca = Link::arc_cell(*a), cb = Link::arc_cell(*b);
            outer_[ca][cb] = max(outer_[ca][cb], e.q);
            outer_[cb][ca] = outer_[ca][cb];
        }
        maxmin_closure(outer_);
    }

    const LinkModel& model() const { return model_; }
    const Link& link() const { return link_; }
    ExpQ beta() const { return model_.beta; }

    ExpQ inner(std::size_t c1, std::size_t c2) const { return inner_[c1][c2]; }
    ExpQ outer(std::size_t c1, std::size_t c2) const { return outer_[c1][c2]; }
    const ExpMatrix& inner_matrix() const { return inner_; }
    const ExpMatrix& outer_matrix() const { return outer_; }

    ExpQ inner_tord(const std::string& a, const std::string& b) const {
        return inner(Link::arc_cell(link_.arc_position(a)), Link::arc_cell(link_.arc_position(b)));
    }
    ExpQ outer_tord(const std::string& a, const std::string& b) const {
        return outer(Link::arc_cell(link_.arc_position(a)), Link::arc_cell(link_.arc_position(b)));
    }

    std::size_t pancake_index(const std::string& id) const {
        for (std::size_t k = 0; k < model_.pancakes.size(); ++k)
            if (model_.pancakes[k].id == id) return k;
        throw ModelError("unknown pancake " + id);
    }

    /// Order of the distance function to pancake k on cell c.
    ExpQ tord_to_pancake(std::size_t c, std::size_t k) const {
        if (link_.cell_in_pancake(c, k)) return ExpQ::inf();
        ExpQ best = ExpQ(0);
        for (std::size_t d = 0; d < link_.cell_count(); ++d)
            if (link_.cell_in_pancake(d, k)) best = max(best, outer_[c][d]);
        return best;
    }
    ExpQ tord_to_pancake(const std::string& arc, const std::string& pancake) const {
        return tord_to_pancake(Link::arc_cell(link_.arc_position(arc)), pancake_index(pancake));
    }

    /// Minimum inner order over all pairs of cells.
    ExpQ exponent_mu() const {
        ExpQ mu = ExpQ::inf();
        for (auto& row : inner_)
            for (auto& v : row) mu = min(mu, v);
        return mu;
    }

    bool is_normally_embedded() const { return inner_ == outer_; }

    /// Every pair with a strict outer increase sits over inner order beta.
    bool check_weak_ne() const {
        const std::size_t n = inner_.size();
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = 0; j < n; ++j)
                if (outer_[i][j] > inner_[i][j] && inner_[i][j] != model_.beta) return false;
        return true;
    }

private:
    LinkModel model_;
    Link link_;
    ExpMatrix inner_;
    ExpMatrix outer_;
};

struct ValidationReport {
    std::vector<std::string> violations;
    bool ok() const { return violations.empty(); }
};

inline ValidationReport validate(const LinkModel& m) {
    ValidationReport r;
    auto fail = [&](std::string s) { r.violations.push_back(std::move(s)); };
    if (m.beta.is_inf() || m.beta < ExpQ(1)) fail("beta must be a finite exponent >= 1");
    std::optional<Geometry> geo;
    try {
        for (auto& pc : m.pancakes)
            for (auto& e : pc.internal)
                if (e.is_inf() || e < m.beta)
                    fail("internal exponent " + e.str() + " in pancake " + pc.id +
                         " is not a finite exponent >= beta");
        std::set<std::string> ids;
        for (auto& pc : m.pancakes)
            if (!ids.insert(pc.id).second) fail("duplicate pancake id " + pc.id);
        geo.emplace(m);
    } catch (const ModelError& e) {
        fail(e.what());
        return r;
    }
    const Link& link = geo->link();
    for (auto& c : m.contacts) {
        if (c.a == c.b) {
            fail("contact joins " + c.a + " to itself");
            continue;
        }
        if (c.q.is_inf()) fail("contact " + c.a + "," + c.b + " has infinite exponent");
        ExpQ in = geo->inner_tord(c.a, c.b);
        if (!(c.q > in))
            fail("contact not above inner order: " + c.a + "," + c.b + " q=" + c.q.str() +
                 " itord=" + in.str());
    }
    ExpQ mu = geo->exponent_mu();
    if (mu != m.beta) fail("exponent mismatch: beta=" + m.beta.str() + " but mu=" + mu.str());

    // Pancakes are normally embedded: outer order equals the order along the pancake.
    for (std::size_t k = 0; k < m.pancakes.size(); ++k) {
        std::vector<std::size_t> cells;
        for (std::size_t c = 0; c < link.cell_count(); ++c)
            if (!Link::is_arc_cell(c) && link.intervals()[Link::cell_index(c)].pancake == k)
                cells.push_back(c);
        // cells of one pancake are the interval cells plus their endpoints, in order
        std::vector<std::size_t> seq;
        for (std::size_t c : cells) {
            const auto& iv = link.intervals()[Link::cell_index(c)];
            if (seq.empty()) seq.push_back(Link::arc_cell(iv.left));
            seq.push_back(c);
            seq.push_back(Link::arc_cell(iv.right));
        }
        bool ne = true;
        for (std::size_t i = 0; i < seq.size() && ne; ++i) {
            ExpQ along = ExpQ::inf();
            for (std::size_t j = i + 1; j < seq.size(); ++j) {
                std::size_t edge = Link::is_arc_cell(seq[j]) ? seq[j - 1] : seq[j];
                along = min(along, link.forward_weight(edge));
                if (seq[i] == seq[j]) continue;
                if (geo->outer(seq[i], seq[j]) != along) {
                    ne = false;
                    break;
                }
            }
        }
        if (!ne) fail("pancake " + m.pancakes[k].id + " is not normally embedded");
    }

    // Laminarity: every outer ball above beta is a union of inner balls.
    const std::size_t n = link.cell_count();
    for (std::size_t x = 0; x < n; ++x)
        for (std::size_t y = 0; y < n; ++y)
            for (std::size_t z = 0; z < n; ++z) {
                ExpQ q = geo->outer(x, y);
                if (!(q > m.beta)) continue;
                if (geo->inner(y, z) >= q && geo->outer(x, z) < q) {
                    fail("closure not laminar at " + link.cell_name(x));
                    return r;
                }
            }
    return r;
}

inline ExpQ inner_tord(const LinkModel& m, const std::string& a, const std::string& b) {
    return Geometry(m).inner_tord(a, b);
}
inline ExpQ outer_tord(const LinkModel& m, const std::string& a, const std::string& b) {
    return Geometry(m).outer_tord(a, b);
}
inline ExpQ tord_to_pancake(const LinkModel& m, const std::string& a, const std::string& k) {
    return Geometry(m).tord_to_pancake(a, k);
}
/// Target outer order for a pair of marked arcs.
using PairTarget = std::pair<std::pair<std::string, std::string>, ExpQ>;

/// Adds contacts, highest target first, wherever the current outer closure
/// is still below the target. For ultrametric targets the resulting outer
/// closure equals the targets on every listed pair.
inline void fill_contacts(LinkModel& m, std::vector<PairTarget> target) {
    std::stable_sort(target.begin(), target.end(), [](auto& x, auto& y) { return y.second < x.second; });
    Geometry g(m);
    const Link& l = g.link();
    ExpMatrix outer = g.outer_matrix();
    for (auto& [pair, q] : target) {
        std::size_t a = Link::arc_cell(l.arc_position(pair.first));
        std::size_t b = Link::arc_cell(l.arc_position(pair.second));
        if (!(outer[a][b] < q)) continue;
        m.contacts.push_back({pair.first, pair.second, q});
        // incremental closure update for the new edge
        const std::size_t n = outer.size();
        std::vector<ExpQ> ra(outer[a]), rb(outer[b]);
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = 0; j < n; ++j) {
                ExpQ via = max(min(min(ra[i], q), rb[j]), min(min(rb[i], q), ra[j]));
                if (outer[i][j] < via) outer[i][j] = via;
            }
    }
}

inline ExpQ exponent_mu(const LinkModel& m) { return Geometry(m).exponent_mu(); }
inline bool is_normally_embedded(const LinkModel& m) { return Geometry(m).is_normally_embedded(); }
inline bool check_weak_ne(const LinkModel& m) { return Geometry(m).check_weak_ne(); }

}  // namespace lipgeo
