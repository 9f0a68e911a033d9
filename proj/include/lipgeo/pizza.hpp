#pragma once

#include "lipgeo/link_model.hpp"
#include "lipgeo/zones.hpp"

#include <algorithm>
#include <set>
#include <string>
#include <vector>

namespace lipgeo {

class PizzaError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Affine width mu(q) = a*q + b with a in {0, 1}.
struct Width {
    int a = 0;
    ExpQ b = ExpQ(0);

    ExpQ operator()(const ExpQ& q) const { return a == 0 ? b : q + b; }
    friend bool operator==(const Width&, const Width&) = default;
};

/// A point on the link of a pancake: marked arc r (even) or the generic
/// midpoint of elementary interval r (odd), as 2r or 2r+1.
using Boundary = std::size_t;

enum class Monotone { Constant, Increasing, Decreasing };

/// Order of f_k on one half of an elementary interval, between a marked arc
/// (the anchor) and the interval's generic midpoint.
struct HalfRamp {
    std::size_t interval;  // global interval index
    bool anchor_left;
    ExpQ anchor_value;  // ord f_k at the anchor
    ExpQ mid_value;     // ord f_k at the generic midpoint
    ExpQ exponent;      // internal exponent of the interval
    bool ramp() const { return anchor_value > mid_value; }
    ExpQ lo() const { return mid_value; }
    ExpQ hi() const { return anchor_value; }
    Monotone direction() const {
        if (!ramp()) return Monotone::Constant;
        return anchor_left ? Monotone::Decreasing : Monotone::Increasing;
    }
};

struct PizzaSlice {
    Boundary from = 0;
    Boundary to = 0;
    ExpQ q_lo, q_hi;
    Width width;
    ExpQ exponent;  // Hölder exponent of the slice
    Monotone direction = Monotone::Constant;
    bool supported_at_end = false;  // maximal width realised at `to` rather than `from`

    bool q_point() const { return q_lo == q_hi; }
};

struct Pizza {
    std::size_t pancake = 0;
    std::size_t target = 0;
    bool minimal = false;
    std::vector<PizzaSlice> slices;
};

/// Piecewise description of q(x) = tord(x, X_k) on pancake j.
class OrderFunction {
public:
    OrderFunction(const Geometry& g, std::size_t j, std::size_t k) : g_(g), j_(j), k_(k) {
        const Link& l = g.link();
        if (j >= g.model().pancakes.size() || k >= g.model().pancakes.size())
            throw PizzaError("pancake index out of range");
        for (std::size_t i = 0; i < l.intervals().size(); ++i)
            if (l.intervals()[i].pancake == j) intervals_.push_back(i);
        ExpQ mu = ExpQ::inf();
        for (std::size_t i : intervals_) mu = min(mu, l.intervals()[i].exponent);
        if (mu != g.beta()) throw PizzaError("pancake exponent differs from beta");
        for (std::size_t i : intervals_) {
            const auto& iv = l.intervals()[i];
            ExpQ mid = value_at(Link::interval_cell(i));
            halves_.push_back({i, true, value_at(Link::arc_cell(iv.left)), mid, iv.exponent});
            halves_.push_back({i, false, value_at(Link::arc_cell(iv.right)), mid, iv.exponent});
        }
    }

    const Geometry& geometry() const { return g_; }
    std::size_t pancake() const { return j_; }
    std::size_t target() const { return k_; }
    const std::vector<HalfRamp>& halves() const { return halves_; }
    std::size_t boundary_count() const { return 2 * intervals_.size() + 1; }

    /// ord f_k on the cell of the link (INF on X_k itself).
    ExpQ value_at(std::size_t cell) const { return g_.tord_to_pancake(cell, k_); }

    ExpQ value_at_boundary(Boundary b) const {
        if (b % 2 == 1) return value_at(Link::interval_cell(intervals_[b / 2]));
        if (b == 2 * intervals_.size()) return value_at(Link::arc_cell(g_.link().intervals()[intervals_.back()].right));
        return value_at(Link::arc_cell(g_.link().intervals()[intervals_[b / 2]].left));
    }

    std::string boundary_name(Boundary b) const {
        const Link& l = g_.link();
        if (b % 2 == 1) return l.cell_name(Link::interval_cell(intervals_[b / 2]));
        if (b == 2 * intervals_.size()) return l.arcs()[l.intervals()[intervals_.back()].right].id;
        return l.arcs()[l.intervals()[intervals_[b / 2]].left].id;
    }

    /// Slice data for the union of halves [from, to) in boundary units, or
    /// nullopt when the union is not a pizza slice.
    std::optional<PizzaSlice> slice(Boundary from, Boundary to) const {
        PizzaSlice s;
        s.from = from;
        s.to = to;
        s.q_lo = ExpQ::inf();
        s.q_hi = ExpQ(0);
        s.exponent = ExpQ::inf();
        bool inc = false, dec = false;
        for (Boundary h = from; h < to; ++h) {
            const auto& half = halves_[h];
            s.q_lo = min(s.q_lo, half.lo());
            s.q_hi = max(s.q_hi, half.hi());
            s.exponent = min(s.exponent, half.exponent);
            inc |= half.direction() == Monotone::Increasing;
            dec |= half.direction() == Monotone::Decreasing;
        }
        if (inc && dec) return std::nullopt;
        s.direction = inc ? Monotone::Increasing : dec ? Monotone::Decreasing : Monotone::Constant;
        if (s.q_point()) {
            s.width = {0, s.exponent};
            return s;
        }
        // plateaus must sit where a ramp reaches their level, or have width equal to it
        for (Boundary h = from; h < to; ++h) {
            const auto& half = halves_[h];
            if (half.ramp() || half.exponent == half.anchor_value) continue;
            bool touched = false;
            for (Boundary r = from; r < to; ++r)
                if (halves_[r].ramp() && halves_[r].lo() <= half.anchor_value &&
                    half.anchor_value <= halves_[r].hi())
                    touched = true;
            if (!touched) return std::nullopt;
        }
        s.width = {1, ExpQ(0)};
        s.supported_at_end = s.direction == Monotone::Increasing;
        return s;
    }

private:
    const Geometry& g_;
    std::size_t j_, k_;
    std::vector<std::size_t> intervals_;  // global indices, in pancake order
    std::vector<HalfRamp> halves_;
};

inline Pizza pizza_decomposition(const OrderFunction& f) {
    Pizza p{f.pancake(), f.target(), false, {}};
    for (Boundary h = 0; h < f.halves().size(); ++h) p.slices.push_back(*f.slice(h, h + 1));
    return p;
}

/// Greedy left-to-right merging of adjacent slices, repeated to a fixpoint.
inline Pizza minimal_pizza(const OrderFunction& f, Pizza p) {
    bool changed = true;
    while (changed) {
        changed = false;
        std::vector<PizzaSlice> out;
        for (auto& s : p.slices) {
            if (!out.empty())
                if (auto merged = f.slice(out.back().from, s.to)) {
                    out.back() = *merged;
                    changed = true;
                    continue;
                }
            out.push_back(s);
        }
        p.slices = std::move(out);
    }
    p.minimal = true;
    return p;
}

inline Pizza minimal_pizza(const OrderFunction& f) { return minimal_pizza(f, pizza_decomposition(f)); }

/// Common refinement of the minimal pizzas of all f_l on pancake j.
struct Multipizza {
    std::size_t pancake = 0;
    std::vector<Boundary> boundaries;         // sorted, including both ends
    std::vector<std::vector<PizzaSlice>> by_function;  // [l][slice]
};

inline Multipizza multipizza(const Geometry& g, std::size_t j) {
    Multipizza mp{j, {}, {}};
    std::set<Boundary> cuts;
    std::vector<OrderFunction> fs;
    for (std::size_t l = 0; l < g.model().pancakes.size(); ++l) {
        fs.emplace_back(g, j, l);
        auto p = minimal_pizza(fs.back());
        for (auto& s : p.slices) {
            cuts.insert(s.from);
            cuts.insert(s.to);
        }
    }
    mp.boundaries.assign(cuts.begin(), cuts.end());
    for (auto& f : fs) {
        std::vector<PizzaSlice> row;
        for (std::size_t i = 0; i + 1 < mp.boundaries.size(); ++i) {
            auto s = f.slice(mp.boundaries[i], mp.boundaries[i + 1]);
            if (!s) throw std::logic_error("refinement of a pizza slice is not a slice");
            row.push_back(*s);
        }
        mp.by_function.push_back(std::move(row));
    }
    return mp;
}

/// Segment/nodal structure of G(X_j) relative to each pancake X_l.
struct RelativeStructure {
    std::size_t pancake = 0;
    std::vector<std::size_t> generic_cells;  // G(X_j) in link order
    std::vector<std::vector<int>> m;         // m[l][i] for generic_cells[i]
    std::vector<std::vector<std::vector<std::size_t>>> segments;     // [l] -> runs of cells
    std::vector<std::vector<std::vector<std::size_t>>> nodal_zones;  // [l] -> runs of cells
    std::vector<std::vector<std::size_t>> b_beta;                    // [l] -> cells with ord f_l = beta
    std::vector<std::vector<std::size_t>> h_beta;                    // [l] -> cells with ord f_l > beta
};

inline RelativeStructure relative_structure(const Geometry& g, std::size_t j) {
    const Link& l = g.link();
    const auto& pc = g.model().pancakes.at(j);
    RelativeStructure rs;
    rs.pancake = j;
    std::size_t first = Link::arc_cell(l.arc_position(pc.arcs.front()));
    std::size_t last = Link::arc_cell(l.arc_position(pc.arcs.back()));
    std::vector<std::size_t> cells;
    for (std::size_t i = 0; i < l.intervals().size(); ++i)
        if (l.intervals()[i].pancake == j) {
            const auto& iv = l.intervals()[i];
            if (cells.empty()) cells.push_back(Link::arc_cell(iv.left));
            cells.push_back(Link::interval_cell(i));
            cells.push_back(Link::arc_cell(iv.right));
        }
    for (std::size_t c : cells)
        if (g.inner(c, first) == g.beta() && g.inner(c, last) == g.beta()) rs.generic_cells.push_back(c);
    const auto& gc = rs.generic_cells;
    const std::size_t p = g.model().pancakes.size();
    rs.m.assign(p, {});
    rs.segments.assign(p, {});
    rs.nodal_zones.assign(p, {});
    rs.b_beta.assign(p, {});
    rs.h_beta.assign(p, {});
    for (std::size_t t = 0; t < p; ++t) {
        for (std::size_t c : gc) {
            ExpQ q = g.tord_to_pancake(c, t);
            rs.m[t].push_back(q > g.beta() ? 1 : 0);
            (q > g.beta() ? rs.h_beta[t] : rs.b_beta[t]).push_back(c);
        }
        // clusters inside G(X_j): consecutive cells joined by an edge above beta
        std::vector<bool> nodal(gc.size(), false);
        for (std::size_t i = 0; i < gc.size();) {
            std::size_t e = i;
            while (e + 1 < gc.size() && l.forward_weight(gc[e]) > g.beta()) ++e;
            bool generic_interval = e == i && !Link::is_arc_cell(gc[i]);
            if (!generic_interval && rs.m[t][i] == 1) {
                bool left = i > 0 && rs.m[t][i - 1] == 1;
                bool right = e + 1 < gc.size() && rs.m[t][e + 1] == 1;
                if (!left || !right)
                    for (std::size_t x = i; x <= e; ++x) nodal[x] = true;
            }
            i = e + 1;
        }
        for (std::size_t i = 0; i < gc.size(); ++i) {
            bool opens = i == 0 || nodal[i] != nodal[i - 1] || (!nodal[i] && rs.m[t][i] != rs.m[t][i - 1]);
            auto& bucket = nodal[i] ? rs.nodal_zones[t] : rs.segments[t];
            if (opens) bucket.push_back({});
            bucket.back().push_back(gc[i]);
        }
    }
    return rs;
}

}  // namespace lipgeo
