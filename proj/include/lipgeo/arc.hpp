#pragma once

#include "lipgeo/series.hpp"

#include <algorithm>
#include <set>
#include <string>
#include <vector>

namespace lipgeo {

/// An arc gamma(t) given by its coordinate series.
struct PuiseuxArc {
    std::string name;
    std::vector<Series> coords;

    std::size_t dim() const { return coords.size(); }

    std::vector<long double> evaluate(long double t) const {
        std::vector<long double> out;
        out.reserve(coords.size());
        for (auto& c : coords) out.push_back(c.evaluate(t));
        return out;
    }
};

namespace detail {

/// Leading exponent of the euclidean norm of a vector of series.
inline ExpQ norm_order(const std::vector<Series>& v) {
    ExpQ known = ExpQ::inf();
    ExpQ unknown_floor = ExpQ::inf();
    bool any_unknown = false;
    for (auto& s : v) {
        if (!s.is_zero()) {
            known = min(known, s.order());
        } else if (!s.exact()) {
            any_unknown = true;
            unknown_floor = min(unknown_floor, s.truncation());
        }
    }
    if (any_unknown && unknown_floor <= known)
        throw Indeterminate("tangency order not determined below O(t^" + unknown_floor.str() + ")");
    return known;
}

}  // namespace detail

/// Leading exponent of |gamma(t)|; must be 1 for arcs parameterized by distance.
inline ExpQ norm_order(const PuiseuxArc& a) { return detail::norm_order(a.coords); }

/// Tangency order: leading exponent of |a(t) - b(t)|, INF when a == b.
inline ExpQ tord_arcs(const PuiseuxArc& a, const PuiseuxArc& b) {
    if (a.dim() != b.dim()) throw std::invalid_argument("arcs of different ambient dimension");
    std::vector<Series> diff;
    diff.reserve(a.dim());
    for (std::size_t i = 0; i < a.dim(); ++i) diff.push_back(a.coords[i] - b.coords[i]);
    return detail::norm_order(diff);
}

/// Germ of the union of straight segments [theta(t), theta2(t)].
struct RuledTriangleSpec {
    std::string name;
    std::string first;
    std::string second;
};

/// The ruling arc (1-s) theta + s theta2.
inline PuiseuxArc ruling_arc(const PuiseuxArc& theta, const PuiseuxArc& theta2, const Coeff& s) {
    if (theta.dim() != theta2.dim()) throw std::invalid_argument("arcs of different ambient dimension");
    PuiseuxArc out;
    out.name = theta.name + "~" + theta2.name;
    for (std::size_t i = 0; i < theta.dim(); ++i)
        out.coords.push_back(theta.coords[i] + s * (theta2.coords[i] - theta.coords[i]));
    return out;
}

/// Supremum over s in [0,1] of tord(a, (1-s) theta + s theta2).
///
/// For each coordinate the leading coefficient of a - lambda_s is affine in s,
/// so the order is constant away from the finitely many roots collected below;
/// evaluating at every root plus one generic parameter gives the supremum.
inline ExpQ tord_arc_family(const PuiseuxArc& a, const PuiseuxArc& theta, const PuiseuxArc& theta2) {
    if (a.dim() != theta.dim() || a.dim() != theta2.dim())
        throw std::invalid_argument("arcs of different ambient dimension");
    std::set<Coeff> roots;
    for (std::size_t i = 0; i < a.dim(); ++i) {
        Series d = a.coords[i] - theta.coords[i];
        Series e = theta2.coords[i] - theta.coords[i];
        for (auto& term : e.terms()) {
            Coeff s = d.coefficient(term.exponent) / term.coeff;
            if (s >= 0 && s <= 1) roots.insert(s);
        }
    }
    std::vector<Coeff> pts(roots.begin(), roots.end());
    std::vector<Coeff> fence = pts;
    fence.insert(fence.begin(), Coeff(0));
    fence.push_back(Coeff(1));
    Coeff generic = Coeff(1, 2);
    Coeff best_gap = -1;
    for (std::size_t i = 0; i + 1 < fence.size(); ++i) {
        Coeff gap = fence[i + 1] - fence[i];
        if (gap > best_gap) {
            best_gap = gap;
            generic = (fence[i] + fence[i + 1]) / 2;
        }
    }
    ExpQ best = tord_arcs(a, ruling_arc(theta, theta2, generic));
    for (auto& s : pts) best = max(best, tord_arcs(a, ruling_arc(theta, theta2, s)));
    return best;
}

}  // namespace lipgeo
