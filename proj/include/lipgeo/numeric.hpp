#pragma once

#include "lipgeo/arc.hpp"

#include <cmath>
#include <functional>
#include <limits>
#include <stdexcept>
#include <vector>

namespace lipgeo {

/// Sample points t = 10^-lo_exp .. 10^-hi_exp, log-spaced.
struct NumericGrid {
    double lo_exp = 3.0;
    double hi_exp = 6.0;
    int points = 13;

    std::vector<long double> samples() const {
        std::vector<long double> ts;
        for (int i = 0; i < points; ++i) {
            long double e = lo_exp + (hi_exp - lo_exp) * i / (points - 1);
            ts.push_back(std::pow(10.0L, -e));
        }
        return ts;
    }
};

class NumericError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

struct SlopeFit {
    double slope = 0;
    double residual = 0;  // root mean square of the fit in log space
};

/// Least-squares fit of log f(t) against log t. The slope is +infinity when
/// f vanishes at every sample.
inline SlopeFit loglog_fit(const std::function<long double(long double)>& f, const NumericGrid& grid = {}) {
    std::vector<long double> xs, ys;
    std::size_t zeros = 0;
    for (long double t : grid.samples()) {
        long double v = f(t);
        if (!(v > 0)) {
            ++zeros;
            continue;
        }
        xs.push_back(std::log(t));
        ys.push_back(std::log(v));
    }
    if (zeros == grid.samples().size()) return {std::numeric_limits<double>::infinity(), 0};
    if (zeros) throw NumericError("distance underflows on part of the grid");
    long double mx = 0, my = 0;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        mx += xs[i];
        my += ys[i];
    }
    mx /= xs.size();
    my /= ys.size();
    long double sxy = 0, sxx = 0;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        sxy += (xs[i] - mx) * (ys[i] - my);
        sxx += (xs[i] - mx) * (xs[i] - mx);
    }
    const long double slope = sxy / sxx;
    long double ss = 0;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        long double r = ys[i] - my - slope * (xs[i] - mx);
        ss += r * r;
    }
    return {static_cast<double>(slope), static_cast<double>(std::sqrt(ss / xs.size()))};
}

inline double loglog_slope(const std::function<long double(long double)>& f, const NumericGrid& grid = {}) {
    return loglog_fit(f, grid).slope;
}

inline long double euclid_distance(const std::vector<long double>& p, const std::vector<long double>& q) {
    long double s = 0;
    for (std::size_t i = 0; i < p.size(); ++i) s += (p[i] - q[i]) * (p[i] - q[i]);
    return std::sqrt(s);
}

/// Numerical estimate of tord(a, b) from point evaluations only.
inline double numeric_tord(const PuiseuxArc& a, const PuiseuxArc& b, const NumericGrid& grid = {}) {
    if (a.dim() != b.dim()) throw std::invalid_argument("arcs of different dimension");
    return loglog_slope([&](long double t) { return euclid_distance(a.evaluate(t), b.evaluate(t)); }, grid);
}

/// Numerical estimate of the tangency order of a to the ruled family between
/// theta and theta2: the largest slope over an s-grid with `steps` cells.
inline double numeric_tord_family(const PuiseuxArc& a, const PuiseuxArc& theta, const PuiseuxArc& theta2,
                                  int steps = 64, const NumericGrid& grid = {}) {
    double best = -std::numeric_limits<double>::infinity();
    for (int i = 0; i <= steps; ++i) {
        long double s = static_cast<long double>(i) / steps;
        double slope = loglog_slope(
            [&](long double t) {
                auto p = theta.evaluate(t);
                auto q = theta2.evaluate(t);
                for (std::size_t j = 0; j < p.size(); ++j) p[j] = (1 - s) * p[j] + s * q[j];
                return euclid_distance(a.evaluate(t), p);
            },
            grid);
        best = std::max(best, slope);
    }
    return best;
}

}  // namespace lipgeo
