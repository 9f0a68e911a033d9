#include "generators.hpp"
#include "lipgeo/pizza.hpp"
#include "lipgeo/snk_io.hpp"

#include <gtest/gtest.h>

using namespace lipgeo;

namespace {

LinkModel cs2() { return load_snk(std::string(LIPGEO_SAMPLES) + "/cs2.snk"); }

bool beta_pancake(const Geometry& g, std::size_t j) {
    ExpQ mu = ExpQ::inf();
    for (auto& e : g.model().pancakes[j].internal) mu = min(mu, e);
    return mu == g.beta();
}

// Insert a marked arc x at inner order s from the left end of interval r of
// pancake j; the closure then gives ord f_k at x independently of the ramps.
ExpQ refined_value(const LinkModel& m, std::size_t j, std::size_t r, ExpQ s, std::size_t k) {
    LinkModel refined = m;
    auto& pc = refined.pancakes[j];
    ExpQ e = pc.internal[r];
    pc.arcs.insert(pc.arcs.begin() + r + 1, "probe");
    pc.internal[r] = s;
    pc.internal.insert(pc.internal.begin() + r + 1, e);
    Geometry g(refined);
    return g.tord_to_pancake("probe", refined.pancakes[k].id);
}

}  // namespace

TEST(OrderFunction, Cs2Ramps) {
    Geometry g(cs2());
    OrderFunction f(g, 0, 2);
    ASSERT_EQ(f.halves().size(), 2u);
    EXPECT_EQ(f.value_at_boundary(0), ExpQ(3));  // g4
    EXPECT_EQ(f.value_at_boundary(1), ExpQ(1));  // generic
    EXPECT_EQ(f.value_at_boundary(2), ExpQ(2));  // g1
    EXPECT_TRUE(f.halves()[0].ramp());
    EXPECT_EQ(f.halves()[0].direction(), Monotone::Decreasing);
}

TEST(OrderFunction, SelfIsInfinite) {
    Geometry g(cs2());
    OrderFunction f(g, 0, 0);
    for (Boundary b = 0; b < f.boundary_count(); ++b) EXPECT_EQ(f.value_at_boundary(b), ExpQ::inf());
    auto p = minimal_pizza(f);
    ASSERT_EQ(p.slices.size(), 1u);
    EXPECT_TRUE(p.slices[0].q_point());
    EXPECT_EQ(p.slices[0].q_lo, ExpQ::inf());
}

TEST(OrderFunction, AdjacentPancakeRampsFromSharedArc) {
    Geometry g(load_snk(std::string(LIPGEO_SAMPLES) + "/horn.snk"));
    OrderFunction f(g, 0, 1);
    EXPECT_EQ(f.value_at_boundary(0), ExpQ::inf());
    EXPECT_EQ(f.value_at_boundary(1), ExpQ(3, 2));
    EXPECT_EQ(f.value_at_boundary(2), ExpQ::inf());
}

TEST(OrderFunction, RejectsPancakeAboveBeta) {
    LinkModel m = parse_snk("beta 1\ntopology segment\npancake X1 a b\npancake X2 b c\ninternal X2 b c 2\n");
    Geometry g(m);
    EXPECT_THROW(OrderFunction(g, 1, 0), PizzaError);
}

TEST(MinimalPizza, Cs2TwoSlices) {
    Geometry g(cs2());
    OrderFunction f(g, 0, 2);
    auto p = minimal_pizza(f);
    ASSERT_EQ(p.slices.size(), 2u);
    EXPECT_EQ(f.boundary_name(p.slices[0].from), "g4");
    EXPECT_EQ(p.slices[0].q_lo, ExpQ(1));
    EXPECT_EQ(p.slices[0].q_hi, ExpQ(3));
    EXPECT_EQ(f.boundary_name(p.slices[1].to), "g1");
    EXPECT_EQ(p.slices[1].q_hi, ExpQ(2));
    EXPECT_EQ(p.slices[0].width, (Width{1, ExpQ(0)}));
    EXPECT_FALSE(p.slices[0].supported_at_end);
    EXPECT_TRUE(p.slices[1].supported_at_end);
}

TEST(Multipizza, Cs2AtMostFourSlices) {
    Geometry g(cs2());
    auto mp = multipizza(g, 0);
    EXPECT_LE(mp.boundaries.size() - 1, 4u);
    EXPECT_EQ(mp.by_function.size(), 4u);
}

TEST(Multipizza, SinglePancakeLoopIsTrivial) {
    LinkModel m = parse_snk("beta 1\ntopology circular\npancake X1 a b a\n");
    Geometry g(m);
    auto mp = multipizza(g, 0);
    EXPECT_EQ(mp.boundaries.size(), 2u);
}

TEST(Relative, Cs2Formula) {
    Geometry g(cs2());
    ZoneAnalysis z(g);
    for (std::size_t j = 0; j < 4; ++j) {
        auto rs = relative_structure(g, j);
        ASSERT_EQ(rs.generic_cells.size(), 1u);
        for (std::size_t i = 0; i < rs.generic_cells.size(); ++i) {
            int sum = 0;
            for (std::size_t l = 0; l < 4; ++l) sum += rs.m[l][i];
            EXPECT_EQ(sum, z.multiplicity(rs.generic_cells[i]));
            EXPECT_EQ(rs.m[j][i], 1);
        }
    }
    auto rs = relative_structure(g, 0);
    EXPECT_EQ(rs.m[2][0], 0);
    EXPECT_EQ(rs.segments[2].size(), 1u);
    EXPECT_TRUE(rs.nodal_zones[2].empty());
    EXPECT_EQ(rs.b_beta[2].size(), 1u);
    EXPECT_TRUE(rs.h_beta[2].empty());
}

TEST(PizzaProperty, RampsMatchRefinedClosure) {
    std::mt19937 rng(17);
    const std::vector<ExpQ> offsets = {ExpQ(0), ExpQ(1, 3), ExpQ(1), ExpQ(10)};
    for (int it = 0; it < 15; ++it) {
        LinkModel m = testgen::random_circular_snake(rng);
        Geometry g(m);
        for (std::size_t j = 0; j < m.pancakes.size(); ++j) {
            if (!beta_pancake(g, j)) continue;
            for (std::size_t k = 0; k < m.pancakes.size(); ++k) {
                OrderFunction f(g, j, k);
                for (std::size_t r = 0; r < m.pancakes[j].internal.size(); ++r) {
                    const auto& half = f.halves()[2 * r];
                    for (auto off : offsets) {
                        ExpQ s = half.exponent + off;
                        ExpQ predicted = max(min(s, half.anchor_value), half.mid_value);
                        ASSERT_EQ(refined_value(m, j, r, s, k), predicted) << print_snk(m);
                    }
                }
            }
        }
    }
}

TEST(PizzaProperty, SliceInvariants) {
    std::mt19937 rng(23);
    for (int it = 0; it < 60; ++it) {
        LinkModel m = testgen::random_circular_snake(rng);
        Geometry g(m);
        ZoneAnalysis z(g);
        auto segs = z.segments();
        for (std::size_t j = 0; j < m.pancakes.size(); ++j) {
            if (!beta_pancake(g, j)) continue;
            std::set<Boundary> single_cuts;
            for (std::size_t k = 0; k < m.pancakes.size(); ++k) {
                OrderFunction f(g, j, k);
                auto p = minimal_pizza(f);
                for (std::size_t i = 0; i < p.slices.size(); ++i) {
                    const auto& s = p.slices[i];
                    for (auto q : {s.q_lo, s.q_hi}) {
                        EXPECT_GE(s.width(q), m.beta);
                        EXPECT_LE(s.width(q), q);
                    }
                    EXPECT_EQ(s.width.a == 0, s.q_point());
                    if (i + 1 < p.slices.size()) {
                        EXPECT_FALSE(f.slice(s.from, p.slices[i + 1].to).has_value());
                    }
                    single_cuts.insert(s.from);
                }
            }
            auto mp = multipizza(g, j);
            for (auto c : single_cuts)
                EXPECT_TRUE(std::binary_search(mp.boundaries.begin(), mp.boundaries.end(), c));
        }
    }
}
