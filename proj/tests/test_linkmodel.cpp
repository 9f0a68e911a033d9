#include "generators.hpp"
#include "lipgeo/link_model.hpp"
#include "lipgeo/snk_io.hpp"

#include <gtest/gtest.h>

#include <functional>
#include <random>

using namespace lipgeo;

namespace {

LinkModel cs2() { return load_snk(std::string(LIPGEO_SAMPLES) + "/cs2.snk"); }

const std::vector<ExpQ> kExps = {ExpQ(1), ExpQ(3, 2), ExpQ(2), ExpQ(3)};

LinkModel random_model(std::mt19937& rng) {
    std::uniform_int_distribution<int> npan(1, 4), extra(0, 1), pick(0, 3), nc(0, 3), coin(0, 1);
    LinkModel m;
    m.beta = ExpQ(1);
    m.topology = coin(rng) ? Topology::Circular : Topology::Segment;
    int p = npan(rng);
    if (m.topology == Topology::Circular && p == 1 && coin(rng)) p = 2;
    int next = 0;
    std::string first = "a0";
    std::string prev = first;
    ++next;
    for (int k = 0; k < p; ++k) {
        PancakeSpec pc{"X" + std::to_string(k + 1), {prev}, {}};
        int inner = extra(rng);
        for (int i = 0; i < inner; ++i) {
            pc.arcs.push_back("a" + std::to_string(next++));
            pc.internal.push_back(kExps[pick(rng)]);
        }
        bool closing = m.topology == Topology::Circular && k + 1 == p;
        std::string last = closing ? first : "a" + std::to_string(next++);
        pc.arcs.push_back(last);
        pc.internal.push_back(kExps[pick(rng)]);
        prev = last;
        m.pancakes.push_back(pc);
    }
    // force beta to be attained
    m.pancakes[0].internal[0] = ExpQ(1);
    std::uniform_int_distribution<int> arcpick(0, next - 1);
    int n = nc(rng);
    for (int i = 0; i < n; ++i) {
        std::string a = "a" + std::to_string(arcpick(rng)), b = "a" + std::to_string(arcpick(rng));
        if (a == b) continue;
        m.contacts.push_back({a, b, kExps[pick(rng)]});
    }
    return m;
}

}  // namespace

TEST(Snk, ParseCs2) {
    LinkModel m = cs2();
    EXPECT_EQ(m.beta, ExpQ(1));
    EXPECT_EQ(m.topology, Topology::Circular);
    ASSERT_EQ(m.pancakes.size(), 4u);
    EXPECT_EQ(m.pancakes[0].internal[0], ExpQ(1));
    ASSERT_EQ(m.contacts.size(), 2u);
    EXPECT_EQ(m.contacts[1].q, ExpQ(3));
}

TEST(Snk, RoundTrip) {
    LinkModel m = cs2();
    EXPECT_EQ(parse_snk(print_snk(m)), m);
}

TEST(Snk, RejectsUnknownKeyWithLine) {
    try {
        parse_snk("beta 1\ntopology circular\nfrobnicate x\n");
        FAIL();
    } catch (const ParseError& e) {
        EXPECT_EQ(e.line(), 3u);
    }
    EXPECT_THROW(parse_snk("beta x\n"), ParseError);
    EXPECT_THROW(parse_snk("topology circular\n"), ParseError);
    EXPECT_THROW(parse_snk("beta 1\npancake X a b\ninternal X a c 2\n"), ParseError);
}

TEST(Closure, Cs2Values) {
    Geometry g(cs2());
    EXPECT_EQ(g.outer_tord("g1", "g3"), ExpQ(2));
    EXPECT_EQ(g.inner_tord("g1", "g3"), ExpQ(1));
    EXPECT_EQ(g.outer_tord("g2", "g4"), ExpQ(3));
    EXPECT_EQ(g.outer_tord("g1", "g2"), ExpQ(1));
    EXPECT_EQ(g.exponent_mu(), ExpQ(1));
    EXPECT_FALSE(g.is_normally_embedded());
    EXPECT_TRUE(g.check_weak_ne());
    EXPECT_EQ(g.tord_to_pancake("g1", "X3"), ExpQ(2));
    EXPECT_EQ(g.tord_to_pancake("g1", "X1"), ExpQ::inf());
    // generic interior arc of X1 against X3
    std::size_t generic = Link::interval_cell(0);
    EXPECT_EQ(g.link().cell_name(generic), "g4~g1");
    EXPECT_EQ(g.tord_to_pancake(generic, g.pancake_index("X3")), ExpQ(1));
}

TEST(Closure, NonArchimedeanOnSampleArcs) {
    Geometry g(cs2());
    const std::vector<std::string> ids = {"g1", "g2", "g3", "g4"};
    for (auto& a : ids)
        for (auto& b : ids)
            for (auto& c : ids)
                EXPECT_GE(g.outer_tord(b, c), min(g.outer_tord(a, b), g.outer_tord(a, c)));
}

TEST(Validate, Cs2AndHornAreValid) {
    EXPECT_TRUE(validate(cs2()).ok());
    auto horn = load_snk(std::string(LIPGEO_SAMPLES) + "/horn.snk");
    auto r = validate(horn);
    EXPECT_TRUE(r.ok()) << (r.violations.empty() ? "" : r.violations[0]);
    EXPECT_TRUE(is_normally_embedded(horn));
}

TEST(Validate, ContactBelowInnerRejected) {
    LinkModel m = cs2();
    m.contacts.push_back({"g1", "g2", ExpQ(1)});
    auto r = validate(m);
    ASSERT_FALSE(r.ok());
    EXPECT_NE(r.violations[0].find("contact not above inner order"), std::string::npos);
}

TEST(Validate, BrokenChainsAndBeta) {
    LinkModel m = cs2();
    m.pancakes[3].arcs.back() = "g9";
    EXPECT_FALSE(validate(m).ok());
    m = cs2();
    m.beta = ExpQ(3, 2);
    EXPECT_FALSE(validate(m).ok());
    m = cs2();
    m.pancakes[1].arcs[0] = "g3";
    EXPECT_FALSE(validate(m).ok());
    m = cs2();
    m.singular_arcs.push_back("nope");
    EXPECT_FALSE(validate(m).ok());
}

TEST(Validate, PancakeNotNormallyEmbedded) {
    LinkModel m = parse_snk(
        "beta 1\ntopology segment\npancake X1 a b c\ninternal X1 a b 1\ninternal X1 b c 1\n"
        "pancake X2 c d\ncontact a c 2\n");
    auto r = validate(m);
    ASSERT_FALSE(r.ok());
    bool found = false;
    for (auto& v : r.violations) found |= v.find("not normally embedded") != std::string::npos;
    EXPECT_TRUE(found);
}

TEST(ClosureProperty, MatchesBruteForceSimplePaths) {
    std::mt19937 rng(4242);
    int valid = 0;
    for (int it = 0; it < 300; ++it) {
        LinkModel m = random_model(rng);
        Geometry g(m);
        auto win = testgen::edge_weights(g, false), wout = testgen::edge_weights(g, true);
        for (std::size_t s = 0; s < win.size(); ++s)
            for (std::size_t t = 0; t < win.size(); ++t) {
                ASSERT_EQ(g.inner(s, t), testgen::brute_bottleneck(win, s, t));
                ASSERT_EQ(g.outer(s, t), testgen::brute_bottleneck(wout, s, t));
            }
        if (!validate(m).ok()) continue;
        ++valid;
        // Laminarity: outer balls above beta are unions of link intervals at that level.
        for (std::size_t s = 0; s < win.size(); ++s)
            for (std::size_t t = 0; t < win.size(); ++t) {
                EXPECT_GE(g.outer(s, t), g.inner(s, t));
                EXPECT_GE(g.inner(s, t), m.beta);
            }
    }
    EXPECT_GT(valid, 20);
}

TEST(ClosureProperty, RoundTripRandomModels) {
    std::mt19937 rng(99);
    for (int it = 0; it < 100; ++it) {
        LinkModel m = random_model(rng);
        EXPECT_EQ(parse_snk(print_snk(m)), m) << print_snk(m) << "---\n" << print_snk(parse_snk(print_snk(m)));
    }
}
