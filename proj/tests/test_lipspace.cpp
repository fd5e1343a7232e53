#include "support.hpp"

#include <gtest/gtest.h>

using namespace lipschitz;

namespace {

FiniteMetricSpace vee() {
    // d(0,a) = d(0,b) = 1, d(a,b) = 2
    return FiniteMetricSpace({"0", "a", "b"}, 0, {{0, 1, 1}, {1, 0, 2}, {1, 2, 0}});
}

PartialFunction random_partial(std::mt19937_64& g, const FiniteMetricSpace& s, const Rational& slope) {
    // restrict a slope-Lipschitz total function to a random domain containing the base
    std::vector<Index> dom{s.base()};
    std::uniform_int_distribution<int> coin(0, 1);
    for (Index i = 0; i < s.size(); ++i)
        if (i != s.base() && coin(g)) dom.push_back(i);
    auto f = testsupport::random_function(g, s);
    Rational n = lip_norm(f);
    auto scaled = n == 0 ? f : f.scaled(slope / n);
    return PartialFunction::restrict(scaled, PointSubset(s.size(), dom));
}

}  // namespace

TEST(Lipspace, SmallNorms) {
    FiniteMetricSpace two({"0", "p"}, 0, {{0, 1}, {1, 0}});
    EXPECT_EQ(lip_norm(LipschitzFunction(two, {0, 1})), 1);
    auto s = vee();
    EXPECT_EQ(lip_norm(LipschitzFunction(s, {0, 1, -1})), 1);
    EXPECT_EQ(lip_norm(LipschitzFunction::zero(s)), 0);
    EXPECT_EQ(lip_norm(LipschitzFunction(s, {0, 3, Rational(1, 2)})), 3);
}

TEST(Lipspace, BaseValueMustVanish) {
    auto s = vee();
    EXPECT_THROW(LipschitzFunction(s, {1, 0, 0}), PreconditionError);
    EXPECT_THROW(LipschitzFunction(s, {0, 0}), PreconditionError);
    EXPECT_EQ(LipschitzFunction::from_named(s, {{"b", Rational(2)}}).at("b"), 2);
}

TEST(Lipspace, NormMatchesBruteForceOnRandomSpaces) {
    auto g = testsupport::rng(31);
    for (int trial = 0; trial < 200; ++trial) {
        auto s = testsupport::random_space(g, 2 + trial % 8);
        auto f = testsupport::random_function(g, s);
        auto att = steepest_pair(f);
        EXPECT_EQ(att.value, testsupport::brute_lip(s, f.values()));
        if (att.value > 0) {
            EXPECT_EQ(f.slope(att.pair.first, att.pair.second), att.value);
        }
    }
}

TEST(Lipspace, NormAxioms) {
    auto g = testsupport::rng(37);
    for (int trial = 0; trial < 60; ++trial) {
        auto s = testsupport::random_space(g, 3 + trial % 5);
        auto f = testsupport::random_function(g, s), h = testsupport::random_function(g, s);
        Rational c = testsupport::random_rational(g, -5, 5, 3);
        EXPECT_EQ(lip_norm(f.scaled(c)), abs(c) * lip_norm(f));
        EXPECT_LE(lip_norm(f + h), lip_norm(f) + lip_norm(h));
        EXPECT_EQ(lip_norm(f - f), 0);
        EXPECT_EQ(-f, f.scaled(-1));
    }
}

TEST(Lipspace, DeLeeuwTransformIsIsometric) {
    FiniteMetricSpace two({"0", "p"}, 0, {{0, 1}, {1, 0}});
    auto t = de_leeuw(LipschitzFunction(two, {0, 1}));
    EXPECT_EQ(t(1, 0), 1);
    EXPECT_EQ(t(0, 1), -1);
    EXPECT_EQ(de_leeuw(LipschitzFunction::zero(vee())).sup_norm(), 0);
    auto g = testsupport::rng(41);
    for (int trial = 0; trial < 50; ++trial) {
        auto s = testsupport::random_space(g, 5);
        auto f = testsupport::random_function(g, s);
        auto v = de_leeuw(f);
        EXPECT_EQ(v.values.size(), 20u);
        EXPECT_EQ(v.sup_norm(), testsupport::brute_lip(s, f.values()));
        for (Index x = 0; x < 5; ++x)
            for (Index y = 0; y < 5; ++y)
                if (x != y) {
                    EXPECT_EQ(v(x, y), (f(x) - f(y)) / s.d(x, y));
                    EXPECT_EQ(de_leeuw_pair(5, de_leeuw_index(5, x, y)), (PointPair{x, y}));
                }
    }
}

TEST(Lipspace, McShaneFromBaseOnly) {
    auto s = vee();
    PartialFunction pf(s, PointSubset(3, {0}), std::vector<Rational>(3, Rational(0)));
    auto f = mcshane_extend(pf, 1, ExtensionDirection::Sup);
    EXPECT_EQ(f.values(), (std::vector<Rational>{0, -1, -1}));
    auto h = mcshane_extend(pf, 2, ExtensionDirection::Inf);
    EXPECT_EQ(h.values(), (std::vector<Rational>{0, 2, 2}));
}

TEST(Lipspace, McShaneIsIdentityOnTotalFunctions) {
    auto g = testsupport::rng(43);
    auto s = testsupport::random_space(g, 6);
    auto f = testsupport::random_function(g, s);
    Rational n = lip_norm(f);
    ASSERT_GT(n, 0);
    auto pf = PartialFunction::restrict(f, PointSubset::all(s.size()));
    EXPECT_EQ(mcshane_extend(pf, n, ExtensionDirection::Sup), f);
    EXPECT_EQ(mcshane_extend(pf, n, ExtensionDirection::Inf), f);
    EXPECT_EQ(weighted_mcshane_extend(PartialFunction::restrict(f.scaled(1 / n), PointSubset::all(s.size())), std::vector<Rational>(6, Rational(1))),
              f.scaled(1 / n));
}

TEST(Lipspace, McShaneExtensionsRandomized) {
    auto g = testsupport::rng(47);
    for (int trial = 0; trial < 150; ++trial) {
        auto s = testsupport::random_space(g, 3 + trial % 7);
        Rational slope = testsupport::random_rational(g, 1, 4, 2);
        auto pf = random_partial(g, s, slope);
        auto lo = mcshane_extend(pf, slope, ExtensionDirection::Sup);
        auto hi = mcshane_extend(pf, slope, ExtensionDirection::Inf);
        EXPECT_LE(testsupport::brute_lip(s, lo.values()), slope);
        EXPECT_LE(testsupport::brute_lip(s, hi.values()), slope);
        for (Index y = 0; y < s.size(); ++y) {
            EXPECT_LE(lo(y), hi(y));
            if (pf.defined(y)) {
                EXPECT_EQ(lo(y), pf(y));
                EXPECT_EQ(hi(y), pf(y));
                continue;
            }
            // formula replay
            Rational best_lo = pf(s.base()) - slope * s.d(s.base(), y), best_hi = pf(s.base()) + slope * s.d(s.base(), y);
            for (Index x : pf.domain()) {
                best_lo = std::max(best_lo, Rational(pf(x) - slope * s.d(x, y)));
                best_hi = std::min(best_hi, Rational(pf(x) + slope * s.d(x, y)));
            }
            EXPECT_EQ(lo(y), best_lo);
            EXPECT_EQ(hi(y), best_hi);
        }
    }
}

TEST(Lipspace, McShanePreconditionsNamed) {
    auto s = vee();
    PartialFunction bad(s, PointSubset(3, {0, 1}), {0, 3, 0});
    try {
        mcshane_extend(bad, 1, ExtensionDirection::Sup);
        FAIL();
    } catch (const PreconditionError& e) {
        EXPECT_NE(std::string(e.what()).find("(0,a)"), std::string::npos) << e.what();
    }
    PartialFunction nobase(s, PointSubset(3, {1}), {0, 1, 0});
    EXPECT_THROW(mcshane_extend(nobase, 1, ExtensionDirection::Sup), PreconditionError);
    PartialFunction ok(s, PointSubset(3, {0}), {0, 0, 0});
    EXPECT_THROW(mcshane_extend(ok, 0, ExtensionDirection::Sup), PreconditionError);
    EXPECT_THROW(PartialFunction(s, PointSubset(3, {0}), {1, 0, 0}), PreconditionError);
    EXPECT_THROW(ok(1), PreconditionError);
}

TEST(Lipspace, SeqLtpExampleInfThenSup) {
    auto s = gen_seqltp_not_sltp(3);
    Index u1 = s.index_of("u1"), v1 = s.index_of("v1");
    auto L = PointSubset(s.size(), {u1, v1}).complement();
    // inf step at u1 over L with h = 0: min over x in L of d(x, u1)
    PartialFunction pf(s, L, std::vector<Rational>(s.size(), Rational(0)));
    auto inf = mcshane_extend(pf, 1, ExtensionDirection::Inf);
    EXPECT_EQ(inf(u1), 1);
    Rational expect = 2;
    for (Index x : L) expect = std::min(expect, s.d(x, u1));
    EXPECT_EQ(inf(u1), expect);
}

TEST(Lipspace, WeightedExtension) {
    auto g = testsupport::rng(53);
    for (int trial = 0; trial < 80; ++trial) {
        auto s = testsupport::random_space(g, 3 + trial % 6);
        auto pf = random_partial(g, s, 1);
        auto plain = mcshane_extend(pf, 1, ExtensionDirection::Sup);
        EXPECT_EQ(weighted_mcshane_extend(pf, std::vector<Rational>(s.size(), Rational(0))), plain);
        std::vector<Rational> w(s.size());
        for (auto& x : w) x = testsupport::random_rational(g, 0, 3, 2);
        auto f = weighted_mcshane_extend(pf, w);
        for (Index y = 0; y < s.size(); ++y) {
            if (pf.defined(y)) {
                EXPECT_EQ(f(y), pf(y));
                continue;
            }
            Rational best = pf(s.base()) + w[s.base()] - s.d(s.base(), y);
            for (Index x : pf.domain()) best = std::max(best, Rational(pf(x) + w[x] - s.d(x, y)));
            EXPECT_EQ(f(y), best);
        }
    }
    auto s = vee();
    PartialFunction pf(s, PointSubset(3, {0}), {0, 0, 0});
    EXPECT_THROW(weighted_mcshane_extend(pf, {-1, 0, 0}), PreconditionError);
    EXPECT_THROW(weighted_mcshane_extend(pf, {0, 0}), PreconditionError);
}
