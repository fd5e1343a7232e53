#include "support.hpp"

#include <gtest/gtest.h>

using namespace lipschitz;

namespace {

FiniteMetricSpace two_point() { return FiniteMetricSpace({"0", "p"}, 0, {{0, 1}, {1, 0}}); }

SliceSpec slice(const FreeVector& F, const Rational& alpha) { return SliceSpec::make(F, alpha); }

bool in_slice(const LipschitzFunction& f, const SliceSpec& s) {
    return testsupport::brute_lip(f.space(), f.values()) <= 1 && s.F.apply(f) >= 1 - s.alpha;
}

/// Reference LPs written out over all ordered pairs with box bounds
/// |f_b(p)| <= d(p, base), solved by vertex enumeration (tiny spaces only).
struct RefLp {
    FiniteMetricSpace space;
    LinearProgram<Rational> lp{0, Sense::Maximize};
    std::vector<std::vector<std::size_t>> var;

    RefLp(const FiniteMetricSpace& s, std::size_t blocks) : space(s), var(blocks, std::vector<std::size_t>(s.size())) {
        for (auto& b : var)
            for (Index p = 0; p < s.size(); ++p)
                if (p != s.base()) b[p] = lp.add_variable(Rational(-s.d(p, s.base())), s.d(p, s.base()));
    }
    void add_terms(std::vector<Rational>& dense, const std::vector<std::pair<std::size_t, Rational>>& combo, Index p, const Rational& c) const {
        if (p == space.base()) return;
        for (const auto& [b, w] : combo) dense[var[b][p]] += w * c;
    }
    static std::vector<LinearProgram<Rational>::Term> sparse(const std::vector<Rational>& dense) {
        std::vector<LinearProgram<Rational>::Term> t;
        for (std::size_t j = 0; j < dense.size(); ++j)
            if (dense[j] != 0) t.push_back({j, dense[j]});
        return t;
    }
    void ball(const std::vector<std::pair<std::size_t, Rational>>& combo) {
        for (Index x = 0; x < space.size(); ++x)
            for (Index y = 0; y < space.size(); ++y) {
                if (x == y) continue;
                std::vector<Rational> dense(lp.num_vars(), Rational(0));
                add_terms(dense, combo, x, 1);
                add_terms(dense, combo, y, -1);
                lp.add_row(sparse(dense), RowType::LessEqual, space.d(x, y));
            }
    }
    void slice_row(const std::vector<std::pair<std::size_t, Rational>>& combo, const SliceSpec& s) {
        std::vector<Rational> dense(lp.num_vars(), Rational(0));
        for (Index p = 0; p < space.size(); ++p) add_terms(dense, combo, p, s.F(p));
        lp.add_row(sparse(dense), RowType::GreaterEqual, 1 - s.alpha);
    }
    /// max over ordered pairs of (combo(p) - combo(q)) / d(p,q) + constant(p,q)
    template <class Constant>
    Rational max_over_pairs(const std::vector<std::pair<std::size_t, Rational>>& combo, Constant constant) {
        std::optional<Rational> best;
        for (Index p = 0; p < space.size(); ++p)
            for (Index q = 0; q < space.size(); ++q) {
                if (p == q) continue;
                std::vector<Rational> dense(lp.num_vars(), Rational(0));
                add_terms(dense, combo, p, 1 / space.d(p, q));
                add_terms(dense, combo, q, -1 / space.d(p, q));
                lp.objective = dense;
                auto v = testsupport::vertex_enumeration_optimum(lp);
                if (!v) continue;
                Rational total = *v + constant(p, q);
                if (!best || total > *best) best = total;
            }
        return *best;
    }
};

FreeVector random_norm_one(std::mt19937_64& g, const FiniteMetricSpace& s) {
    for (;;) {
        auto F = testsupport::random_free_vector(g, s);
        Rational n = free_norm(F);
        if (n != 0) return F.scaled(1 / n);
    }
}

}  // namespace

TEST(Geometry, SliceSpecNormalizes) {
    auto s = two_point();
    auto sl = slice(FreeVector::delta(s, 1).scaled(3), Rational(1, 2));
    EXPECT_EQ(free_norm(sl.F), 1);
    EXPECT_THROW(slice(FreeVector::delta(s, 1), 0), PreconditionError);
    EXPECT_THROW(slice(FreeVector::delta(s, 1), Rational(21, 10)), PreconditionError);
    EXPECT_THROW(slice(FreeVector::zero(s), 1), PreconditionError);
}

TEST(Geometry, TwoPointSliceDiameterIsAlpha) {
    auto s = two_point();
    auto m = FreeVector::molecule(s, 1, 0);
    for (Rational a : {Rational(1, 10), Rational(1, 2), Rational(1), Rational(3, 2), Rational(2)}) {
        auto r = slice_diameter(s, slice(m, a));
        EXPECT_EQ(r.value, a);
        auto fl = slice_diameter(s, slice(m, a), Mode::Float);
        EXPECT_NEAR(to_double(fl.value), to_double(a), 1e-9);
    }
}

TEST(Geometry, FullDepthGivesTwo) {
    auto g = testsupport::rng(201);
    for (int trial = 0; trial < 10; ++trial) {
        auto s = testsupport::random_space(g, 3 + trial % 3);
        auto r = slice_diameter(s, slice(random_norm_one(g, s), 2));
        EXPECT_EQ(r.value, 2);
    }
}

TEST(Geometry, SliceDiameterMatchesReferenceLp) {
    auto g = testsupport::rng(203);
    for (int trial = 0; trial < 12; ++trial) {
        auto s = testsupport::random_space(g, 3);
        auto sl = slice(random_norm_one(g, s), testsupport::random_rational(g, 1, 8, 4) / 4);
        RefLp ref(s, 2);
        ref.ball({{0, Rational(1)}});
        ref.ball({{1, Rational(1)}});
        ref.slice_row({{0, Rational(1)}}, sl);
        ref.slice_row({{1, Rational(1)}}, sl);
        Rational want = ref.max_over_pairs({{0, Rational(1)}, {1, Rational(-1)}}, [](Index, Index) { return Rational(0); });
        auto r = slice_diameter(s, sl);
        EXPECT_EQ(r.value, want) << trial;
        EXPECT_TRUE(in_slice(r.function("f"), sl));
        EXPECT_TRUE(in_slice(r.function("g"), sl));
        EXPECT_EQ(testsupport::brute_lip(s, (r.function("f") - r.function("g")).values()), r.value);
    }
}

TEST(Geometry, SliceDiameterMonotoneAndSelfConsistent) {
    auto g = testsupport::rng(207);
    for (int trial = 0; trial < 6; ++trial) {
        auto s = testsupport::random_space(g, 5);
        auto F = random_norm_one(g, s);
        Rational prev = 0;
        for (Rational a : {Rational(1, 20), Rational(1, 5), Rational(1, 2), Rational(1), Rational(2)}) {
            auto r = slice_diameter(s, slice(F, a));
            EXPECT_GE(r.value, prev);
            EXPECT_LE(r.value, 2);
            prev = r.value;
            EXPECT_EQ(lip_norm(r.function("f") - r.function("g")), r.value);
            EXPECT_EQ(r.function("f").slope(r.pair.first, r.pair.second) - r.function("g").slope(r.pair.first, r.pair.second), r.value);
        }
    }
}

TEST(Geometry, SliceDiameterAboveSd2pConstruction) {
    auto s = gen_seqltp_not_sltp(3);
    auto F = FreeVector::molecule(s, s.index_of("a1"), s.index_of("a2"));
    const Rational alpha(1, 5), delta(1, 5);
    auto sl = slice(F, alpha);
    auto star = free_norm_dual(sl.F).witness;
    auto h = star.scaled(1 - delta);
    Index u = s.index_of("u2"), v = s.index_of("v2");
    PointSubset A(s.size(), {std::min(u, v), std::max(u, v)});
    auto up = build_sd2p_witness(s, A, u, v, delta, {h});
    auto down = build_sd2p_witness(s, A, v, u, delta, {h});
    ASSERT_TRUE(up.all_hold());
    ASSERT_TRUE(down.all_hold());
    ASSERT_TRUE(in_slice(up.f[0], sl));
    ASSERT_TRUE(in_slice(down.f[0], sl));
    Rational lower = lip_norm(up.f[0] - down.f[0]);
    EXPECT_GE(lower, 2 * (1 - delta));
    auto r = slice_diameter(s, sl);
    EXPECT_GE(r.value, lower);
}

TEST(Geometry, ComboSingleSliceEqualsSliceDiameter) {
    auto g = testsupport::rng(211);
    for (int trial = 0; trial < 5; ++trial) {
        auto s = testsupport::random_space(g, 4);
        auto sl = slice(random_norm_one(g, s), testsupport::random_rational(g, 1, 6, 4) / 4);
        auto c = combo_diameter(s, {sl}, {Rational(1)});
        EXPECT_EQ(c.value, slice_diameter(s, sl).value);
        EXPECT_EQ(c.labels, (std::vector<std::string>{"f1", "g1"}));
    }
}

TEST(Geometry, ComboWeightsChecked) {
    auto s = two_point();
    auto sl = slice(FreeVector::molecule(s, 1, 0), Rational(1, 2));
    EXPECT_THROW(combo_diameter(s, {sl, sl}, {Rational(1, 2), Rational(1, 3)}), PreconditionError);
    EXPECT_THROW(combo_diameter(s, {sl, sl}, {Rational(3, 2), Rational(-1, 2)}), PreconditionError);
    EXPECT_THROW(combo_diameter(s, {sl}, {Rational(1, 2), Rational(1, 2)}), PreconditionError);
    EXPECT_THROW(combo_diameter(s, {}, {}), PreconditionError);
}

TEST(Geometry, AntipodalComboAboveSampling) {
    auto g = testsupport::rng(213);
    for (int trial = 0; trial < 5; ++trial) {
        auto s = testsupport::random_space(g, 3);
        auto F = random_norm_one(g, s);
        const Rational alpha(1, 10);
        auto S1 = slice(F, alpha), S2 = slice(F.scaled(-1), alpha);
        auto c = combo_diameter(s, {S1, S2}, {Rational(1, 2), Rational(1, 2)});
        EXPECT_LE(c.value, 2);
        // grid over the box |f(p)| <= d(p, base), keeping points of each slice
        std::vector<LipschitzFunction> in1, in2;
        const int steps = 8;
        Index a = 1, b = 2;
        for (int i = -steps; i <= steps; ++i)
            for (int j = -steps; j <= steps; ++j) {
                std::vector<Rational> v(3, Rational(0));
                v[a] = s.d(a, 0) * Rational(i, steps);
                v[b] = s.d(b, 0) * Rational(j, steps);
                LipschitzFunction f(s, v);
                if (in_slice(f, S1)) in1.push_back(f);
                if (in_slice(f, S2)) in2.push_back(f);
            }
        // the norming functions are always feasible
        in1.push_back(free_norm_dual(S1.F).witness);
        in2.push_back(free_norm_dual(S2.F).witness);
        auto thin = [](const std::vector<LipschitzFunction>& v) {
            std::vector<LipschitzFunction> out;
            std::size_t step = std::max<std::size_t>(1, v.size() / 10);
            for (std::size_t i = 0; i < v.size(); i += step) out.push_back(v[i]);
            out.push_back(v.back());
            return out;
        };
        auto t1 = thin(in1), t2 = thin(in2);
        Rational lower = 0;
        for (const auto& f1 : t1)
            for (const auto& g1 : t1)
                for (const auto& f2 : t2)
                    for (const auto& g2 : t2)
                        lower = std::max(lower, lip_norm((f1 - g1).scaled(Rational(1, 2)) + (f2 - g2).scaled(Rational(1, 2))));
        EXPECT_GE(c.value, lower);
    }
}

TEST(Geometry, TwoPointSsd2pIsHalfAlpha) {
    auto s = two_point();
    auto m = FreeVector::molecule(s, 1, 0);
    for (Rational a : {Rational(1, 10), Rational(1, 2), Rational(1)}) {
        auto r = ssd2p_witness_value(s, {slice(m, a)});
        EXPECT_EQ(r.value, a / 2);
        EXPECT_EQ(r.labels, (std::vector<std::string>{"f1", "g"}));
    }
    EXPECT_EQ(ssd2p_witness_value(s, {slice(m, 2)}).value, 1);
}

TEST(Geometry, Ssd2pMatchesReferenceLp) {
    auto g = testsupport::rng(217);
    for (int trial = 0; trial < 8; ++trial) {
        auto s = testsupport::random_space(g, 3);
        auto sl = slice(random_norm_one(g, s), testsupport::random_rational(g, 1, 6, 4) / 4);
        RefLp ref(s, 2);
        for (int sign : {1, -1}) {
            ref.ball({{0, Rational(1)}, {1, Rational(sign)}});
            ref.slice_row({{0, Rational(1)}, {1, Rational(sign)}}, sl);
        }
        Rational want = ref.max_over_pairs({{1, Rational(1)}}, [](Index, Index) { return Rational(0); });
        auto r = ssd2p_witness_value(s, {sl});
        EXPECT_EQ(r.value, want) << trial;
        const auto& f = r.function("f1");
        const auto& gg = r.function("g");
        EXPECT_TRUE(in_slice(f + gg, sl));
        EXPECT_TRUE(in_slice(f - gg, sl));
        EXPECT_EQ(lip_norm(gg), r.value);
    }
}

TEST(Geometry, Ssd2pImpliesComboLowerBound) {
    auto g = testsupport::rng(219);
    for (int trial = 0; trial < 4; ++trial) {
        auto s = testsupport::random_space(g, 4);
        std::vector<SliceSpec> sl{slice(random_norm_one(g, s), Rational(1, 2)), slice(random_norm_one(g, s), Rational(3, 4))};
        auto w = ssd2p_witness_value(s, sl);
        auto c = combo_diameter(s, sl, {Rational(1, 2), Rational(1, 2)});
        const auto& gg = w.function("g");
        // f_i + g and f_i - g are feasible in S_i
        LipschitzFunction sum = LipschitzFunction::zero(s);
        for (int i = 0; i < 2; ++i) {
            const auto& f = w.function("f" + std::to_string(i + 1));
            ASSERT_TRUE(in_slice(f + gg, sl[i]));
            ASSERT_TRUE(in_slice(f - gg, sl[i]));
            sum = sum + ((f + gg) - (f - gg)).scaled(Rational(1, 2));
        }
        EXPECT_EQ(lip_norm(sum), 2 * w.value);
        EXPECT_GE(c.value, 2 * w.value);
        EXPECT_LE(c.value, 2);
    }
}

TEST(Geometry, Ssd2pAboveBuilderOnKn) {
    auto s = gen_kn(2, 4, 2);
    auto w = kn_witness(s, 2, 1, 0);
    std::vector<SliceSpec> slices;
    std::vector<LipschitzFunction> h;
    const Rational delta(1, 20), alpha(2, 5);
    // a molecule on a pair outside A, its norming function scaled by 1 - delta
    std::vector<PointPair> pairs{{s.index_of("0.0.1.0"), s.base()}};
    for (auto [p, q] : pairs) {
        ASSERT_FALSE(w.A.contains(p));
        ASSERT_FALSE(w.A.contains(q));
        slices.push_back(slice(FreeVector::molecule(s, p, q), alpha));
        h.push_back(free_norm_dual(slices.back().F).witness.scaled(1 - delta));
    }
    auto t = build_ssd2p_witness(s, w.A, w.u, w.v, delta, h);
    ASSERT_TRUE(t.all_hold());
    for (std::size_t i = 0; i < slices.size(); ++i) {
        ASSERT_TRUE(in_slice(t.f[i] + *t.g, slices[i]));
        ASSERT_TRUE(in_slice(t.f[i] - *t.g, slices[i]));
    }
    auto r = ssd2p_witness_value(s, slices);
    EXPECT_GE(r.value, t.g_norm);
}

TEST(Geometry, DaugavetGapAntipodalSlice) {
    auto g = testsupport::rng(223);
    for (int trial = 0; trial < 6; ++trial) {
        auto s = testsupport::random_space(g, 4);
        auto f = testsupport::random_function(g, s);
        f = f.scaled(1 / lip_norm(f));
        auto att = steepest_pair(f);
        // m_{x,y} norms f, so -f lies in every slice of -m_{x,y}
        auto sl = slice(FreeVector::molecule(s, att.pair.first, att.pair.second).scaled(-1), Rational(1, 20));
        ASSERT_TRUE(in_slice(-f, sl));
        auto r = daugavet_gap(s, f, sl);
        EXPECT_EQ(r.value, 2);
        EXPECT_TRUE(in_slice(r.function("g"), sl));
        EXPECT_EQ(lip_norm(f - r.function("g")), r.value);
    }
}

TEST(Geometry, DaugavetGapMatchesReferenceLp) {
    auto g = testsupport::rng(227);
    for (int trial = 0; trial < 10; ++trial) {
        auto s = testsupport::random_space(g, 3);
        auto f = testsupport::random_function(g, s);
        f = f.scaled(1 / lip_norm(f));
        auto sl = slice(random_norm_one(g, s), testsupport::random_rational(g, 1, 4, 4) / 4);
        RefLp ref(s, 1);
        ref.ball({{0, Rational(1)}});
        ref.slice_row({{0, Rational(1)}}, sl);
        Rational want = ref.max_over_pairs({{0, Rational(-1)}}, [&](Index p, Index q) { return f.slope(p, q); });
        auto r = daugavet_gap(s, f, sl);
        EXPECT_EQ(r.value, want) << trial;
        // the norming function of F is a feasible g
        EXPECT_GE(r.value, lip_norm(f - free_norm_dual(sl.F).witness));
    }
}

TEST(Geometry, DaugavetGapOnTheRemarkSpace) {
    auto g = testsupport::rng(229);
    for (int K : {4, 6}) {
        auto s = gen_family(FamilyKind::DaugavetRemark, K);
        std::vector<Rational> ones(s.size(), Rational(1));
        ones[s.base()] = 0;
        LipschitzFunction f(s, ones);
        ASSERT_EQ(lip_norm(f), 1);
        auto sl = slice(random_norm_one(g, s), Rational(1, 2));
        auto r = daugavet_gap(s, f, sl);
        EXPECT_GE(r.value, lip_norm(f - free_norm_dual(sl.F).witness));
        EXPECT_LE(r.value, 2);
    }
    // f inside its own slice: the sup is still reported, not the trivial 0 from g = f
    auto s = gen_family(FamilyKind::DaugavetRemark, 4);
    LipschitzFunction f = LipschitzFunction::from_named(s, {{"p1", Rational(1)}, {"p2", Rational(1)}, {"p3", Rational(1)}, {"p4", Rational(1)}});
    auto own = slice(FreeVector::molecule(s, s.index_of("p1"), s.base()), Rational(1, 4));
    ASSERT_TRUE(in_slice(f, own));
    auto r = daugavet_gap(s, f, own);
    EXPECT_GT(r.value, 0);
    EXPECT_THROW(daugavet_gap(s, f.scaled(Rational(1, 2)), own), PreconditionError);
}

TEST(Geometry, MoleculeGaps) {
    auto s = gen_family(FamilyKind::ShrinkingPairs, 4);
    Index u = s.index_of("3"), v = s.index_of("25/8");
    auto m = FreeVector::molecule(s, u, v);
    auto one = molecule_gap_sequence(m, {{u, v}});
    ASSERT_EQ(one.size(), 1u);
    EXPECT_EQ(one[0].value, 2);
    EXPECT_EQ(molecule_gap_sequence(m.scaled(-1), {{u, v}})[0].value, 0);
    EXPECT_THROW(molecule_gap_sequence(m, {{u, u}}), PreconditionError);
}

TEST(Geometry, MoleculeGapTrendOnShrinkingPairs) {
    auto s = gen_family(FamilyKind::ShrinkingPairs, 10);
    auto F = FreeVector::molecule(s, s.index_of("1"), s.index_of("3/2"));
    PointSubset support(s.size(), {s.index_of("1"), s.index_of("3/2")});
    std::vector<PointPair> pairs;
    for (int k = 3; k <= 10; ++k) pairs.push_back({s.index_of(std::to_string(k)), s.index_of(to_string(Rational(k) + Rational(1, 1 << k)))});
    auto seq = molecule_gap_sequence(F, pairs);
    ASSERT_EQ(seq.size(), pairs.size());
    for (std::size_t i = 1; i < seq.size(); ++i) EXPECT_GE(seq[i - 1].distance, seq[i].distance);
    for (const auto& mg : seq) {
        // the smallest delta = 1/j the estimate chain certifies for this pair
        std::optional<Rational> certified;
        for (int j = 2; j <= 40 && !certified; ++j) {
            Rational delta(1, j);
            try {
                auto chain = daugavet_estimate_chain(F, mg.u, mg.v, delta, {DaugavetCase::DisjointBalls, {}, {}, {}, support});
                if (chain.build.all_hold() && chain.masses_small && chain.molecule_bound) certified = delta;
            } catch (const PreconditionError&) {
            }
        }
        ASSERT_TRUE(certified) << s.name(mg.u);
        EXPECT_GT(mg.value, 2 - 7 * *certified);
        EXPECT_LE(mg.value, 2);
    }
}
