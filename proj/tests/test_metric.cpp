#include "support.hpp"

#include <gtest/gtest.h>

#include <set>

using namespace lipschitz;

namespace {

std::vector<std::vector<Rational>> to_matrix(std::initializer_list<std::initializer_list<int>> rows) {
    std::vector<std::vector<Rational>> d;
    for (auto r : rows) {
        std::vector<Rational> row;
        for (int x : r) row.push_back(x);
        d.push_back(row);
    }
    return d;
}

// distance rule for the a/b/c example read directly from the names
Rational abc_rule(const std::string& p, const std::string& q) {
    if (p == q) return 0;
    char kp = p[0], kq = q[0];
    int ip = std::stoi(p.substr(1)), iq = std::stoi(q.substr(1));
    if (ip == iq && ((kp == 'a' && kq == 'c') || (kp == 'c' && kq == 'a'))) return 2;
    if (ip < iq && kq == 'b') return 2;
    if (iq < ip && kp == 'b') return 2;
    return 1;
}

void expect_triangle_exhaustive(const FiniteMetricSpace& s) {
    for (Index i = 0; i < s.size(); ++i)
        for (Index j = 0; j < s.size(); ++j) {
            ASSERT_EQ(s.d(i, j), s.d(j, i));
            ASSERT_EQ(s.d(i, j) == 0, i == j);
            for (Index k = 0; k < s.size(); ++k) ASSERT_LE(s.d(i, k), s.d(i, j) + s.d(j, k));
        }
}

}  // namespace

TEST(Metric, TwoPointSpaceValidates) {
    auto r = validate({"0", "p"}, 0, to_matrix({{0, 1}, {1, 0}}));
    EXPECT_TRUE(r.passed());
}

TEST(Metric, TriangleViolationNamesTriple) {
    auto r = validate({"a", "b", "c"}, 0, to_matrix({{0, 5, 1}, {5, 0, 1}, {1, 1, 0}}));
    ASSERT_EQ(r.kind, ValidationReport::Kind::AxiomViolation);
    EXPECT_EQ(r.axiom, "triangle");
    ASSERT_EQ(r.points.size(), 3u);
    // d(a,b) = 5 > d(a,c) + d(c,b) = 2
    std::set<Index> ends{r.points.front(), r.points.back()};
    EXPECT_EQ(ends, (std::set<Index>{0, 1}));
    EXPECT_EQ(r.points[1], 2u);
}

TEST(Metric, StructuralErrorsAreDistinct) {
    auto r = validate({"a", "b", "c"}, 0, to_matrix({{0, 1}, {1, 0}}));
    EXPECT_EQ(r.kind, ValidationReport::Kind::StructuralError);
    auto r2 = validate({"a", "b"}, 0, to_matrix({{0, 1, 1}, {1, 0}}));
    EXPECT_EQ(r2.kind, ValidationReport::Kind::StructuralError);
    auto r3 = validate({"a", "a"}, 0, to_matrix({{0, 1}, {1, 0}}));
    EXPECT_EQ(r3.kind, ValidationReport::Kind::StructuralError);
    auto r4 = validate({"a", "b"}, 5, to_matrix({{0, 1}, {1, 0}}));
    EXPECT_EQ(r4.kind, ValidationReport::Kind::StructuralError);
}

TEST(Metric, OtherAxioms) {
    EXPECT_EQ(validate({"a", "b"}, 0, to_matrix({{0, 1}, {2, 0}})).axiom, "symmetry");
    EXPECT_EQ(validate({"a", "b"}, 0, to_matrix({{0, 0}, {0, 0}})).kind, ValidationReport::Kind::AxiomViolation);
    EXPECT_EQ(validate({"a", "b"}, 0, to_matrix({{1, 1}, {1, 0}})).kind, ValidationReport::Kind::AxiomViolation);
    EXPECT_EQ(validate({"a", "b"}, 0, to_matrix({{0, -1}, {-1, 0}})).kind, ValidationReport::Kind::AxiomViolation);
    EXPECT_EQ(validate({"a"}, 0, to_matrix({{0}})).kind, ValidationReport::Kind::AxiomViolation);
}

TEST(Metric, ConstructorThrowsWithReport) {
    try {
        FiniteMetricSpace({"a", "b", "c"}, 0, to_matrix({{0, 5, 1}, {5, 0, 1}, {1, 1, 0}}));
        FAIL() << "expected MetricError";
    } catch (const MetricError& e) {
        EXPECT_EQ(e.report().axiom, "triangle");
    }
}

TEST(Metric, RandomMatricesMatchBruteForceTriangleCheck) {
    auto g = testsupport::rng(17);
    int valid = 0;
    for (int trial = 0; trial < 300; ++trial) {
        Index n = 2 + trial % 6;
        std::vector<std::vector<Rational>> d(n, std::vector<Rational>(n, Rational(0)));
        for (Index i = 0; i < n; ++i)
            for (Index j = i + 1; j < n; ++j) d[i][j] = d[j][i] = testsupport::random_rational(g, 1, 6, 2);
        bool ok = true;
        for (Index i = 0; i < n; ++i)
            for (Index j = 0; j < n; ++j)
                for (Index k = 0; k < n; ++k)
                    if (d[i][k] > d[i][j] + d[j][k]) ok = false;
        std::vector<std::string> names;
        for (Index i = 0; i < n; ++i) names.push_back("x" + std::to_string(i));
        auto r = validate(names, 0, d);
        EXPECT_EQ(r.passed(), ok);
        if (!ok) {
            ASSERT_EQ(r.points.size(), 3u);
            EXPECT_GT(d[r.points[0]][r.points[2]], d[r.points[0]][r.points[1]] + d[r.points[1]][r.points[2]]);
        }
        valid += ok;
    }
    EXPECT_GT(valid, 20);
}

TEST(Metric, AbcExampleFollowsDistanceRule) {
    for (int K : {2, 4, 7}) {
        auto s = gen_sltp_not_seq(K);
        EXPECT_EQ(s.size(), static_cast<Index>(3 * K));
        EXPECT_EQ(s.name(s.base()), "a1");
        for (Index i = 0; i < s.size(); ++i)
            for (Index j = 0; j < s.size(); ++j) EXPECT_EQ(s.d(i, j), abc_rule(s.name(i), s.name(j)));
        expect_triangle_exhaustive(s);
    }
}

TEST(Metric, FreshBaseAddsUnitDistances) {
    auto s = gen_sltp_not_seq(3, BaseChoice::FreshBase);
    EXPECT_EQ(s.size(), 10u);
    EXPECT_EQ(s.name(s.base()), "0");
    for (Index i = 1; i < s.size(); ++i) EXPECT_EQ(s.d(0, i), 1);
    EXPECT_EQ(s.d(s.index_of("a2"), s.index_of("c2")), 2);
}

TEST(Metric, BallsOpenAndClosed) {
    auto s = gen_sltp_not_seq(4);
    Index b3 = s.index_of("b3");
    EXPECT_TRUE(ball(s, b3, 0).empty());
    EXPECT_EQ(ball(s, b3, 0, true).members(), std::vector<Index>{b3});
    // from the distance rule: b3 is at distance 1 from a3, c3 and from a_l, c_l for l > 3
    auto B = ball(s, b3, Rational(3, 2));
    std::set<std::string> got;
    for (Index i : B) got.insert(s.name(i));
    EXPECT_EQ(got, (std::set<std::string>{"a3", "b3", "c3", "a4", "c4"}));
    EXPECT_EQ(ball(s, b3, 3).size(), s.size());
    EXPECT_EQ(ball(s, b3, 1).members(), std::vector<Index>{b3});
    EXPECT_EQ(ball(s, b3, 1, true).size(), 5u);
}

TEST(Metric, AnnulusAndSubspace) {
    auto s = gen_family(FamilyKind::Unbounded, 4);  // 0, 2, 4, 8, 16
    auto A = annulus(s, s.base(), 9, 4);            // d in [4, 9)
    std::vector<std::string> names = A.names(s);
    EXPECT_EQ(names, (std::vector<std::string>{"4", "8"}));
    auto sub = subspace(s, A.complement());
    EXPECT_EQ(sub.size(), 3u);
    EXPECT_EQ(sub.d(sub.index_of("2"), sub.index_of("16")), 14);
}

TEST(Metric, PointSubsetRejectsDuplicatesAndRange) {
    EXPECT_THROW(PointSubset(3, {0, 0}), PreconditionError);
    EXPECT_THROW(PointSubset(3, {3}), PreconditionError);
    PointSubset a(4, {2, 0});
    EXPECT_EQ(a.members(), (std::vector<Index>{0, 2}));
    EXPECT_EQ(a.complement().members(), (std::vector<Index>{1, 3}));
    EXPECT_TRUE(a.disjoint(a.complement()));
}

TEST(Metric, KnDistancesAreMaxCoordinate) {
    auto s = gen_kn(2, 3);
    EXPECT_EQ(s.size(), 27u);
    EXPECT_EQ(s.name(s.base()), "0.0.0");
    auto coords = [](const std::string& name) {
        std::vector<int> c;
        for (char ch : name)
            if (ch != '.') c.push_back(ch - '0');
        return c;
    };
    for (Index i = 0; i < s.size(); ++i)
        for (Index j = 0; j < s.size(); ++j) {
            auto a = coords(s.name(i)), b = coords(s.name(j));
            int m = 0;
            for (std::size_t k = 0; k < a.size(); ++k) m = std::max(m, std::abs(a[k] - b[k]));
            EXPECT_EQ(s.d(i, j), m);
        }
    expect_triangle_exhaustive(s);
}

TEST(Metric, KnLevelCapAndPointCap) {
    // at most two nonzero coordinates among 4, values 1..2: 1 + 4*2 + 6*4
    auto s = gen_kn(2, 4, 2);
    EXPECT_EQ(s.size(), 33u);
    EXPECT_THROW(gen_kn(3, 7), CapExceeded);
    EXPECT_THROW(gen_kn(3, 6, std::nullopt, 100), CapExceeded);
    EXPECT_NO_THROW(gen_kn(3, 6, 2, 4096));
    EXPECT_THROW(gen_kn(0, 2), PreconditionError);
}

TEST(Metric, SeqLtpExampleDistances) {
    auto s = gen_seqltp_not_sltp(3);
    EXPECT_EQ(s.size(), 10u);
    auto d = [&](const char* a, const char* b) { return s.d(s.index_of(a), s.index_of(b)); };
    EXPECT_EQ(d("a1", "b2"), 1);
    EXPECT_EQ(d("a2", "u3"), 1);
    EXPECT_EQ(d("b1", "v2"), 1);
    EXPECT_EQ(d("u2", "v2"), 1);
    EXPECT_EQ(d("u2", "v3"), 2);
    EXPECT_EQ(d("a1", "a2"), 2);
    EXPECT_EQ(d("a1", "v1"), 2);
    EXPECT_EQ(d("u1", "u2"), 2);
    expect_triangle_exhaustive(s);
}

TEST(Metric, D2pExampleDistances) {
    auto s = gen_d2p_not_ltp(2);
    EXPECT_EQ(s.size(), 15u);
    auto d = [&](const std::string& a, const std::string& b) { return s.d(s.index_of(a), s.index_of(b)); };
    EXPECT_EQ(d("a1", d2p_point('u', 2, 1)), 1);
    EXPECT_EQ(d("a1", d2p_point('v', 1, 2)), 2);
    EXPECT_EQ(d(d2p_point('u', 3, 2), d2p_point('v', 3, 2)), 1);
    EXPECT_EQ(d(d2p_point('u', 3, 2), d2p_point('v', 3, 1)), 2);
    EXPECT_EQ(d(d2p_point('u', 1, 1), d2p_point('u', 2, 1)), 2);
    EXPECT_EQ(d("a1", "a3"), 2);
    expect_triangle_exhaustive(s);
}

TEST(Metric, FamiliesAndDeterminism) {
    for (auto kind : {FamilyKind::Unbounded, FamilyKind::LimitPoint, FamilyKind::ShrinkingPairs, FamilyKind::DaugavetRemark}) {
        auto a = gen_family(kind, 6), b = gen_family(kind, 6);
        EXPECT_EQ(a.matrix(), b.matrix());
        EXPECT_EQ(a.names(), b.names());
        expect_triangle_exhaustive(a);
    }
    auto sp = gen_family(FamilyKind::ShrinkingPairs, 3);
    EXPECT_TRUE(sp.find("25/8"));
    EXPECT_EQ(line_coordinate(sp, sp.index_of("25/8")), Rational(25, 8));
    auto dr = gen_family(FamilyKind::DaugavetRemark, 4);
    EXPECT_EQ(dr.min_positive_distance(), 1);
    EXPECT_EQ(dr.diameter(), 2);
    EXPECT_EQ(gen_seqltp_not_sltp(5).matrix(), gen_seqltp_not_sltp(5).matrix());
}

TEST(Metric, EssentialPairsHaveNoPointBetween) {
    auto g = testsupport::rng(23);
    for (int trial = 0; trial < 40; ++trial) {
        auto s = testsupport::random_space(g, 3 + trial % 6);
        std::set<PointPair> ess(s.essential_pairs().begin(), s.essential_pairs().end());
        for (Index x = 0; x < s.size(); ++x)
            for (Index y = x + 1; y < s.size(); ++y) {
                bool between = false;
                for (Index z = 0; z < s.size(); ++z)
                    if (z != x && z != y && s.d(x, z) + s.d(z, y) == s.d(x, y)) between = true;
                EXPECT_EQ(ess.count({x, y}) == 1, !between);
            }
    }
}
