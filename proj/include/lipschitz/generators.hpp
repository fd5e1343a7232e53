#pragma once

// Generators for the finite pointed metric spaces used throughout the library:
// truncations of K_n, the three trapezoid-property example families, and
// real-line / discrete families realizing the unbounded, limit-point and
// shrinking-pairs situations.

#include "lipschitz/metric.hpp"

#include <functional>
#include <optional>
#include <string>
#include <vector>

namespace lipschitz {

inline constexpr Index kDefaultPointCap = 4096;

class CapExceeded : public std::length_error {
  public:
    using std::length_error::length_error;
};

/// Where the base point of an example space comes from.
enum class BaseChoice {
    FirstPoint,  // the first listed point
    FreshBase,   // an extra point "0" at distance 1 from every other point
};

namespace detail {

inline FiniteMetricSpace build_space(std::vector<std::string> names, BaseChoice base_choice,
                                     const std::function<Rational(Index, Index)>& rule) {
    Index n = names.size();
    const bool fresh = base_choice == BaseChoice::FreshBase;
    std::vector<std::vector<Rational>> dist(n + (fresh ? 1 : 0));
    Index offset = fresh ? 1 : 0;
    for (auto& row : dist) row.assign(dist.size(), Rational(0));
    for (Index i = 0; i < n; ++i)
        for (Index j = 0; j < n; ++j)
            if (i != j) dist[i + offset][j + offset] = rule(i, j);
    if (fresh) {
        for (Index i = 1; i < dist.size(); ++i) dist[0][i] = dist[i][0] = 1;
        names.insert(names.begin(), "0");
    }
    return FiniteMetricSpace(std::move(names), 0, dist);
}

inline std::string interval_name(const Rational& x) { return to_string(x); }

}  // namespace detail

/// Points of {0,...,n}^dims under the max-coordinate metric, base at the zero
/// tuple. With level_cap, only tuples with at most that many nonzero coordinates
/// are kept. Point names are the coordinates joined by '.', e.g. "2.1.0.0".
inline FiniteMetricSpace gen_kn(int n, int dims, std::optional<int> level_cap = std::nullopt, Index cap = kDefaultPointCap) {
    if (n < 1 || dims < 1) throw PreconditionError("gen_kn requires n >= 1 and dims >= 1");
    // count first so the cap is enforced before allocating
    const int levels = level_cap ? std::min(*level_cap, dims) : dims;
    if (levels < 0) throw PreconditionError("level_cap must be non-negative");
    mpz_class count = 0;
    for (int k = 0; k <= levels; ++k) {
        mpz_class binom, pw;
        mpz_bin_uiui(binom.get_mpz_t(), static_cast<unsigned long>(dims), static_cast<unsigned long>(k));
        mpz_ui_pow_ui(pw.get_mpz_t(), static_cast<unsigned long>(n), static_cast<unsigned long>(k));
        count += binom * pw;
    }
    if (count > cap) throw CapExceeded("gen_kn would produce " + count.get_str() + " points, cap is " + std::to_string(cap));

    std::vector<std::vector<int>> tuples;
    std::vector<int> t(dims, 0);
    while (true) {
        int nonzero = 0;
        for (int c : t) nonzero += c != 0;
        if (nonzero <= levels) tuples.push_back(t);
        int pos = dims - 1;
        while (pos >= 0 && t[pos] == n) t[pos--] = 0;
        if (pos < 0) break;
        ++t[pos];
    }
    std::vector<std::string> names;
    for (const auto& tup : tuples) {
        std::string s;
        for (int c = 0; c < dims; ++c) s += (c ? "." : "") + std::to_string(tup[c]);
        names.push_back(std::move(s));
    }
    std::vector<std::vector<Rational>> dist(tuples.size(), std::vector<Rational>(tuples.size()));
    for (Index i = 0; i < tuples.size(); ++i)
        for (Index j = 0; j < tuples.size(); ++j) {
            int m = 0;
            for (int c = 0; c < dims; ++c) m = std::max(m, std::abs(tuples[i][c] - tuples[j][c]));
            dist[i][j] = m;
        }
    return FiniteMetricSpace(std::move(names), 0, dist);
}

/// Name of the K_n point with the given coordinates.
inline std::string kn_point(const std::vector<int>& coords) {
    std::string s;
    for (std::size_t c = 0; c < coords.size(); ++c) s += (c ? "." : "") + std::to_string(coords[c]);
    return s;
}

/// Points a_k, b_k, c_k (k = 1..K): d(a_k,c_k) = 2; for k < l,
/// d(a_k,b_l) = d(b_k,b_l) = d(c_k,b_l) = 2; all other distances 1.
/// Has the strong long trapezoid property but not its sequential version.
inline FiniteMetricSpace gen_sltp_not_seq(int K, BaseChoice base = BaseChoice::FirstPoint) {
    if (K < 2) throw PreconditionError("gen_sltp_not_seq requires K >= 2");
    struct P { char kind; int k; };
    std::vector<P> pts;
    std::vector<std::string> names;
    for (int k = 1; k <= K; ++k)
        for (char c : {'a', 'b', 'c'}) {
            pts.push_back({c, k});
            names.push_back(std::string(1, c) + std::to_string(k));
        }
    auto rule = [&](Index i, Index j) -> Rational {
        P x = pts[i], y = pts[j];
        if (x.k == y.k && ((x.kind == 'a' && y.kind == 'c') || (x.kind == 'c' && y.kind == 'a'))) return 2;
        // orient so that x has the smaller index
        if (x.k > y.k) std::swap(x, y);
        if (x.k < y.k && y.kind == 'b') return 2;
        return 1;
    };
    return detail::build_space(std::move(names), base, rule);
}

/// Points a_1, a_2, b_1, b_2, u_m, v_m (m = 1..K):
/// d(a_i,b_j) = d(a_i,u_m) = d(b_i,v_m) = d(u_m,v_m) = 1, all other distances 2.
/// Has the sequential long trapezoid property but not the strong one.
inline FiniteMetricSpace gen_seqltp_not_sltp(int K, BaseChoice base = BaseChoice::FirstPoint) {
    if (K < 1) throw PreconditionError("gen_seqltp_not_sltp requires K >= 1");
    struct P { char kind; int idx; };
    std::vector<P> pts{{'a', 1}, {'a', 2}, {'b', 1}, {'b', 2}};
    for (int m = 1; m <= K; ++m) {
        pts.push_back({'u', m});
        pts.push_back({'v', m});
    }
    std::vector<std::string> names;
    for (auto p : pts) names.push_back(std::string(1, p.kind) + std::to_string(p.idx));
    auto rule = [&](Index i, Index j) -> Rational {
        P x = pts[i], y = pts[j];
        auto is = [&](char a, char b) { return (x.kind == a && y.kind == b) || (x.kind == b && y.kind == a); };
        if (is('a', 'b') || is('a', 'u') || is('b', 'v')) return 1;
        if (is('u', 'v') && x.idx == y.idx) return 1;
        return 2;
    };
    return detail::build_space(std::move(names), base, rule);
}

/// Points a_i, u^i_m, v^i_m (i = 1,2,3; m = 1..K), named "a1", "u2_1" (= u^2_1), ...:
/// d(a_i,u^j_m) = d(a_i,v^j_m) = 1 for i != j, d(u^j_m,v^j_m) = 1, all other distances 2.
/// Lip_0 of its infinite version has the D2P but the space fails the LTP.
inline FiniteMetricSpace gen_d2p_not_ltp(int K, BaseChoice base = BaseChoice::FirstPoint) {
    if (K < 1) throw PreconditionError("gen_d2p_not_ltp requires K >= 1");
    struct P { char kind; int i; int m; };
    std::vector<P> pts{{'a', 1, 0}, {'a', 2, 0}, {'a', 3, 0}};
    for (int i = 1; i <= 3; ++i)
        for (int m = 1; m <= K; ++m) {
            pts.push_back({'u', i, m});
            pts.push_back({'v', i, m});
        }
    std::vector<std::string> names;
    for (auto p : pts)
        names.push_back(p.kind == 'a' ? "a" + std::to_string(p.i)
                                      : std::string(1, p.kind) + std::to_string(p.i) + "_" + std::to_string(p.m));
    auto rule = [&](Index a, Index b) -> Rational {
        P x = pts[a], y = pts[b];
        if (x.kind != 'a' && y.kind == 'a') std::swap(x, y);
        if (x.kind == 'a' && y.kind != 'a') return x.i != y.i ? 1 : 2;
        if (x.kind != 'a' && y.kind != 'a' && x.kind != y.kind && x.i == y.i && x.m == y.m) return 1;
        return 2;
    };
    return detail::build_space(std::move(names), base, rule);
}

inline std::string d2p_point(char kind, int i, int m) {
    return std::string(1, kind) + std::to_string(i) + "_" + std::to_string(m);
}

enum class FamilyKind { Unbounded, LimitPoint, ShrinkingPairs, DaugavetRemark };

inline FamilyKind parse_family_kind(const std::string& s) {
    if (s == "unbounded") return FamilyKind::Unbounded;
    if (s == "limit_point" || s == "limit-point") return FamilyKind::LimitPoint;
    if (s == "shrinking_pairs" || s == "shrinking-pairs") return FamilyKind::ShrinkingPairs;
    if (s == "daugavet_remark" || s == "daugavet-remark") return FamilyKind::DaugavetRemark;
    throw ParseError("unknown family '" + s + "'");
}

/// unbounded:       {0, 2, 4, ..., 2^K} in R
/// limit_point:     {0} u {2^-k : k <= K} in R
/// shrinking_pairs: {0} u {k, k + 2^-k : k <= K} in R
/// daugavet_remark: base plus K points, distance 1 to the base and 2 otherwise
/// Real-line points are named by their exact coordinate ("0", "9/4", ...).
inline FiniteMetricSpace gen_family(FamilyKind kind, int K) {
    if (K < 2) throw PreconditionError("gen_family requires K >= 2");
    if (kind == FamilyKind::DaugavetRemark) {
        std::vector<std::string> names{"0"};
        for (int k = 1; k <= K; ++k) names.push_back("p" + std::to_string(k));
        std::vector<std::vector<Rational>> dist(K + 1, std::vector<Rational>(K + 1, Rational(2)));
        for (int i = 0; i <= K; ++i) {
            dist[i][i] = 0;
            if (i) dist[0][i] = dist[i][0] = 1;
        }
        return FiniteMetricSpace(std::move(names), 0, dist);
    }
    std::vector<Rational> xs{Rational(0)};
    auto pow2 = [](int e) {
        mpz_class p = 1;
        p <<= static_cast<unsigned>(e < 0 ? -e : e);
        return e >= 0 ? Rational(p) : Rational(1, p);
    };
    for (int k = 1; k <= K; ++k) {
        switch (kind) {
            case FamilyKind::Unbounded: xs.push_back(pow2(k)); break;
            case FamilyKind::LimitPoint: xs.push_back(pow2(-k)); break;
            case FamilyKind::ShrinkingPairs:
                xs.push_back(Rational(k));
                xs.push_back(Rational(k) + pow2(-k));
                break;
            default: break;
        }
    }
    std::vector<std::string> names;
    for (const auto& x : xs) names.push_back(detail::interval_name(x));
    std::vector<std::vector<Rational>> dist(xs.size(), std::vector<Rational>(xs.size()));
    for (Index i = 0; i < xs.size(); ++i)
        for (Index j = 0; j < xs.size(); ++j) dist[i][j] = abs(Rational(xs[i] - xs[j]));
    return FiniteMetricSpace(std::move(names), 0, dist);
}

/// Coordinate of a real-line family point (its name parsed back).
inline Rational line_coordinate(const FiniteMetricSpace& space, Index i) { return parse_rational(space.name(i)); }

}  // namespace lipschitz
