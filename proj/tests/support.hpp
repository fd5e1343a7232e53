#pragma once

// Shared helpers for the test suites: seeded random instances and
// brute-force oracles that do not go through the library's LP code.

#include "lipschitz/lipschitz.hpp"
#include "lp_oracle.hpp"

#include <algorithm>
#include <cstdint>
#include <optional>
#include <random>
#include <string>
#include <vector>

namespace testsupport {

using lipschitz::Index;
using lipschitz::Rational;

inline std::mt19937_64 rng(std::uint64_t seed) { return std::mt19937_64(seed); }

inline Rational random_rational(std::mt19937_64& g, int num_lo, int num_hi, int den_max) {
    std::uniform_int_distribution<int> num(num_lo, num_hi), den(1, den_max);
    Rational r(num(g), den(g));
    r.canonicalize();
    return r;
}

/// A random metric on n points: shortest-path closure of random positive
/// edge weights (always a valid metric).
inline lipschitz::FiniteMetricSpace random_space(std::mt19937_64& g, Index n, int den_max = 4, int num_max = 12) {
    std::vector<std::vector<Rational>> d(n, std::vector<Rational>(n, Rational(0)));
    for (Index i = 0; i < n; ++i)
        for (Index j = i + 1; j < n; ++j) d[i][j] = d[j][i] = random_rational(g, 1, num_max, den_max);
    for (Index k = 0; k < n; ++k)
        for (Index i = 0; i < n; ++i)
            for (Index j = 0; j < n; ++j)
                if (d[i][k] + d[k][j] < d[i][j]) d[i][j] = d[i][k] + d[k][j];
    std::vector<std::string> names;
    for (Index i = 0; i < n; ++i) names.push_back("p" + std::to_string(i));
    return lipschitz::FiniteMetricSpace(names, 0, d);
}

inline lipschitz::FreeVector random_free_vector(std::mt19937_64& g, const lipschitz::FiniteMetricSpace& space, int range = 5) {
    std::vector<Rational> w(space.size());
    for (auto& x : w) x = random_rational(g, -range, range, 3);
    return lipschitz::FreeVector(space, w);
}

/// Random function with base value 0 and values in [-3 range, 3 range].
inline lipschitz::LipschitzFunction random_function(std::mt19937_64& g, const lipschitz::FiniteMetricSpace& space, int range = 4) {
    std::vector<Rational> v(space.size());
    for (Index i = 0; i < space.size(); ++i) v[i] = i == space.base() ? Rational(0) : random_rational(g, -3 * range, 3 * range, 3);
    return lipschitz::LipschitzFunction(space, v);
}

/// Lipschitz constant straight from the definition, over all ordered pairs.
inline Rational brute_lip(const lipschitz::FiniteMetricSpace& space, const std::vector<Rational>& v) {
    Rational best = 0;
    for (Index x = 0; x < space.size(); ++x)
        for (Index y = 0; y < space.size(); ++y)
            if (x != y) best = std::max(best, Rational((v[x] - v[y]) / space.d(x, y)));
    return best;
}

/// Number of ordered (x, y) in N violating (1-eps)(d(x,y) + d(u,v)) <= d(x,u) + d(y,v).
inline std::size_t brute_ltp_violations(const lipschitz::FiniteMetricSpace& s, const std::vector<Index>& N, Index u, Index v,
                                        const Rational& eps) {
    std::size_t c = 0;
    for (Index x : N)
        for (Index y : N)
            if ((1 - eps) * (s.d(x, y) + s.d(u, v)) > s.d(x, u) + s.d(y, v)) ++c;
    return c;
}

/// Number of quadruples in N violating the four-point inequality, all of them enumerated.
inline std::size_t brute_sltp_violations(const lipschitz::FiniteMetricSpace& s, const std::vector<Index>& N, Index u, Index v,
                                         const Rational& eps) {
    std::size_t c = 0;
    for (Index x : N)
        for (Index y : N)
            for (Index z : N)
                for (Index w : N)
                    if ((1 - eps) * (s.d(x, y) + s.d(z, w) + 2 * s.d(u, v)) > s.d(x, u) + s.d(y, u) + s.d(z, v) + s.d(w, v)) ++c;
    return c;
}

/// Points of the plane with the max metric at mixed scales: each point has
/// integer coordinates in [-9, 9] times 5^level, level in 0..3.
inline lipschitz::FiniteMetricSpace random_multiscale_space(std::mt19937_64& g, Index n) {
    std::uniform_int_distribution<int> coord(-9, 9), level(0, 3);
    std::vector<std::pair<Rational, Rational>> pts{{Rational(0), Rational(0)}};
    while (pts.size() < n) {
        Rational scale = 1;
        for (int l = level(g); l > 0; --l) scale *= 5;
        std::pair<Rational, Rational> p{coord(g) * scale, coord(g) * scale};
        if (std::find(pts.begin(), pts.end(), p) == pts.end()) pts.push_back(p);
    }
    std::vector<std::vector<Rational>> d(n, std::vector<Rational>(n));
    for (Index i = 0; i < n; ++i)
        for (Index j = 0; j < n; ++j)
            d[i][j] = std::max(lipschitz::abs(Rational(pts[i].first - pts[j].first)), lipschitz::abs(Rational(pts[i].second - pts[j].second)));
    std::vector<std::string> names;
    for (Index i = 0; i < n; ++i) names.push_back("q" + std::to_string(i));
    return lipschitz::FiniteMetricSpace(names, 0, d);
}

struct BallsDraw {
    lipschitz::FiniteMetricSpace space;
    lipschitz::BallInstance inst;
    Rational eps;
};

/// Smallest eps for which both balls-lemma hypotheses hold (0 when nothing constrains it).
inline Rational balls_needed_eps(const lipschitz::FiniteMetricSpace& s, const lipschitz::BallInstance& b) {
    Rational need = 4 * b.s / s.d(b.u, b.v);
    for (Index x = 0; x < s.size(); ++x) {
        if (s.d(x, b.p) < b.r) continue;
        need = std::max(need, Rational(2 * s.d(b.u, b.v) / std::min(s.d(x, b.u), s.d(x, b.v))));
    }
    return need;
}

/// A random balls-lemma instance whose hypotheses hold, with eps in (0, 1).
/// Draws are rejected until the hypotheses can be met; attempts counts them.
inline BallsDraw random_balls_instance(std::mt19937_64& g, Index max_points, std::size_t* attempts = nullptr) {
    std::uniform_int_distribution<int> coin(0, 3);
    for (;;) {
        if (attempts) ++*attempts;
        std::uniform_int_distribution<Index> size(3, max_points);
        Index n = size(g);
        auto s = coin(g) == 0 ? random_space(g, n) : random_multiscale_space(g, n);
        std::uniform_int_distribution<Index> pick(0, n - 1);
        Index p = pick(g), u = pick(g), v = pick(g);
        if (u == v) continue;
        Rational lo = std::min(s.d(p, u), s.d(p, v)), hi = std::max(s.d(p, u), s.d(p, v));
        // s: 0 or a distance from p not exceeding lo (u and v stay outside the open ball)
        std::vector<Rational> s_choices{Rational(0)};
        for (Index x = 0; x < n; ++x)
            if (s.d(p, x) > 0 && s.d(p, x) <= lo) s_choices.push_back(s.d(p, x));
        std::uniform_int_distribution<std::size_t> pick_s(0, s_choices.size() - 1);
        Rational inner = s_choices[pick_s(g)];
        Rational outer = hi + random_rational(g, 1, 8, 4) * (coin(g) == 0 ? hi + 1 : Rational(1, 8));
        lipschitz::BallInstance b{p, outer, inner, u, v};
        Rational need = balls_needed_eps(s, b);
        if (need >= 1) continue;
        Rational eps = need;
        std::uniform_int_distribution<int> t(1, 15);
        if (need == 0 || coin(g) != 0) eps = need + (1 - need) * Rational(t(g), 16);
        if (eps <= 0 || eps >= 1) continue;
        return {s, b, eps};
    }
}

}  // namespace testsupport
