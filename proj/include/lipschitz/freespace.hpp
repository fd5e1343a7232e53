#pragma once

// Functionals on Lip_0(M) for finite M: the free space F(M), its
// Kantorovich-Rubinstein norm (dual Lipschitz LP and primal min-cost flow),
// and minimal-variation de Leeuw representations.

#include "lipschitz/linprog.hpp"
#include "lipschitz/lipspace.hpp"

#include <limits>
#include <map>
#include <optional>
#include <string>
#include <type_traits>
#include <vector>

namespace lipschitz {

/// A finitely supported functional sum_x w(x) delta_x. The base weight is
/// always reset to minus the sum of the others, so the total mass is 0; this
/// does not change the action on Lip_0(M).
class FreeVector {
  public:
    FreeVector(FiniteMetricSpace space, std::vector<Rational> weights) : space_(std::move(space)), w_(std::move(weights)) {
        if (w_.size() != space_.size())
            throw PreconditionError("free vector has " + std::to_string(w_.size()) + " weights for " +
                                    std::to_string(space_.size()) + " points");
        canonicalize();
    }

    static FreeVector zero(const FiniteMetricSpace& space) { return FreeVector(space, std::vector<Rational>(space.size())); }

    static FreeVector delta(const FiniteMetricSpace& space, Index x) {
        std::vector<Rational> w(space.size());
        w.at(x) = 1;
        return FreeVector(space, std::move(w));
    }

    /// The molecule (delta_u - delta_v) / d(u,v).
    static FreeVector molecule(const FiniteMetricSpace& space, Index u, Index v) {
        if (u == v) throw PreconditionError("molecule needs two distinct points");
        std::vector<Rational> w(space.size());
        w.at(u) += 1 / space.d(u, v);
        w.at(v) -= 1 / space.d(u, v);
        return FreeVector(space, std::move(w));
    }

    static FreeVector from_named(const FiniteMetricSpace& space, const std::map<std::string, Rational>& weights) {
        std::vector<Rational> w(space.size());
        for (const auto& [name, val] : weights) w[space.index_of(name)] = val;
        return FreeVector(space, std::move(w));
    }

    const FiniteMetricSpace& space() const { return space_; }
    const std::vector<Rational>& weights() const { return w_; }
    const Rational& operator()(Index i) const { return w_.at(i); }

    /// F(f) = sum_x w(x) f(x).
    Rational apply(const LipschitzFunction& f) const {
        Rational s = 0;
        for (Index i = 0; i < w_.size(); ++i) s += w_[i] * f(i);
        return s;
    }

    bool is_zero() const {
        for (const auto& x : w_)
            if (x != 0) return false;
        return true;
    }

    /// Points other than the base with nonzero weight.
    std::vector<Index> support() const {
        std::vector<Index> out;
        for (Index i = 0; i < w_.size(); ++i)
            if (i != space_.base() && w_[i] != 0) out.push_back(i);
        return out;
    }

    FreeVector operator+(const FreeVector& o) const { return combine(o, 1); }
    FreeVector operator-(const FreeVector& o) const { return combine(o, -1); }
    FreeVector operator-() const { return scaled(-1); }
    FreeVector scaled(const Rational& c) const {
        std::vector<Rational> w(w_);
        for (auto& x : w) x *= c;
        return FreeVector(space_, std::move(w));
    }

    friend bool operator==(const FreeVector& a, const FreeVector& b) { return a.space_ == b.space_ && a.w_ == b.w_; }

  private:
    void canonicalize() {
        Rational rest = 0;
        for (Index i = 0; i < w_.size(); ++i)
            if (i != space_.base()) rest += w_[i];
        w_[space_.base()] = -rest;
    }
    FreeVector combine(const FreeVector& o, int sign) const {
        if (!(space_ == o.space_)) throw PreconditionError("free vectors live on different spaces");
        std::vector<Rational> w(w_);
        for (Index i = 0; i < w.size(); ++i) w[i] += sign * o.w_[i];
        return FreeVector(space_, std::move(w));
    }

    FiniteMetricSpace space_;
    std::vector<Rational> w_;
};

/// Non-negative mass per ordered pair (x,y); net outflow at x equals the
/// canonical weight of the free vector at x.
struct TransportPlan {
    FiniteMetricSpace space;
    std::vector<std::vector<Rational>> flow;

    Rational cost() const {
        Rational c = 0;
        for (Index x = 0; x < flow.size(); ++x)
            for (Index y = 0; y < flow.size(); ++y) c += flow[x][y] * space.d(x, y);
        return c;
    }
    Rational net_outflow(Index p) const {
        Rational s = 0;
        for (Index y = 0; y < flow.size(); ++y) s += flow[p][y] - flow[y][p];
        return s;
    }
};

/// Signed weight per ordered off-diagonal pair, acting by mu(f) = sum mu(x,y) f~(x,y).
struct DeLeeuwMeasure {
    FiniteMetricSpace space;
    std::vector<Rational> weights;  // indexed by de_leeuw_index

    const Rational& operator()(Index x, Index y) const { return weights.at(de_leeuw_index(space.size(), x, y)); }
    Rational total_variation() const {
        Rational s = 0;
        for (const auto& w : weights) s += abs(w);
        return s;
    }
    Rational act(const LipschitzFunction& f) const {
        Rational s = 0;
        const Index n = space.size();
        for (Index k = 0; k < weights.size(); ++k) {
            if (weights[k] == 0) continue;
            auto [x, y] = de_leeuw_pair(n, k);
            s += weights[k] * f.slope(x, y);
        }
        return s;
    }
};

struct FreeNormDual {
    Rational value;
    LipschitzFunction witness;  // norm <= 1 with F(witness) = value
};

struct FreeNormPrimal {
    Rational value;
    TransportPlan plan;
};

namespace detail {

/// max sum w f over 1-Lipschitz f with f(base) = 0: one free variable per
/// non-base point, two rows per essential pair.
inline LinearProgram<Rational> lipschitz_ball_lp(const FiniteMetricSpace& space, std::vector<Index>& var_of_point) {
    const Index n = space.size();
    var_of_point.assign(n, static_cast<Index>(-1));
    LinearProgram<Rational> lp(0, Sense::Maximize);
    for (Index p = 0; p < n; ++p)
        if (p != space.base()) var_of_point[p] = lp.add_variable(std::nullopt, std::nullopt);
    const Index base = space.base();
    for (auto [x, y] : space.essential_pairs()) {
        const Rational& dxy = space.d(x, y);
        for (int sign : {1, -1}) {
            std::vector<LinearProgram<Rational>::Term> terms;
            if (x != base) terms.push_back({var_of_point[x], Rational(sign)});
            if (y != base) terms.push_back({var_of_point[y], Rational(-sign)});
            lp.add_row(std::move(terms), RowType::LessEqual, dxy);
        }
    }
    return lp;
}

/// Successive shortest paths on the transportation network between points of
/// positive and negative weight, with Bellman-Ford on the residual graph.
template <class T>
std::vector<std::vector<T>> min_cost_transport(const std::vector<T>& weights, const std::vector<std::vector<T>>& cost) {
    const Index n = weights.size();
    // nodes: 0 source, 1..n points (as suppliers), n+1..2n points (as consumers), 2n+1 sink
    const Index S = 0, K = 2 * n + 1, V = 2 * n + 2;
    struct Edge {
        Index to;
        T cap;
        T cost;
        bool infinite;
    };
    std::vector<Edge> edges;
    std::vector<std::vector<Index>> adj(V);
    auto add_edge = [&](Index a, Index b, T cap, T c, bool infinite) {
        adj[a].push_back(edges.size());
        edges.push_back({b, cap, c, infinite});
        adj[b].push_back(edges.size());
        edges.push_back({a, T(0), T(-c), false});
    };
    for (Index i = 0; i < n; ++i) {
        if (weights[i] > T(0)) add_edge(S, 1 + i, weights[i], T(0), false);
        if (weights[i] < T(0)) add_edge(1 + n + i, K, T(-weights[i]), T(0), false);
    }
    std::vector<std::vector<Index>> arc(n, std::vector<Index>(n, static_cast<Index>(-1)));
    for (Index i = 0; i < n; ++i)
        for (Index j = 0; j < n; ++j)
            if (i != j && weights[i] > T(0) && weights[j] < T(0)) {
                arc[i][j] = edges.size();
                add_edge(1 + i, 1 + n + j, T(0), cost[i][j], true);
            }
    // float round-off leaves crumbs of capacity that would otherwise be augmented forever
    const T crumb = std::is_floating_point_v<T> ? T(1e-12) : T(0);
    auto residual = [&](const Edge& e) { return e.infinite || e.cap > crumb; };
    while (true) {
        std::vector<std::optional<T>> dist(V);
        std::vector<Index> via(V, static_cast<Index>(-1));
        dist[S] = T(0);
        for (Index round = 0; round + 1 < V; ++round) {
            bool changed = false;
            for (Index a = 0; a < V; ++a) {
                if (!dist[a]) continue;
                for (Index ei : adj[a]) {
                    const Edge& e = edges[ei];
                    if (!residual(e)) continue;
                    T nd = *dist[a] + e.cost;
                    if (!dist[e.to] || nd < *dist[e.to] - crumb) {
                        dist[e.to] = nd;
                        via[e.to] = ei;
                        changed = true;
                    }
                }
            }
            if (!changed) break;
        }
        if (!dist[K]) break;
        std::optional<T> bottleneck;
        for (Index v = K; v != S; v = edges[via[v] ^ 1].to) {
            const Edge& e = edges[via[v]];
            if (!e.infinite && (!bottleneck || e.cap < *bottleneck)) bottleneck = e.cap;
        }
        for (Index v = K; v != S; v = edges[via[v] ^ 1].to) {
            Edge& e = edges[via[v]];
            if (!e.infinite) {
                e.cap -= *bottleneck;
                if (e.cap <= crumb) e.cap = T(0);
            }
            edges[via[v] ^ 1].cap += *bottleneck;
        }
    }
    std::vector<std::vector<T>> flow(n, std::vector<T>(n, T(0)));
    for (Index i = 0; i < n; ++i)
        for (Index j = 0; j < n; ++j)
            if (arc[i][j] != static_cast<Index>(-1)) flow[i][j] = edges[arc[i][j] ^ 1].cap;
    return flow;
}

}  // namespace detail

/// ||F|| = max { F(f) : ||f|| <= 1 } by linear programming.
inline FreeNormDual free_norm_dual(const FreeVector& F, Mode mode = Mode::Exact, const Tolerances& tol = kDefaultTolerances) {
    const auto& space = F.space();
    std::vector<Index> var;
    auto lp = detail::lipschitz_ball_lp(space, var);
    for (Index p = 0; p < space.size(); ++p)
        if (p != space.base()) lp.objective[var[p]] = F(p);
    auto sol = solve(lp, mode, tol);
    if (sol.status != LpStatus::Optimal) throw std::logic_error("free norm LP is always feasible and bounded");
    std::vector<Rational> values(space.size());
    for (Index p = 0; p < space.size(); ++p)
        if (p != space.base()) values[p] = sol.primal[var[p]];
    return {sol.value, LipschitzFunction(space, std::move(values))};
}

inline Rational free_norm(const FreeVector& F, Mode mode = Mode::Exact, const Tolerances& tol = kDefaultTolerances) {
    return free_norm_dual(F, mode, tol).value;
}

/// ||F|| = min cost of a flow on the complete graph (base included) whose net
/// outflow at each point is the weight of F there.
inline FreeNormPrimal free_norm_primal(const FreeVector& F, Mode mode = Mode::Exact) {
    const auto& space = F.space();
    const Index n = space.size();
    TransportPlan plan{space, {}};
    if (mode == Mode::Exact) {
        plan.flow = detail::min_cost_transport<Rational>(F.weights(), space.matrix());
    } else {
        std::vector<double> w;
        for (const auto& x : F.weights()) w.push_back(to_double(x));
        std::vector<std::vector<double>> c(n, std::vector<double>(n));
        for (Index i = 0; i < n; ++i)
            for (Index j = 0; j < n; ++j) c[i][j] = space.d_float(i, j);
        auto fl = detail::min_cost_transport<double>(w, c);
        plan.flow.assign(n, std::vector<Rational>(n));
        for (Index i = 0; i < n; ++i)
            for (Index j = 0; j < n; ++j) plan.flow[i][j] = from_double(fl[i][j]);
    }
    Rational value = plan.cost();
    return {value, std::move(plan)};
}

/// A de Leeuw measure of least total variation representing F: minimizes
/// sum mu(x,y) over mu >= 0 on ordered pairs subject to mu(e_p~) = F(e_p) for
/// the point indicators e_p, p != base. A signed weight on (x,y) is the same
/// as the opposite weight on (y,x), so non-negativity loses nothing.
inline DeLeeuwMeasure min_tv_representation(const FreeVector& F, Mode mode = Mode::Exact, const Tolerances& tol = kDefaultTolerances) {
    const auto& space = F.space();
    const Index n = space.size();
    LinearProgram<Rational> lp(n * (n - 1), Sense::Minimize);
    std::vector<std::vector<LinearProgram<Rational>::Term>> rows(n);
    for (Index k = 0; k < n * (n - 1); ++k) {
        lp.objective[k] = 1;
        auto [x, y] = de_leeuw_pair(n, k);
        Rational inv = 1 / space.d(x, y);
        rows[x].push_back({k, inv});
        rows[y].push_back({k, Rational(-inv)});
    }
    for (Index p = 0; p < n; ++p)
        if (p != space.base()) lp.add_row(std::move(rows[p]), RowType::Equal, F(p));
    auto sol = solve(lp, mode, tol);
    if (sol.status != LpStatus::Optimal) throw std::logic_error("de Leeuw representation LP must be solvable");
    return {space, sol.primal};
}

enum class GammaSide { First, Second, Union };

/// |mu| restricted to pairs whose first coordinate (First), second coordinate
/// (Second) or either coordinate (Union) lies in A.
inline Rational gamma_mass(const DeLeeuwMeasure& mu, const PointSubset& A, GammaSide side) {
    const Index n = mu.space.size();
    Rational s = 0;
    for (Index k = 0; k < mu.weights.size(); ++k) {
        if (mu.weights[k] == 0) continue;
        auto [x, y] = de_leeuw_pair(n, k);
        bool in = side == GammaSide::First ? A.contains(x) : side == GammaSide::Second ? A.contains(y) : (A.contains(x) || A.contains(y));
        if (in) s += abs(mu.weights[k]);
    }
    return s;
}

/// ||F + m_{u,v}||.
inline Rational pair_with_molecule(const FreeVector& F, Index u, Index v, Mode mode = Mode::Exact,
                                   const Tolerances& tol = kDefaultTolerances) {
    if (u == v) throw PreconditionError("pair_with_molecule needs u != v");
    return free_norm(F + FreeVector::molecule(F.space(), u, v), mode, tol);
}

}  // namespace lipschitz
