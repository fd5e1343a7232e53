#pragma once

// Diameters of slices of the unit ball of Lip_0(M) and of convex
// combinations of slices, symmetric-witness optima and Daugavet gaps.
// Slices are closed: S(F, alpha) = { ||f|| <= 1, F(f) >= 1 - alpha }.
// Every norm of a combination of the unknowns is the max over point pairs of
// a linear functional, so each quantity is the max over pairs of one LP.

#include "lipschitz/freespace.hpp"

#include <algorithm>
#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace lipschitz {

struct SliceSpec {
    FreeVector F;
    Rational alpha;

    /// Normalizes F to norm 1 (exact norm) and checks alpha in (0, 2].
    static SliceSpec make(const FreeVector& F, const Rational& alpha) {
        if (!(alpha > 0 && alpha <= 2)) throw PreconditionError("slice depth must lie in (0, 2], got " + to_string(alpha));
        Rational n = free_norm(F, Mode::Exact);
        if (n == 0) throw PreconditionError("slice functional must be nonzero");
        return {F.scaled(1 / n), alpha};
    }
};

struct DiameterResult {
    Rational value;
    std::vector<std::string> labels;          // one per returned function
    std::vector<LipschitzFunction> functions;
    PointPair pair{0, 0};                     // achieving (p, q)
    std::size_t lp_count = 0;
    Mode mode = Mode::Exact;
    Tolerances tolerances = kDefaultTolerances;

    const LipschitzFunction& function(const std::string& label) const {
        for (std::size_t i = 0; i < labels.size(); ++i)
            if (labels[i] == label) return functions[i];
        throw std::out_of_range("no function labelled " + label);
    }
};

namespace detail {

/// Several unknown functions on one space, each with one free variable per
/// non-base point.
struct BlockLp {
    FiniteMetricSpace space;
    LinearProgram<Rational> lp{0, Sense::Maximize};
    std::vector<std::vector<std::optional<std::size_t>>> var;

    using Combo = std::vector<std::pair<std::size_t, Rational>>;  // sum of coeff * block

    BlockLp(const FiniteMetricSpace& s, std::size_t blocks) : space(s), var(blocks) {
        for (auto& b : var) {
            b.resize(space.size());
            for (Index p = 0; p < space.size(); ++p)
                if (p != space.base()) b[p] = lp.add_variable(std::nullopt, std::nullopt);
        }
    }

    /// Terms of sum_b c_b (w(p) f_b(p)) summed over p, merged per variable.
    std::vector<LinearProgram<Rational>::Term> terms(const Combo& combo, const std::vector<std::pair<Index, Rational>>& point_weights) const {
        std::vector<Rational> dense(lp.num_vars(), Rational(0));
        for (const auto& [b, c] : combo)
            for (const auto& [p, w] : point_weights)
                if (var[b][p]) dense[*var[b][p]] += c * w;
        std::vector<LinearProgram<Rational>::Term> out;
        for (std::size_t j = 0; j < dense.size(); ++j)
            if (dense[j] != 0) out.push_back({j, dense[j]});
        return out;
    }

    /// ||sum c_b f_b|| <= 1.
    void add_ball(const Combo& combo) {
        for (auto [x, y] : space.essential_pairs()) {
            lp.add_row(terms(combo, {{x, Rational(1)}, {y, Rational(-1)}}), RowType::LessEqual, space.d(x, y));
            lp.add_row(terms(combo, {{x, Rational(-1)}, {y, Rational(1)}}), RowType::LessEqual, space.d(x, y));
        }
    }

    /// F(sum c_b f_b) >= rhs.
    void add_slice(const Combo& combo, const FreeVector& F, const Rational& rhs) {
        std::vector<std::pair<Index, Rational>> pw;
        for (Index p = 0; p < space.size(); ++p)
            if (F(p) != 0) pw.push_back({p, F(p)});
        lp.add_row(terms(combo, pw), RowType::GreaterEqual, rhs);
    }

    /// Dense objective (sum c_b (f_b(p) - f_b(q))) / d(p,q).
    std::vector<Rational> pair_objective(const Combo& combo, Index p, Index q) const {
        std::vector<Rational> obj(lp.num_vars(), Rational(0));
        Rational inv = 1 / space.d(p, q);
        for (const auto& t : terms(combo, {{p, inv}, {q, Rational(-inv)}})) obj[t.var] = t.coeff;
        return obj;
    }

    LipschitzFunction extract(const std::vector<Rational>& primal, std::size_t b) const {
        std::vector<Rational> v(space.size(), Rational(0));
        for (Index p = 0; p < space.size(); ++p)
            if (var[b][p]) v[p] = primal[*var[b][p]];
        return LipschitzFunction(space, std::move(v));
    }
};

struct PairCandidate {
    PointPair pair;
    std::vector<Rational> objective;
    Rational constant;  // added to the LP value
};

/// max over candidates of (LP value + constant), first maximum wins.
inline std::pair<std::size_t, LpSolution<Rational>> maximize_over(const BlockLp& blp, const std::vector<PairCandidate>& cands,
                                                                  Mode mode, const Tolerances& tol) {
    if (cands.empty()) throw PreconditionError("no point pairs to maximize over");
    std::vector<std::vector<Rational>> objs;
    for (const auto& c : cands) objs.push_back(c.objective);
    auto sols = solve_objectives(blp.lp, objs, mode, tol);
    std::optional<std::size_t> best;
    for (std::size_t i = 0; i < sols.size(); ++i) {
        if (sols[i].status == LpStatus::Infeasible) throw std::logic_error("slice system is infeasible; the norming function lies in every slice");
        if (sols[i].status != LpStatus::Optimal) throw std::logic_error("per-pair LP over the unit ball cannot be unbounded");
        if (!best || sols[i].value + cands[i].constant > sols[*best].value + cands[*best].constant) best = i;
    }
    return {*best, sols[*best]};
}

inline std::vector<PairCandidate> unordered_candidates(const BlockLp& blp, const BlockLp::Combo& combo) {
    std::vector<PairCandidate> out;
    for (auto [p, q] : blp.space.essential_pairs()) out.push_back({{p, q}, blp.pair_objective(combo, p, q), Rational(0)});
    return out;
}

inline void require_same_space(const FiniteMetricSpace& space, const SliceSpec& s) {
    if (!(s.F.space() == space)) throw PreconditionError("slice functional lives on another space");
}

inline Rational clamp_value(Rational v) {
    // float round-off only; exact values already lie in [0, 2]
    if (v < 0) v = 0;
    if (v > 2) v = 2;
    return v;
}

}  // namespace detail

/// sup ||f - g|| over f, g in the closed slice.
inline DiameterResult slice_diameter(const FiniteMetricSpace& space, const SliceSpec& s, Mode mode = Mode::Exact,
                                     const Tolerances& tol = kDefaultTolerances) {
    detail::require_same_space(space, s);
    detail::BlockLp blp(space, 2);
    blp.add_ball({{0, Rational(1)}});
    blp.add_ball({{1, Rational(1)}});
    blp.add_slice({{0, Rational(1)}}, s.F, 1 - s.alpha);
    blp.add_slice({{1, Rational(1)}}, s.F, 1 - s.alpha);
    auto cands = detail::unordered_candidates(blp, {{0, Rational(1)}, {1, Rational(-1)}});
    auto [i, sol] = detail::maximize_over(blp, cands, mode, tol);
    DiameterResult r{detail::clamp_value(sol.value), {"f", "g"}, {blp.extract(sol.primal, 0), blp.extract(sol.primal, 1)}, cands[i].pair,
                     cands.size(), mode, tol};
    return r;
}

/// sup ||sum lambda_i f_i - sum lambda_i g_i|| over f_i, g_i in S_i.
inline DiameterResult combo_diameter(const FiniteMetricSpace& space, const std::vector<SliceSpec>& slices,
                                     const std::vector<Rational>& lambdas, Mode mode = Mode::Exact,
                                     const Tolerances& tol = kDefaultTolerances) {
    if (slices.empty()) throw PreconditionError("combo_diameter needs at least one slice");
    if (lambdas.size() != slices.size()) throw PreconditionError("one weight per slice required");
    Rational total = 0;
    for (const auto& l : lambdas) {
        if (l < 0) throw PreconditionError("weights must be non-negative, got " + to_string(l));
        total += l;
    }
    if (total != 1) throw PreconditionError("weights must sum to 1, got " + to_string(total));
    const std::size_t n = slices.size();
    detail::BlockLp blp(space, 2 * n);
    detail::BlockLp::Combo diff;
    for (std::size_t i = 0; i < n; ++i) {
        detail::require_same_space(space, slices[i]);
        for (std::size_t b : {2 * i, 2 * i + 1}) {
            blp.add_ball({{b, Rational(1)}});
            blp.add_slice({{b, Rational(1)}}, slices[i].F, 1 - slices[i].alpha);
        }
        if (lambdas[i] != 0) {
            diff.push_back({2 * i, lambdas[i]});
            diff.push_back({2 * i + 1, Rational(-lambdas[i])});
        }
    }
    auto cands = detail::unordered_candidates(blp, diff);
    auto [best, sol] = detail::maximize_over(blp, cands, mode, tol);
    DiameterResult r{detail::clamp_value(sol.value), {}, {}, cands[best].pair, cands.size(), mode, tol};
    for (std::size_t i = 0; i < n; ++i) {
        r.labels.push_back("f" + std::to_string(i + 1));
        r.functions.push_back(blp.extract(sol.primal, 2 * i));
        r.labels.push_back("g" + std::to_string(i + 1));
        r.functions.push_back(blp.extract(sol.primal, 2 * i + 1));
    }
    return r;
}

/// max ||g|| subject to f_i +- g in S_i for every i (which forces f_i in S_i).
/// Functions are labelled f1..fn and g.
inline DiameterResult ssd2p_witness_value(const FiniteMetricSpace& space, const std::vector<SliceSpec>& slices, Mode mode = Mode::Exact,
                                          const Tolerances& tol = kDefaultTolerances) {
    if (slices.empty()) throw PreconditionError("ssd2p_witness_value needs at least one slice");
    const std::size_t n = slices.size();
    detail::BlockLp blp(space, n + 1);
    for (std::size_t i = 0; i < n; ++i) {
        detail::require_same_space(space, slices[i]);
        for (int sign : {1, -1}) {
            detail::BlockLp::Combo c{{i, Rational(1)}, {n, Rational(sign)}};
            blp.add_ball(c);
            blp.add_slice(c, slices[i].F, 1 - slices[i].alpha);
        }
    }
    auto cands = detail::unordered_candidates(blp, {{n, Rational(1)}});
    auto [best, sol] = detail::maximize_over(blp, cands, mode, tol);
    Rational v = sol.value;
    if (v < 0) v = 0;
    if (v > 1) v = 1;
    DiameterResult r{v, {}, {}, cands[best].pair, cands.size(), mode, tol};
    for (std::size_t i = 0; i < n; ++i) {
        r.labels.push_back("f" + std::to_string(i + 1));
        r.functions.push_back(blp.extract(sol.primal, i));
    }
    r.labels.push_back("g");
    r.functions.push_back(blp.extract(sol.primal, n));
    return r;
}

/// sup ||f - g|| over g in the closed slice, for a norm-one f.
inline DiameterResult daugavet_gap(const FiniteMetricSpace& space, const LipschitzFunction& f, const SliceSpec& s, Mode mode = Mode::Exact,
                                   const Tolerances& tol = kDefaultTolerances) {
    detail::require_same_space(space, s);
    if (!(f.space() == space)) throw PreconditionError("function lives on another space");
    Rational nf = lip_norm(f);
    if (mode == Mode::Exact ? nf != 1 : std::abs(to_double(nf) - 1) > tol.feas_tol)
        throw PreconditionError("daugavet_gap requires ||f|| = 1, got " + to_string(nf));
    detail::BlockLp blp(space, 1);
    blp.add_ball({{0, Rational(1)}});
    blp.add_slice({{0, Rational(1)}}, s.F, 1 - s.alpha);
    std::vector<detail::PairCandidate> cands;
    for (auto [x, y] : space.essential_pairs())
        for (auto [p, q] : {PointPair{x, y}, PointPair{y, x}})
            cands.push_back({{p, q}, blp.pair_objective({{0, Rational(-1)}}, p, q), f.slope(p, q)});
    auto [best, sol] = detail::maximize_over(blp, cands, mode, tol);
    return {detail::clamp_value(sol.value + cands[best].constant), {"g"}, {blp.extract(sol.primal, 0)}, cands[best].pair, cands.size(), mode,
            tol};
}

struct MoleculeGap {
    Index u = 0, v = 0;
    Rational distance, value;  // value = ||F + m_{u,v}||
};

/// ||F + m_{u,v}|| per pair, sorted by d(u,v) descending (stable).
inline std::vector<MoleculeGap> molecule_gap_sequence(const FreeVector& F, const std::vector<PointPair>& pairs, Mode mode = Mode::Exact,
                                                      const Tolerances& tol = kDefaultTolerances) {
    std::vector<MoleculeGap> out;
    for (auto [u, v] : pairs) {
        if (u == v) throw PreconditionError("molecule pairs need distinct points");
        out.push_back({u, v, F.space().d(u, v), pair_with_molecule(F, u, v, mode, tol)});
    }
    std::stable_sort(out.begin(), out.end(), [](const MoleculeGap& a, const MoleculeGap& b) { return a.distance > b.distance; });
    return out;
}

}  // namespace lipschitz
