#pragma once

// Trapezoid-type inequalities, the balls lemma, and the explicit witness
// constructions behind the diameter-two and Daugavet-point results.

#include "lipschitz/freespace.hpp"
#include "lipschitz/generators.hpp"
#include "lipschitz/lipspace.hpp"

#include <algorithm>
#include <optional>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

namespace lipschitz {

enum class CheckStatus { Pass, Fail, StructuralFail, HypothesisFail, VacuousFail };

inline const char* to_string(CheckStatus s) {
    switch (s) {
        case CheckStatus::Pass: return "pass";
        case CheckStatus::Fail: return "fail";
        case CheckStatus::StructuralFail: return "structural_fail";
        case CheckStatus::HypothesisFail: return "hypothesis_fail";
        case CheckStatus::VacuousFail: return "vacuous_fail";
    }
    return "?";
}

struct Violation {
    std::string inequality;           // "ltp", "sltp", "hypothesis_4s", "overlap", ...
    std::vector<Index> points;
    std::vector<std::string> names;
    Rational lhs, rhs;                // the failed comparison lhs <= rhs
    int member = -1;                  // family member, when applicable
};

using KeyValues = std::vector<std::pair<std::string, std::string>>;

struct PropertyReport {
    std::string check;
    KeyValues parameters;
    CheckStatus status = CheckStatus::Pass;
    std::string message;
    std::vector<Violation> violations;  // the first ones in lexicographic order, up to the cap
    std::size_t violation_count = 0;    // all violations found
    KeyValues witness;
    std::vector<PropertyReport> parts;
    Mode mode = Mode::Exact;
    Tolerances tolerances = kDefaultTolerances;

    bool passed() const { return status == CheckStatus::Pass; }
    bool has_violation(const std::vector<std::string>& names, const std::string& inequality = "") const {
        for (const auto& v : violations)
            if (v.names == names && (inequality.empty() || v.inequality == inequality)) return true;
        return false;
    }
};

inline constexpr std::size_t kDefaultViolationCap = 32;

/// Excluded set A with the witness pair u, v in A, u != v.
struct TrapezoidWitness {
    PointSubset A;
    Index u = 0, v = 0;
    Rational epsilon = 0;

    void validate(const FiniteMetricSpace& space) const {
        if (A.universe() != space.size()) throw PreconditionError("witness set does not belong to the space");
        if (u == v) throw PreconditionError("witness needs u != v");
        if (!A.contains(u) || !A.contains(v)) throw PreconditionError("witness points must lie in A");
        if (epsilon < 0) throw PreconditionError("epsilon must be non-negative");
    }
};

/// Witnesses sharing one epsilon; the sets A_m must be pairwise disjoint.
struct WitnessFamily {
    Rational epsilon = 0;
    std::vector<TrapezoidWitness> members;
};

/// The witness ({u,v}, u, v) at the given epsilon.
inline TrapezoidWitness pair_witness(const FiniteMetricSpace& space, Index u, Index v, const Rational& eps) {
    return {PointSubset(space.size(), {u, v}), u, v, eps};
}
inline TrapezoidWitness pair_witness(const FiniteMetricSpace& space, const std::string& u, const std::string& v, const Rational& eps) {
    return pair_witness(space, space.index_of(u), space.index_of(v), eps);
}

namespace detail {

inline Rational slack(Mode mode, const Tolerances& tol) { return mode == Mode::Exact ? Rational(0) : from_double(tol.feas_tol); }

inline std::vector<std::string> names_of(const FiniteMetricSpace& space, const std::vector<Index>& pts) {
    std::vector<std::string> out;
    for (Index p : pts) out.push_back(space.name(p));
    return out;
}

inline Violation make_violation(const FiniteMetricSpace& space, std::string ineq, std::vector<Index> pts, Rational lhs, Rational rhs,
                                int member = -1) {
    Violation v{std::move(ineq), pts, names_of(space, pts), std::move(lhs), std::move(rhs), member};
    return v;
}

struct Scan {
    std::size_t count = 0;
    std::vector<Violation> listed;
};

/// (1-eps)(d(x,y) + d(u,v)) <= d(x,u) + d(y,v) over ordered x, y in N.
inline Scan scan_ltp(const FiniteMetricSpace& space, const std::vector<Index>& N, Index u, Index v, const Rational& eps,
                     const Rational& slack, std::size_t cap, bool stop_at_first) {
    Scan out;
    const Rational k = 1 - eps;
    const Rational duv = space.d(u, v);
    for (Index x : N)
        for (Index y : N) {
            Rational lhs = k * (space.d(x, y) + duv);
            Rational rhs = space.d(x, u) + space.d(y, v);
            if (lhs > rhs + slack) {
                ++out.count;
                if (out.listed.size() < cap) out.listed.push_back(make_violation(space, "ltp", {x, y}, lhs, rhs));
                if (stop_at_first) return out;
            }
        }
    return out;
}

/// (1-eps)(d(x,y) + d(z,w) + 2d(u,v)) <= d(x,u) + d(y,u) + d(z,v) + d(w,v) over
/// quadruples in N. The inequality separates as P_u(x,y) + P_v(z,w) >= 2(1-eps)d(u,v)
/// with P_p(a,b) = d(a,p) + d(b,p) - (1-eps)d(a,b), so violations are counted
/// from sorted pair values instead of enumerating all quadruples.
inline Scan scan_sltp(const FiniteMetricSpace& space, const std::vector<Index>& N, Index u, Index v, const Rational& eps,
                      const Rational& slack, std::size_t cap, bool stop_at_first) {
    Scan out;
    const Rational k = 1 - eps;
    const Rational target = 2 * k * space.d(u, v);
    auto P = [&](Index p, Index a, Index b) { return Rational(space.d(a, p) + space.d(b, p) - k * space.d(a, b)); };
    std::vector<Rational> pv;
    pv.reserve(N.size() * N.size());
    for (Index z : N)
        for (Index w : N) pv.push_back(P(v, z, w));
    std::vector<Rational> sorted = pv;
    std::sort(sorted.begin(), sorted.end());
    for (Index x : N)
        for (Index y : N) {
            // violation iff P_v(z,w) < target - P_u(x,y) - slack
            Rational thr = target - P(u, x, y) - slack;
            std::size_t c = static_cast<std::size_t>(std::lower_bound(sorted.begin(), sorted.end(), thr) - sorted.begin());
            if (c == 0) continue;
            out.count += c;
            if (out.listed.size() < cap || stop_at_first) {
                for (Index iz = 0; iz < N.size() && out.listed.size() < std::max<std::size_t>(cap, 1); ++iz)
                    for (Index iw = 0; iw < N.size() && out.listed.size() < std::max<std::size_t>(cap, 1); ++iw) {
                        if (!(pv[iz * N.size() + iw] < thr)) continue;
                        Index z = N[iz], w = N[iw];
                        Rational lhs = k * (space.d(x, y) + space.d(z, w) + 2 * space.d(u, v));
                        Rational rhs = space.d(x, u) + space.d(y, u) + space.d(z, v) + space.d(w, v);
                        out.listed.push_back(make_violation(space, "sltp", {x, y, z, w}, lhs, rhs));
                    }
            }
            if (stop_at_first) return out;
        }
    return out;
}

inline PropertyReport base_report(std::string check, Mode mode, const Tolerances& tol) {
    PropertyReport r;
    r.check = std::move(check);
    r.mode = mode;
    r.tolerances = tol;
    return r;
}

inline void fill_from_scan(PropertyReport& r, Scan scan) {
    r.violation_count = scan.count;
    r.violations = std::move(scan.listed);
    r.status = scan.count == 0 ? CheckStatus::Pass : CheckStatus::Fail;
}

inline KeyValues witness_params(const FiniteMetricSpace& space, const TrapezoidWitness& w) {
    std::string a;
    for (Index i : w.A) a += (a.empty() ? "" : ",") + space.name(i);
    return {{"A", a}, {"u", space.name(w.u)}, {"v", space.name(w.v)}, {"epsilon", to_string(w.epsilon)}};
}

}  // namespace detail

/// The LTP inequality for a fixed witness over all ordered x, y in M \ A.
inline PropertyReport check_ltp_inequality(const FiniteMetricSpace& space, const TrapezoidWitness& w, Mode mode = Mode::Exact,
                                           const Tolerances& tol = kDefaultTolerances, std::size_t cap = kDefaultViolationCap) {
    w.validate(space);
    auto r = detail::base_report("ltp_inequality", mode, tol);
    r.parameters = detail::witness_params(space, w);
    auto N = w.A.complement().members();
    detail::fill_from_scan(r, detail::scan_ltp(space, N, w.u, w.v, w.epsilon, detail::slack(mode, tol), cap, false));
    if (N.empty()) r.message = "M \\ A is empty; vacuous pass";
    return r;
}

/// The SLTP inequality for a fixed witness over all quadruples in M \ A.
inline PropertyReport check_sltp_inequality(const FiniteMetricSpace& space, const TrapezoidWitness& w, Mode mode = Mode::Exact,
                                            const Tolerances& tol = kDefaultTolerances, std::size_t cap = kDefaultViolationCap) {
    w.validate(space);
    auto r = detail::base_report("sltp_inequality", mode, tol);
    r.parameters = detail::witness_params(space, w);
    auto N = w.A.complement().members();
    detail::fill_from_scan(r, detail::scan_sltp(space, N, w.u, w.v, w.epsilon, detail::slack(mode, tol), cap, false));
    if (N.empty()) r.message = "M \\ A is empty; vacuous pass";
    return r;
}

/// The LTP inequality for (u, v) over an explicit test set N (not necessarily M \ A).
inline PropertyReport check_ltp_on(const FiniteMetricSpace& space, const PointSubset& N, Index u, Index v, const Rational& eps,
                                   Mode mode = Mode::Exact, const Tolerances& tol = kDefaultTolerances,
                                   std::size_t cap = kDefaultViolationCap) {
    if (u == v) throw PreconditionError("witness needs u != v");
    auto r = detail::base_report("ltp_on_set", mode, tol);
    r.parameters = {{"u", space.name(u)}, {"v", space.name(v)}, {"epsilon", to_string(eps)}};
    detail::fill_from_scan(r, detail::scan_ltp(space, N.members(), u, v, eps, detail::slack(mode, tol), cap, false));
    return r;
}

inline PropertyReport check_sltp_on(const FiniteMetricSpace& space, const PointSubset& N, Index u, Index v, const Rational& eps,
                                    Mode mode = Mode::Exact, const Tolerances& tol = kDefaultTolerances,
                                    std::size_t cap = kDefaultViolationCap) {
    if (u == v) throw PreconditionError("witness needs u != v");
    auto r = detail::base_report("sltp_on_set", mode, tol);
    r.parameters = {{"u", space.name(u)}, {"v", space.name(v)}, {"epsilon", to_string(eps)}};
    detail::fill_from_scan(r, detail::scan_sltp(space, N.members(), u, v, eps, detail::slack(mode, tol), cap, false));
    return r;
}

namespace detail {

template <class ScanFn>
PropertyReport finite_search(const std::string& check, const FiniteMetricSpace& space, const PointSubset& N, const Rational& eps,
                             Mode mode, const Tolerances& tol, std::size_t cap, ScanFn scan) {
    if (eps < 0 || eps >= 1) throw PreconditionError("epsilon must lie in [0,1)");
    auto r = base_report(check, mode, tol);
    std::string nn;
    for (Index i : N) nn += (nn.empty() ? "" : ",") + space.name(i);
    r.parameters = {{"N", nn}, {"epsilon", to_string(eps)}};
    const Rational sl = slack(mode, tol);
    std::size_t witnesses = 0;
    std::optional<PointPair> first;
    for (Index u = 0; u < space.size(); ++u)
        for (Index v = 0; v < space.size(); ++v) {
            if (u == v) continue;
            Scan s = scan(space, N.members(), u, v, eps, sl, 1, true);
            if (s.count == 0) {
                ++witnesses;
                if (!first) first = PointPair{u, v};
            } else {
                ++r.violation_count;
                if (r.violations.size() < cap) {
                    Violation viol = s.listed.front();
                    // record the candidate pair in front of the violating points
                    viol.points.insert(viol.points.begin(), {u, v});
                    viol.names.insert(viol.names.begin(), {space.name(u), space.name(v)});
                    r.violations.push_back(std::move(viol));
                }
            }
        }
    if (first) {
        r.status = CheckStatus::Pass;
        r.witness = {{"u", space.name(first->first)}, {"v", space.name(first->second)}, {"witness_pairs", std::to_string(witnesses)}};
        r.message = std::to_string(witnesses) + " of " + std::to_string(space.size() * (space.size() - 1)) + " ordered pairs are witnesses";
    } else {
        r.status = CheckStatus::Fail;
        r.message = "exhaustive search: no pair (u,v) satisfies the inequality on N";
    }
    return r;
}

}  // namespace detail

/// Exhaustive search over ordered pairs (u,v), u != v, of M for one that satisfies
/// the LTP inequality on all x, y in N. Violations list, for each failing pair,
/// the pair followed by its first violating (x, y).
inline PropertyReport check_ltp_finite(const FiniteMetricSpace& space, const PointSubset& N, const Rational& eps,
                                       Mode mode = Mode::Exact, const Tolerances& tol = kDefaultTolerances,
                                       std::size_t cap = kDefaultViolationCap) {
    return detail::finite_search("ltp_finite", space, N, eps, mode, tol, cap, detail::scan_ltp);
}

/// As check_ltp_finite, requiring both the LTP and the SLTP inequality on N.
inline PropertyReport check_sltp_finite(const FiniteMetricSpace& space, const PointSubset& N, const Rational& eps,
                                        Mode mode = Mode::Exact, const Tolerances& tol = kDefaultTolerances,
                                        std::size_t cap = kDefaultViolationCap) {
    auto both = [](const FiniteMetricSpace& sp, const std::vector<Index>& n, Index u, Index v, const Rational& e, const Rational& sl,
                   std::size_t c, bool stop) {
        auto s = detail::scan_ltp(sp, n, u, v, e, sl, c, stop);
        if (s.count) return s;
        return detail::scan_sltp(sp, n, u, v, e, sl, c, stop);
    };
    return detail::finite_search("sltp_finite", space, N, eps, mode, tol, cap, both);
}

/// Disjointness of the A_m, then both inequalities for every member over M \ A_m.
inline PropertyReport check_family(const FiniteMetricSpace& space, const WitnessFamily& fam, Mode mode = Mode::Exact,
                                   const Tolerances& tol = kDefaultTolerances, std::size_t cap = kDefaultViolationCap) {
    auto r = detail::base_report("family", mode, tol);
    r.parameters = {{"epsilon", to_string(fam.epsilon)}, {"members", std::to_string(fam.members.size())}};
    for (std::size_t m = 0; m < fam.members.size(); ++m) {
        const auto& w = fam.members[m];
        try {
            w.validate(space);
        } catch (const PreconditionError& e) {
            r.status = CheckStatus::StructuralFail;
            r.message = "member " + std::to_string(m) + ": " + e.what();
            return r;
        }
    }
    for (std::size_t a = 0; a < fam.members.size(); ++a)
        for (std::size_t b = a + 1; b < fam.members.size(); ++b)
            for (Index p : fam.members[a].A)
                if (fam.members[b].A.contains(p)) {
                    r.status = CheckStatus::StructuralFail;
                    ++r.violation_count;
                    if (r.violations.size() < cap) {
                        auto v = detail::make_violation(space, "overlap", {p}, Rational(0), Rational(0), static_cast<int>(a));
                        v.inequality = "overlap:" + std::to_string(a) + "," + std::to_string(b);
                        r.violations.push_back(std::move(v));
                    }
                }
    if (r.status == CheckStatus::StructuralFail) {
        r.message = "the sets A_m are not pairwise disjoint";
        return r;
    }
    for (std::size_t m = 0; m < fam.members.size(); ++m) {
        TrapezoidWitness w = fam.members[m];
        w.epsilon = fam.epsilon;
        auto ltp = check_ltp_inequality(space, w, mode, tol, cap);
        auto sltp = check_sltp_inequality(space, w, mode, tol, cap);
        for (auto* part : {&ltp, &sltp}) {
            r.violation_count += part->violation_count;
            for (auto v : part->violations)
                if (r.violations.size() < cap) {
                    v.member = static_cast<int>(m);
                    r.violations.push_back(std::move(v));
                }
            if (!part->passed()) r.status = CheckStatus::Fail;
        }
        r.parts.push_back(std::move(ltp));
        r.parts.push_back(std::move(sltp));
    }
    return r;
}

/// One application of the balls lemma: centre p, radii r > s >= 0, pair u, v.
struct BallInstance {
    Index p = 0;
    Rational r, s;
    Index u = 0, v = 0;
};

/// Hypotheses 4s <= eps d(u,v) and 2d(u,v) <= eps min(d(x,u), d(x,v)) for
/// x outside B(p,r); when they hold, the conclusions (both inequalities over
/// M \ A with A = B(p,r) \ B(p,s)) must hold as well. Conclusions are always
/// evaluated and attached, but only asserted under the hypotheses.
inline PropertyReport check_balls_lemma(const FiniteMetricSpace& space, const BallInstance& b, const Rational& eps,
                                        Mode mode = Mode::Exact, const Tolerances& tol = kDefaultTolerances,
                                        std::size_t cap = kDefaultViolationCap) {
    if (b.s < 0) throw PreconditionError("balls lemma requires s >= 0");
    if (!(b.s < b.r)) throw PreconditionError("balls lemma requires s < r");
    if (eps <= 0) throw PreconditionError("balls lemma requires eps > 0");
    if (b.u == b.v) throw PreconditionError("balls lemma requires u != v");
    PointSubset A = annulus(space, b.p, b.r, b.s);
    for (Index q : {b.u, b.v})
        if (!A.contains(q)) throw PreconditionError("point " + space.name(q) + " is not in B(p,r) \\ B(p,s)");

    auto r = detail::base_report("balls_lemma", mode, tol);
    r.parameters = {{"p", space.name(b.p)}, {"r", to_string(b.r)}, {"s", to_string(b.s)}, {"u", space.name(b.u)},
                    {"v", space.name(b.v)}, {"epsilon", to_string(eps)}};
    const Rational sl = detail::slack(mode, tol);
    const Rational duv = space.d(b.u, b.v);

    auto hyp = detail::base_report("balls_lemma_hypotheses", mode, tol);
    if (4 * b.s > eps * duv + sl) {
        ++hyp.violation_count;
        hyp.violations.push_back(detail::make_violation(space, "hypothesis_4s", {b.u, b.v}, 4 * b.s, eps * duv));
    }
    for (Index x = 0; x < space.size(); ++x) {
        if (space.d(x, b.p) < b.r) continue;
        Rational rhs = eps * std::min(space.d(x, b.u), space.d(x, b.v));
        if (2 * duv > rhs + sl) {
            ++hyp.violation_count;
            if (hyp.violations.size() < cap) hyp.violations.push_back(detail::make_violation(space, "hypothesis_far", {x}, 2 * duv, rhs));
        }
    }
    hyp.status = hyp.violation_count ? CheckStatus::Fail : CheckStatus::Pass;

    TrapezoidWitness w{A, b.u, b.v, eps};
    auto ltp = check_ltp_inequality(space, w, mode, tol, cap);
    auto sltp = check_sltp_inequality(space, w, mode, tol, cap);
    auto concl = detail::base_report("balls_lemma_conclusions", mode, tol);
    concl.violation_count = ltp.violation_count + sltp.violation_count;
    for (auto* part : {&ltp, &sltp})
        for (const auto& v : part->violations)
            if (concl.violations.size() < cap) concl.violations.push_back(v);
    concl.status = concl.violation_count ? CheckStatus::Fail : CheckStatus::Pass;

    if (!hyp.passed()) {
        r.status = CheckStatus::HypothesisFail;
        r.message = "hypotheses do not hold; conclusions are reported but not asserted";
    } else if (!concl.passed()) {
        r.status = CheckStatus::Fail;
        r.message = "hypotheses hold but a conclusion fails";
        r.violations = concl.violations;
        r.violation_count = concl.violation_count;
    }
    r.parts.push_back(std::move(hyp));
    r.parts.push_back(std::move(concl));
    return r;
}

inline WitnessFamily family_from_instances(const FiniteMetricSpace& space, const std::vector<BallInstance>& inst, const Rational& eps) {
    WitnessFamily fam{eps, {}};
    for (const auto& b : inst) fam.members.push_back({annulus(space, b.p, b.r, b.s), b.u, b.v, eps});
    return fam;
}

namespace detail {

inline bool far_condition(const FiniteMetricSpace& space, Index p, const Rational& r, Index u, Index v, const Rational& eps) {
    for (Index x = 0; x < space.size(); ++x)
        if (!(space.d(x, p) < r) && 2 * space.d(u, v) > eps * std::min(space.d(x, u), space.d(x, v))) return false;
    return true;
}

}  // namespace detail

/// Balls-lemma instances around the base by the induction of the unbounded
/// case: r_0 = 1; u_m, v_m outside B(0, r_{m-1}) with 4 r_{m-1} <= eps d(u_m,v_m),
/// then the smallest admissible r_m. Stops when no further pair fits.
inline std::vector<BallInstance> unbounded_instances(const FiniteMetricSpace& space, const Rational& eps, std::size_t max_members = 64) {
    const Index p = space.base();
    std::vector<BallInstance> out;
    Rational r_prev = 1;
    std::vector<Rational> radii;
    for (Index x = 0; x < space.size(); ++x) radii.push_back(space.d(x, p));
    std::sort(radii.begin(), radii.end());
    radii.erase(std::unique(radii.begin(), radii.end()), radii.end());
    while (out.size() < max_members) {
        // pair with the smallest outer distance, then the smallest separation
        std::optional<std::pair<Index, Index>> best;
        Rational best_outer, best_sep;
        for (Index u = 0; u < space.size(); ++u)
            for (Index v = u + 1; v < space.size(); ++v) {
                if (space.d(u, p) < r_prev || space.d(v, p) < r_prev) continue;
                if (4 * r_prev > eps * space.d(u, v)) continue;
                Rational outer = std::max(space.d(u, p), space.d(v, p));
                if (!best || outer < best_outer || (outer == best_outer && space.d(u, v) < best_sep)) {
                    best = {u, v};
                    best_outer = outer;
                    best_sep = space.d(u, v);
                }
            }
        if (!best) break;
        auto [u, v] = *best;
        // smallest r_m > outer radius such that every x with d(x,p) >= r_m is far
        Rational floor_r = best_outer;
        for (Index x = 0; x < space.size(); ++x)
            if (space.d(x, p) > best_outer && 2 * space.d(u, v) > eps * std::min(space.d(x, u), space.d(x, v)))
                floor_r = std::max(floor_r, space.d(x, p));
        Rational r_m = floor_r + 1;
        for (const auto& rad : radii)
            if (rad > floor_r) {
                r_m = rad;
                break;
            }
        out.push_back({p, r_m, r_prev, u, v});
        r_prev = r_m;
    }
    return out;
}

/// Instances shrinking towards p (a point that the space accumulates at):
/// r_1 = 1; given r_m, choose u_m, v_m in B(p, r_m) \ {p} satisfying the far
/// condition and maximizing r_{m+1} = min(d(p,u), d(p,v), eps d(u,v) / 4).
inline std::vector<BallInstance> limit_point_instances(const FiniteMetricSpace& space, Index p, const Rational& eps,
                                                       std::size_t max_members = 64) {
    std::vector<BallInstance> out;
    Rational r = 1;
    while (out.size() < max_members) {
        std::optional<std::pair<Index, Index>> best;
        Rational best_next;
        for (Index u = 0; u < space.size(); ++u)
            for (Index v = u + 1; v < space.size(); ++v) {
                if (u == p || v == p || !(space.d(u, p) < r) || !(space.d(v, p) < r)) continue;
                if (!detail::far_condition(space, p, r, u, v, eps)) continue;
                Rational next = std::min({space.d(p, u), space.d(p, v), Rational(eps * space.d(u, v) / 4)});
                if (!best || next > best_next) {
                    best = {u, v};
                    best_next = next;
                }
            }
        if (!best) break;
        out.push_back({p, r, best_next, best->first, best->second});
        r = best_next;
    }
    return out;
}

/// For the shrinking_pairs family: p = u = k, v = k + 2^-k, r = 1/2, s = 0 for
/// every k with 4 d(u,v) <= eps r.
inline std::vector<BallInstance> shrinking_pair_instances(const FiniteMetricSpace& space, const Rational& eps) {
    std::vector<BallInstance> out;
    const Rational r(1, 2);
    for (Index u = 0; u < space.size(); ++u) {
        Rational x = line_coordinate(space, u);
        if (x < 1 || x != floor_rational(x)) continue;
        mpz_class pw = 1;
        pw <<= static_cast<unsigned>(x.get_num().get_ui());
        auto v = space.find(to_string(Rational(x + Rational(1, pw))));
        if (!v) continue;
        if (4 * space.d(u, *v) <= eps * r) out.push_back({u, r, Rational(0), u, *v});
    }
    return out;
}

/// The K_n coordinate-pair witness for m = 1, 2, ...: A_m holds the points
/// with max coordinate n whose coordinates outside {2m-1, 2m} are all below n;
/// u_m = n e_{2m-1} + (n-1) e_{2m}, v_m = (n-1) e_{2m-1} + n e_{2m}.
inline TrapezoidWitness kn_witness(const FiniteMetricSpace& space, int n, int m, const Rational& eps) {
    std::vector<Index> members;
    int dims = -1;
    for (Index i = 0; i < space.size(); ++i) {
        std::vector<int> c;
        std::stringstream ss(space.name(i));
        std::string part;
        while (std::getline(ss, part, '.')) c.push_back(std::stoi(part));
        dims = static_cast<int>(c.size());
        int mx = *std::max_element(c.begin(), c.end());
        if (mx != n) continue;
        bool ok = true;
        for (int j = 0; j < dims; ++j)
            if (j != 2 * m - 2 && j != 2 * m - 1 && c[j] >= n) ok = false;
        if (ok) members.push_back(i);
    }
    if (2 * m > dims) throw PreconditionError("K_n truncation has too few coordinates for witness " + std::to_string(m));
    std::vector<int> u(dims, 0), v(dims, 0);
    u[2 * m - 2] = n, u[2 * m - 1] = n - 1;
    v[2 * m - 2] = n - 1, v[2 * m - 1] = n;
    return {PointSubset(space.size(), members), space.index_of(kn_point(u)), space.index_of(kn_point(v)), eps};
}

inline WitnessFamily kn_family(const FiniteMetricSpace& space, int n, int count, const Rational& eps) {
    WitnessFamily fam{eps, {}};
    for (int m = 1; m <= count; ++m) fam.members.push_back(kn_witness(space, n, m, eps));
    return fam;
}

class WitnessBuildError : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

struct Ssd2pTrace {
    Index u = 0, v = 0;  // after a possible swap
    bool swapped = false;
    Rational r0, s0, r, s;
    std::vector<Rational> a_check, a_hat, b_check, b_hat, c;
    PointSubset A, B, L;
    std::optional<LipschitzFunction> g;
    std::vector<LipschitzFunction> f;

    // postconditions
    bool g_vanishes_off_A = false;
    Rational g_norm;
    bool g_norm_in_range = false;  // 1 - delta <= ||g|| <= 1
    bool restrictions_hold = false;
    std::vector<Rational> f_plus_g_norm, f_minus_g_norm;
    bool joint_norms_hold = false;  // ||f_i +- g|| <= 1
    bool all_hold() const { return g_vanishes_off_A && g_norm_in_range && restrictions_hold && joint_norms_hold; }
};

namespace detail {

inline void require_witness_preconditions(const FiniteMetricSpace& space, const PointSubset& A, Index u, Index v, const Rational& delta,
                                          const std::vector<LipschitzFunction>& h) {
    if (!(delta > 0 && delta < 1)) throw PreconditionError("delta must lie in (0,1)");
    if (u == v) throw PreconditionError("builder needs u != v");
    if (!A.contains(u) || !A.contains(v)) throw PreconditionError("u and v must lie in A");
    if (A.contains(space.base())) throw PreconditionError("the base point must lie outside A");
    for (std::size_t i = 0; i < h.size(); ++i) {
        if (!(h[i].space() == space)) throw PreconditionError("h_" + std::to_string(i + 1) + " lives on another space");
        Rational nh = lip_norm(h[i]);
        if (nh > 1 - delta) throw PreconditionError("||h_" + std::to_string(i + 1) + "|| = " + to_string(nh) + " exceeds 1 - delta");
    }
}

}  // namespace detail

/// The symmetric witness g and functions f_i of the seq-SLTP => SSD2P argument
/// for one witness (A, u, v) at eps = delta. Throws PreconditionError if the
/// hypotheses fail and WitnessBuildError if an interval intersection is empty.
inline Ssd2pTrace build_ssd2p_witness(const FiniteMetricSpace& space, const PointSubset& A, Index u, Index v, const Rational& delta,
                                      const std::vector<LipschitzFunction>& h) {
    detail::require_witness_preconditions(space, A, u, v, delta, h);
    TrapezoidWitness w{A, u, v, delta};
    auto ltp = check_ltp_inequality(space, w, Mode::Exact, kDefaultTolerances, 1);
    auto sltp = check_sltp_inequality(space, w, Mode::Exact, kDefaultTolerances, 1);
    if (!ltp.passed() || !sltp.passed()) {
        const auto& viol = !ltp.passed() ? ltp.violations.front() : sltp.violations.front();
        std::string pts;
        for (const auto& nm : viol.names) pts += (pts.empty() ? "" : ",") + nm;
        throw PreconditionError(std::string(!ltp.passed() ? "LTP" : "SLTP") + " inequality fails at (" + pts + ") for the witness");
    }

    const std::vector<Index> rest = A.complement().members();  // M \ A, nonempty (contains the base)
    const Rational k = 1 - delta;
    auto half_inf = [&](Index p) {
        std::optional<Rational> best;
        for (Index x : rest)
            for (Index y : rest) {
                Rational val = space.d(x, p) + space.d(y, p) - k * space.d(x, y);
                if (!best || val < *best) best = val;
            }
        return Rational(*best / 2);
    };
    Ssd2pTrace t;
    t.A = A;
    t.u = u;
    t.v = v;
    t.r0 = half_inf(u);
    t.s0 = half_inf(v);
    const Rational total = k * space.d(u, v);
    t.r = std::min(t.r0, total);
    t.s = total - t.r;
    if (t.r == 0) {
        std::swap(t.u, t.v);
        std::swap(t.r0, t.s0);
        std::swap(t.r, t.s);
        t.swapped = true;
    }
    if (t.s > t.s0) throw WitnessBuildError("r + s = (1-delta) d(u,v) cannot be met with s <= s0");
    const Index U = t.u, V = t.v;

    PointSubset Bu = ball(space, U, t.r), Bv = ball(space, V, t.s);
    std::vector<Index> bm, lm;
    for (Index x = 0; x < space.size(); ++x) {
        if (Bu.contains(x) || Bv.contains(x)) bm.push_back(x);
        if (Bu.contains(x) || Bv.contains(x) || !A.contains(x)) lm.push_back(x);
    }
    t.B = PointSubset(space.size(), bm);
    t.L = PointSubset(space.size(), lm);
    if (!t.B.disjoint(A.complement())) throw WitnessBuildError("B meets M \\ A");

    std::vector<Rational> gv(space.size(), Rational(0));
    for (Index x = 0; x < space.size(); ++x) {
        if (Bu.contains(x)) gv[x] = t.r - space.d(x, U);
        else if (Bv.contains(x)) gv[x] = -t.s + space.d(x, V);
    }
    t.g = LipschitzFunction(space, gv);
    std::vector<Rational> weight(space.size());
    for (Index x = 0; x < space.size(); ++x) weight[x] = abs(gv[x]);

    for (std::size_t i = 0; i < h.size(); ++i) {
        std::optional<Rational> ac, ah, bc, bh;
        for (Index x : rest) {
            Rational hx = h[i](x);
            Rational a1 = hx - space.d(x, U), a2 = hx + space.d(x, U), b1 = hx - space.d(x, V), b2 = hx + space.d(x, V);
            if (!ac || a1 > *ac) ac = a1;
            if (!ah || a2 < *ah) ah = a2;
            if (!bc || b1 > *bc) bc = b1;
            if (!bh || b2 < *bh) bh = b2;
        }
        t.a_check.push_back(*ac);
        t.a_hat.push_back(*ah);
        t.b_check.push_back(*bc);
        t.b_hat.push_back(*bh);
        Rational lo = std::max(*ac + t.r, *bc + t.s), hi = std::min(*ah - t.r, *bh - t.s);
        if (lo > hi)
            throw WitnessBuildError("empty interval for c_" + std::to_string(i + 1) + ": [" + to_string(*ac + t.r) + ", " +
                                    to_string(*ah - t.r) + "] and [" + to_string(*bc + t.s) + ", " + to_string(*bh - t.s) + "]");
        Rational c = (lo + hi) / 2;
        t.c.push_back(c);
        std::vector<Rational> vals = h[i].values();
        for (Index x : bm) vals[x] = c;
        PartialFunction pf(space, t.L, vals);
        t.f.push_back(weighted_mcshane_extend(pf, weight));
    }

    // postconditions
    t.g_vanishes_off_A = true;
    for (Index x : rest)
        if (gv[x] != 0) t.g_vanishes_off_A = false;
    t.g_norm = lip_norm(*t.g);
    t.g_norm_in_range = t.g_norm >= k && t.g_norm <= 1;
    t.restrictions_hold = true;
    t.joint_norms_hold = true;
    for (std::size_t i = 0; i < h.size(); ++i) {
        for (Index x : rest)
            if (t.f[i](x) != h[i](x)) t.restrictions_hold = false;
        t.f_plus_g_norm.push_back(lip_norm(t.f[i] + *t.g));
        t.f_minus_g_norm.push_back(lip_norm(t.f[i] - *t.g));
        if (t.f_plus_g_norm.back() > 1 || t.f_minus_g_norm.back() > 1) t.joint_norms_hold = false;
    }
    return t;
}

struct Sd2pBuild {
    std::vector<LipschitzFunction> f;
    std::vector<Rational> f_norm, gap;  // gap_i = f_i(u) - f_i(v)
    bool norms_hold = false;            // ||f_i|| <= 1
    bool restrictions_hold = false;
    bool gaps_hold = false;             // f_i(u) - f_i(v) >= (1-delta) d(u,v)
    bool all_hold() const { return norms_hold && restrictions_hold && gaps_hold; }
};

/// f_i = h_i on M \ A, f_i(u) = min over M \ A of (h_i(x) + d(x,u)), then the
/// sup extension over {u} u (M \ A) on the rest of A.
inline Sd2pBuild build_sd2p_witness(const FiniteMetricSpace& space, const PointSubset& A, Index u, Index v, const Rational& delta,
                                    const std::vector<LipschitzFunction>& h) {
    detail::require_witness_preconditions(space, A, u, v, delta, h);
    auto ltp = check_ltp_inequality(space, TrapezoidWitness{A, u, v, delta}, Mode::Exact, kDefaultTolerances, 1);
    if (!ltp.passed()) {
        const auto& n = ltp.violations.front().names;
        throw PreconditionError("LTP inequality fails at (" + n[0] + "," + n[1] + ") for the witness");
    }
    const std::vector<Index> rest = A.complement().members();
    std::vector<Index> dom = rest;
    dom.push_back(u);
    PointSubset L(space.size(), dom);
    Sd2pBuild out;
    const Rational need = (1 - delta) * space.d(u, v);
    out.norms_hold = out.restrictions_hold = out.gaps_hold = true;
    for (const auto& hi : h) {
        std::vector<Rational> vals = hi.values();
        std::optional<Rational> fu;
        for (Index x : rest) {
            Rational c = hi(x) + space.d(x, u);
            if (!fu || c < *fu) fu = c;
        }
        vals[u] = *fu;
        auto f = mcshane_extend(PartialFunction(space, L, vals), Rational(1), ExtensionDirection::Sup);
        Rational nf = lip_norm(f);
        Rational gap = f(u) - f(v);
        out.f_norm.push_back(nf);
        out.gap.push_back(gap);
        if (nf > 1) out.norms_hold = false;
        if (gap < need) out.gaps_hold = false;
        for (Index x : rest)
            if (f(x) != hi(x)) out.restrictions_hold = false;
        out.f.push_back(std::move(f));
    }
    return out;
}

struct D2pPairExample {
    LipschitzFunction f, g;
    Index u = 0, v = 0;
    PointSubset A;
    int k = 0, m = 0;
    Rational c, L;
    Rational f_norm, g_norm;
    bool holds = false;  // ||f|| = ||g|| = 1 and f(u)-f(v) = g(v)-g(u) = 1 = d(u,v)
};

/// The pair (f, g) for the D2P-but-not-LTP space. Sorting a_1, a_2, a_3 by h
/// and with L = min h: if the middle value is <= L + 1 then k is the index of
/// the largest and c = L, otherwise k is the index of the smallest and
/// c = L + 1. The pair u^k_m, v^k_m gets f = (c+1, c) and g = (c, c+1).
/// With a measure, m is the first index whose pair set has both Gamma masses
/// below delta; otherwise m = default_m.
inline D2pPairExample build_d2p_pair_example(const FiniteMetricSpace& space, const Rational& delta, const LipschitzFunction& h,
                                             const std::optional<DeLeeuwMeasure>& mu = std::nullopt, int default_m = 1) {
    if (lip_norm(h) > 1) throw PreconditionError("build_d2p_pair_example requires ||h|| <= 1");
    if (delta <= 0) throw PreconditionError("delta must be positive");
    std::vector<Index> a;
    for (int i = 1; i <= 3; ++i) a.push_back(space.index_of("a" + std::to_string(i)));
    std::vector<int> order{1, 2, 3};
    std::stable_sort(order.begin(), order.end(), [&](int x, int y) { return h(a[x - 1]) < h(a[y - 1]); });
    Rational L = *std::min_element(h.values().begin(), h.values().end());
    int k;
    Rational c;
    if (h(a[order[1] - 1]) <= L + 1) {
        k = order[2];
        c = L;
    } else {
        k = order[0];
        c = L + 1;
    }
    int m = default_m;
    if (mu) {
        m = 0;
        for (int cand = 1;; ++cand) {
            auto pu = space.find(d2p_point('u', k, cand));
            if (!pu) break;
            PointSubset Am(space.size(), {*pu, space.index_of(d2p_point('v', k, cand))});
            if (gamma_mass(*mu, Am, GammaSide::First) < delta && gamma_mass(*mu, Am, GammaSide::Second) < delta) {
                m = cand;
                break;
            }
        }
        if (m == 0) throw WitnessBuildError("no pair index m has both Gamma masses below delta");
    }
    Index u = space.index_of(d2p_point('u', k, m)), v = space.index_of(d2p_point('v', k, m));
    if (u == space.base() || v == space.base()) throw PreconditionError("the chosen pair contains the base point");
    std::vector<Rational> fv = h.values(), gv = h.values();
    fv[u] = c + 1;
    fv[v] = c;
    gv[u] = c;
    gv[v] = c + 1;
    D2pPairExample out{LipschitzFunction(space, fv), LipschitzFunction(space, gv), u, v, PointSubset(space.size(), {u, v}), k, m, c, L,
                       0, 0, false};
    out.f_norm = lip_norm(out.f);
    out.g_norm = lip_norm(out.g);
    out.holds = out.f_norm == 1 && out.g_norm == 1 && out.f(u) - out.f(v) == 1 && out.g(v) - out.g(u) == 1 && space.d(u, v) == 1;
    return out;
}

enum class DaugavetCase { DisjointBalls, FixedU, Converging };

inline DaugavetCase parse_daugavet_case(const std::string& s) {
    if (s == "disjoint_balls" || s == "disjoint-balls") return DaugavetCase::DisjointBalls;
    if (s == "fixed_u" || s == "fixed-u") return DaugavetCase::FixedU;
    if (s == "converging") return DaugavetCase::Converging;
    throw ParseError("unknown case '" + s + "'");
}

inline const char* to_string(DaugavetCase c) {
    switch (c) {
        case DaugavetCase::DisjointBalls: return "disjoint_balls";
        case DaugavetCase::FixedU: return "fixed_u";
        case DaugavetCase::Converging: return "converging";
    }
    return "?";
}

struct DaugavetCaseSpec {
    DaugavetCase kind = DaugavetCase::DisjointBalls;
    std::optional<Index> center;  // the limit point for the converging case
    std::optional<Rational> r, s; // defaults derived from theta
    std::optional<PointSubset> support;  // when given, A must avoid it
};

struct DaugavetBuild {
    LipschitzFunction f;
    PointSubset A;
    Rational theta, r, s;
    std::size_t helper_checks = 0;  // instances of d(y,u) <= theta/(1-theta) d(x,y) verified
    Rational f_norm, gap;           // gap = f(u) - f(v)
    bool norm_holds = false, agrees_outside = false, gap_holds = false;
    bool all_hold() const { return norm_holds && agrees_outside && gap_holds; }
};

/// theta = 1/k for the smallest integer k with theta/(1-theta) < delta/2.
inline Rational daugavet_theta(const Rational& delta) {
    Rational k = floor_rational(Rational(2 / delta)) + 2;
    return 1 / k;
}

/// The function f of the molecule-norm proposition for the pair (u, v):
/// f = h off A, prescribed values on the case's points, then the sup
/// extension with slope 1 on the rest of A.
inline DaugavetBuild build_daugavet_function(const FiniteMetricSpace& space, const LipschitzFunction& h, Index u, Index v,
                                             const Rational& delta, const DaugavetCaseSpec& cs) {
    if (!(delta > 0 && delta < 1)) throw PreconditionError("delta must lie in (0,1)");
    if (u == v) throw PreconditionError("builder needs u != v");
    Rational nh = lip_norm(h);
    if (nh > 1 - delta) throw PreconditionError("||h|| = " + to_string(nh) + " exceeds 1 - delta");
    const Rational theta = daugavet_theta(delta);
    const Rational bound = theta / (1 - theta);
    const Rational k = 1 - delta;
    DaugavetBuild out{h, PointSubset::empty(space.size()), theta, 0, 0, 0, 0, 0};
    std::vector<Rational> vals = h.values();
    std::vector<Index> prescribed;
    auto helper = [&](Index y, Index centre, Index x) {
        // d(y,centre) <= theta/(1-theta) d(x,y)
        ++out.helper_checks;
        if (space.d(y, centre) > bound * space.d(x, y))
            throw std::logic_error("helper inequality d(y,u) <= theta/(1-theta) d(x,y) failed at (" + space.name(y) + "," +
                                   space.name(x) + ")");
    };
    Index centre;
    switch (cs.kind) {
        case DaugavetCase::DisjointBalls: {
            centre = u;
            const Rational duv = space.d(u, v);
            out.r = cs.r ? *cs.r : 2 * duv / theta;
            out.s = 0;
            if (!(duv < theta * out.r)) throw PreconditionError("disjoint_balls requires d(u,v) < theta r");
            out.A = ball(space, u, out.r);
            if (out.A.contains(space.base())) throw PreconditionError("disjoint_balls requires the base outside B(u,r)");
            vals[u] = h(u);
            vals[v] = h(u) - k * duv;
            prescribed = {u, v};
            for (Index x = 0; x < space.size(); ++x)
                if (!out.A.contains(x)) helper(v, u, x);
            break;
        }
        case DaugavetCase::FixedU: {
            centre = u;
            const Rational duv = space.d(u, v);
            out.r = cs.r ? *cs.r : 2 * duv / theta;
            out.s = cs.s ? *cs.s : theta * duv / 2;
            if (!(duv < theta * out.r)) throw PreconditionError("fixed_u requires d(v,u) < theta r");
            if (!(out.s < theta * duv)) throw PreconditionError("fixed_u requires s < theta d(v,u)");
            if (!(out.s > 0)) throw PreconditionError("fixed_u requires s > 0");
            out.A = annulus(space, u, out.r, out.s);
            if (out.A.contains(space.base())) throw PreconditionError("fixed_u requires the base outside B(u,r) \\ B(u,s)");
            vals[v] = h(u) - k * duv;
            prescribed = {v};
            for (Index x = 0; x < space.size(); ++x) {
                if (!(space.d(x, u) < out.r)) helper(v, u, x);
                if (space.d(x, u) < out.s) helper(x, u, v);
            }
            break;
        }
        case DaugavetCase::Converging: {
            if (!cs.center) throw PreconditionError("converging case needs the limit point");
            centre = *cs.center;
            if (centre == u || centre == v) throw PreconditionError("converging case needs u, v different from the limit point");
            const Rational far = std::max(space.d(centre, u), space.d(centre, v));
            const Rational near = std::min(space.d(centre, u), space.d(centre, v));
            out.r = cs.r ? *cs.r : 2 * far / theta;
            out.s = cs.s ? *cs.s : theta * near / 2;
            if (!(far < theta * out.r)) throw PreconditionError("converging requires max(d(u,u_n), d(u,v_n)) < theta r");
            if (!(out.s < theta * near)) throw PreconditionError("converging requires s < theta min(d(u,u_n), d(u,v_n))");
            if (!(out.s > 0)) throw PreconditionError("converging requires s > 0");
            out.A = annulus(space, centre, out.r, out.s);
            if (out.A.contains(space.base())) throw PreconditionError("converging requires the base outside B(u,r) \\ B(u,s)");
            vals[u] = h(centre) + k * space.d(centre, u);
            vals[v] = vals[u] - k * space.d(u, v);
            prescribed = {u, v};
            for (Index x = 0; x < space.size(); ++x) {
                if (!(space.d(x, centre) < out.r)) {
                    helper(u, centre, x);
                    helper(v, centre, x);
                }
                if (space.d(x, centre) < out.s) {
                    helper(x, centre, u);
                    helper(x, centre, v);
                }
            }
            break;
        }
    }
    (void)centre;
    if (cs.support && !cs.support->disjoint(out.A)) throw PreconditionError("the set A meets the support of F");
    for (Index p : prescribed)
        if (!out.A.contains(p)) throw PreconditionError("prescribed point " + space.name(p) + " is not in A");
    std::vector<Index> dom = out.A.complement().members();
    for (Index p : prescribed) dom.push_back(p);
    std::sort(dom.begin(), dom.end());
    dom.erase(std::unique(dom.begin(), dom.end()), dom.end());
    out.f = mcshane_extend(PartialFunction(space, PointSubset(space.size(), dom), vals), Rational(1), ExtensionDirection::Sup);
    out.f_norm = lip_norm(out.f);
    out.gap = out.f(u) - out.f(v);
    out.norm_holds = out.f_norm <= 1;
    out.gap_holds = out.gap >= k * space.d(u, v);
    out.agrees_outside = true;
    for (Index x = 0; x < space.size(); ++x)
        if (!out.A.contains(x) && out.f(x) != h(x)) out.agrees_outside = false;
    return out;
}

struct DaugavetChain {
    DaugavetBuild build;
    LipschitzFunction h;
    Rational gamma_first, gamma_second;  // |mu| masses of the pair sets over A
    Rational F_of_f, molecule_norm;
    bool masses_small = false;          // both masses < delta
    bool F_bound = false;               // F(f) > 1 - 6 delta
    bool molecule_bound = false;        // ||F + m_{u,v}|| > 2 - 7 delta
};

/// Full estimate chain for a norm-one F and the pair (u, v): h = (1-delta) f*
/// for a norming f* of F, the builder's f, the Gamma masses of a minimal
/// representation of F on A, F(f) and ||F + m_{u,v}||.
inline DaugavetChain daugavet_estimate_chain(const FreeVector& F, Index u, Index v, const Rational& delta, const DaugavetCaseSpec& cs,
                                             Mode mode = Mode::Exact, const Tolerances& tol = kDefaultTolerances) {
    const auto& space = F.space();
    auto dual = free_norm_dual(F, mode, tol);
    if (mode == Mode::Exact && dual.value != 1) throw PreconditionError("F must have norm 1, got " + to_string(dual.value));
    // in float mode the norming function is rounded; rescale so ||h|| <= 1 - delta holds exactly
    Rational wn = lip_norm(dual.witness);
    LipschitzFunction h = dual.witness.scaled((1 - delta) / (wn > 0 ? wn : Rational(1)));
    auto build = build_daugavet_function(space, h, u, v, delta, cs);
    auto mu = min_tv_representation(F, mode, tol);
    DaugavetChain out{build, h, gamma_mass(mu, build.A, GammaSide::First), gamma_mass(mu, build.A, GammaSide::Second),
                      F.apply(build.f), pair_with_molecule(F, u, v, mode, tol)};
    const Rational sl = detail::slack(mode, tol);
    out.masses_small = out.gamma_first + sl < delta && out.gamma_second + sl < delta;
    out.F_bound = out.F_of_f > 1 - 6 * delta + sl;
    out.molecule_bound = out.molecule_norm > 2 - 7 * delta + sl;
    return out;
}

/// Local-function test at scale eps: among ordered pairs with d(u,v) < eps,
/// the largest slope must exceed ||f|| - eps.
inline PropertyReport check_local(const LipschitzFunction& f, const Rational& eps, Mode mode = Mode::Exact,
                                  const Tolerances& tol = kDefaultTolerances) {
    if (eps <= 0) throw PreconditionError("check_local requires eps > 0");
    const auto& space = f.space();
    auto r = detail::base_report("local", mode, tol);
    r.parameters = {{"epsilon", to_string(eps)}};
    Rational norm = lip_norm(f);
    std::optional<PointPair> best;
    Rational best_slope;
    for (Index x = 0; x < space.size(); ++x)
        for (Index y = 0; y < space.size(); ++y) {
            if (x == y || !(space.d(x, y) < eps)) continue;
            Rational s = f.slope(x, y);
            if (!best || s > best_slope) {
                best = {x, y};
                best_slope = s;
            }
        }
    r.parameters.push_back({"norm", to_string(norm)});
    if (!best) {
        r.status = CheckStatus::VacuousFail;
        r.message = "vacuously fails: uniformly discrete at scale " + to_string(eps) + " (no pair closer than eps)";
        return r;
    }
    r.witness = {{"u", space.name(best->first)}, {"v", space.name(best->second)}, {"slope", to_string(best_slope)}};
    if (best_slope > norm - eps + detail::slack(mode, tol)) {
        r.status = CheckStatus::Pass;
    } else {
        r.status = CheckStatus::Fail;
        r.violation_count = 1;
        r.violations.push_back(detail::make_violation(space, "local", {best->first, best->second}, norm - eps, best_slope));
        r.message = "best slope among close pairs does not exceed ||f|| - eps";
    }
    return r;
}

}  // namespace lipschitz
