#pragma once

// Dense two-phase primal simplex over double or exact rationals.
//
// Exact mode pivots in GMP rationals with Bland's rule, so it always terminates
// and its optimal solutions carry an exactly verified dual certificate.
// Float mode uses Dantzig pricing (falling back to Bland on stalls) and
// checks its own output against feas_tol / gap_tol; if that check fails it
// throws NumericBreakdown instead of returning a doubtful answer.

#include "lipschitz/rational.hpp"

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <type_traits>
#include <utility>
#include <vector>

namespace lipschitz {

enum class Sense { Maximize, Minimize };
enum class RowType { LessEqual, Equal, GreaterEqual };
enum class LpStatus { Optimal, Infeasible, Unbounded };

inline const char* to_string(LpStatus s) {
    switch (s) {
        case LpStatus::Optimal: return "optimal";
        case LpStatus::Infeasible: return "infeasible";
        case LpStatus::Unbounded: return "unbounded";
    }
    return "?";
}

class NumericBreakdown : public std::runtime_error {
  public:
    explicit NumericBreakdown(const std::string& what)
        : std::runtime_error("float simplex numeric breakdown (" + what + "); retry in exact mode") {}
};

class LpFormatError : public std::invalid_argument {
  public:
    using std::invalid_argument::invalid_argument;
};

template <class T>
struct LinearProgram {
    struct Term {
        std::size_t var;
        T coeff;
    };
    struct Row {
        std::vector<Term> terms;  // sparse; at most one term per variable
        RowType type = RowType::LessEqual;
        T rhs{};
    };

    Sense sense = Sense::Maximize;
    std::vector<T> objective;
    std::vector<Row> rows;
    std::vector<std::optional<T>> lower;  // nullopt = -inf
    std::vector<std::optional<T>> upper;  // nullopt = +inf

    LinearProgram() = default;
    explicit LinearProgram(std::size_t num_vars, Sense s = Sense::Maximize)
        : sense(s), objective(num_vars, T(0)), lower(num_vars, T(0)), upper(num_vars) {}

    std::size_t num_vars() const { return objective.size(); }

    std::size_t add_variable(std::optional<T> lo = T(0), std::optional<T> hi = std::nullopt, T cost = T(0)) {
        objective.push_back(cost);
        lower.push_back(std::move(lo));
        upper.push_back(std::move(hi));
        return objective.size() - 1;
    }
    void set_free(std::size_t j) {
        lower.at(j).reset();
        upper.at(j).reset();
    }
    void add_row(std::vector<Term> terms, RowType type, T rhs) { rows.push_back(Row{std::move(terms), type, std::move(rhs)}); }
    void add_dense_row(const std::vector<T>& coeffs, RowType type, T rhs) {
        std::vector<Term> terms;
        for (std::size_t j = 0; j < coeffs.size(); ++j)
            if (coeffs[j] != T(0)) terms.push_back({j, coeffs[j]});
        add_row(std::move(terms), type, std::move(rhs));
    }

    /// Throws LpFormatError when a row references a missing variable or a
    /// variable has lower > upper.
    void check() const {
        const std::size_t n = num_vars();
        if (lower.size() != n || upper.size() != n) throw LpFormatError("bound vectors do not match variable count");
        for (std::size_t j = 0; j < n; ++j)
            if (lower[j] && upper[j] && *lower[j] > *upper[j])
                throw LpFormatError("variable " + std::to_string(j) + " has lower bound above upper bound");
        for (std::size_t i = 0; i < rows.size(); ++i) {
            std::vector<bool> seen(n, false);
            for (const auto& t : rows[i].terms) {
                if (t.var >= n) throw LpFormatError("row " + std::to_string(i) + " references variable " + std::to_string(t.var));
                if (seen[t.var]) throw LpFormatError("row " + std::to_string(i) + " repeats variable " + std::to_string(t.var));
                seen[t.var] = true;
            }
        }
    }

    std::vector<T> dense_row(std::size_t i) const {
        std::vector<T> out(num_vars(), T(0));
        for (const auto& t : rows[i].terms) out[t.var] = t.coeff;
        return out;
    }

    template <class U, class F>
    LinearProgram<U> convert(F&& f) const {
        LinearProgram<U> out;
        out.sense = sense;
        for (const auto& c : objective) out.objective.push_back(f(c));
        for (const auto& l : lower) out.lower.push_back(l ? std::optional<U>(f(*l)) : std::nullopt);
        for (const auto& u : upper) out.upper.push_back(u ? std::optional<U>(f(*u)) : std::nullopt);
        for (const auto& r : rows) {
            typename LinearProgram<U>::Row row;
            row.type = r.type;
            row.rhs = f(r.rhs);
            for (const auto& t : r.terms) row.terms.push_back({t.var, f(t.coeff)});
            out.rows.push_back(std::move(row));
        }
        return out;
    }
};

template <class T>
struct LpSolution {
    LpStatus status = LpStatus::Infeasible;
    T value{};               // objective value (optimal only)
    std::vector<T> primal;   // optimal point
    std::vector<T> dual;     // one multiplier per row (optimal only)
    std::vector<T> farkas;   // infeasibility certificate, one multiplier per row
    std::vector<T> ray;      // improving direction (unbounded only)
    std::size_t iterations = 0;
};

/// Dual bound and primal residual derived from a row-multiplier vector.
///
/// Multiplier signs follow the problem sense: when maximizing, <= rows carry
/// y >= 0 and >= rows y <= 0 (reversed when minimizing). With r = c - A^T y,
/// the bound is b^T y plus the extreme of r^T x over the variable box; it is
/// an upper bound on the maximum (lower bound on the minimum).
template <class T>
struct CertificateCheck {
    bool signs_ok = true;
    bool bound_finite = true;
    T dual_objective{};
    T primal_objective{};
    T primal_residual{};  // max violation over rows and bounds
    T gap{};              // |primal - dual|
};

namespace detail {

template <class T>
inline T tol_zero() {
    if constexpr (std::is_same_v<T, double>) return 0.0;
    else return T(0);
}

template <class T>
inline T abs_value(const T& x) {
    return x < T(0) ? T(-x) : x;
}

}  // namespace detail

/// Evaluates primal feasibility of x and the dual bound implied by y.
/// `zero_tol` treats reduced costs with magnitude below it as zero (float mode).
template <class T>
CertificateCheck<T> check_certificate(const LinearProgram<T>& lp, const std::vector<T>& x, const std::vector<T>& y,
                                      T zero_tol = detail::tol_zero<T>()) {
    using detail::abs_value;
    CertificateCheck<T> out;
    const std::size_t n = lp.num_vars();
    const bool maximize = lp.sense == Sense::Maximize;
    T residual(0);
    for (std::size_t j = 0; j < n; ++j) {
        if (lp.lower[j] && x[j] < *lp.lower[j]) residual = std::max<T>(residual, *lp.lower[j] - x[j]);
        if (lp.upper[j] && x[j] > *lp.upper[j]) residual = std::max<T>(residual, x[j] - *lp.upper[j]);
    }
    std::vector<T> reduced = lp.objective;
    T by(0);
    for (std::size_t i = 0; i < lp.rows.size(); ++i) {
        const auto& row = lp.rows[i];
        T ax(0);
        for (const auto& t : row.terms) {
            ax += t.coeff * x[t.var];
            reduced[t.var] -= t.coeff * y[i];
        }
        T viol(0);
        if (row.type != RowType::GreaterEqual && ax > row.rhs) viol = ax - row.rhs;
        if (row.type != RowType::LessEqual && ax < row.rhs) viol = std::max<T>(viol, row.rhs - ax);
        residual = std::max(residual, viol);
        by += row.rhs * y[i];
        // sign of y allowed for this row type
        const bool wants_nonneg = (row.type == RowType::LessEqual) == maximize;
        if (row.type != RowType::Equal) {
            if (wants_nonneg && y[i] < -zero_tol) out.signs_ok = false;
            if (!wants_nonneg && y[i] > zero_tol) out.signs_ok = false;
        }
    }
    T primal(0);
    for (std::size_t j = 0; j < n; ++j) primal += lp.objective[j] * x[j];
    T bound = by;
    for (std::size_t j = 0; j < n; ++j) {
        T r = reduced[j];
        if (abs_value(r) <= zero_tol) continue;
        // maximizing: add max over the box of r x; minimizing: add the min
        const bool take_upper = (r > T(0)) == maximize;
        const auto& b = take_upper ? lp.upper[j] : lp.lower[j];
        if (!b) {
            out.bound_finite = false;
            continue;
        }
        bound += r * *b;
    }
    out.dual_objective = bound;
    out.primal_objective = primal;
    out.primal_residual = residual;
    out.gap = abs_value(T(primal - bound));
    return out;
}

/// True when y proves infeasibility: correct signs and max over the box of
/// (A^T y) x strictly below b^T y (with the sign convention of a <=/>= system
/// aggregated into y^T A x >= y^T b).
template <class T>
bool check_farkas(const LinearProgram<T>& lp, const std::vector<T>& y, T zero_tol = detail::tol_zero<T>()) {
    const std::size_t n = lp.num_vars();
    std::vector<T> aty(n, T(0));
    T by(0);
    for (std::size_t i = 0; i < lp.rows.size(); ++i) {
        const auto& row = lp.rows[i];
        if (row.type == RowType::LessEqual && y[i] > zero_tol) return false;
        if (row.type == RowType::GreaterEqual && y[i] < -zero_tol) return false;
        for (const auto& t : row.terms) aty[t.var] += t.coeff * y[i];
        by += row.rhs * y[i];
    }
    T box_max(0);
    for (std::size_t j = 0; j < n; ++j) {
        if (detail::abs_value(aty[j]) <= zero_tol) continue;
        const auto& b = aty[j] > T(0) ? lp.upper[j] : lp.lower[j];
        if (!b) return false;
        box_max += aty[j] * *b;
    }
    return box_max < by - zero_tol;
}

namespace detail {

/// Tableau simplex on the transformed problem
///   min c'x'  s.t.  A'x' (+ slack | - surplus) (+ artificial) = b' >= 0,  x' >= 0.
/// After phase 1, the instance can be re-optimized for several objectives;
/// each call starts from the previous optimal basis.
template <class T>
class Simplex {
  public:
    Simplex(const LinearProgram<T>& lp, bool bland, T eps, std::size_t max_iter)
        : lp_(lp), bland_(bland), eps_(eps), max_iter_(max_iter) {
        lp.check();
        build();
    }

    /// Runs phase 1; returns false (and fills the Farkas certificate) if infeasible.
    bool phase1(LpSolution<T>& sol) {
        std::vector<T> cost(ncols_, T(0));
        bool any_art = false;
        for (std::size_t j = art_begin_; j < ncols_; ++j) cost[j] = T(1), any_art = true;
        if (!any_art) return true;
        set_costs(cost);
        iterate(/*allow_art=*/true, sol.iterations);  // bounded below by 0
        if (is_pos(z_, feas_scale_)) {
            sol.status = LpStatus::Infeasible;
            sol.farkas.assign(lp_.rows.size(), T(0));
            for (std::size_t i = 0; i < m_orig_; ++i) {
                std::size_t id = identity_col_[i];
                T yi = cost[id] - d_[id];
                sol.farkas[i] = row_sign_[i] > 0 ? yi : T(-yi);
            }
            return false;
        }
        // pivot zero-level artificials out where possible; the rest sit on redundant rows
        for (std::size_t r = 0; r < m_; ++r) {
            if (basis_[r] < art_begin_) continue;
            for (std::size_t j = 0; j < art_begin_; ++j)
                if (!is_zero(at(r, j))) {
                    pivot(r, j);
                    break;
                }
        }
        return true;
    }

    /// Optimizes an objective (in original variables, original sense) from the
    /// current feasible basis.
    LpSolution<T> optimize(const std::vector<T>& objective, std::size_t iterations_so_far = 0) {
        LpSolution<T> sol;
        sol.iterations = iterations_so_far;
        const bool maximize = lp_.sense == Sense::Maximize;
        std::vector<T> cost(ncols_, T(0));
        for (std::size_t j = 0; j < n_orig_; ++j) {
            T c = maximize ? T(-objective[j]) : objective[j];
            for (const auto& [col, coef] : var_cols_[j]) cost[col] += c * coef;
        }
        set_costs(cost);
        auto outcome = iterate(/*allow_art=*/false, sol.iterations);
        if (outcome.unbounded) {
            sol.status = LpStatus::Unbounded;
            std::vector<T> dir(ncols_, T(0));
            dir[outcome.column] = T(1);
            for (std::size_t r = 0; r < m_; ++r) dir[basis_[r]] = -at(r, outcome.column);
            sol.ray.assign(n_orig_, T(0));
            for (std::size_t j = 0; j < n_orig_; ++j)
                for (const auto& [col, coef] : var_cols_[j]) sol.ray[j] += coef * dir[col];
            return sol;
        }
        sol.status = LpStatus::Optimal;
        std::vector<T> xcol(ncols_, T(0));
        for (std::size_t r = 0; r < m_; ++r) xcol[basis_[r]] = rhs_[r];
        sol.primal.assign(n_orig_, T(0));
        for (std::size_t j = 0; j < n_orig_; ++j) {
            T v = var_offset_[j];
            for (const auto& [col, coef] : var_cols_[j]) v += coef * xcol[col];
            sol.primal[j] = v;
        }
        T value(0);
        for (std::size_t j = 0; j < n_orig_; ++j) value += objective[j] * sol.primal[j];
        sol.value = value;
        sol.dual.assign(m_orig_, T(0));
        for (std::size_t i = 0; i < m_orig_; ++i) {
            T yi = cost[identity_col_[i]] - d_[identity_col_[i]];
            if (row_sign_[i] < 0) yi = -yi;
            sol.dual[i] = maximize ? T(-yi) : yi;
        }
        return sol;
    }

  private:
    struct Outcome {
        bool unbounded = false;
        std::size_t column = 0;
    };

    bool is_zero(const T& x) const {
        if constexpr (std::is_same_v<T, double>) return std::abs(x) <= eps_;
        else return sgn(x) == 0;
    }
    bool is_neg(const T& x) const {
        if constexpr (std::is_same_v<T, double>) return x < -eps_;
        else return sgn(x) < 0;
    }
    bool is_pos(const T& x, double scale = 1.0) const {
        if constexpr (std::is_same_v<T, double>) return x > eps_ * scale;
        else {
            (void)scale;
            return sgn(x) > 0;
        }
    }

    T& at(std::size_t r, std::size_t c) { return tab_[r * ncols_ + c]; }
    const T& at(std::size_t r, std::size_t c) const { return tab_[r * ncols_ + c]; }

    void build() {
        n_orig_ = lp_.num_vars();
        m_orig_ = lp_.rows.size();
        // variable substitution x_j = offset_j + sum coef * x'_col
        var_cols_.resize(n_orig_);
        var_offset_.assign(n_orig_, T(0));
        std::size_t ns = 0;
        std::vector<std::pair<std::size_t, T>> ub_rows;  // (column, width)
        for (std::size_t j = 0; j < n_orig_; ++j) {
            const auto& lo = lp_.lower[j];
            const auto& hi = lp_.upper[j];
            if (lo) {
                var_offset_[j] = *lo;
                var_cols_[j].push_back({ns, T(1)});
                if (hi) ub_rows.push_back({ns, *hi - *lo});
                ++ns;
            } else if (hi) {
                var_offset_[j] = *hi;
                var_cols_[j].push_back({ns++, T(-1)});
            } else {
                var_cols_[j].push_back({ns++, T(1)});
                var_cols_[j].push_back({ns++, T(-1)});
            }
        }
        nstruct_ = ns;
        m_ = m_orig_ + ub_rows.size();

        // transformed rows, normalized to rhs >= 0
        std::vector<std::vector<std::pair<std::size_t, T>>> rows(m_);
        std::vector<T> rhs(m_);
        std::vector<RowType> type(m_);
        row_sign_.assign(m_, 1);
        for (std::size_t i = 0; i < m_orig_; ++i) {
            const auto& row = lp_.rows[i];
            T b = row.rhs;
            for (const auto& t : row.terms) {
                b -= t.coeff * var_offset_[t.var];
                for (const auto& [col, coef] : var_cols_[t.var]) rows[i].push_back({col, t.coeff * coef});
            }
            rhs[i] = b;
            type[i] = row.type;
        }
        for (std::size_t k = 0; k < ub_rows.size(); ++k) {
            rows[m_orig_ + k].push_back({ub_rows[k].first, T(1)});
            rhs[m_orig_ + k] = ub_rows[k].second;
            type[m_orig_ + k] = RowType::LessEqual;
        }
        for (std::size_t i = 0; i < m_; ++i) {
            bool flip = rhs[i] < T(0) || (rhs[i] == T(0) && type[i] == RowType::GreaterEqual);
            if (flip) {
                row_sign_[i] = -1;
                rhs[i] = -rhs[i];
                for (auto& e : rows[i]) e.second = -e.second;
                if (type[i] == RowType::LessEqual) type[i] = RowType::GreaterEqual;
                else if (type[i] == RowType::GreaterEqual) type[i] = RowType::LessEqual;
            }
        }
        // column layout: structural | slack/surplus | artificial
        std::size_t nlog = 0, nart = 0;
        for (std::size_t i = 0; i < m_; ++i) {
            if (type[i] != RowType::Equal) ++nlog;
            if (type[i] != RowType::LessEqual) ++nart;
        }
        art_begin_ = nstruct_ + nlog;
        ncols_ = art_begin_ + nart;
        tab_.assign(m_ * ncols_, T(0));
        rhs_ = rhs;
        basis_.assign(m_, 0);
        identity_col_.assign(m_, 0);
        std::size_t next_log = nstruct_, next_art = art_begin_;
        for (std::size_t i = 0; i < m_; ++i) {
            for (const auto& [col, v] : rows[i]) at(i, col) += v;
            if (type[i] == RowType::LessEqual) {
                at(i, next_log) = T(1);
                basis_[i] = identity_col_[i] = next_log++;
            } else {
                if (type[i] == RowType::GreaterEqual) at(i, next_log++) = T(-1);
                at(i, next_art) = T(1);
                basis_[i] = identity_col_[i] = next_art++;
            }
        }
        T bmax(1);
        for (const auto& b : rhs_) bmax = std::max<T>(bmax, b);
        if constexpr (std::is_same_v<T, double>) feas_scale_ = bmax;
    }

    void set_costs(const std::vector<T>& cost) {
        d_ = cost;
        z_ = T(0);
        for (std::size_t r = 0; r < m_; ++r) {
            const T& cb = cost[basis_[r]];
            if (cb == T(0)) continue;
            for (std::size_t j = 0; j < ncols_; ++j) {
                const T& a = at(r, j);
                if (a != T(0)) d_[j] -= cb * a;
            }
            z_ += cb * rhs_[r];
        }
        for (std::size_t r = 0; r < m_; ++r) d_[basis_[r]] = T(0);
    }

    void pivot(std::size_t r, std::size_t c) {
        T piv = at(r, c);
        nz_.clear();
        for (std::size_t j = 0; j < ncols_; ++j) {
            T& a = at(r, j);
            if (a == T(0)) continue;
            a /= piv;
            nz_.push_back(j);
        }
        rhs_[r] /= piv;
        at(r, c) = T(1);
        for (std::size_t i = 0; i < m_; ++i) {
            if (i == r) continue;
            T f = at(i, c);
            if (f == T(0)) continue;
            T* row_i = &tab_[i * ncols_];
            const T* row_r = &tab_[r * ncols_];
            for (std::size_t j : nz_) {
                row_i[j] -= f * row_r[j];
                if constexpr (std::is_same_v<T, double>)
                    if (std::abs(row_i[j]) < 1e-14) row_i[j] = 0.0;
            }
            row_i[c] = T(0);
            rhs_[i] -= f * rhs_[r];
            if constexpr (std::is_same_v<T, double>)
                if (std::abs(rhs_[i]) < 1e-14) rhs_[i] = 0.0;
        }
        T fd = d_[c];
        if (fd != T(0)) {
            const T* row_r = &tab_[r * ncols_];
            for (std::size_t j : nz_) d_[j] -= fd * row_r[j];
            d_[c] = T(0);
            z_ += fd * rhs_[r];
        }
        basis_[r] = c;
    }

    Outcome iterate(bool allow_art, std::size_t& iterations) {
        const std::size_t limit_cols = allow_art ? ncols_ : art_begin_;
        std::size_t degenerate_run = 0;
        while (true) {
            if (iterations >= max_iter_) throw NumericBreakdown("iteration limit reached");
            const bool use_bland = bland_ || degenerate_run > 50;
            std::size_t enter = ncols_;
            if (use_bland) {
                for (std::size_t j = 0; j < limit_cols; ++j)
                    if (is_neg(d_[j])) {
                        enter = j;
                        break;
                    }
            } else {
                T best(0);
                for (std::size_t j = 0; j < limit_cols; ++j)
                    if (is_neg(d_[j]) && (enter == ncols_ || d_[j] < best)) {
                        best = d_[j];
                        enter = j;
                    }
            }
            if (enter == ncols_) return {};

            std::size_t leave = m_;
            T best_ratio(0);
            for (std::size_t r = 0; r < m_; ++r) {
                const T& a = at(r, enter);
                if (!is_pos(a)) continue;
                T ratio = rhs_[r] / a;
                if (leave == m_) {
                    leave = r;
                    best_ratio = ratio;
                    continue;
                }
                if constexpr (std::is_same_v<T, double>) {
                    if (ratio < best_ratio - eps_) {
                        leave = r;
                        best_ratio = ratio;
                    } else if (ratio <= best_ratio + eps_) {
                        // near tie: Bland picks the smaller basic index, otherwise the larger pivot
                        bool better = use_bland ? basis_[r] < basis_[leave] : std::abs(a) > std::abs(at(leave, enter));
                        if (better) {
                            leave = r;
                            best_ratio = std::min(best_ratio, ratio);
                        }
                    }
                } else {
                    if (ratio < best_ratio || (ratio == best_ratio && basis_[r] < basis_[leave])) {
                        leave = r;
                        best_ratio = ratio;
                    }
                }
            }
            if (leave == m_) {
                Outcome o;
                o.unbounded = true;
                o.column = enter;
                return o;
            }
            degenerate_run = is_zero(rhs_[leave]) ? degenerate_run + 1 : 0;
            pivot(leave, enter);
            ++iterations;
        }
    }

    const LinearProgram<T>& lp_;
    bool bland_;
    T eps_;
    std::size_t max_iter_;
    double feas_scale_ = 1.0;

    std::size_t n_orig_ = 0, m_orig_ = 0, nstruct_ = 0, m_ = 0, art_begin_ = 0, ncols_ = 0;
    std::vector<std::vector<std::pair<std::size_t, T>>> var_cols_;
    std::vector<T> var_offset_;
    std::vector<int> row_sign_;
    std::vector<std::size_t> identity_col_;
    std::vector<T> tab_, rhs_, d_;
    std::vector<std::size_t> basis_, nz_;
    T z_{};
};

inline std::size_t float_iteration_limit(const LinearProgram<Rational>& lp) {
    return 200 * (lp.num_vars() + lp.rows.size()) + 10000;
}

template <class T>
void check_float_solution(const LinearProgram<T>& lp, const LpSolution<T>& sol, const Tolerances& tol) {
    if (sol.status == LpStatus::Optimal) {
        auto cert = check_certificate(lp, sol.primal, sol.dual, tol.feas_tol);
        if (!(cert.primal_residual <= tol.feas_tol)) throw NumericBreakdown("primal residual above feas_tol");
        if (!cert.signs_ok || !cert.bound_finite) throw NumericBreakdown("dual certificate invalid");
        if (!(cert.gap <= tol.gap_tol)) throw NumericBreakdown("duality gap above gap_tol");
    } else if (sol.status == LpStatus::Infeasible) {
        if (!check_farkas(lp, sol.farkas, tol.feas_tol)) throw NumericBreakdown("Farkas certificate invalid");
    }
}

template <class T>
void check_exact_solution(const LinearProgram<T>& lp, const LpSolution<T>& sol) {
    if (sol.status == LpStatus::Optimal) {
        auto cert = check_certificate(lp, sol.primal, sol.dual);
        if (cert.primal_residual != 0 || !cert.signs_ok || !cert.bound_finite || cert.gap != 0)
            throw std::logic_error("exact simplex produced an uncertified optimum");
    } else if (sol.status == LpStatus::Infeasible) {
        if (!check_farkas(lp, sol.farkas)) throw std::logic_error("exact simplex produced an invalid Farkas certificate");
    }
}

inline LpSolution<Rational> to_rational(const LpSolution<double>& s) {
    LpSolution<Rational> out;
    out.status = s.status;
    out.value = from_double(s.value);
    out.iterations = s.iterations;
    auto conv = [](const std::vector<double>& v) {
        std::vector<Rational> r;
        r.reserve(v.size());
        for (double x : v) r.push_back(from_double(x));
        return r;
    };
    out.primal = conv(s.primal);
    out.dual = conv(s.dual);
    out.farkas = conv(s.farkas);
    out.ray = conv(s.ray);
    return out;
}

}  // namespace detail

/// Solves the program once per objective, warm-starting each solve from the
/// previous optimal basis. All objectives share the constraint system of `lp`
/// (its own objective is ignored). Results are returned in rational form; in
/// float mode they are the exact values of the computed doubles.
inline std::vector<LpSolution<Rational>> solve_objectives(const LinearProgram<Rational>& lp,
                                                          const std::vector<std::vector<Rational>>& objectives,
                                                          Mode mode, const Tolerances& tol = kDefaultTolerances) {
    std::vector<LpSolution<Rational>> out;
    if (mode == Mode::Exact) {
        detail::Simplex<Rational> simplex(lp, /*bland=*/true, Rational(0), std::numeric_limits<std::size_t>::max());
        LpSolution<Rational> first;
        if (!simplex.phase1(first)) {
            detail::check_exact_solution(lp, first);
            out.assign(objectives.size(), first);
            return out;
        }
        for (const auto& obj : objectives) {
            auto sol = simplex.optimize(obj, first.iterations);
            LinearProgram<Rational> view = lp;
            view.objective = obj;
            detail::check_exact_solution(view, sol);
            out.push_back(std::move(sol));
        }
        return out;
    }
    auto to_d = [](const Rational& r) { return to_double(r); };
    LinearProgram<double> dlp = lp.convert<double>(to_d);
    detail::Simplex<double> simplex(dlp, /*bland=*/false, 1e-11, detail::float_iteration_limit(lp));
    LpSolution<double> first;
    if (!simplex.phase1(first)) {
        detail::check_float_solution(dlp, first, tol);
        out.assign(objectives.size(), detail::to_rational(first));
        return out;
    }
    for (const auto& obj : objectives) {
        std::vector<double> dobj;
        for (const auto& c : obj) dobj.push_back(to_double(c));
        auto sol = simplex.optimize(dobj, first.iterations);
        LinearProgram<double> view = dlp;
        view.objective = dobj;
        detail::check_float_solution(view, sol, tol);
        out.push_back(detail::to_rational(sol));
    }
    return out;
}

inline LpSolution<Rational> solve(const LinearProgram<Rational>& lp, Mode mode, const Tolerances& tol = kDefaultTolerances) {
    return solve_objectives(lp, {lp.objective}, mode, tol).front();
}

/// Plain-text tabular dump of a program, one row per line.
template <class T>
std::string dump(const LinearProgram<T>& lp) {
    auto str = [](const T& v) {
        std::ostringstream os;
        if constexpr (std::is_same_v<T, Rational>) os << v.get_str();
        else os << v;
        return os.str();
    };
    std::ostringstream os;
    os << (lp.sense == Sense::Maximize ? "maximize" : "minimize") << "\t";
    for (std::size_t j = 0; j < lp.num_vars(); ++j) os << str(lp.objective[j]) << (j + 1 < lp.num_vars() ? "\t" : "\n");
    for (std::size_t i = 0; i < lp.rows.size(); ++i) {
        os << "row" << i << "\t";
        auto dense = lp.dense_row(i);
        for (const auto& v : dense) os << str(v) << "\t";
        const auto& r = lp.rows[i];
        os << (r.type == RowType::LessEqual ? "<=" : r.type == RowType::Equal ? "=" : ">=") << "\t" << str(r.rhs) << "\n";
    }
    os << "lower\t";
    for (const auto& l : lp.lower) os << (l ? str(*l) : std::string("-inf")) << "\t";
    os << "\nupper\t";
    for (const auto& u : lp.upper) os << (u ? str(*u) : std::string("inf")) << "\t";
    os << "\n";
    return os.str();
}

}  // namespace lipschitz
