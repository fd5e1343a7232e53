#pragma once

#include "lipschitz/metric.hpp"

#include <map>
#include <optional>
#include <string>
#include <vector>

namespace lipschitz {

/// An element of Lip_0(M): one exact value per point, zero at the base.
class LipschitzFunction {
  public:
    LipschitzFunction(FiniteMetricSpace space, std::vector<Rational> values)
        : space_(std::move(space)), values_(std::move(values)) {
        if (values_.size() != space_.size())
            throw PreconditionError("function has " + std::to_string(values_.size()) + " values for " +
                                    std::to_string(space_.size()) + " points");
        if (values_[space_.base()] != 0)
            throw PreconditionError("function value at the base point must be 0, got " + to_string(values_[space_.base()]));
    }

    static LipschitzFunction zero(const FiniteMetricSpace& space) {
        return LipschitzFunction(space, std::vector<Rational>(space.size(), Rational(0)));
    }

    /// Values by point name; unnamed points get 0.
    static LipschitzFunction from_named(const FiniteMetricSpace& space, const std::map<std::string, Rational>& values) {
        std::vector<Rational> v(space.size(), Rational(0));
        for (const auto& [name, val] : values) v[space.index_of(name)] = val;
        return LipschitzFunction(space, std::move(v));
    }

    const FiniteMetricSpace& space() const { return space_; }
    const std::vector<Rational>& values() const { return values_; }
    const Rational& operator()(Index i) const { return values_.at(i); }
    const Rational& at(const std::string& name) const { return values_.at(space_.index_of(name)); }

    /// Slope (f(x) - f(y)) / d(x,y); x != y.
    Rational slope(Index x, Index y) const { return (values_[x] - values_[y]) / space_.d(x, y); }

    LipschitzFunction operator+(const LipschitzFunction& o) const { return combine(o, 1); }
    LipschitzFunction operator-(const LipschitzFunction& o) const { return combine(o, -1); }
    LipschitzFunction operator-() const { return scaled(-1); }
    LipschitzFunction scaled(const Rational& c) const {
        std::vector<Rational> v(values_);
        for (auto& x : v) x *= c;
        return LipschitzFunction(space_, std::move(v));
    }

    friend bool operator==(const LipschitzFunction& a, const LipschitzFunction& b) {
        return a.space_ == b.space_ && a.values_ == b.values_;
    }

  private:
    LipschitzFunction combine(const LipschitzFunction& o, int sign) const {
        if (!(space_ == o.space_)) throw PreconditionError("functions live on different spaces");
        std::vector<Rational> v(values_);
        for (Index i = 0; i < v.size(); ++i) v[i] += sign * o.values_[i];
        return LipschitzFunction(space_, std::move(v));
    }

    FiniteMetricSpace space_;
    std::vector<Rational> values_;
};

struct NormAttainment {
    Rational value;
    PointPair pair;  // (x, y) with f(x) - f(y) = value * d(x, y); (0,0) for the zero function
};

/// Lipschitz constant of arbitrary values on the space (no base condition),
/// with an ordered pair attaining it. Exact; scans essential pairs only.
inline NormAttainment lipschitz_constant(const FiniteMetricSpace& space, const std::vector<Rational>& values) {
    NormAttainment best{Rational(0), {0, 0}};
    for (auto [x, y] : space.essential_pairs()) {
        Rational s = (values[x] - values[y]) / space.d(x, y);
        if (s < 0) {
            s = -s;
            std::swap(x, y);
        }
        if (s > best.value) best = {s, {x, y}};
    }
    return best;
}

inline Rational lip_norm(const LipschitzFunction& f) { return lipschitz_constant(f.space(), f.values()).value; }

inline NormAttainment steepest_pair(const LipschitzFunction& f) { return lipschitz_constant(f.space(), f.values()); }

/// Index of the ordered pair (x, y), x != y, in the de Leeuw index set:
/// pairs are listed by x, then y, skipping the diagonal.
inline Index de_leeuw_index(Index n, Index x, Index y) { return x * (n - 1) + (y < x ? y : y - 1); }

inline PointPair de_leeuw_pair(Index n, Index k) {
    Index x = k / (n - 1), r = k % (n - 1);
    return {x, r < x ? r : r + 1};
}

/// A real function on the ordered off-diagonal pairs of M.
struct DeLeeuwVector {
    FiniteMetricSpace space;
    std::vector<Rational> values;  // indexed by de_leeuw_index

    const Rational& operator()(Index x, Index y) const { return values.at(de_leeuw_index(space.size(), x, y)); }
    Rational sup_norm() const {
        Rational best = 0;
        for (const auto& v : values) best = std::max(best, abs(v));
        return best;
    }
};

inline DeLeeuwVector de_leeuw(const LipschitzFunction& f) {
    const auto& space = f.space();
    const Index n = space.size();
    DeLeeuwVector out{space, std::vector<Rational>(n * (n - 1))};
    for (Index x = 0; x < n; ++x)
        for (Index y = 0; y < n; ++y)
            if (x != y) out.values[de_leeuw_index(n, x, y)] = f.slope(x, y);
    return out;
}

/// A function known only on a subset L of the space.
class PartialFunction {
  public:
    PartialFunction(FiniteMetricSpace space, PointSubset domain, std::vector<Rational> values)
        : space_(std::move(space)), domain_(std::move(domain)), values_(std::move(values)) {
        if (domain_.universe() != space_.size()) throw PreconditionError("domain does not belong to the space");
        if (values_.size() != space_.size()) throw PreconditionError("partial function needs a value slot per point");
        if (domain_.contains(space_.base()) && values_[space_.base()] != 0)
            throw PreconditionError("partial function must vanish at the base point");
    }

    /// Restriction of a total function to `domain`.
    static PartialFunction restrict(const LipschitzFunction& f, const PointSubset& domain) {
        return PartialFunction(f.space(), domain, f.values());
    }

    const FiniteMetricSpace& space() const { return space_; }
    const PointSubset& domain() const { return domain_; }
    bool defined(Index i) const { return domain_.contains(i); }
    const Rational& operator()(Index i) const {
        if (!defined(i)) throw PreconditionError("partial function undefined at " + space_.name(i));
        return values_[i];
    }
    void set(Index i, Rational v) {
        if (!defined(i)) throw PreconditionError("cannot assign outside the domain at " + space_.name(i));
        if (i == space_.base() && v != 0) throw PreconditionError("partial function must vanish at the base point");
        values_[i] = std::move(v);
    }
    const std::vector<Rational>& raw_values() const { return values_; }

  private:
    FiniteMetricSpace space_;
    PointSubset domain_;
    std::vector<Rational> values_;
};

enum class ExtensionDirection { Sup, Inf };

namespace detail {

inline void require_lipschitz_on_domain(const PartialFunction& pf, const Rational& slope) {
    const auto& space = pf.space();
    const auto& dom = pf.domain().members();
    for (Index a = 0; a < dom.size(); ++a)
        for (Index b = a + 1; b < dom.size(); ++b) {
            Index x = dom[a], y = dom[b];
            if (abs(Rational(pf(x) - pf(y))) > slope * space.d(x, y))
                throw PreconditionError("partial function is not " + to_string(slope) + "-Lipschitz on its domain: pair (" +
                                        space.name(x) + "," + space.name(y) + ") has |f(x)-f(y)| = " +
                                        to_string(abs(Rational(pf(x) - pf(y)))) + " > " + to_string(slope * space.d(x, y)));
        }
}

inline void require_base_in_domain(const PartialFunction& pf) {
    if (!pf.domain().contains(pf.space().base())) throw PreconditionError("extension domain must contain the base point");
}

}  // namespace detail

/// Sup direction: y -> max_{x in L} (pf(x) - slope d(x,y)).
/// Inf direction: y -> min_{x in L} (pf(x) + slope d(x,y)).
inline LipschitzFunction mcshane_extend(const PartialFunction& pf, const Rational& slope, ExtensionDirection dir) {
    if (slope <= 0) throw PreconditionError("extension slope must be positive");
    detail::require_base_in_domain(pf);
    detail::require_lipschitz_on_domain(pf, slope);
    const auto& space = pf.space();
    std::vector<Rational> out(space.size());
    for (Index y = 0; y < space.size(); ++y) {
        if (pf.defined(y)) {
            out[y] = pf(y);
            continue;
        }
        std::optional<Rational> best;
        for (Index x : pf.domain()) {
            Rational cand = dir == ExtensionDirection::Sup ? Rational(pf(x) - slope * space.d(x, y)) : Rational(pf(x) + slope * space.d(x, y));
            if (!best || (dir == ExtensionDirection::Sup ? cand > *best : cand < *best)) best = cand;
        }
        out[y] = *best;
    }
    return LipschitzFunction(space, std::move(out));
}

/// Keeps pf on L and sets y -> max_{x in L} (pf(x) + weight(x) - d(x,y)) off L.
/// Requires weights >= 0 on L and pf 1-Lipschitz on L; whether the result
/// satisfies a joint bound such as ||f +- g|| <= 1 is the caller's check.
inline LipschitzFunction weighted_mcshane_extend(const PartialFunction& pf, const std::vector<Rational>& weights) {
    const auto& space = pf.space();
    if (weights.size() != space.size()) throw PreconditionError("weights need one slot per point");
    for (Index x : pf.domain())
        if (weights[x] < 0) throw PreconditionError("negative weight at " + space.name(x));
    detail::require_base_in_domain(pf);
    detail::require_lipschitz_on_domain(pf, Rational(1));
    std::vector<Rational> out(space.size());
    for (Index y = 0; y < space.size(); ++y) {
        if (pf.defined(y)) {
            out[y] = pf(y);
            continue;
        }
        std::optional<Rational> best;
        for (Index x : pf.domain()) {
            Rational cand = pf(x) + weights[x] - space.d(x, y);
            if (!best || cand > *best) best = cand;
        }
        out[y] = *best;
    }
    return LipschitzFunction(space, std::move(out));
}

}  // namespace lipschitz
