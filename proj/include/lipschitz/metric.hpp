#pragma once

#include "lipschitz/rational.hpp"

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <limits>
#include <memory>
#include <mutex>
#include <optional>
#include <stdexcept>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

namespace lipschitz {

using Index = std::size_t;
using PointPair = std::pair<Index, Index>;

/// Outcome of checking a candidate distance matrix against the metric axioms.
struct ValidationReport {
    enum class Kind { Pass, StructuralError, AxiomViolation };

    Kind kind = Kind::Pass;
    std::string axiom;           // "triangle", "symmetry", ... ; empty on pass
    std::vector<Index> points;   // offending indices (triple for the triangle axiom)
    std::string message;

    bool passed() const { return kind == Kind::Pass; }
};

class MetricError : public std::runtime_error {
  public:
    explicit MetricError(ValidationReport r) : std::runtime_error(r.message), report_(std::move(r)) {}
    const ValidationReport& report() const { return report_; }

  private:
    ValidationReport report_;
};

class PreconditionError : public std::invalid_argument {
  public:
    using std::invalid_argument::invalid_argument;
};

namespace detail {

// Distances rescaled to a common denominator when they fit comfortably in 62 bits.
// Used for fast exact triangle/betweenness checks.
inline std::optional<std::vector<std::int64_t>> scale_to_integers(const std::vector<Rational>& dist) {
    mpz_class lcm = 1;
    for (const auto& d : dist) mpz_lcm(lcm.get_mpz_t(), lcm.get_mpz_t(), d.get_den_mpz_t());
    const mpz_class limit = mpz_class(1) << 60;
    std::vector<std::int64_t> out;
    out.reserve(dist.size());
    for (const auto& d : dist) {
        mpz_class v = d.get_num() * (lcm / d.get_den());
        if (abs(v) >= limit) return std::nullopt;
        out.push_back(v.get_si());
    }
    return out;
}

}  // namespace detail

/// Checks sizes, names, base index and all metric axioms. The first violated
/// triangle inequality d(i,k) > d(i,j) + d(j,k) is reported as (i, j, k) in
/// lexicographic order of (i, j, k).
inline ValidationReport validate(const std::vector<std::string>& names, Index base,
                                 const std::vector<std::vector<Rational>>& dist) {
    using Kind = ValidationReport::Kind;
    const Index n = names.size();
    auto structural = [](std::string msg) { return ValidationReport{Kind::StructuralError, "", {}, std::move(msg)}; };
    if (dist.size() != n) return structural("distance matrix has " + std::to_string(dist.size()) + " rows for " + std::to_string(n) + " points");
    for (Index i = 0; i < n; ++i)
        if (dist[i].size() != n)
            return structural("row " + std::to_string(i) + " has " + std::to_string(dist[i].size()) + " entries, expected " + std::to_string(n));
    if (n > 0 && base >= n) return structural("base index " + std::to_string(base) + " out of range");
    {
        std::unordered_map<std::string, Index> seen;
        for (Index i = 0; i < n; ++i)
            if (!seen.emplace(names[i], i).second) return structural("duplicate point name '" + names[i] + "'");
    }

    auto violation = [&](std::string axiom, std::vector<Index> pts, const std::string& detail) {
        std::string msg = axiom + " axiom violated at (";
        for (Index t = 0; t < pts.size(); ++t) msg += (t ? "," : "") + names[pts[t]];
        msg += ")";
        if (!detail.empty()) msg += ": " + detail;
        return ValidationReport{Kind::AxiomViolation, std::move(axiom), std::move(pts), std::move(msg)};
    };
    if (n < 2) return ValidationReport{Kind::AxiomViolation, "nontrivial", {}, "a metric space needs at least 2 points"};

    for (Index i = 0; i < n; ++i)
        if (dist[i][i] != 0) return violation("zero_diagonal", {i}, "d = " + to_string(dist[i][i]));
    for (Index i = 0; i < n; ++i)
        for (Index j = 0; j < n; ++j) {
            if (i != j && dist[i][j] <= 0) return violation("positivity", {i, j}, "d = " + to_string(dist[i][j]));
            if (dist[i][j] != dist[j][i])
                return violation("symmetry", {i, j}, to_string(dist[i][j]) + " != " + to_string(dist[j][i]));
        }

    std::vector<Rational> flat;
    flat.reserve(n * n);
    for (const auto& row : dist) flat.insert(flat.end(), row.begin(), row.end());
    auto report_triangle = [&](Index i, Index j, Index k) {
        return violation("triangle", {i, j, k},
                         "d(" + names[i] + "," + names[k] + ") = " + to_string(dist[i][k]) + " > " +
                             to_string(dist[i][j] + dist[j][k]));
    };
    if (auto scaled = detail::scale_to_integers(flat)) {
        const auto& s = *scaled;
        for (Index i = 0; i < n; ++i)
            for (Index j = 0; j < n; ++j) {
                const std::int64_t dij = s[i * n + j];
                const std::int64_t* row_j = &s[j * n];
                const std::int64_t* row_i = &s[i * n];
                for (Index k = 0; k < n; ++k)
                    if (row_i[k] > dij + row_j[k]) return report_triangle(i, j, k);
            }
    } else {
        for (Index i = 0; i < n; ++i)
            for (Index j = 0; j < n; ++j)
                for (Index k = 0; k < n; ++k)
                    if (dist[i][k] > dist[i][j] + dist[j][k]) return report_triangle(i, j, k);
    }
    return {};
}

/// A finite pointed metric space with exact rational distances.
///
/// Immutable and cheap to copy: all copies share one validated distance table.
class FiniteMetricSpace {
  public:
    /// Validates the input and throws MetricError carrying the report on failure.
    FiniteMetricSpace(std::vector<std::string> names, Index base, const std::vector<std::vector<Rational>>& dist) {
        auto report = validate(names, base, dist);
        if (!report.passed()) throw MetricError(std::move(report));
        auto data = std::make_shared<Data>();
        const Index n = names.size();
        data->names = std::move(names);
        data->base = base;
        data->dist.reserve(n * n);
        for (const auto& row : dist) data->dist.insert(data->dist.end(), row.begin(), row.end());
        data->dist_f.reserve(n * n);
        for (const auto& d : data->dist) data->dist_f.push_back(to_double(d));
        for (Index i = 0; i < n; ++i) data->index.emplace(data->names[i], i);
        data_ = std::move(data);
    }

    Index size() const { return data_->names.size(); }
    Index base() const { return data_->base; }
    const std::string& name(Index i) const { return data_->names.at(i); }
    const std::vector<std::string>& names() const { return data_->names; }

    std::optional<Index> find(const std::string& name) const {
        auto it = data_->index.find(name);
        if (it == data_->index.end()) return std::nullopt;
        return it->second;
    }
    Index index_of(const std::string& name) const {
        if (auto i = find(name)) return *i;
        throw PreconditionError("unknown point '" + name + "'");
    }

    const Rational& d(Index i, Index j) const { return data_->dist[i * size() + j]; }
    double d_float(Index i, Index j) const { return data_->dist_f[i * size() + j]; }

    std::vector<std::vector<Rational>> matrix() const {
        std::vector<std::vector<Rational>> m(size(), std::vector<Rational>(size()));
        for (Index i = 0; i < size(); ++i)
            for (Index j = 0; j < size(); ++j) m[i][j] = d(i, j);
        return m;
    }

    Rational min_positive_distance() const {
        Rational best = d(0, 1);
        for (Index i = 0; i < size(); ++i)
            for (Index j = i + 1; j < size(); ++j) best = std::min(best, d(i, j));
        return best;
    }

    Rational diameter() const {
        Rational best = 0;
        for (const auto& x : data_->dist) best = std::max(best, x);
        return best;
    }

    /// Unordered pairs {i, j}, i < j, with no third point k satisfying
    /// d(i,k) + d(k,j) = d(i,j). A function f satisfies |f(x) - f(y)| <= L d(x,y)
    /// for all pairs iff it does so on these pairs, so every Lipschitz constant
    /// and every Lipschitz constraint system can be restricted to them.
    const std::vector<PointPair>& essential_pairs() const {
        std::call_once(data_->essential_once, [this] { compute_essential(); });
        return data_->essential;
    }

    /// True when both objects share the same underlying table.
    bool same_as(const FiniteMetricSpace& other) const { return data_ == other.data_; }

    friend bool operator==(const FiniteMetricSpace& a, const FiniteMetricSpace& b) {
        return a.same_as(b) || (a.data_->names == b.data_->names && a.data_->base == b.data_->base && a.data_->dist == b.data_->dist);
    }

  private:
    struct Data {
        std::vector<std::string> names;
        Index base = 0;
        std::vector<Rational> dist;
        std::vector<double> dist_f;
        std::unordered_map<std::string, Index> index;
        mutable std::once_flag essential_once;
        mutable std::vector<PointPair> essential;
    };

    void compute_essential() const {
        const Index n = size();
        auto& out = data_->essential;
        auto scaled = detail::scale_to_integers(data_->dist);
        for (Index i = 0; i < n; ++i)
            for (Index j = i + 1; j < n; ++j) {
                bool between = false;
                for (Index k = 0; k < n && !between; ++k) {
                    if (k == i || k == j) continue;
                    if (scaled)
                        between = (*scaled)[i * n + k] + (*scaled)[k * n + j] == (*scaled)[i * n + j];
                    else
                        between = d(i, k) + d(k, j) == d(i, j);
                }
                if (!between) out.emplace_back(i, j);
            }
    }

    std::shared_ptr<const Data> data_;
};

inline ValidationReport validate(const FiniteMetricSpace& space) {
    return validate(space.names(), space.base(), space.matrix());
}

/// A set of distinct point indices of one space, kept sorted.
class PointSubset {
  public:
    PointSubset() = default;
    PointSubset(Index universe, std::vector<Index> members) : universe_(universe), mask_(universe, false) {
        for (Index m : members) {
            if (m >= universe) throw PreconditionError("subset index " + std::to_string(m) + " out of range");
            if (mask_[m]) throw PreconditionError("duplicate subset index " + std::to_string(m));
            mask_[m] = true;
        }
        std::sort(members.begin(), members.end());
        members_ = std::move(members);
    }

    static PointSubset empty(Index universe) { return PointSubset(universe, {}); }
    static PointSubset all(Index universe) {
        std::vector<Index> m(universe);
        for (Index i = 0; i < universe; ++i) m[i] = i;
        return PointSubset(universe, std::move(m));
    }
    static PointSubset of_names(const FiniteMetricSpace& space, const std::vector<std::string>& names) {
        std::vector<Index> m;
        m.reserve(names.size());
        for (const auto& nm : names) m.push_back(space.index_of(nm));
        return PointSubset(space.size(), std::move(m));
    }

    Index universe() const { return universe_; }
    bool contains(Index i) const { return i < universe_ && mask_[i]; }
    Index size() const { return members_.size(); }
    bool empty() const { return members_.empty(); }
    const std::vector<Index>& members() const { return members_; }
    auto begin() const { return members_.begin(); }
    auto end() const { return members_.end(); }

    PointSubset complement() const {
        std::vector<Index> m;
        for (Index i = 0; i < universe_; ++i)
            if (!mask_[i]) m.push_back(i);
        return PointSubset(universe_, std::move(m));
    }

    bool disjoint(const PointSubset& other) const {
        for (Index i : members_)
            if (other.contains(i)) return false;
        return true;
    }

    std::vector<std::string> names(const FiniteMetricSpace& space) const {
        std::vector<std::string> out;
        for (Index i : members_) out.push_back(space.name(i));
        return out;
    }

    friend bool operator==(const PointSubset& a, const PointSubset& b) {
        return a.universe_ == b.universe_ && a.members_ == b.members_;
    }

  private:
    Index universe_ = 0;
    std::vector<Index> members_;
    std::vector<bool> mask_;
};

/// Open ball {y : d(y,center) < r} or closed ball {y : d(y,center) <= r}.
inline PointSubset ball(const FiniteMetricSpace& space, Index center, const Rational& radius, bool closed = false) {
    if (radius < 0) throw PreconditionError("ball radius must be non-negative");
    std::vector<Index> m;
    for (Index y = 0; y < space.size(); ++y) {
        const Rational& dy = space.d(y, center);
        if (closed ? dy <= radius : dy < radius) m.push_back(y);
    }
    return PointSubset(space.size(), std::move(m));
}

/// The annulus B(p, r) \ B(p, s) of open balls.
inline PointSubset annulus(const FiniteMetricSpace& space, Index p, const Rational& r, const Rational& s) {
    std::vector<Index> m;
    for (Index y = 0; y < space.size(); ++y) {
        const Rational& dy = space.d(y, p);
        if (dy < r && !(dy < s)) m.push_back(y);
    }
    return PointSubset(space.size(), std::move(m));
}

/// Restriction of the metric to `keep`; the base point must be kept.
inline FiniteMetricSpace subspace(const FiniteMetricSpace& space, const PointSubset& keep) {
    if (!keep.contains(space.base())) throw PreconditionError("subspace must contain the base point");
    std::vector<std::string> names;
    std::vector<std::vector<Rational>> dist;
    Index base = 0;
    for (Index i : keep) {
        if (i == space.base()) base = names.size();
        names.push_back(space.name(i));
        std::vector<Rational> row;
        for (Index j : keep) row.push_back(space.d(i, j));
        dist.push_back(std::move(row));
    }
    return FiniteMetricSpace(std::move(names), base, dist);
}

}  // namespace lipschitz
