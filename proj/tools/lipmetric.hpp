#pragma once

// lipmetric command-line front end. run() parses the arguments, does the work
// and writes the report; main() only forwards to it, so tests can drive the
// whole tool in-process.

#include "lipschitz/io.hpp"
#include "lipschitz/lipschitz.hpp"

#include <CLI11.hpp>

#include <iostream>
#include <random>
#include <sstream>
#include <string>
#include <vector>

namespace lipmetric {

using namespace lipschitz;
using lipschitz::Json;

enum Exit { kPass = 0, kFail = 1, kUsage = 2 };

class UsageError : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

struct RunConfig {
    std::string command;
    std::string space, mode = "exact", format = "json", out;
    std::string eps, alpha, delta;
    std::uint64_t seed = 0;
    long long cap = static_cast<long long>(kDefaultPointCap);
    std::size_t max_violations = kDefaultViolationCap;

    // check
    std::string A, u, v, N, family, function, p, r, s;
    // diameter
    std::string F, molecule, slices;
    // reproduce / generate
    int K = 0, n = 0, dims = 0, level_cap = -1, random_functionals = 0;
    std::string kind, base = "first";

    Mode mode_value() const { return parse_mode(mode); }
    Index point_cap() const {
        if (cap <= 0) throw UsageError("--cap must be positive");
        return static_cast<Index>(cap);
    }
};

namespace detail {

inline Rational rational_arg(const std::string& text, const char* flag) {
    if (text.empty()) throw UsageError(std::string("missing ") + flag);
    return parse_rational(text);
}

inline Rational rational_arg(const std::string& text, const char* flag, const Rational& fallback) {
    return text.empty() ? fallback : rational_arg(text, flag);
}

inline FiniteMetricSpace require_space(const RunConfig& c) {
    if (c.space.empty()) throw UsageError("--space is required");
    return io::load_space(c.space);
}

inline Index point_arg(const FiniteMetricSpace& s, const std::string& name, const char* flag) {
    if (name.empty()) throw UsageError(std::string("missing ") + flag);
    return io::point_of(s, name);
}

inline std::vector<std::string> csv_names(const std::string& text) { return io::name_list(Json(text)); }

inline TrapezoidWitness witness_arg(const FiniteMetricSpace& s, const RunConfig& c, const Rational& eps) {
    Index u = point_arg(s, c.u, "--u"), v = point_arg(s, c.v, "--v");
    auto A = c.A.empty() ? PointSubset(s.size(), {std::min(u, v), std::max(u, v)}) : io::subset_from_names(s, csv_names(c.A));
    return {A, u, v, eps};
}

inline SliceSpec slice_arg(const FiniteMetricSpace& s, const Json& j) {
    FreeVector F = FreeVector::zero(s);
    if (j.contains("molecule")) {
        auto names = io::name_list(j["molecule"]);
        if (names.size() != 2) throw ParseError("\"molecule\" needs two point names");
        F = FreeVector::molecule(s, io::point_of(s, names[0]), io::point_of(s, names[1]));
    } else if (j.contains("weights")) {
        F = io::free_vector_from_json(j, s);
    } else {
        throw ParseError("slice needs \"molecule\" or \"weights\"");
    }
    if (!j.contains("alpha")) throw ParseError("slice is missing \"alpha\"");
    return SliceSpec::make(F, io::rational_from_json(j["alpha"]));
}

/// One slice from --F/--molecule and --alpha.
inline SliceSpec single_slice(const FiniteMetricSpace& s, const RunConfig& c) {
    Json j = Json::object();
    if (!c.molecule.empty()) j["molecule"] = c.molecule;
    else if (!c.F.empty()) j = io::read_json_file(c.F);
    else throw UsageError("give --F PATH or --molecule u,v");
    if (c.alpha.empty()) throw UsageError("missing --alpha");
    j["alpha"] = c.alpha;
    return slice_arg(s, j);
}

/// {"slices": [{"molecule"|"weights", "alpha", "lambda"?}]}
inline std::vector<SliceSpec> slices_arg(const FiniteMetricSpace& s, const RunConfig& c, std::vector<Rational>* lambdas) {
    if (c.slices.empty()) throw UsageError("--slices is required");
    Json j = io::read_json_file(c.slices);
    if (!j.contains("slices") || !j["slices"].is_array()) throw ParseError("slices file needs a \"slices\" array");
    std::vector<SliceSpec> out;
    for (const auto& e : j["slices"]) {
        out.push_back(slice_arg(s, e));
        if (lambdas) {
            if (!e.contains("lambda")) throw ParseError("combo slices need \"lambda\"");
            lambdas->push_back(io::rational_from_json(e["lambda"]));
        }
    }
    return out;
}

inline Json status_json(bool ok) { return ok ? "pass" : "fail"; }

/// A reproduction bundle: every claim carries its own status, the bundle
/// passes iff all claims do.
struct Bundle {
    Json claims = Json::array();
    Json exploratory = Json::array();
    Json first_failure;
    bool ok = true;

    void claim(const std::string& what, bool holds, Json details = Json::object()) {
        Json c{{"claim", what}, {"status", status_json(holds)}, {"details", std::move(details)}};
        if (!holds && ok) {
            ok = false;
            first_failure = c;
        }
        claims.push_back(std::move(c));
    }

    Json finish(const std::string& target, Json params) const {
        Json o{{"check", "reproduce_" + target}, {"parameters", std::move(params)}, {"status", status_json(ok)}, {"claims", claims}};
        if (!exploratory.empty()) o["exploratory"] = exploratory;
        if (!ok) o["first_failure"] = first_failure;
        return o;
    }
};

inline Json brief(const PropertyReport& r) {
    Json o{{"check", r.check}, {"status", to_string(r.status)}, {"violation_count", r.violation_count}};
    if (!r.violations.empty()) o["first_violation"] = io::violation_to_json(r.violations.front());
    return o;
}

inline bool index_below(const std::string& name, int K) { return std::stoi(name.substr(1)) < K; }

// ---- validate --------------------------------------------------------------

inline Json cmd_validate(const RunConfig& c) {
    if (c.space.empty()) throw UsageError("validate needs a space file");
    auto data = io::space_data_from_json(io::read_json_file(c.space));
    auto rep = validate(data.names, data.base, data.dist);
    Json o = io::validation_to_json(rep, data.names);
    o["points_count"] = data.names.size();
    return o;
}

// ---- check -----------------------------------------------------------------

inline Json cmd_check(const RunConfig& c, const std::string& kind) {
    auto s = require_space(c);
    const Mode mode = c.mode_value();
    const auto tol = kDefaultTolerances;
    const auto vcap = c.max_violations;
    if (kind == "ltp" || kind == "sltp") {
        Rational eps = rational_arg(c.eps, "--eps");
        const bool ltp = kind == "ltp";
        if (!c.N.empty()) {
            // N given: either a search over all pairs, or the witness (u, v) on N
            auto N = io::subset_from_names(s, csv_names(c.N));
            if (c.u.empty() && c.v.empty()) {
                auto r = ltp ? check_ltp_finite(s, N, eps, mode, tol, vcap) : check_sltp_finite(s, N, eps, mode, tol, vcap);
                return io::report_to_json(r);
            }
            Index u = point_arg(s, c.u, "--u"), v = point_arg(s, c.v, "--v");
            auto r = ltp ? check_ltp_on(s, N, u, v, eps, mode, tol, vcap) : check_sltp_on(s, N, u, v, eps, mode, tol, vcap);
            return io::report_to_json(r);
        }
        auto w = witness_arg(s, c, eps);
        auto r = ltp ? check_ltp_inequality(s, w, mode, tol, vcap) : check_sltp_inequality(s, w, mode, tol, vcap);
        return io::report_to_json(r);
    }
    if (kind == "family") {
        if (c.family.empty()) throw UsageError("--family is required");
        std::optional<Rational> eps;
        if (!c.eps.empty()) eps = parse_rational(c.eps);
        auto fam = io::family_from_json(io::read_json_file(c.family), s, eps);
        return io::report_to_json(check_family(s, fam, mode, tol, vcap));
    }
    if (kind == "balls-lemma") {
        BallInstance b{point_arg(s, c.p, "--p"), rational_arg(c.r, "--r"), rational_arg(c.s, "--s"), point_arg(s, c.u, "--u"),
                       point_arg(s, c.v, "--v")};
        return io::report_to_json(check_balls_lemma(s, b, rational_arg(c.eps, "--eps"), mode, tol, vcap));
    }
    if (kind == "local") {
        if (c.function.empty()) throw UsageError("--function is required");
        auto f = io::function_from_json(io::read_json_file(c.function), s);
        return io::report_to_json(check_local(f, rational_arg(c.eps, "--eps"), mode, tol));
    }
    throw UsageError("unknown check '" + kind + "'");
}

// ---- diameter --------------------------------------------------------------

inline Json cmd_diameter(const RunConfig& c, const std::string& kind) {
    auto s = require_space(c);
    const Mode mode = c.mode_value();
    Json o;
    if (kind == "slice") {
        auto sl = single_slice(s, c);
        o = io::diameter_to_json(slice_diameter(s, sl, mode), kind);
        o["alpha"] = to_string(sl.alpha);
    } else if (kind == "combo") {
        std::vector<Rational> lambdas;
        auto sls = slices_arg(s, c, &lambdas);
        o = io::diameter_to_json(combo_diameter(s, sls, lambdas, mode), kind);
    } else if (kind == "ssd2p") {
        auto sls = slices_arg(s, c, nullptr);
        o = io::diameter_to_json(ssd2p_witness_value(s, sls, mode), kind);
    } else if (kind == "daugavet") {
        if (c.function.empty()) throw UsageError("--function is required");
        auto f = io::function_from_json(io::read_json_file(c.function), s);
        o = io::diameter_to_json(daugavet_gap(s, f, single_slice(s, c), mode), kind);
    } else {
        throw UsageError("unknown diameter '" + kind + "'");
    }
    o["status"] = "ok";
    return o;
}

// ---- reproduce -------------------------------------------------------------

inline Json reproduce_ex_sltp(const RunConfig& c) {
    const int K = c.K ? c.K : 6;
    if (K < 3) throw UsageError("ex-sltp needs --K >= 3");
    const Rational eps = rational_arg(c.eps, "--eps", Rational(3, 10));
    auto s = gen_sltp_not_seq(K);
    Bundle b;
    b.claim("metric axioms", validate(s).passed(), {{"points", s.size()}});

    // SLTP witness (b_{K-1}, b_K) over the points of lower index
    Index u = s.index_of("b" + std::to_string(K - 1)), v = s.index_of("b" + std::to_string(K));
    std::vector<Index> low, below_K;
    for (Index i = 0; i < s.size(); ++i) {
        if (index_below(s.name(i), K - 1)) low.push_back(i);
        if (index_below(s.name(i), K)) below_K.push_back(i);
    }
    PointSubset N(s.size(), low);
    auto sltp = check_sltp_on(s, N, u, v, 0);
    auto ltp = check_ltp_on(s, N, u, v, 0);
    b.claim("SLTP inequality for (b_{K-1}, b_K) at eps 0", sltp.passed(), brief(sltp));
    b.claim("LTP inequality for (b_{K-1}, b_K) at eps 0", ltp.passed(), brief(ltp));

    // three disjoint pair witnesses among indices < K all fail the LTP at (a_K, c_K)
    WitnessFamily fam{eps, {}};
    for (int m = 0; m < 3; ++m) fam.members.push_back(pair_witness(s, below_K[2 * m], below_K[2 * m + 1], eps));
    auto top = std::vector<std::string>{"a" + std::to_string(K), "c" + std::to_string(K)};
    Json members = Json::array();
    bool all_fail = true;
    for (const auto& w : fam.members) {
        auto r = check_ltp_inequality(s, w, Mode::Exact, kDefaultTolerances, std::size_t(1) << 20);
        bool hit = !r.passed() && r.has_violation(top, "ltp");
        all_fail = all_fail && hit;
        members.push_back({{"u", s.name(w.u)}, {"v", s.name(w.v)}, {"violations", r.violation_count}, {"violated_at_top", hit}});
    }
    b.claim("LTP fails for 3 disjoint pair witnesses with violator (a_K, c_K)", all_fail,
            {{"epsilon", to_string(eps)}, {"members", members}});
    auto fr = check_family(s, fam);
    b.claim("family check fails", !fr.passed(), brief(fr));
    return b.finish("ex-sltp", {{"K", K}, {"epsilon", to_string(eps)}});
}

inline Json reproduce_ex_seqltp(const RunConfig& c) {
    const int K = c.K ? c.K : 6;
    if (K < 1) throw UsageError("ex-seqltp needs --K >= 1");
    const Rational delta = rational_arg(c.delta, "--delta", Rational(1, 4));
    auto s = gen_seqltp_not_sltp(K);
    Bundle b;
    b.claim("metric axioms", validate(s).passed(), {{"points", s.size()}});
    Json per = Json::array();
    bool all = true;
    for (int m = 1; m <= K; ++m) {
        auto w = pair_witness(s, "u" + std::to_string(m), "v" + std::to_string(m), 0);
        auto r = check_ltp_inequality(s, w);
        all = all && r.passed();
        per.push_back(brief(r));
    }
    b.claim("LTP inequality for ({u_m,v_m}, u_m, v_m) at eps 0, every m", all, {{"members", per}});

    // disjoint pairs: the family of all K pairs is pairwise disjoint by construction
    Index u = s.index_of("u1"), v = s.index_of("v1");
    PointSubset A(s.size(), {std::min(u, v), std::max(u, v)});
    auto sd = build_sd2p_witness(s, A, u, v, delta, {LipschitzFunction::zero(s)});
    b.claim("SD2P builder postconditions (h = 0)", sd.all_hold(),
            {{"gap", to_string(sd.gap.front())}, {"norm", to_string(sd.f_norm.front())}, {"delta", to_string(delta)}});
    try {
        auto t = build_ssd2p_witness(s, A, u, v, delta, {LipschitzFunction::zero(s)});
        b.exploratory.push_back({{"item", "SSD2P builder (h = 0)"}, {"holds", t.all_hold()}, {"g_norm", to_string(t.g_norm)}});
    } catch (const std::exception& e) {
        b.exploratory.push_back({{"item", "SSD2P builder (h = 0)"}, {"holds", false}, {"message", e.what()}});
    }
    return b.finish("ex-seqltp", {{"K", K}, {"delta", to_string(delta)}});
}

inline Json reproduce_ex_d2p(const RunConfig& c) {
    const int K = c.K ? c.K : 3;
    if (K < 1) throw UsageError("ex-d2p needs --K >= 1");
    const Rational eps = rational_arg(c.eps, "--eps", Rational(1, 4));
    const Rational delta = rational_arg(c.delta, "--delta", Rational(1, 10));
    auto s = gen_d2p_not_ltp(K);
    Bundle b;
    b.claim("metric axioms", validate(s).passed(), {{"points", s.size()}});

    // one h per branch of the selection rule
    std::map<std::string, Rational> vals{{"a2", Rational(3, 2)}, {"a3", Rational(3, 2)}};
    for (int m = 1; m <= K; ++m) {
        vals[d2p_point('u', 1, m)] = vals[d2p_point('v', 1, m)] = 1;
        for (int i = 2; i <= 3; ++i) vals[d2p_point('u', i, m)] = vals[d2p_point('v', i, m)] = Rational(3, 4);
    }
    std::vector<std::pair<std::string, LipschitzFunction>> hs{{"h = 0", LipschitzFunction::zero(s)},
                                                              {"middle value above L + 1", LipschitzFunction::from_named(s, vals)}};
    for (const auto& [label, h] : hs) {
        auto e = build_d2p_pair_example(s, delta, h);
        Json d{{"h", label},         {"k", e.k},
               {"m", e.m},           {"c", to_string(e.c)},
               {"u", s.name(e.u)},   {"v", s.name(e.v)},
               {"f_norm", to_string(e.f_norm)}, {"g_norm", to_string(e.g_norm)},
               {"f_gap", to_string(e.f(e.u) - e.f(e.v))}, {"g_gap", to_string(e.g(e.v) - e.g(e.u))}};
        b.claim("||f|| = ||g|| = 1 and f(u)-f(v) = g(v)-g(u) = 1 (" + label + ")", e.holds, d);
    }
    PointSubset N(s.size(), {s.index_of("a1"), s.index_of("a2"), s.index_of("a3")});
    auto r = check_ltp_finite(s, N, eps);
    b.claim("no LTP witness over N = {a1,a2,a3}", r.status == CheckStatus::Fail,
            {{"epsilon", to_string(eps)}, {"pairs_refuted", r.violation_count}});
    return b.finish("ex-d2p", {{"K", K}, {"epsilon", to_string(eps)}, {"delta", to_string(delta)}});
}

inline Json reproduce_kn(const RunConfig& c) {
    const int n = c.n ? c.n : 2;
    const int dims = c.dims ? c.dims : 6;
    if (n < 1 || dims < 2) throw UsageError("kn needs --n >= 1 and --dims >= 2");
    const Rational eps = rational_arg(c.eps, "--eps", Rational(0));
    std::optional<int> level;
    if (c.level_cap >= 0) level = c.level_cap;
    else if (dims > 4) level = 2;
    auto s = gen_kn(n, dims, level, c.point_cap());
    Bundle b;
    b.claim("metric axioms", validate(s).passed(), {{"points", s.size()}});
    const int count = dims / 2 < 3 ? dims / 2 : 3;
    auto fam = kn_family(s, n, count, eps);
    Json dists = Json::array();
    bool unit = true;
    for (const auto& w : fam.members) {
        unit = unit && s.d(w.u, w.v) == 1;
        dists.push_back({{"u", s.name(w.u)}, {"v", s.name(w.v)}, {"d", to_string(s.d(w.u, w.v))}});
    }
    b.claim("d(u_m, v_m) = 1", unit, {{"members", dists}});
    auto r = check_family(s, fam);
    Json parts = Json::array();
    for (const auto& p : r.parts) parts.push_back(brief(p));
    b.claim("coordinate-pair family passes", r.passed(), {{"status", to_string(r.status)}, {"parts", parts}});
    Json params{{"n", n}, {"dims", dims}, {"epsilon", to_string(eps)}};
    params["level_cap"] = level ? Json(*level) : Json(nullptr);
    return b.finish("kn", params);
}

inline Json reproduce_daugavet_prop(const RunConfig& c) {
    const int K = c.K ? c.K : 8;
    if (K < 2) throw UsageError("daugavet-prop needs --K >= 2");
    const Rational delta = rational_arg(c.delta, "--delta", Rational(1, 10));
    if (!(delta > 0 && delta < 1)) throw UsageError("--delta must lie in (0,1)");
    const Mode mode = c.mode_value();
    auto s = gen_family(FamilyKind::ShrinkingPairs, K);
    Bundle b;
    b.claim("metric axioms", validate(s).passed(), {{"points", s.size()}});

    // F lives on the first pair; the further functionals are random on pairs 1 and 2
    Index f1 = s.index_of("1"), f2 = s.index_of("3/2");
    std::vector<FreeVector> Fs{FreeVector::molecule(s, f1, f2)};
    std::vector<Index> supp{f1, f2};
    if (c.random_functionals > 0) {
        if (K < 3) throw UsageError("--random-functionals needs --K >= 3");
        std::mt19937_64 g(c.seed);
        std::vector<Index> pts{f1, f2, s.index_of("2"), s.index_of("9/4")};
        supp = pts;
        std::uniform_int_distribution<int> w(-6, 6);
        while (static_cast<int>(Fs.size()) < 1 + c.random_functionals) {
            std::map<std::string, Rational> weights;
            for (Index p : pts) weights[s.name(p)] = Rational(w(g), 3);
            auto F = FreeVector::from_named(s, weights);
            Rational nf = free_norm(F);
            if (nf == 0) continue;
            Fs.push_back(F.scaled(1 / nf));
        }
    }
    std::sort(supp.begin(), supp.end());
    DaugavetCaseSpec cs{DaugavetCase::DisjointBalls, {}, {}, {}, PointSubset(s.size(), supp)};
    const Rational bound = 2 - 7 * delta;
    Json pairs = Json::array();
    int tested = 0;
    bool all = true;
    for (int k = 1; k <= K; ++k) {
        Index u = s.index_of(std::to_string(k));
        Index v = s.index_of(to_string(Rational(k) + Rational(mpz_class(1), mpz_class(mpz_class(1) << k))));
        for (std::size_t fi = 0; fi < Fs.size(); ++fi) {
            Json e{{"u", s.name(u)}, {"v", s.name(v)}, {"functional", fi}};
            try {
                auto ch = daugavet_estimate_chain(Fs[fi], u, v, delta, cs, mode);
                bool ok = ch.build.all_hold() && ch.masses_small && ch.F_bound && ch.molecule_bound;
                all = all && ok;
                ++tested;
                e["status"] = status_json(ok);
                e["F_of_f"] = to_string(ch.F_of_f);
                e["molecule_norm"] = to_string(ch.molecule_norm);
                e["molecule_norm_float"] = to_double(ch.molecule_norm);
                e["gamma"] = {to_string(ch.gamma_first), to_string(ch.gamma_second)};
            } catch (const PreconditionError& ex) {
                // the ball around this pair meets the support of F
                e["status"] = "skipped";
                e["message"] = ex.what();
            }
            pairs.push_back(std::move(e));
        }
    }
    b.claim("at least one pair admits the construction", tested > 0, {{"tested", tested}});
    b.claim("F(f) > 1 - 6 delta and ||F + m_{u,v}|| > 2 - 7 delta on every tested pair", all,
            {{"bound", to_string(bound)}, {"pairs", pairs}});
    return b.finish("daugavet-prop", {{"K", K}, {"delta", to_string(delta)}, {"functionals", Fs.size()}});
}

inline Json cmd_reproduce(const RunConfig& c, const std::string& target) {
    if (target == "ex-sltp") return reproduce_ex_sltp(c);
    if (target == "ex-seqltp") return reproduce_ex_seqltp(c);
    if (target == "ex-d2p") return reproduce_ex_d2p(c);
    if (target == "kn") return reproduce_kn(c);
    if (target == "daugavet-prop") return reproduce_daugavet_prop(c);
    throw UsageError("unknown target '" + target + "'");
}

// ---- generate --------------------------------------------------------------

inline Json cmd_generate(const RunConfig& c) {
    BaseChoice base;
    if (c.base == "first") base = BaseChoice::FirstPoint;
    else if (c.base == "fresh") base = BaseChoice::FreshBase;
    else throw UsageError("--base must be first or fresh");
    const int K = c.K ? c.K : 4;
    FiniteMetricSpace s = [&] {
        if (c.kind == "kn") {
            std::optional<int> level;
            if (c.level_cap >= 0) level = c.level_cap;
            return gen_kn(c.n ? c.n : 1, c.dims ? c.dims : 2, level, c.point_cap());
        }
        if (c.kind == "sltp-not-seq") return gen_sltp_not_seq(K, base);
        if (c.kind == "seqltp-not-sltp") return gen_seqltp_not_sltp(K, base);
        if (c.kind == "d2p-not-ltp") return gen_d2p_not_ltp(K, base);
        if (c.kind.empty()) throw UsageError("--kind is required");
        return gen_family(parse_family_kind(c.kind), K);
    }();
    if (s.size() > c.point_cap()) throw CapExceeded("space has " + std::to_string(s.size()) + " points, above --cap");
    return io::space_to_json(s);
}

// ---- output ----------------------------------------------------------------

inline std::string scalar_text(const Json& j) {
    if (j.is_string()) return j.get<std::string>();
    if (j.is_null()) return "";
    return j.dump();
}

inline void flatten(const Json& j, const std::string& prefix, std::vector<std::pair<std::string, std::string>>& out) {
    for (const auto& [k, v] : j.items()) {
        std::string key = prefix.empty() ? k : prefix + "." + k;
        if (v.is_object()) flatten(v, key, out);
        else if (!v.is_array()) out.emplace_back(key, scalar_text(v));
    }
}

inline std::string csv_field(const std::string& s) {
    if (s.find_first_of(",\"\n") == std::string::npos) return s;
    std::string q = "\"";
    for (char ch : s) q += ch == '"' ? std::string("\"\"") : std::string(1, ch);
    return q + "\"";
}

inline void text_lines(const Json& j, int depth, std::ostream& os) {
    const std::string pad(2 * depth, ' ');
    for (const auto& [k, v] : j.items()) {
        if (v.is_object()) {
            os << pad << k << ":\n";
            text_lines(v, depth + 1, os);
        } else if (v.is_array()) {
            bool flat = std::all_of(v.begin(), v.end(), [](const Json& x) { return x.is_primitive(); });
            if (flat) {
                os << pad << k << ": ";
                for (std::size_t i = 0; i < v.size(); ++i) os << (i ? ", " : "") << scalar_text(v[i]);
                os << "\n";
                continue;
            }
            os << pad << k << ":\n";
            for (const auto& x : v) {
                os << pad << "  -\n";
                if (x.is_object()) text_lines(x, depth + 2, os);
                else os << pad << "    " << scalar_text(x) << "\n";
            }
        } else {
            os << pad << k << ": " << scalar_text(v) << "\n";
        }
    }
}

inline std::string render(const Json& report, const std::string& format) {
    if (format == "json") return report.dump(2) + "\n";
    std::ostringstream os;
    if (format == "csv") {
        std::vector<std::pair<std::string, std::string>> cells;
        flatten(report, "", cells);
        for (std::size_t i = 0; i < cells.size(); ++i) os << (i ? "," : "") << csv_field(cells[i].first);
        os << "\n";
        for (std::size_t i = 0; i < cells.size(); ++i) os << (i ? "," : "") << csv_field(cells[i].second);
        os << "\n";
        return os.str();
    }
    text_lines(report, 0, os);
    return os.str();
}

inline int exit_for(const Json& report) {
    if (!report.contains("status")) return kPass;
    const auto st = report["status"].get<std::string>();
    return st == "pass" || st == "ok" ? kPass : kFail;
}

}  // namespace detail

inline int dispatch(const RunConfig& c, std::ostream& out) {
    Json body;
    const auto sp = c.command.find(' ');
    const std::string head = c.command.substr(0, sp), sub = sp == std::string::npos ? "" : c.command.substr(sp + 1);
    if (head == "validate") body = detail::cmd_validate(c);
    else if (head == "check") body = detail::cmd_check(c, sub);
    else if (head == "diameter") body = detail::cmd_diameter(c, sub);
    else if (head == "reproduce") body = detail::cmd_reproduce(c, sub);
    else if (head == "generate") body = detail::cmd_generate(c);
    else throw UsageError("no command given");

    Json report;
    if (head == "generate") {
        // a generated space is written as plain space JSON so it can be fed back in
        report = body;
    } else {
        report = Json{{"schema_version", kReportSchemaVersion}, {"command", c.command}, {"seed", c.seed}, {"mode", c.mode}};
        for (const auto& [k, v] : body.items()) report[k] = v;
    }
    const std::string text = detail::render(report, head == "generate" ? "json" : c.format);
    if (c.out.empty()) out << text;
    else io::write_atomically(c.out, text);
    return detail::exit_for(report);
}

inline int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    RunConfig c;
    CLI::App app{"Trapezoid properties, free-space norms and slice diameters on finite metric spaces", "lipmetric"};
    app.fallthrough();
    app.require_subcommand(1);
    app.add_option("--mode", c.mode, "float or exact")->check(CLI::IsMember({"float", "exact"}));
    app.add_option("--format", c.format, "json, csv or text")->check(CLI::IsMember({"json", "csv", "text"}));
    app.add_option("--seed", c.seed, "seed for randomized parts");
    app.add_option("--cap", c.cap, "point cap for generated spaces");
    app.add_option("--max-violations", c.max_violations, "violations listed per report");
    app.add_option("--out", c.out, "write the report here (atomically) instead of stdout");

    auto* validate_cmd = app.add_subcommand("validate", "check the metric axioms of a space file");
    validate_cmd->add_option("path", c.space, "space file");
    validate_cmd->add_option("--space", c.space, "space file");

    auto with_space = [&](CLI::App* a) { a->add_option("--space", c.space, "space file")->required(); };

    auto* check = app.add_subcommand("check", "trapezoid-type inequalities and related checks");
    check->require_subcommand(1);
    for (const char* k : {"ltp", "sltp"}) {
        auto* a = check->add_subcommand(k, std::string(k) + " inequality for a witness, on a set, or a search over a set");
        with_space(a);
        a->add_option("--A", c.A, "witness set (comma separated; default {u,v})");
        a->add_option("--u", c.u);
        a->add_option("--v", c.v);
        a->add_option("--N", c.N, "points to test against; without --u/--v all pairs are searched");
        a->add_option("--eps", c.eps)->required();
    }
    auto* fam = check->add_subcommand("family", "disjoint witness family");
    with_space(fam);
    fam->add_option("--family", c.family, "family file")->required();
    fam->add_option("--eps", c.eps, "overrides the file's epsilon");
    auto* balls = check->add_subcommand("balls-lemma", "hypotheses and conclusions for B(p,r) \\ B(p,s)");
    with_space(balls);
    for (auto [flag, dst] : std::vector<std::pair<const char*, std::string*>>{{"--p", &c.p}, {"--r", &c.r}, {"--s", &c.s},
                                                                               {"--u", &c.u}, {"--v", &c.v}, {"--eps", &c.eps}})
        balls->add_option(flag, *dst)->required();
    auto* local = check->add_subcommand("local", "local-function test at scale eps");
    with_space(local);
    local->add_option("--function", c.function, "function file")->required();
    local->add_option("--eps", c.eps)->required();

    auto* diam = app.add_subcommand("diameter", "slice diameters by linear programming");
    diam->require_subcommand(1);
    for (const char* k : {"slice", "daugavet"}) {
        auto* a = diam->add_subcommand(k);
        with_space(a);
        a->add_option("--F", c.F, "free vector file");
        a->add_option("--molecule", c.molecule, "u,v");
        a->add_option("--alpha", c.alpha)->required();
        if (std::string(k) == "daugavet") a->add_option("--function", c.function, "norm-one function file")->required();
    }
    for (const char* k : {"combo", "ssd2p"}) {
        auto* a = diam->add_subcommand(k);
        with_space(a);
        a->add_option("--slices", c.slices, "slices file")->required();
    }

    auto* rep = app.add_subcommand("reproduce", "rerun a construction end to end");
    rep->require_subcommand(1);
    for (const char* k : {"ex-sltp", "ex-seqltp", "ex-d2p", "kn", "daugavet-prop"}) {
        auto* a = rep->add_subcommand(k);
        a->add_option("--K", c.K);
        a->add_option("--n", c.n);
        a->add_option("--dims", c.dims);
        a->add_option("--level-cap", c.level_cap);
        a->add_option("--eps", c.eps);
        a->add_option("--alpha", c.alpha);
        a->add_option("--delta", c.delta);
        a->add_option("--random-functionals", c.random_functionals);
    }

    auto* gen = app.add_subcommand("generate", "write a generated space as JSON");
    gen->add_option("--kind", c.kind, "kn, sltp-not-seq, seqltp-not-sltp, d2p-not-ltp, unbounded, limit-point, shrinking-pairs, daugavet-remark")
        ->required();
    gen->add_option("--K", c.K);
    gen->add_option("--n", c.n);
    gen->add_option("--dims", c.dims);
    gen->add_option("--level-cap", c.level_cap);
    gen->add_option("--base", c.base, "first or fresh");

    std::vector<const char*> argv{"lipmetric"};
    for (const auto& a : args) argv.push_back(a.c_str());
    try {
        app.parse(static_cast<int>(argv.size()), argv.data());
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e, out, err);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e, out, err);
    } catch (const CLI::ParseError& e) {
        app.exit(e, err, err);
        return kUsage;
    }

    // the command path, e.g. "check ltp"
    for (const CLI::App* a = &app; !a->get_subcommands().empty();) {
        a = a->get_subcommands().front();
        c.command += (c.command.empty() ? "" : " ") + a->get_name();
    }
    try {
        return dispatch(c, out);
    } catch (const MetricError& e) {
        err << "lipmetric: invalid space: " << e.what() << "\n";
        return kUsage;
    } catch (const UsageError& e) {
        err << "lipmetric: " << e.what() << "\n";
        return kUsage;
    } catch (const ParseError& e) {
        err << "lipmetric: " << e.what() << "\n";
        return kUsage;
    } catch (const PreconditionError& e) {
        err << "lipmetric: " << e.what() << "\n";
        return kUsage;
    } catch (const CapExceeded& e) {
        err << "lipmetric: " << e.what() << "\n";
        return kUsage;
    } catch (const WitnessBuildError& e) {
        err << "lipmetric: construction failed: " << e.what() << "\n";
        return kFail;
    } catch (const std::exception& e) {
        err << "lipmetric: " << e.what() << "\n";
        return kUsage;
    }
}

}  // namespace lipmetric
