#pragma once

// JSON reading and writing for spaces, functions, free vectors, witness
// families and reports. Rationals travel as strings ("3/4", "0.25").

#include "lipschitz/geometry.hpp"
#include "lipschitz/properties.hpp"

#include <json.hpp>

#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

namespace lipschitz {

using Json = nlohmann::ordered_json;

inline constexpr int kReportSchemaVersion = 1;

namespace io {

inline Rational rational_from_json(const Json& j) {
    if (j.is_string()) return parse_rational(j.get<std::string>());
    if (j.is_number_integer()) return Rational(mpz_class(j.dump()));
    // decimals are read from their literal text, not the rounded double
    if (j.is_number()) return parse_rational(j.dump());
    throw ParseError("expected a rational (string or number), got " + j.dump());
}

inline Json to_json(const Rational& r) { return to_string(r); }

inline Json read_json_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ParseError("cannot open '" + path + "'");
    try {
        return Json::parse(in);
    } catch (const nlohmann::json::parse_error& e) {
        throw ParseError("malformed JSON in '" + path + "': " + e.what());
    }
}

inline Json parse_json_text(const std::string& text) {
    try {
        return Json::parse(text);
    } catch (const nlohmann::json::parse_error& e) {
        throw ParseError(std::string("malformed JSON: ") + e.what());
    }
}

struct SpaceData {
    std::vector<std::string> names;
    Index base = 0;
    std::vector<std::vector<Rational>> dist;
};

/// Structural parse only; axioms are checked by the caller or by space_from_json.
inline SpaceData space_data_from_json(const Json& j) {
    if (!j.is_object()) throw ParseError("space must be a JSON object");
    for (const char* key : {"points", "base", "dist"})
        if (!j.contains(key)) throw ParseError(std::string("space is missing \"") + key + "\"");
    SpaceData s;
    if (!j["points"].is_array()) throw ParseError("\"points\" must be an array");
    for (const auto& p : j["points"]) {
        if (!p.is_string()) throw ParseError("point names must be strings");
        s.names.push_back(p.get<std::string>());
    }
    const auto& b = j["base"];
    if (b.is_number_unsigned() || (b.is_number_integer() && b.get<long long>() >= 0)) {
        s.base = b.get<Index>();
    } else if (b.is_string()) {
        auto it = std::find(s.names.begin(), s.names.end(), b.get<std::string>());
        if (it == s.names.end()) throw ParseError("base '" + b.get<std::string>() + "' is not a point");
        s.base = static_cast<Index>(it - s.names.begin());
    } else {
        throw ParseError("\"base\" must be a point index or name");
    }
    if (!j["dist"].is_array()) throw ParseError("\"dist\" must be an array of rows");
    for (const auto& row : j["dist"]) {
        if (!row.is_array()) throw ParseError("\"dist\" rows must be arrays");
        std::vector<Rational> r;
        for (const auto& x : row) r.push_back(rational_from_json(x));
        s.dist.push_back(std::move(r));
    }
    return s;
}

inline FiniteMetricSpace space_from_json(const Json& j) {
    auto s = space_data_from_json(j);
    return FiniteMetricSpace(s.names, s.base, s.dist);
}

inline FiniteMetricSpace load_space(const std::string& path) { return space_from_json(read_json_file(path)); }

inline Json space_to_json(const FiniteMetricSpace& space) {
    Json dist = Json::array();
    for (Index i = 0; i < space.size(); ++i) {
        Json row = Json::array();
        for (Index j = 0; j < space.size(); ++j) row.push_back(to_string(space.d(i, j)));
        dist.push_back(row);
    }
    return {{"points", space.names()}, {"base", space.base()}, {"dist", dist}};
}

inline Json validation_to_json(const ValidationReport& r, const std::vector<std::string>& names = {}) {
    const char* kind = r.kind == ValidationReport::Kind::Pass ? "pass"
                       : r.kind == ValidationReport::Kind::StructuralError ? "structural_error"
                                                                            : "axiom_violation";
    Json pts = Json::array();
    for (Index p : r.points) pts.push_back(p < names.size() ? Json(names[p]) : Json(p));
    return {{"check", "validate"}, {"status", kind}, {"axiom", r.axiom}, {"points", pts}, {"message", r.message}};
}

inline std::map<std::string, Rational> named_values(const Json& j, const char* what) {
    if (!j.is_object()) throw ParseError(std::string(what) + " must be an object of point -> rational");
    std::map<std::string, Rational> out;
    for (const auto& [k, v] : j.items()) out[k] = rational_from_json(v);
    return out;
}

/// {"values": {...}} with an optional inline "space" object (ignored when a
/// string, which only names the space).
inline LipschitzFunction function_from_json(const Json& j, const FiniteMetricSpace& space) {
    if (!j.contains("values")) throw ParseError("function is missing \"values\"");
    auto vals = named_values(j["values"], "\"values\"");
    for (const auto& [k, v] : vals)
        if (!space.find(k)) throw ParseError("function names unknown point '" + k + "'");
    return LipschitzFunction::from_named(space, vals);
}

inline FreeVector free_vector_from_json(const Json& j, const FiniteMetricSpace& space) {
    if (!j.contains("weights")) throw ParseError("free vector is missing \"weights\"");
    auto w = named_values(j["weights"], "\"weights\"");
    for (const auto& [k, v] : w)
        if (!space.find(k)) throw ParseError("free vector names unknown point '" + k + "'");
    return FreeVector::from_named(space, w);
}

inline Json function_to_json(const LipschitzFunction& f) {
    Json vals = Json::object();
    for (Index i = 0; i < f.space().size(); ++i) vals[f.space().name(i)] = to_string(f(i));
    return {{"values", vals}};
}

inline Json free_vector_to_json(const FreeVector& F) {
    Json w = Json::object();
    for (Index i = 0; i < F.space().size(); ++i)
        if (F(i) != 0) w[F.space().name(i)] = to_string(F(i));
    return {{"weights", w}};
}

inline std::vector<std::string> name_list(const Json& j) {
    if (j.is_string()) {
        std::vector<std::string> out;
        std::stringstream ss(j.get<std::string>());
        std::string tok;
        while (std::getline(ss, tok, ','))
            if (!tok.empty()) out.push_back(tok);
        return out;
    }
    if (!j.is_array()) throw ParseError("expected a list of point names");
    std::vector<std::string> out;
    for (const auto& x : j) out.push_back(x.get<std::string>());
    return out;
}

inline Index point_of(const FiniteMetricSpace& space, const std::string& name) {
    auto i = space.find(name);
    if (!i) throw ParseError("unknown point '" + name + "'");
    return *i;
}

inline PointSubset subset_from_names(const FiniteMetricSpace& space, const std::vector<std::string>& names) {
    std::vector<Index> m;
    for (const auto& n : names) m.push_back(point_of(space, n));
    std::sort(m.begin(), m.end());
    if (std::adjacent_find(m.begin(), m.end()) != m.end()) throw ParseError("duplicate point in subset");
    return PointSubset(space.size(), m);
}

/// {"epsilon": optional, "members": [{"A": [...], "u": "...", "v": "..."}]}.
inline WitnessFamily family_from_json(const Json& j, const FiniteMetricSpace& space, std::optional<Rational> eps) {
    if (!j.is_object() || !j.contains("members") || !j["members"].is_array()) throw ParseError("family needs a \"members\" array");
    WitnessFamily fam;
    if (eps) fam.epsilon = *eps;
    else if (j.contains("epsilon")) fam.epsilon = rational_from_json(j["epsilon"]);
    else throw ParseError("family epsilon missing (use --eps or an \"epsilon\" field)");
    for (const auto& m : j["members"]) {
        for (const char* key : {"A", "u", "v"})
            if (!m.contains(key)) throw ParseError(std::string("family member is missing \"") + key + "\"");
        fam.members.push_back({subset_from_names(space, name_list(m["A"])), point_of(space, m["u"].get<std::string>()),
                               point_of(space, m["v"].get<std::string>()), fam.epsilon});
    }
    return fam;
}

inline Json tolerances_to_json(const Tolerances& t) { return {{"feas_tol", t.feas_tol}, {"gap_tol", t.gap_tol}}; }

inline Json key_values(const KeyValues& kv) {
    Json o = Json::object();
    for (const auto& [k, v] : kv) o[k] = v;
    return o;
}

inline Json violation_to_json(const Violation& v) {
    Json o{{"inequality", v.inequality}, {"points", v.names}, {"lhs", to_string(v.lhs)}, {"rhs", to_string(v.rhs)}};
    if (v.member >= 0) o["member"] = v.member;
    return o;
}

inline Json report_to_json(const PropertyReport& r) {
    Json viol = Json::array();
    for (const auto& v : r.violations) viol.push_back(violation_to_json(v));
    Json o{{"check", r.check},
           {"parameters", key_values(r.parameters)},
           {"status", to_string(r.status)},
           {"violations", viol},
           {"violation_count", r.violation_count},
           {"witness", key_values(r.witness)},
           {"mode", to_string(r.mode)},
           {"tolerances", tolerances_to_json(r.tolerances)}};
    if (!r.message.empty()) o["message"] = r.message;
    if (!r.parts.empty()) {
        Json parts = Json::array();
        for (const auto& p : r.parts) parts.push_back(report_to_json(p));
        o["parts"] = parts;
    }
    return o;
}

inline Json diameter_to_json(const DiameterResult& r, const std::string& kind) {
    const auto& space = r.functions.front().space();
    Json fns = Json::object();
    for (std::size_t i = 0; i < r.functions.size(); ++i) fns[r.labels[i]] = function_to_json(r.functions[i])["values"];
    return {{"check", "diameter_" + kind},
            {"value", to_string(r.value)},
            {"value_float", to_double(r.value)},
            {"pair", {space.name(r.pair.first), space.name(r.pair.second)}},
            {"functions", fns},
            {"lp_count", r.lp_count},
            {"slices", "closed"},
            {"mode", to_string(r.mode)},
            {"tolerances", tolerances_to_json(r.tolerances)}};
}

/// Writes through a temporary file in the same directory and renames it into
/// place, so readers never see a partial file.
inline void write_atomically(const std::string& path, const std::string& content) {
    namespace fs = std::filesystem;
    fs::path target(path);
    fs::path tmp = target;
    tmp += ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) throw ParseError("cannot write '" + tmp.string() + "'");
        out << content;
        out.flush();
        if (!out) throw ParseError("write to '" + tmp.string() + "' failed");
    }
    fs::rename(tmp, target);
}

}  // namespace io
}  // namespace lipschitz
