#pragma once

#include <gmpxx.h>

#include <cctype>
#include <stdexcept>
#include <string>
#include <string_view>

namespace lipschitz {

using Rational = mpq_class;

/// Arithmetic regime used by LP-backed computations.
enum class Mode { Float, Exact };

/// Global tolerance regime for float mode. Exact mode ignores both values.
struct Tolerances {
    double feas_tol = 1e-9;
    double gap_tol = 1e-7;
};

inline constexpr Tolerances kDefaultTolerances{};

class ParseError : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

inline const char* to_string(Mode m) { return m == Mode::Exact ? "exact" : "float"; }

inline Mode parse_mode(std::string_view s) {
    if (s == "exact" || s == "exact_rational" || s == "rational") return Mode::Exact;
    if (s == "float") return Mode::Float;
    throw ParseError("unknown mode '" + std::string(s) + "' (expected float|exact)");
}

/// Parses "p/q", integers and decimals (optionally with an exponent) exactly.
inline Rational parse_rational(std::string_view text) {
    std::string s(text);
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.pop_back();
    std::size_t start = 0;
    while (start < s.size() && std::isspace(static_cast<unsigned char>(s[start]))) ++start;
    s = s.substr(start);
    if (s.empty()) throw ParseError("empty rational");

    auto is_int = [](std::string_view t) {
        std::size_t i = (!t.empty() && (t[0] == '-' || t[0] == '+')) ? 1 : 0;
        if (i >= t.size()) return false;
        for (; i < t.size(); ++i)
            if (!std::isdigit(static_cast<unsigned char>(t[i]))) return false;
        return true;
    };
    auto to_mpz = [](std::string t) {
        if (!t.empty() && t[0] == '+') t.erase(0, 1);
        return mpz_class(t, 10);
    };

    if (auto slash = s.find('/'); slash != std::string::npos) {
        std::string num = s.substr(0, slash), den = s.substr(slash + 1);
        if (!is_int(num) || !is_int(den)) throw ParseError("malformed rational '" + s + "'");
        mpz_class d = to_mpz(den);
        if (d == 0) throw ParseError("zero denominator in '" + s + "'");
        Rational r(to_mpz(num), d);
        r.canonicalize();
        return r;
    }

    std::string mantissa = s;
    long exponent = 0;
    if (auto e = s.find_first_of("eE"); e != std::string::npos) {
        std::string ex = s.substr(e + 1);
        if (!is_int(ex)) throw ParseError("malformed exponent in '" + s + "'");
        exponent = std::stol(ex);
        mantissa = s.substr(0, e);
    }
    bool negative = false;
    if (!mantissa.empty() && (mantissa[0] == '-' || mantissa[0] == '+')) {
        negative = mantissa[0] == '-';
        mantissa.erase(0, 1);
    }
    std::string digits;
    long frac_digits = 0;
    bool seen_point = false;
    for (char c : mantissa) {
        if (c == '.') {
            if (seen_point) throw ParseError("malformed decimal '" + s + "'");
            seen_point = true;
        } else if (std::isdigit(static_cast<unsigned char>(c))) {
            digits.push_back(c);
            if (seen_point) ++frac_digits;
        } else {
            throw ParseError("malformed number '" + s + "'");
        }
    }
    if (digits.empty()) throw ParseError("malformed number '" + s + "'");
    mpz_class num(digits, 10);
    long shift = exponent - frac_digits;
    mpz_class scale;
    mpz_ui_pow_ui(scale.get_mpz_t(), 10, static_cast<unsigned long>(shift < 0 ? -shift : shift));
    Rational r = shift >= 0 ? Rational(num * scale) : Rational(num, scale);
    r.canonicalize();
    return negative ? Rational(-r) : r;
}

inline std::string to_string(const Rational& r) { return r.get_str(); }

inline double to_double(const Rational& r) { return r.get_d(); }

/// Exact rational value of a double (every finite double is a dyadic rational).
inline Rational from_double(double x) { return Rational(x); }

inline Rational abs(const Rational& r) { return r < 0 ? Rational(-r) : r; }

inline Rational floor_rational(const Rational& r) {
    mpz_class q;
    mpz_fdiv_q(q.get_mpz_t(), r.get_num_mpz_t(), r.get_den_mpz_t());
    return Rational(q);
}

/// a <= b, with slack feas_tol in float mode.
inline bool leq(const Rational& a, const Rational& b, Mode mode, const Tolerances& tol = kDefaultTolerances) {
    if (mode == Mode::Exact) return a <= b;
    return to_double(a) <= to_double(b) + tol.feas_tol;
}

/// a < b, requiring a margin of feas_tol in float mode.
inline bool less(const Rational& a, const Rational& b, Mode mode, const Tolerances& tol = kDefaultTolerances) {
    if (mode == Mode::Exact) return a < b;
    return to_double(a) + tol.feas_tol < to_double(b);
}

}  // namespace lipschitz
