#pragma once

#include <gmpxx.h>

#include <cmath>
#include <cstdlib>
#include <string>
#include <type_traits>

#include "visnf/errors.hpp"

namespace visnf {

// Exact coefficient type.  All decision points (pivot choices, contact
// order, ranks) are exact in this mode, so results are reproducible
// bit-for-bit across platforms.
using Rational = mpq_class;

// Relative zero threshold for double mode.  A coefficient c of a jet J
// is treated as zero when |c| <= threshold * max(1, largest |coeff| of J).
inline constexpr double float_zero_threshold = 1e-9;

template <class S>
struct scalar_traits;

template <>
struct scalar_traits<Rational> {
    static constexpr bool exact = true;
    static Rational zero() { return Rational(0); }
    static Rational one() { return Rational(1); }
    static Rational from_int(long n) { return Rational(n); }
    static Rational from_fraction(long num, long den) {
        Rational r(num, den);
        r.canonicalize();
        return r;
    }
    static bool is_zero(const Rational& c) { return sgn(c) == 0; }
    static Rational abs(const Rational& c) { return ::abs(c); }
    static double to_double(const Rational& c) { return c.get_d(); }
    static std::string to_string(const Rational& c) { return c.get_str(); }
};

template <>
struct scalar_traits<double> {
    static constexpr bool exact = false;
    static double zero() { return 0.0; }
    static double one() { return 1.0; }
    static double from_int(long n) { return static_cast<double>(n); }
    static double from_fraction(long num, long den) {
        return static_cast<double>(num) / static_cast<double>(den);
    }
    static bool is_zero(double c) { return c == 0.0; }
    static double abs(double c) { return std::fabs(c); }
    static double to_double(double c) { return c; }
    static std::string to_string(double c) { return std::to_string(c); }
};

template <class S>
inline constexpr bool is_exact_v = scalar_traits<S>::exact;

// Parses "p" or "p/q" with optional sign, q > 0 after canonicalization.
inline Rational parse_rational(const std::string& text) {
    if (text.empty())
        throw input_error("empty rational literal");
    std::size_t slash = text.find('/');
    const std::string num = slash == std::string::npos ? text : text.substr(0, slash);
    const std::string den = slash == std::string::npos ? "1" : text.substr(slash + 1);
    auto digits_ok = [](const std::string& s, bool allow_sign) {
        if (s.empty())
            return false;
        std::size_t i = 0;
        if (allow_sign && (s[0] == '-' || s[0] == '+'))
            i = 1;
        if (i == s.size())
            return false;
        for (; i < s.size(); ++i)
            if (s[i] < '0' || s[i] > '9')
                return false;
        return true;
    };
    if (!digits_ok(num, true) || !digits_ok(den, false))
        throw input_error("malformed rational literal '" + text + "'");
    mpz_class n(num), d(den);
    if (sgn(d) == 0)
        throw input_error("zero denominator in rational literal '" + text + "'");
    Rational r(n, d);
    r.canonicalize();
    return r;
}

template <class To, class From>
To scalar_cast(const From& c) {
    if constexpr (std::is_same_v<To, From>)
        return c;
    else if constexpr (std::is_same_v<To, double>)
        return scalar_traits<From>::to_double(c);
    else
        static_assert(std::is_same_v<To, From> || std::is_same_v<To, double>,
                      "only exact-to-double conversion is supported");
}

}  // namespace visnf
