#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>

#include <gmpxx.h>

namespace waistcert {

// Exact arbitrary-precision arithmetic, backed by GMP. mpq_class keeps
// every value canonical (lowest terms, positive denominator), which is
// exactly the invariant we need; everything here is a thin layer of
// helpers on top.
using Integer = mpz_class;
using Rational = mpq_class;

inline Rational rat(long num, long den = 1) {
    if (den == 0) throw std::domain_error("rational with zero denominator");
    Rational q(num, den);
    q.canonicalize();
    return q;
}

inline int sign(const Rational& q) { return sgn(q); }

inline Rational rat_abs(const Rational& q) { return abs(q); }

inline Rational rat_pow(const Rational& base, unsigned exp) {
    Rational r(1);
    Rational b = base;
    unsigned e = exp;
    while (e) {
        if (e & 1u) r *= b;
        b *= b;
        e >>= 1;
    }
    return r;
}

// Parses "p", "-p" or "p/q". GMP accepts "p/q" directly but does not
// canonicalize, and silently misreads garbage, so validate first.
inline Rational rat_from_string(const std::string& s) {
    if (s.empty()) throw std::invalid_argument("empty rational literal");
    std::size_t i = (s[0] == '-' || s[0] == '+') ? 1 : 0;
    bool seen_digit = false, seen_slash = false;
    for (; i < s.size(); ++i) {
        if (s[i] == '/') {
            if (seen_slash || !seen_digit) throw std::invalid_argument("bad rational literal: " + s);
            seen_slash = true;
            seen_digit = false;
        } else if (s[i] >= '0' && s[i] <= '9') {
            seen_digit = true;
        } else {
            throw std::invalid_argument("bad rational literal: " + s);
        }
    }
    if (!seen_digit) throw std::invalid_argument("bad rational literal: " + s);
    Rational q(s);
    if (q.get_den() == 0) throw std::domain_error("rational with zero denominator: " + s);
    q.canonicalize();
    return q;
}

inline std::string to_string(const Rational& q) {
    return q.get_str();
}

// Round-to-zero double approximation with error < 1 ulp; the interval
// layer widens it outward before trusting it.
inline double rat_to_double(const Rational& q) {
    return q.get_d();
}

// True iff q is exactly representable as a double (and in range).
inline bool rat_is_exact_double(const Rational& q, double d) {
    if (!(d == d)) return false;
    Rational back(d);
    back.canonicalize();
    return back == q;
}

}  // namespace waistcert
