#pragma once

#include <cmath>
#include <optional>
#include <stdexcept>
#include <string>

#include "waistcert/rational.hpp"

namespace waistcert {

// Element of the real quadratic tower Q(sqrt2, sqrt3), stored on the
// basis {1, sqrt2, sqrt3, sqrt6}. The basis is Q-linearly independent,
// so the representation is unique and equality is coefficient equality.
struct Tower {
    Rational a;  // 1
    Rational b;  // sqrt(2)
    Rational c;  // sqrt(3)
    Rational d;  // sqrt(6)

    Tower() : a(0), b(0), c(0), d(0) {}
    Tower(Rational a_, Rational b_, Rational c_, Rational d_)
        : a(std::move(a_)), b(std::move(b_)), c(std::move(c_)), d(std::move(d_)) {}
    explicit Tower(const Rational& q) : a(q), b(0), c(0), d(0) {}
    explicit Tower(long n) : a(n), b(0), c(0), d(0) {}

    static Tower sqrt2() { return Tower(Rational(0), Rational(1), Rational(0), Rational(0)); }
    static Tower sqrt3() { return Tower(Rational(0), Rational(0), Rational(1), Rational(0)); }
    static Tower sqrt6() { return Tower(Rational(0), Rational(0), Rational(0), Rational(1)); }

    bool is_zero() const { return a == 0 && b == 0 && c == 0 && d == 0; }
    bool is_rational() const { return b == 0 && c == 0 && d == 0; }

    friend bool operator==(const Tower& x, const Tower& y) {
        return x.a == y.a && x.b == y.b && x.c == y.c && x.d == y.d;
    }
    friend bool operator!=(const Tower& x, const Tower& y) { return !(x == y); }

    Tower operator-() const { return Tower(-a, -b, -c, -d); }

    friend Tower operator+(const Tower& x, const Tower& y) {
        return Tower(x.a + y.a, x.b + y.b, x.c + y.c, x.d + y.d);
    }
    friend Tower operator-(const Tower& x, const Tower& y) {
        return Tower(x.a - y.a, x.b - y.b, x.c - y.c, x.d - y.d);
    }
    // sqrt2*sqrt3 = sqrt6, sqrt2*sqrt6 = 2*sqrt3, sqrt3*sqrt6 = 3*sqrt2.
    friend Tower operator*(const Tower& x, const Tower& y) {
        return Tower(
            x.a * y.a + 2 * x.b * y.b + 3 * x.c * y.c + 6 * x.d * y.d,
            x.a * y.b + x.b * y.a + 3 * (x.c * y.d + x.d * y.c),
            x.a * y.c + x.c * y.a + 2 * (x.b * y.d + x.d * y.b),
            x.a * y.d + x.d * y.a + x.b * y.c + x.c * y.b);
    }
    friend Tower operator*(const Rational& q, const Tower& x) {
        return Tower(q * x.a, q * x.b, q * x.c, q * x.d);
    }
    friend Tower operator*(const Tower& x, const Rational& q) { return q * x; }

    Tower& operator+=(const Tower& y) { *this = *this + y; return *this; }
    Tower& operator-=(const Tower& y) { *this = *this - y; return *this; }
    Tower& operator*=(const Tower& y) { *this = *this * y; return *this; }
};

namespace detail {

// Sign of a + b*sqrt2, decided by comparing squares. a^2 = 2 b^2 has no
// rational solution with a, b nonzero, so the comparison is total.
inline int sign_q_sqrt2(const Rational& a, const Rational& b) {
    if (b == 0) return sign(a);
    if (a == 0) return sign(b);
    int sa = sign(a), sb = sign(b);
    if (sa == sb) return sa;
    return sa * sign(a * a - 2 * b * b);
}

}  // namespace detail

// Exact, total sign. Writes x = A + B*sqrt3 with A, B in Q(sqrt2) and
// recurses; sqrt3 is not in Q(sqrt2), so A^2 = 3 B^2 cannot vanish with
// A, B nonzero.
inline int tower_sign(const Tower& x) {
    int sA = detail::sign_q_sqrt2(x.a, x.b);
    int sB = detail::sign_q_sqrt2(x.c, x.d);
    if (sB == 0) return sA;
    if (sA == 0) return sB;
    if (sA == sB) return sA;
    // A^2 - 3 B^2 in Q(sqrt2).
    Rational ta = x.a * x.a + 2 * x.b * x.b - 3 * (x.c * x.c + 2 * x.d * x.d);
    Rational tb = 2 * x.a * x.b - 6 * x.c * x.d;
    return sA * detail::sign_q_sqrt2(ta, tb);
}

inline Tower tower_inverse(const Tower& x) {
    if (x.is_zero()) throw std::domain_error("tower division by zero");
    // Conjugate over sqrt3: x * (A - B*sqrt3) = A^2 - 3 B^2 in Q(sqrt2).
    Tower conj3(x.a, x.b, -x.c, -x.d);
    Tower n = x * conj3;  // c = d = 0 now
    // Invert a + b*sqrt2.
    Rational den = n.a * n.a - 2 * n.b * n.b;
    Tower inv_n(n.a / den, -n.b / den, Rational(0), Rational(0));
    return conj3 * inv_n;
}

inline Tower operator/(const Tower& x, const Tower& y) { return x * tower_inverse(y); }

inline Tower tower_pow(const Tower& base, unsigned exp) {
    Tower r(Rational(1));
    Tower b = base;
    while (exp) {
        if (exp & 1u) r *= b;
        b *= b;
        exp >>= 1;
    }
    return r;
}

// Plain double approximation (not an enclosure; the interval layer has
// the certified conversion).
inline double tower_to_double(const Tower& x) {
    return rat_to_double(x.a) + rat_to_double(x.b) * std::sqrt(2.0) +
           rat_to_double(x.c) * std::sqrt(3.0) + rat_to_double(x.d) * std::sqrt(6.0);
}

// Square root of a nonnegative rational, when it lies in the tower.
// sqrt(q) is in Q(sqrt2,sqrt3) iff q = r^2 * s with s in {1,2,3,6}.
inline std::optional<Tower> tower_sqrt_of_rational(const Rational& q) {
    if (sign(q) < 0) return std::nullopt;
    if (q == 0) return Tower(Rational(0));
    const long squarefree[4] = {1, 2, 3, 6};
    for (long s : squarefree) {
        Rational t = q / rat(s);
        t.canonicalize();
        if (mpz_perfect_square_p(t.get_num().get_mpz_t()) &&
            mpz_perfect_square_p(t.get_den().get_mpz_t())) {
            Integer num_root, den_root;
            mpz_sqrt(num_root.get_mpz_t(), t.get_num().get_mpz_t());
            mpz_sqrt(den_root.get_mpz_t(), t.get_den().get_mpz_t());
            Rational r(num_root, den_root);
            r.canonicalize();
            Tower root = (s == 1) ? Tower(r)
                       : (s == 2) ? r * Tower::sqrt2()
                       : (s == 3) ? r * Tower::sqrt3()
                                  : r * Tower::sqrt6();
            return root;
        }
    }
    return std::nullopt;
}

// Canonical text form "a + b*r2 + c*r3 + d*r6", nonzero terms only.
inline std::string to_string(const Tower& x) {
    struct Part { const Rational* coeff; const char* radical; };
    const Part parts[4] = {{&x.a, ""}, {&x.b, "r2"}, {&x.c, "r3"}, {&x.d, "r6"}};
    std::string out;
    for (const Part& p : parts) {
        if (*p.coeff == 0) continue;
        Rational mag = rat_abs(*p.coeff);
        std::string term;
        if (p.radical[0] == '\0') {
            term = to_string(mag);
        } else if (mag == 1) {
            term = p.radical;
        } else {
            term = to_string(mag) + "*" + p.radical;
        }
        if (out.empty()) {
            out = (sign(*p.coeff) < 0 ? "-" : "") + term;
        } else {
            out += (sign(*p.coeff) < 0 ? " - " : " + ") + term;
        }
    }
    return out.empty() ? "0" : out;
}

inline Tower tower_from_string(const std::string& s) {
    Tower result;
    std::size_t i = 0;
    auto skip_ws = [&] { while (i < s.size() && s[i] == ' ') ++i; };
    skip_ws();
    if (i >= s.size()) throw std::invalid_argument("empty tower literal");
    bool first = true;
    while (i < s.size()) {
        int sgn_term = 1;
        skip_ws();
        if (!first || s[i] == '+' || s[i] == '-') {
            if (i >= s.size() || (s[i] != '+' && s[i] != '-'))
                throw std::invalid_argument("bad tower literal: " + s);
            sgn_term = (s[i] == '-') ? -1 : 1;
            ++i;
            skip_ws();
        }
        first = false;
        // Optional coefficient, then optional radical.
        std::size_t start = i;
        while (i < s.size() && ((s[i] >= '0' && s[i] <= '9') || s[i] == '/')) ++i;
        Rational coeff(1);
        bool have_coeff = i > start;
        if (have_coeff) coeff = rat_from_string(s.substr(start, i - start));
        const char* radical = nullptr;
        if (i < s.size() && (s[i] == '*' || s[i] == 'r')) {
            if (s[i] == '*') {
                if (!have_coeff) throw std::invalid_argument("bad tower literal: " + s);
                ++i;
            }
            if (i + 1 >= s.size() || s[i] != 'r')
                throw std::invalid_argument("bad tower literal: " + s);
            if (s[i + 1] == '2') radical = "r2";
            else if (s[i + 1] == '3') radical = "r3";
            else if (s[i + 1] == '6') radical = "r6";
            else throw std::invalid_argument("bad tower literal: " + s);
            i += 2;
        } else if (!have_coeff) {
            throw std::invalid_argument("bad tower literal: " + s);
        }
        if (sgn_term < 0) coeff = -coeff;
        if (radical == nullptr) result.a += coeff;
        else if (radical[1] == '2') result.b += coeff;
        else if (radical[1] == '3') result.c += coeff;
        else result.d += coeff;
        skip_ws();
    }
    return result;
}

}  // namespace waistcert
