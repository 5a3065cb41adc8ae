#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <type_traits>
#include <vector>

#include "waistcert/bipoly.hpp"
#include "waistcert/polynomial.hpp"
#include "waistcert/rational.hpp"
#include "waistcert/tower.hpp"

namespace waistcert {

namespace rounding {

// Outward rounding by one ulp. IEEE round-to-nearest keeps the exact
// result of +,-,*,/ within half an ulp of the computed one, so stepping
// one ulp outward yields a sound enclosure without touching the FPU
// rounding mode (which the optimizer is free to ignore). Error-free
// transforms (TwoSum, FMA) detect the exact cases so that dyadic
// arithmetic stays width-zero.
inline double down(double x) { return std::nextafter(x, -std::numeric_limits<double>::infinity()); }
inline double up(double x) { return std::nextafter(x, std::numeric_limits<double>::infinity()); }
inline const Rational& down(const Rational& x) { return x; }
inline const Rational& up(const Rational& x) { return x; }

inline bool sum_is_exact(double a, double b, double s) {
    if (!std::isfinite(s)) return false;
    double bb = s - a;
    double err = (a - (s - bb)) + (b - bb);  // Knuth TwoSum error term
    return err == 0.0;
}

inline bool product_is_exact(double a, double b, double p) {
    if (!std::isfinite(p)) return false;
    if (p == 0.0) return a == 0.0 || b == 0.0;
    // The FMA residual a*b - p is exact for normal p.
    return std::abs(p) >= std::numeric_limits<double>::min() && std::fma(a, b, -p) == 0.0;
}

inline double add_down(double a, double b) {
    double s = a + b;
    return sum_is_exact(a, b, s) ? s : down(s);
}
inline double add_up(double a, double b) {
    double s = a + b;
    return sum_is_exact(a, b, s) ? s : up(s);
}
inline double mul_down(double a, double b) {
    double p = a * b;
    return product_is_exact(a, b, p) ? p : down(p);
}
inline double mul_up(double a, double b) {
    double p = a * b;
    return product_is_exact(a, b, p) ? p : up(p);
}

inline Rational add_down(const Rational& a, const Rational& b) { return a + b; }
inline Rational add_up(const Rational& a, const Rational& b) { return a + b; }
inline Rational mul_down(const Rational& a, const Rational& b) { return a * b; }
inline Rational mul_up(const Rational& a, const Rational& b) { return a * b; }

}  // namespace rounding

// Enclosure of a real number or of the image of a set of reals. Bound =
// double gives the fast directed-rounding mode; Bound = Rational gives
// the strict exact mode (no rounding at all).
template <class Bound>
struct BasicInterval {
    using value_type = Bound;

    Bound lo{};
    Bound hi{};

    BasicInterval() = default;
    BasicInterval(Bound lo_, Bound hi_) : lo(std::move(lo_)), hi(std::move(hi_)) {
        if (!(lo <= hi)) throw std::invalid_argument("inverted interval bounds");
    }
    static BasicInterval point(const Bound& x) { return BasicInterval(x, x); }

    Bound width() const { return hi - lo; }
    bool contains_zero() const { return lo <= Bound(0) && Bound(0) <= hi; }
    bool strictly_negative() const { return hi < Bound(0); }
    bool strictly_positive() const { return lo > Bound(0); }

    friend BasicInterval operator+(const BasicInterval& x, const BasicInterval& y) {
        return BasicInterval(rounding::add_down(x.lo, y.lo), rounding::add_up(x.hi, y.hi));
    }
    friend BasicInterval operator-(const BasicInterval& x, const BasicInterval& y) {
        return BasicInterval(rounding::add_down(x.lo, -y.hi), rounding::add_up(x.hi, -y.lo));
    }
    BasicInterval operator-() const { return BasicInterval(-hi, -lo); }
    friend BasicInterval operator*(const BasicInterval& x, const BasicInterval& y) {
        const Bound* xs[2] = {&x.lo, &x.hi};
        const Bound* ys[2] = {&y.lo, &y.hi};
        Bound mn = rounding::mul_down(x.lo, y.lo);
        Bound mx = rounding::mul_up(x.lo, y.lo);
        for (int i = 0; i < 2; ++i)
            for (int j = 0; j < 2; ++j) {
                if (i == 0 && j == 0) continue;
                mn = std::min(mn, rounding::mul_down(*xs[i], *ys[j]));
                mx = std::max(mx, rounding::mul_up(*xs[i], *ys[j]));
            }
        return BasicInterval(mn, mx);
    }

    BasicInterval hull(const BasicInterval& y) const {
        return BasicInterval(std::min(lo, y.lo), std::max(hi, y.hi));
    }
    bool contains(const BasicInterval& y) const { return lo <= y.lo && y.hi <= hi; }
};

using Interval = BasicInterval<double>;
using RatInterval = BasicInterval<Rational>;

inline Interval interval_pow(Interval x, unsigned n) {
    Interval r = Interval::point(1.0);
    while (n) {
        if (n & 1u) r = r * x;
        x = x * x;
        n >>= 1;
    }
    return r;
}

// Sound enclosure of a rational. mpq -> double truncates toward zero
// with error under one ulp, so widening away from zero suffices.
inline Interval to_interval(const Rational& q) {
    double d = rat_to_double(q);
    if (!std::isfinite(d)) throw std::overflow_error("rational out of double range");
    if (rat_is_exact_double(q, d)) return Interval::point(d);
    return sign(q) >= 0 ? Interval(d, rounding::up(d)) : Interval(rounding::down(d), d);
}

inline RatInterval to_rat_interval(const Interval& x) {
    return RatInterval(Rational(x.lo), Rational(x.hi));
}

namespace detail {

// std::sqrt is correctly rounded by IEEE 754, so one ulp outward is sound.
inline Interval sqrt_enclosure(double x) {
    double s = std::sqrt(x);
    return Interval(rounding::down(s), rounding::up(s));
}

inline const Interval& sqrt2_enclosure() {
    static const Interval v = sqrt_enclosure(2.0);
    return v;
}
inline const Interval& sqrt3_enclosure() {
    static const Interval v = sqrt_enclosure(3.0);
    return v;
}
inline const Interval& sqrt6_enclosure() {
    static const Interval v = sqrt_enclosure(6.0);
    return v;
}

}  // namespace detail

inline Interval to_interval(const Tower& x) {
    return to_interval(x.a) + to_interval(x.b) * detail::sqrt2_enclosure() +
           to_interval(x.c) * detail::sqrt3_enclosure() +
           to_interval(x.d) * detail::sqrt6_enclosure();
}

inline Interval interval_sqrt(const Interval& x) {
    if (x.lo < 0) throw std::domain_error("interval sqrt of negative range");
    double lo = std::sqrt(x.lo), hi = std::sqrt(x.hi);
    return Interval(std::max(0.0, rounding::down(lo)), rounding::up(hi));
}

// Natural log enclosure. glibc log is faithful to within a couple of
// ulps; four ulps of slack cover it.
inline Interval interval_log(const Interval& x) {
    if (x.lo <= 0) throw std::domain_error("interval log of nonpositive range");
    double lo = std::log(x.lo), hi = std::log(x.hi);
    for (int i = 0; i < 4; ++i) {
        lo = rounding::down(lo);
        hi = rounding::up(hi);
    }
    return Interval(lo, hi);
}

// Dense compiled form of a bivariate polynomial for fast repeated
// interval evaluation: Horner over w with inner Horner over e, all
// coefficients pre-converted to enclosures.
template <class IV>
class BasicBoxEvaluator {
  public:
    explicit BasicBoxEvaluator(const BiPoly& p) {
        int dw = std::max(p.degree_w(), 0);
        int de = std::max(p.degree_e(), 0);
        rows_.assign(static_cast<std::size_t>(dw) + 1,
                     std::vector<IV>(static_cast<std::size_t>(de) + 1,
                                     IV::point(typename IV::value_type(0))));
        for (const auto& [k, c] : p.terms())
            rows_[static_cast<std::size_t>(k.first)][static_cast<std::size_t>(k.second)] =
                convert(c);
    }

    IV eval(const IV& w, const IV& e) const {
        IV acc = IV::point(typename IV::value_type(0));
        for (std::size_t i = rows_.size(); i-- > 0;) {
            IV row = IV::point(typename IV::value_type(0));
            for (std::size_t j = rows_[i].size(); j-- > 0;) row = row * e + rows_[i][j];
            acc = acc * w + row;
        }
        return acc;
    }

  private:
    static IV convert(const Rational& q) {
        if constexpr (std::is_same_v<IV, Interval>) return to_interval(q);
        else return IV::point(q);
    }
    std::vector<std::vector<IV>> rows_;
};

using BoxEvaluator = BasicBoxEvaluator<Interval>;
using ExactBoxEvaluator = BasicBoxEvaluator<RatInterval>;

// Rational enclosure of sqrt(n) to the requested width, certified by
// root isolation of x^2 - n.
inline RatInterval rational_sqrt_enclosure(long n, const Rational& width) {
    UniPoly p(std::vector<Rational>{rat(-n), Rational(0), Rational(1)});
    auto roots = isolate_real_roots(p, Rational(0), rat(n) + 1, width);
    if (roots.size() != 1) throw std::logic_error("sqrt isolation failed");
    return RatInterval(roots[0].lo, roots[0].hi);
}

// High-precision rational enclosure of a tower element; `bits` controls
// the radical enclosure widths (about bits/3.32 decimal digits).
inline RatInterval tower_enclosure(const Tower& x, unsigned bits) {
    Rational width = rat_pow(rat(1, 2), bits);
    auto scaled = [&](const Rational& coeff, long n) {
        if (coeff == 0) return RatInterval::point(Rational(0));
        RatInterval root = rational_sqrt_enclosure(n, width);
        return RatInterval::point(coeff) * root;
    };
    RatInterval acc = RatInterval::point(x.a);
    acc = acc + scaled(x.b, 2);
    acc = acc + scaled(x.c, 3);
    acc = acc + scaled(x.d, 6);
    return acc;
}

}  // namespace waistcert
