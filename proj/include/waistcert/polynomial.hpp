#pragma once

#include <algorithm>
#include <span>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "waistcert/rational.hpp"
#include "waistcert/tower.hpp"

namespace waistcert {

// Dense univariate polynomial over Q. Coefficient i is the coefficient
// of x^i; the vector never ends in a zero (the zero polynomial is the
// empty vector, degree -1).
class UniPoly {
  public:
    UniPoly() = default;
    explicit UniPoly(std::vector<Rational> coeffs) : c_(std::move(coeffs)) { trim(); }
    static UniPoly constant(const Rational& q) {
        return q == 0 ? UniPoly() : UniPoly(std::vector<Rational>{q});
    }
    // x^k with coefficient q.
    static UniPoly monomial(const Rational& q, std::size_t k) {
        if (q == 0) return UniPoly();
        std::vector<Rational> v(k + 1, Rational(0));
        v[k] = q;
        return UniPoly(std::move(v));
    }

    bool is_zero() const { return c_.empty(); }
    int degree() const { return static_cast<int>(c_.size()) - 1; }
    const Rational& leading() const {
        static const Rational zero(0);
        return c_.empty() ? zero : c_.back();
    }
    Rational coeff(std::size_t i) const { return i < c_.size() ? c_[i] : Rational(0); }
    std::span<const Rational> coeffs() const { return c_; }

    friend bool operator==(const UniPoly& p, const UniPoly& q) { return p.c_ == q.c_; }

    friend UniPoly operator+(const UniPoly& p, const UniPoly& q) {
        std::vector<Rational> r(std::max(p.c_.size(), q.c_.size()), Rational(0));
        for (std::size_t i = 0; i < p.c_.size(); ++i) r[i] += p.c_[i];
        for (std::size_t i = 0; i < q.c_.size(); ++i) r[i] += q.c_[i];
        return UniPoly(std::move(r));
    }
    friend UniPoly operator-(const UniPoly& p, const UniPoly& q) {
        std::vector<Rational> r(std::max(p.c_.size(), q.c_.size()), Rational(0));
        for (std::size_t i = 0; i < p.c_.size(); ++i) r[i] += p.c_[i];
        for (std::size_t i = 0; i < q.c_.size(); ++i) r[i] -= q.c_[i];
        return UniPoly(std::move(r));
    }
    UniPoly operator-() const {
        std::vector<Rational> r(c_);
        for (auto& x : r) x = -x;
        return UniPoly(std::move(r));
    }
    friend UniPoly operator*(const UniPoly& p, const UniPoly& q) {
        if (p.is_zero() || q.is_zero()) return UniPoly();
        std::vector<Rational> r(p.c_.size() + q.c_.size() - 1, Rational(0));
        for (std::size_t i = 0; i < p.c_.size(); ++i)
            for (std::size_t j = 0; j < q.c_.size(); ++j) r[i + j] += p.c_[i] * q.c_[j];
        return UniPoly(std::move(r));
    }
    friend UniPoly operator*(const Rational& s, const UniPoly& p) {
        if (s == 0) return UniPoly();
        std::vector<Rational> r(p.c_);
        for (auto& x : r) x *= s;
        return UniPoly(std::move(r));
    }

    Rational eval(const Rational& x) const {
        Rational acc(0);
        for (std::size_t i = c_.size(); i-- > 0;) acc = acc * x + c_[i];
        return acc;
    }
    Tower eval(const Tower& x) const {
        Tower acc;
        for (std::size_t i = c_.size(); i-- > 0;) acc = acc * x + Tower(c_[i]);
        return acc;
    }
    int sign_at(const Rational& x) const { return sign(eval(x)); }

    UniPoly derivative() const {
        if (c_.size() <= 1) return UniPoly();
        std::vector<Rational> r(c_.size() - 1);
        for (std::size_t i = 1; i < c_.size(); ++i) r[i - 1] = rat(static_cast<long>(i)) * c_[i];
        return UniPoly(std::move(r));
    }

  private:
    void trim() {
        while (!c_.empty() && c_.back() == 0) c_.pop_back();
    }
    std::vector<Rational> c_;
};

struct DivisionResult {
    UniPoly quotient;
    UniPoly remainder;
};

// Exact Euclidean division: p = q*d + r with deg r < deg d.
inline DivisionResult divide(const UniPoly& p, const UniPoly& d) {
    if (d.is_zero()) throw std::domain_error("polynomial division by zero");
    std::vector<Rational> rem(p.coeffs().begin(), p.coeffs().end());
    int dd = d.degree();
    int dr = p.degree();
    if (dr < dd) return {UniPoly(), p};
    std::vector<Rational> quo(dr - dd + 1, Rational(0));
    const Rational& lead = d.leading();
    while (dr >= dd) {
        Rational f = rem[dr] / lead;
        quo[dr - dd] = f;
        for (int i = 0; i <= dd; ++i) rem[dr - dd + i] -= f * d.coeff(i);
        rem[dr] = 0;  // exact cancellation; kill residue explicitly
        while (dr >= 0 && rem[dr] == 0) --dr;
    }
    rem.resize(dr + 1);
    return {UniPoly(std::move(quo)), UniPoly(std::move(rem))};
}

inline UniPoly expand_product(const std::vector<UniPoly>& factors) {
    UniPoly r = UniPoly::constant(Rational(1));
    for (const auto& f : factors) r = r * f;
    return r;
}

inline UniPoly make_monic(const UniPoly& p) {
    if (p.is_zero() || p.leading() == 1) return p;
    return (Rational(1) / p.leading()) * p;
}

inline UniPoly poly_gcd(UniPoly a, UniPoly b) {
    while (!b.is_zero()) {
        UniPoly r = divide(a, b).remainder;
        a = std::move(b);
        b = std::move(r);
    }
    return make_monic(a);
}

// p with repeated roots stripped: p / gcd(p, p').
inline UniPoly square_free_part(const UniPoly& p) {
    if (p.is_zero()) throw std::domain_error("square-free part of zero polynomial");
    if (p.degree() == 0) return UniPoly::constant(Rational(1));
    UniPoly g = poly_gcd(p, p.derivative());
    if (g.degree() == 0) return p;
    return divide(p, g).quotient;
}

// Canonical Sturm chain: p, p', then negated remainders.
inline std::vector<UniPoly> sturm_chain(const UniPoly& p) {
    std::vector<UniPoly> chain;
    chain.push_back(p);
    UniPoly d = p.derivative();
    if (d.is_zero()) return chain;
    chain.push_back(d);
    while (true) {
        UniPoly r = divide(chain[chain.size() - 2], chain.back()).remainder;
        if (r.is_zero()) break;
        chain.push_back(-r);
    }
    return chain;
}

inline int sign_variations(const std::vector<UniPoly>& chain, const Rational& x) {
    int variations = 0, prev = 0;
    for (const auto& q : chain) {
        int s = q.sign_at(x);
        if (s == 0) continue;
        if (prev != 0 && s != prev) ++variations;
        prev = s;
    }
    return variations;
}

// Number of distinct real roots of square-free p in the open interval
// (lo, hi); requires p(lo) != 0 and p(hi) != 0.
inline int sturm_root_count(const std::vector<UniPoly>& chain, const Rational& lo,
                            const Rational& hi) {
    return sign_variations(chain, lo) - sign_variations(chain, hi);
}

// A rational interval certified to contain exactly one simple real root
// of `target` (Sturm count 1, sign change at the endpoints).
struct IsolatingInterval {
    Rational lo;
    Rational hi;
    UniPoly target;  // square-free polynomial the certificate refers to

    Rational width() const { return hi - lo; }
    Rational midpoint() const { return (lo + hi) / 2; }
    bool contains(const Rational& x) const { return lo < x && x < hi; }
};

namespace detail {

// Shrinks a sign-change interval around a single simple root until its
// width is at most `precision`, preserving the sign change.
inline void refine_to_width(const UniPoly& p, Rational& lo, Rational& hi,
                            const Rational& precision) {
    int slo = p.sign_at(lo);
    while (hi - lo > precision) {
        Rational mid = (lo + hi) / 2;
        int sm = p.sign_at(mid);
        if (sm == 0) {
            // Rational root exactly at the midpoint: close in around it,
            // keeping the endpoint sign change of the simple root.
            Rational w = (hi - lo) / 4;
            while (true) {
                Rational a = mid - w, b = mid + w;
                if (b - a <= precision && p.sign_at(a) * p.sign_at(b) < 0) {
                    lo = a;
                    hi = b;
                    return;
                }
                w /= 2;
            }
        }
        if (sm == slo) lo = mid;
        else hi = mid;
    }
}

}  // namespace detail

// Isolates every real root of p in the open interval (lo, hi) into
// pairwise-disjoint intervals of width <= precision. p is reduced to its
// square-free part first; roots exactly at lo or hi are excluded. The
// Sturm chain certifies that no root is missed.
inline std::vector<IsolatingInterval> isolate_real_roots(const UniPoly& p, const Rational& lo,
                                                         const Rational& hi,
                                                         const Rational& precision) {
    if (p.is_zero()) throw std::domain_error("cannot isolate roots of the zero polynomial");
    if (!(lo < hi)) throw std::invalid_argument("empty isolation range");
    if (!(precision > 0)) throw std::invalid_argument("nonpositive isolation precision");
    UniPoly sf = square_free_part(p);
    // Deflate rational roots sitting exactly at the range endpoints (the
    // range is open, so they are not reported).
    for (const Rational* endpoint : {&lo, &hi}) {
        if (sf.degree() >= 1 && sf.eval(*endpoint) == 0) {
            UniPoly linear(std::vector<Rational>{-*endpoint, Rational(1)});
            sf = divide(sf, linear).quotient;
        }
    }
    if (sf.degree() < 1) return {};

    std::vector<UniPoly> chain = sturm_chain(sf);
    std::vector<IsolatingInterval> result;

    struct Span {
        Rational a, b;
        int count;
    };
    std::vector<Span> stack;
    stack.push_back({lo, hi, sturm_root_count(chain, lo, hi)});
    while (!stack.empty()) {
        Span s = std::move(stack.back());
        stack.pop_back();
        if (s.count == 0) continue;
        if (s.count == 1) {
            Rational a = s.a, b = s.b;
            detail::refine_to_width(sf, a, b, precision);
            result.push_back({a, b, sf});
            continue;
        }
        Rational mid = (s.a + s.b) / 2;
        // A root exactly at the split point would be invisible to both
        // halves; nudge until the split point is root-free.
        Rational step = (s.b - s.a) / 4;
        while (sf.eval(mid) == 0) {
            mid += step;
            step /= 2;
        }
        int left = sturm_root_count(chain, s.a, mid);
        stack.push_back({mid, s.b, s.count - left});
        stack.push_back({s.a, mid, left});
    }
    std::sort(result.begin(), result.end(),
              [](const IsolatingInterval& x, const IsolatingInterval& y) { return x.lo < y.lo; });
    return result;
}

// Further narrows an isolating interval (bisection on the sign change).
inline IsolatingInterval refine(const IsolatingInterval& iv, const Rational& precision) {
    IsolatingInterval out = iv;
    detail::refine_to_width(out.target, out.lo, out.hi, precision);
    return out;
}

// --- canonical text form -------------------------------------------------

inline std::string to_string(const UniPoly& p, const std::string& var = "w") {
    if (p.is_zero()) return "0";
    std::string out;
    for (int i = p.degree(); i >= 0; --i) {
        Rational c = p.coeff(static_cast<std::size_t>(i));
        if (c == 0) continue;
        Rational mag = rat_abs(c);
        std::string term;
        if (i == 0) term = to_string(mag);
        else {
            std::string power = (i == 1) ? var : var + "^" + std::to_string(i);
            term = (mag == 1) ? power : to_string(mag) + "*" + power;
        }
        if (out.empty()) out = (sign(c) < 0 ? "-" : "") + term;
        else out += (sign(c) < 0 ? " - " : " + ") + term;
    }
    return out;
}

inline UniPoly unipoly_from_string(const std::string& s, const std::string& var = "w") {
    std::vector<Rational> coeffs;
    std::size_t i = 0;
    auto skip_ws = [&] { while (i < s.size() && s[i] == ' ') ++i; };
    auto add_term = [&](const Rational& c, std::size_t k) {
        if (coeffs.size() <= k) coeffs.resize(k + 1, Rational(0));
        coeffs[k] += c;
    };
    skip_ws();
    if (i >= s.size()) throw std::invalid_argument("empty polynomial literal");
    bool first = true;
    while (i < s.size()) {
        skip_ws();
        int sgn_term = 1;
        if (!first || s[i] == '+' || s[i] == '-') {
            if (i >= s.size() || (s[i] != '+' && s[i] != '-'))
                throw std::invalid_argument("bad polynomial literal: " + s);
            sgn_term = (s[i] == '-') ? -1 : 1;
            ++i;
            skip_ws();
        }
        first = false;
        std::size_t start = i;
        while (i < s.size() && ((s[i] >= '0' && s[i] <= '9') || s[i] == '/')) ++i;
        bool have_coeff = i > start;
        Rational coeff = have_coeff ? rat_from_string(s.substr(start, i - start)) : Rational(1);
        std::size_t power = 0;
        if (i < s.size() && (s[i] == '*' || s.compare(i, var.size(), var) == 0)) {
            if (s[i] == '*') {
                if (!have_coeff) throw std::invalid_argument("bad polynomial literal: " + s);
                ++i;
            }
            if (s.compare(i, var.size(), var) != 0)
                throw std::invalid_argument("bad polynomial literal: " + s);
            i += var.size();
            power = 1;
            if (i < s.size() && s[i] == '^') {
                ++i;
                std::size_t ps = i;
                while (i < s.size() && s[i] >= '0' && s[i] <= '9') ++i;
                if (i == ps) throw std::invalid_argument("bad polynomial literal: " + s);
                power = std::stoul(s.substr(ps, i - ps));
            }
        } else if (!have_coeff) {
            throw std::invalid_argument("bad polynomial literal: " + s);
        }
        add_term(sgn_term < 0 ? Rational(-coeff) : coeff, power);
        skip_ws();
    }
    return UniPoly(std::move(coeffs));
}

}  // namespace waistcert
