#pragma once

#include <cmath>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "waistcert/polynomial.hpp"
#include "waistcert/rational.hpp"
#include "waistcert/tower.hpp"

namespace waistcert {

// Sparse bivariate polynomial over Q in the variables (w, e). Zero
// coefficients are never stored.
class BiPoly {
  public:
    // (degree in w, degree in e) -> coefficient
    using Exponents = std::pair<int, int>;
    using TermMap = std::map<Exponents, Rational>;

    BiPoly() = default;

    static BiPoly term(const Rational& c, int wdeg, int edeg) {
        BiPoly p;
        p.add_term(c, wdeg, edeg);
        return p;
    }

    void add_term(const Rational& c, int wdeg, int edeg) {
        if (c == 0) return;
        if (wdeg < 0 || edeg < 0) throw std::invalid_argument("negative exponent in BiPoly");
        auto key = Exponents{wdeg, edeg};
        auto it = terms_.find(key);
        if (it == terms_.end()) {
            terms_.emplace(key, c);
        } else {
            it->second += c;
            if (it->second == 0) terms_.erase(it);
        }
    }

    bool is_zero() const { return terms_.empty(); }
    const TermMap& terms() const { return terms_; }
    Rational coeff(int wdeg, int edeg) const {
        auto it = terms_.find({wdeg, edeg});
        return it == terms_.end() ? Rational(0) : it->second;
    }
    int degree_w() const {
        int d = -1;
        for (const auto& [k, c] : terms_) d = std::max(d, k.first);
        return d;
    }
    int degree_e() const {
        int d = -1;
        for (const auto& [k, c] : terms_) d = std::max(d, k.second);
        return d;
    }
    bool all_integer_coefficients() const {
        for (const auto& [k, c] : terms_)
            if (c.get_den() != 1) return false;
        return true;
    }
    // Even total degree in each variable separately.
    bool is_even_even() const {
        for (const auto& [k, c] : terms_)
            if (k.first % 2 != 0 || k.second % 2 != 0) return false;
        return true;
    }

    friend bool operator==(const BiPoly& p, const BiPoly& q) { return p.terms_ == q.terms_; }

    friend BiPoly operator+(const BiPoly& p, const BiPoly& q) {
        BiPoly r = p;
        for (const auto& [k, c] : q.terms_) r.add_term(c, k.first, k.second);
        return r;
    }
    friend BiPoly operator-(const BiPoly& p, const BiPoly& q) {
        BiPoly r = p;
        for (const auto& [k, c] : q.terms_) r.add_term(-c, k.first, k.second);
        return r;
    }
    friend BiPoly operator*(const BiPoly& p, const BiPoly& q) {
        BiPoly r;
        for (const auto& [kp, cp] : p.terms_)
            for (const auto& [kq, cq] : q.terms_)
                r.add_term(cp * cq, kp.first + kq.first, kp.second + kq.second);
        return r;
    }
    friend BiPoly operator*(const Rational& s, const BiPoly& p) {
        BiPoly r;
        for (const auto& [k, c] : p.terms_) r.add_term(s * c, k.first, k.second);
        return r;
    }
    BiPoly operator-() const { return Rational(-1) * *this; }

    BiPoly derivative_w() const {
        BiPoly r;
        for (const auto& [k, c] : terms_)
            if (k.first > 0) r.add_term(rat(k.first) * c, k.first - 1, k.second);
        return r;
    }
    BiPoly derivative_e() const {
        BiPoly r;
        for (const auto& [k, c] : terms_)
            if (k.second > 0) r.add_term(rat(k.second) * c, k.first, k.second - 1);
        return r;
    }

    // View as univariate in w; requires degree 0 in e.
    UniPoly to_univariate_w() const {
        UniPoly out;
        for (const auto& [k, c] : terms_) {
            if (k.second != 0)
                throw std::domain_error("polynomial involves e, not univariate in w");
            out = out + UniPoly::monomial(c, static_cast<std::size_t>(k.first));
        }
        return out;
    }

    // Substitutes e = w^2, yielding a univariate polynomial in w.
    UniPoly substitute_e_w_squared() const {
        UniPoly out;
        for (const auto& [k, c] : terms_)
            out = out + UniPoly::monomial(c, static_cast<std::size_t>(k.first + 2 * k.second));
        return out;
    }

    double eval(double w, double e) const {
        double acc = 0;
        for (const auto& [k, c] : terms_) {
            double t = rat_to_double(c);
            for (int i = 0; i < k.first; ++i) t *= w;
            for (int j = 0; j < k.second; ++j) t *= e;
            acc += t;
        }
        return acc;
    }

    Rational eval(const Rational& w, const Rational& e) const {
        Rational acc(0);
        for (const auto& [k, c] : terms_)
            acc += c * rat_pow(w, static_cast<unsigned>(k.first)) *
                   rat_pow(e, static_cast<unsigned>(k.second));
        return acc;
    }

  private:
    TermMap terms_;
};

// A point of the (w,e)-plane at which exact tower evaluation is
// possible. Two representations:
//   - direct: w and e themselves lie in Q(sqrt2,sqrt3);
//   - even-substituted: only w^2, e^2 (and, when representable, the
//     product w*e) lie in the tower. This covers the corner points with
//     w = 2^(1/4): squares land in the tower, and the products w*e at
//     all named points are square roots of rationals.
struct ExactPoint {
    std::string name;
    std::optional<Tower> w, e;  // direct coordinates, when they exist
    Tower w2, e2;               // w^2, e^2 (always in the tower)
    std::optional<Tower> we;    // w*e, when it lies in the tower

    static ExactPoint direct(std::string name, const Tower& w, const Tower& e) {
        ExactPoint p;
        p.name = std::move(name);
        p.w = w;
        p.e = e;
        p.w2 = w * w;
        p.e2 = e * e;
        p.we = w * e;
        return p;
    }
    // Coordinates given through their squares; w, e themselves are the
    // positive square roots. w*e is recovered when (w*e)^2 = w2*e2 is a
    // rational with a tower square root.
    static ExactPoint even_substituted(std::string name, const Tower& w_squared,
                                       const Tower& e_squared) {
        if (tower_sign(w_squared) < 0 || tower_sign(e_squared) < 0)
            throw std::domain_error("negative square in even-substituted point");
        ExactPoint p;
        p.name = std::move(name);
        p.w2 = w_squared;
        p.e2 = e_squared;
        Tower prod = w_squared * e_squared;
        if (prod.is_rational()) p.we = tower_sqrt_of_rational(prod.a);
        return p;
    }

    double w_approx() const { return w ? tower_to_double(*w) : std::sqrt(tower_to_double(w2)); }
    double e_approx() const { return e ? tower_to_double(*e) : std::sqrt(tower_to_double(e2)); }
};

// The four corner points of the coverage argument. Coordinates:
//   I   = (2^(1/4), sqrt3 / 2^(1/4)),  squares (sqrt2, 3/2*sqrt2)
//   II  = (2^(1/4), 1 / 2^(1/4)),      squares (sqrt2, 1/2*sqrt2)
//   III = (2^(1/4), 2^(1/4)),          squares (sqrt2, sqrt2)
// and (1, sqrt2), which lies in the tower directly.
inline ExactPoint point_I() {
    return ExactPoint::even_substituted("I", Tower::sqrt2(), rat(3, 2) * Tower::sqrt2());
}
inline ExactPoint point_II() {
    return ExactPoint::even_substituted("II", Tower::sqrt2(), rat(1, 2) * Tower::sqrt2());
}
inline ExactPoint point_III() {
    return ExactPoint::even_substituted("III", Tower::sqrt2(), Tower::sqrt2());
}
inline ExactPoint point_one_sqrt2() {
    return ExactPoint::direct("(1, sqrt2)", Tower(Rational(1)), Tower::sqrt2());
}
inline ExactPoint point_figure_eight() {
    return ExactPoint::direct("(1, 1)", Tower(Rational(1)), Tower(Rational(1)));
}

// Exact value of p at an ExactPoint. In even-substituted mode each
// monomial w^i e^j must have i, j of equal parity: even/even pairs go
// through (w2, e2), odd/odd pairs additionally use w*e. Anything else
// cannot be represented in the tower and is rejected.
inline Tower eval_exact(const BiPoly& p, const ExactPoint& pt) {
    Tower acc;
    if (pt.w && pt.e) {
        for (const auto& [k, c] : p.terms())
            acc += Tower(c) * tower_pow(*pt.w, static_cast<unsigned>(k.first)) *
                   tower_pow(*pt.e, static_cast<unsigned>(k.second));
        return acc;
    }
    for (const auto& [k, c] : p.terms()) {
        int i = k.first, j = k.second;
        if (i % 2 == 0 && j % 2 == 0) {
            acc += Tower(c) * tower_pow(pt.w2, static_cast<unsigned>(i / 2)) *
                   tower_pow(pt.e2, static_cast<unsigned>(j / 2));
        } else if (i % 2 == 1 && j % 2 == 1 && pt.we) {
            acc += Tower(c) * *pt.we * tower_pow(pt.w2, static_cast<unsigned>((i - 1) / 2)) *
                   tower_pow(pt.e2, static_cast<unsigned>((j - 1) / 2));
        } else {
            throw std::domain_error("monomial w^" + std::to_string(i) + "*e^" + std::to_string(j) +
                                    " is not tower-representable at point " + pt.name);
        }
    }
    return acc;
}

// Implicit slope e_w = -(dp/dw)/(dp/de) of the curve p = 0, exact. For
// even-substituted points this uses the factorization dp/dw = w * A(w2,e2),
// dp/de = e * B(w2,e2), so the slope is -sqrt(w2/e2) * A/B; the ratio
// w/e = sqrt(w2/e2) must be a tower element (it is rational-rooted at
// every named point).
inline Tower implicit_slope(const BiPoly& p, const ExactPoint& pt) {
    BiPoly pw = p.derivative_w();
    BiPoly pe = p.derivative_e();
    if (pt.w && pt.e) {
        Tower den = eval_exact(pe, pt);
        if (den.is_zero()) throw std::domain_error("implicit slope at singular point " + pt.name);
        return -(eval_exact(pw, pt) / den);
    }
    if (!p.is_even_even())
        throw std::domain_error("implicit slope in substituted mode needs an even polynomial");
    // pw has every monomial with odd w-degree and even e-degree; divide
    // out one w. Likewise pe with one e.
    BiPoly a, b;
    for (const auto& [k, c] : pw.terms()) a.add_term(c, (k.first - 1) / 2 * 2, k.second);
    for (const auto& [k, c] : pe.terms()) b.add_term(c, k.first, (k.second - 1) / 2 * 2);
    // a, b are even/even: evaluate through squares by halving exponents.
    auto eval_halved = [&](const BiPoly& q) {
        Tower acc;
        for (const auto& [k, c] : q.terms())
            acc += Tower(c) * tower_pow(pt.w2, static_cast<unsigned>(k.first / 2)) *
                   tower_pow(pt.e2, static_cast<unsigned>(k.second / 2));
        return acc;
    };
    Tower bval = eval_halved(b);
    if (bval.is_zero()) throw std::domain_error("implicit slope at singular point " + pt.name);
    Tower ratio2 = pt.w2 / pt.e2;  // (w/e)^2
    if (!ratio2.is_rational())
        throw std::domain_error("w/e is not tower-representable at point " + pt.name);
    auto ratio = tower_sqrt_of_rational(ratio2.a);
    if (!ratio)
        throw std::domain_error("w/e is not tower-representable at point " + pt.name);
    return -(*ratio * eval_halved(a) / bval);
}

// --- canonical text form -------------------------------------------------

inline std::string to_string(const BiPoly& p) {
    if (p.is_zero()) return "0";
    // Highest w-degree first, then highest e-degree.
    std::vector<std::pair<BiPoly::Exponents, Rational>> terms(p.terms().begin(), p.terms().end());
    std::sort(terms.begin(), terms.end(), [](const auto& x, const auto& y) {
        if (x.first.first != y.first.first) return x.first.first > y.first.first;
        return x.first.second > y.first.second;
    });
    std::string out;
    for (const auto& [k, c] : terms) {
        Rational mag = rat_abs(c);
        std::string body;
        auto append_var = [&](const char* v, int deg) {
            if (deg == 0) return;
            if (!body.empty()) body += "*";
            body += v;
            if (deg > 1) body += "^" + std::to_string(deg);
        };
        append_var("w", k.first);
        append_var("e", k.second);
        std::string term;
        if (body.empty()) term = to_string(mag);
        else if (mag == 1) term = body;
        else term = to_string(mag) + "*" + body;
        if (out.empty()) out = (sign(c) < 0 ? "-" : "") + term;
        else out += (sign(c) < 0 ? " - " : " + ") + term;
    }
    return out;
}

inline BiPoly bipoly_from_string(const std::string& s) {
    BiPoly result;
    std::size_t i = 0;
    auto skip_ws = [&] { while (i < s.size() && s[i] == ' ') ++i; };
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
        int wdeg = 0, edeg = 0;
        bool expect_var = false;
        if (have_coeff && i < s.size() && s[i] == '*') {
            ++i;
            expect_var = true;
        }
        while (i < s.size() && (s[i] == 'w' || s[i] == 'e')) {
            char v = s[i++];
            int deg = 1;
            if (i < s.size() && s[i] == '^') {
                ++i;
                std::size_t ps = i;
                while (i < s.size() && s[i] >= '0' && s[i] <= '9') ++i;
                if (i == ps) throw std::invalid_argument("bad polynomial literal: " + s);
                deg = std::stoi(s.substr(ps, i - ps));
            }
            (v == 'w' ? wdeg : edeg) += deg;
            expect_var = false;
            if (i < s.size() && s[i] == '*') {
                ++i;
                expect_var = true;
            } else {
                break;
            }
        }
        if (expect_var || (!have_coeff && wdeg == 0 && edeg == 0))
            throw std::invalid_argument("bad polynomial literal: " + s);
        result.add_term(sgn_term < 0 ? Rational(-coeff) : coeff, wdeg, edeg);
        skip_ws();
    }
    return result;
}

}  // namespace waistcert
