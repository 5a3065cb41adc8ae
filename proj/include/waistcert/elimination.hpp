#pragma once

#include <map>
#include <stdexcept>
#include <string>
#include <utility>

#include "waistcert/bipoly.hpp"
#include "waistcert/rational.hpp"

namespace waistcert {

// Bivariate Laurent polynomial in (w, e): exponents may be negative.
// Just enough algebra to express law-of-cosines relations and clear
// their denominators.
class Laurent {
  public:
    using Exponents = std::pair<int, int>;
    using TermMap = std::map<Exponents, Rational>;

    Laurent() = default;
    static Laurent term(const Rational& c, int wdeg, int edeg) {
        Laurent p;
        p.add_term(c, wdeg, edeg);
        return p;
    }

    void add_term(const Rational& c, int wdeg, int edeg) {
        if (c == 0) return;
        auto key = Exponents{wdeg, edeg};
        auto it = terms_.find(key);
        if (it == terms_.end()) terms_.emplace(key, c);
        else {
            it->second += c;
            if (it->second == 0) terms_.erase(it);
        }
    }

    bool is_zero() const { return terms_.empty(); }
    bool is_monomial() const { return terms_.size() == 1; }
    const TermMap& terms() const { return terms_; }

    friend Laurent operator+(const Laurent& p, const Laurent& q) {
        Laurent r = p;
        for (const auto& [k, c] : q.terms_) r.add_term(c, k.first, k.second);
        return r;
    }
    friend Laurent operator-(const Laurent& p, const Laurent& q) {
        Laurent r = p;
        for (const auto& [k, c] : q.terms_) r.add_term(-c, k.first, k.second);
        return r;
    }
    friend Laurent operator*(const Laurent& p, const Laurent& q) {
        Laurent r;
        for (const auto& [kp, cp] : p.terms_)
            for (const auto& [kq, cq] : q.terms_)
                r.add_term(cp * cq, kp.first + kq.first, kp.second + kq.second);
        return r;
    }

    // Exact division by a monomial.
    Laurent divide_by_monomial(const Laurent& m) const {
        if (!m.is_monomial()) throw std::invalid_argument("divisor is not a monomial");
        const auto& [k, c] = *m.terms_.begin();
        Laurent r;
        for (const auto& [kp, cp] : terms_)
            r.add_term(cp / c, kp.first - k.first, kp.second - k.second);
        return r;
    }

    double eval(double w, double e) const {
        double acc = 0;
        for (const auto& [k, c] : terms_) {
            double t = rat_to_double(c);
            int i = k.first, j = k.second;
            for (int a = 0; a < (i > 0 ? i : -i); ++a) t = (i > 0) ? t * w : t / w;
            for (int a = 0; a < (j > 0 ? j : -j); ++a) t = (j > 0) ? t * e : t / e;
            acc += t;
        }
        return acc;
    }

  private:
    TermMap terms_;
};

// One law-of-cosines relation, written as  lhs = base + cos_coeff * cos(angle).
// The angle is cos(theta) for the first relation of a pair and
// cos(pi - 2*theta) for the second.
struct CosineRelation {
    Laurent lhs;
    Laurent base;
    Laurent cos_coeff;  // must be a single monomial
};

// Normalized elimination output: `polynomial` equals
// scale * w^cleared_w * e^cleared_e * residual(w, e), where residual is
// lhs2 - base2 - c2*(1 - 2 cos^2 theta) with cos theta taken from the
// first relation.
struct EliminationResult {
    BiPoly polynomial;
    int cleared_w_power = 0;
    int cleared_e_power = 0;
    Rational scale;  // rational factor applied after clearing powers

    double residual(double w, double e) const;
};

// Solves the first relation for cos(theta), substitutes
// cos(pi - 2*theta) = 1 - 2 cos^2(theta) into the second, clears
// denominators by the minimal powers of w and e, and normalizes to an
// integer-coefficient polynomial with positive leading term.
inline EliminationResult eliminate_angle(const CosineRelation& rel_theta,
                                         const CosineRelation& rel_pi_minus_2theta) {
    if (!rel_theta.cos_coeff.is_monomial() || !rel_pi_minus_2theta.cos_coeff.is_monomial())
        throw std::invalid_argument("cosine relation is not linear with a monomial coefficient");

    Laurent cos_theta = (rel_theta.lhs - rel_theta.base).divide_by_monomial(rel_theta.cos_coeff);
    Laurent one = Laurent::term(Rational(1), 0, 0);
    Laurent two = Laurent::term(Rational(2), 0, 0);
    // residual = lhs2 - base2 - c2 * (1 - 2 cos^2)
    Laurent residual = rel_pi_minus_2theta.lhs - rel_pi_minus_2theta.base -
                       rel_pi_minus_2theta.cos_coeff * (one - two * cos_theta * cos_theta);
    if (residual.is_zero())
        throw std::invalid_argument("relations are dependent: elimination yields 0");

    // Clear negative exponents by the minimal powers.
    int min_w = 0, min_e = 0;
    for (const auto& [k, c] : residual.terms()) {
        min_w = std::min(min_w, k.first);
        min_e = std::min(min_e, k.second);
    }
    int cw = -min_w, ce = -min_e;

    // Clear rational denominators and divide out the integer content.
    Integer den_lcm = 1, num_gcd = 0;
    for (const auto& [k, c] : residual.terms()) {
        mpz_lcm(den_lcm.get_mpz_t(), den_lcm.get_mpz_t(), c.get_den().get_mpz_t());
    }
    for (const auto& [k, c] : residual.terms()) {
        Integer scaled_num = c.get_num() * (den_lcm / c.get_den());
        mpz_gcd(num_gcd.get_mpz_t(), num_gcd.get_mpz_t(), scaled_num.get_mpz_t());
    }
    Rational scale(den_lcm, num_gcd);
    scale.canonicalize();

    // Positive leading coefficient, largest (w, e) exponents first.
    auto lead = residual.terms().rbegin();
    if (sign(lead->second) < 0) scale = -scale;

    EliminationResult out;
    out.cleared_w_power = cw;
    out.cleared_e_power = ce;
    out.scale = scale;
    for (const auto& [k, c] : residual.terms())
        out.polynomial.add_term(c * scale, k.first + cw, k.second + ce);
    return out;
}

inline double EliminationResult::residual(double w, double e) const {
    double p = 0;
    for (const auto& [k, c] : polynomial.terms()) {
        double t = rat_to_double(c);
        for (int a = 0; a < k.first; ++a) t *= w;
        for (int a = 0; a < k.second; ++a) t *= e;
        p += t;
    }
    double clear = 1;
    for (int a = 0; a < cleared_w_power; ++a) clear *= w;
    for (int a = 0; a < cleared_e_power; ++a) clear *= e;
    return p / (clear * rat_to_double(scale));
}

// The coincident-ball configuration: the triangle with sides w, 1/w and
// e gives  w^4 = w^2 + 1/w^2 - 2 cos(theta), and the chain of 1/w^3
// balls gives  1/w^8 = w^2 + 1/w^6 - (2/w^2) cos(pi - 2 theta).
inline std::pair<CosineRelation, CosineRelation> coincident_ball_relations() {
    CosineRelation rel1;
    rel1.lhs = Laurent::term(Rational(1), 4, 0);
    rel1.base = Laurent::term(Rational(1), 2, 0) + Laurent::term(Rational(1), -2, 0);
    rel1.cos_coeff = Laurent::term(Rational(-2), 0, 0);

    CosineRelation rel2;
    rel2.lhs = Laurent::term(Rational(1), -8, 0);
    rel2.base = Laurent::term(Rational(1), 2, 0) + Laurent::term(Rational(1), -6, 0);
    rel2.cos_coeff = Laurent::term(Rational(-2), -2, 0);
    return {rel1, rel2};
}

// Degenerate pair forcing theta = pi/2: the distance relation
// e^2 = w^2 + 1/w^2 - 2 cos(theta) together with cos(pi - 2 theta) = 1.
inline std::pair<CosineRelation, CosineRelation> right_angle_relations() {
    CosineRelation rel1;
    rel1.lhs = Laurent::term(Rational(1), 0, 2);
    rel1.base = Laurent::term(Rational(1), 2, 0) + Laurent::term(Rational(1), -2, 0);
    rel1.cos_coeff = Laurent::term(Rational(-2), 0, 0);

    CosineRelation rel2;
    rel2.lhs = Laurent::term(Rational(1), 0, 0);
    rel2.base = Laurent();
    rel2.cos_coeff = Laurent::term(Rational(1), 0, 0);
    return {rel1, rel2};
}

}  // namespace waistcert
