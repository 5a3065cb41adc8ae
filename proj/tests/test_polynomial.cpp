#include <catch2/catch_amalgamated.hpp>

#include <random>

#include "waistcert/bipoly.hpp"
#include "waistcert/polynomial.hpp"

using namespace waistcert;

namespace {

UniPoly P(const std::string& s) { return unipoly_from_string(s); }

// 0 = w^14 - 2w^12 + 2w^10 - 2w^8 + 2w^2 - 1, the relation forced when
// the 1/e-ball coincides with a 1/w^3-ball.
UniPoly degree14() { return P("w^14 - 2*w^12 + 2*w^10 - 2*w^8 + 2*w^2 - 1"); }

UniPoly random_poly(std::mt19937& rng, int max_deg) {
    std::uniform_int_distribution<int> deg(0, max_deg);
    std::uniform_int_distribution<long> num(-9, 9);
    std::uniform_int_distribution<long> den(1, 4);
    int d = deg(rng);
    std::vector<Rational> c(d + 1);
    for (auto& x : c) x = rat(num(rng), den(rng));
    return UniPoly(std::move(c));
}

}  // namespace

TEST_CASE("expand_product basics") {
    CHECK(expand_product({P("w - 1"), P("w + 1")}) == P("w^2 - 1"));
    CHECK(expand_product({}) == P("1"));
}

TEST_CASE("the printed factorization has the wrong degree") {
    UniPoly printed = expand_product({P("w - 1"), P("w + 1"), P("w^3 - w^2 + 1"),
                                      P("w^6 - w^2 - 1")});
    CHECK(printed.degree() == 11);
    CHECK(degree14().degree() == 14);
    CHECK(!(printed == degree14()));
}

TEST_CASE("corrected factorization reproduces the degree-14 polynomial") {
    UniPoly product = expand_product(
        {P("w - 1"), P("w + 1"), P("w^6 - w^4 + 2*w^2 - 1"), P("w^6 - w^2 - 1")});
    CHECK(product == degree14());
}

TEST_CASE("division") {
    auto [q, r] = divide(degree14(), P("w^8 - w^6 - w^4 + 1"));
    CHECK(q == P("w^6 - w^4 + 2*w^2 - 1"));
    CHECK(r.is_zero());

    auto [q1, r1] = divide(degree14(), P("1"));
    CHECK(q1 == degree14());
    CHECK(r1.is_zero());

    auto [q2, r2] = divide(P("w^2 - 1"), P("w - 1"));
    CHECK(q2 == P("w + 1"));
    CHECK(r2.is_zero());

    CHECK_THROWS_AS(divide(P("w"), UniPoly()), std::domain_error);
}

TEST_CASE("division round-trip on random polynomials") {
    std::mt19937 rng(23);
    for (int i = 0; i < 200; ++i) {
        UniPoly p = random_poly(rng, 9);
        UniPoly d = random_poly(rng, 5);
        if (d.is_zero()) continue;
        auto [q, r] = divide(p, d);
        CHECK(q * d + r == p);
        CHECK(r.degree() < d.degree());
    }
}

TEST_CASE("degree-14 divisibility pins") {
    UniPoly deg14 = degree14();
    CHECK(divide(deg14, P("w - 1")).remainder.is_zero());
    CHECK(divide(deg14, P("w + 1")).remainder.is_zero());
    CHECK(divide(deg14, P("w^6 - w^2 - 1")).remainder.is_zero());
    UniPoly triple = expand_product({P("w - 1"), P("w + 1"), P("w^6 - w^2 - 1")});
    auto [q, r] = divide(deg14, triple);
    CHECK(r.is_zero());
    CHECK(q == P("w^6 - w^4 + 2*w^2 - 1"));
}

TEST_CASE("waist root of w^6 - w^2 - 1") {
    UniPoly waist = P("w^6 - w^2 - 1");
    auto roots = isolate_real_roots(waist, rat(1), rat(2), rat(1, 100000000));
    REQUIRE(roots.size() == 1);
    const auto& iv = roots[0];
    CHECK(iv.width() <= rat(1, 100000000));
    CHECK(waist.sign_at(iv.lo) * waist.sign_at(iv.hi) < 0);
    // w = 1.1509639253 to within the requested precision (and 1.150964
    // at the coarser printed precision).
    Rational ref = rat_from_string("11509639253/10000000000");
    CHECK(rat_abs(iv.midpoint() - ref) < rat(2, 100000000));
    CHECK(rat_abs(iv.midpoint() - rat_from_string("1150964/1000000")) < rat(1, 1000000));
    // The square of the enclosure satisfies x^3 - x - 1 = 0 (the plastic
    // number) within the interval width.
    UniPoly plastic = unipoly_from_string("w^3 - w - 1");
    CHECK(plastic.sign_at(iv.lo * iv.lo) * plastic.sign_at(iv.hi * iv.hi) < 0);
}

TEST_CASE("sqrt2 isolation") {
    auto roots = isolate_real_roots(P("w^2 - 2"), rat(0), rat(10), rat(1, 100000000));
    REQUIRE(roots.size() == 1);
    Rational ref = rat_from_string("141421356/100000000");
    CHECK(rat_abs(roots[0].midpoint() - ref) < rat(2, 100000000));
}

TEST_CASE("cofactor has no real root above 1") {
    UniPoly cof = P("w^6 - w^4 + 2*w^2 - 1");
    // Brute-force sign scan oracle: positive at a dense grid of points.
    for (Rational x = rat(1); x <= rat(100); x += rat(1, 4)) {
        CHECK(cof.sign_at(x) > 0);
    }
    CHECK(isolate_real_roots(cof, rat(1), rat(100), rat(1, 1000)).empty());
    // It does have a root below 1 (value -1 at 0, +1 at 1).
    CHECK(isolate_real_roots(cof, rat(0), rat(1), rat(1, 1000)).size() == 1);
}

TEST_CASE("isolation completeness on random factored polynomials") {
    std::mt19937 rng(29);
    std::uniform_int_distribution<int> nroots(1, 6);
    std::uniform_int_distribution<long> num(-30, 30);
    std::uniform_int_distribution<long> den(1, 6);
    for (int trial = 0; trial < 60; ++trial) {
        int n = nroots(rng);
        std::vector<Rational> roots;
        for (int i = 0; i < n; ++i) {
            Rational r = rat(num(rng), den(rng));
            bool dup = false;
            for (const auto& x : roots) dup = dup || x == r;
            if (!dup) roots.push_back(r);
        }
        std::vector<UniPoly> factors;
        for (const auto& r : roots)
            factors.push_back(UniPoly(std::vector<Rational>{-r, Rational(1)}));
        // A factor with no real roots, to exercise spurious-free behavior.
        factors.push_back(unipoly_from_string("w^2 + 3"));
        UniPoly p = expand_product(factors);
        auto found = isolate_real_roots(p, rat(-40), rat(40), rat(1, 1024));
        REQUIRE(found.size() == roots.size());
        std::sort(roots.begin(), roots.end());
        for (std::size_t i = 0; i < roots.size(); ++i) {
            CHECK(found[i].lo < roots[i]);
            CHECK(roots[i] < found[i].hi);
        }
        // Pairwise disjoint.
        for (std::size_t i = 1; i < found.size(); ++i) CHECK(found[i - 1].hi <= found[i].lo);
    }
}

TEST_CASE("isolation corner cases") {
    // Repeated root: square-free reduction still finds it once.
    auto rep = isolate_real_roots(P("w^2 - 2*w + 1"), rat(-10), rat(10), rat(1, 1000));
    REQUIRE(rep.size() == 1);
    CHECK(rep[0].contains(rat(1)));

    // Rational root: the certificate still shows a sign change.
    auto exact5 = isolate_real_roots(P("w - 5"), rat(0), rat(10), rat(1, 1000));
    REQUIRE(exact5.size() == 1);
    CHECK(exact5[0].contains(rat(5)));
    CHECK(exact5[0].target.sign_at(exact5[0].lo) * exact5[0].target.sign_at(exact5[0].hi) < 0);

    // Roots at range endpoints are excluded (open range).
    auto open_range = isolate_real_roots(expand_product({P("w - 1"), P("w - 3")}), rat(1), rat(5),
                                         rat(1, 1000));
    REQUIRE(open_range.size() == 1);
    CHECK(open_range[0].contains(rat(3)));

    CHECK_THROWS_AS(isolate_real_roots(UniPoly(), rat(0), rat(1), rat(1, 10)),
                    std::domain_error);
}

TEST_CASE("sturm count sees all six real roots of the degree-14 polynomial") {
    UniPoly sf = square_free_part(degree14());
    CHECK(sf == degree14());  // already square-free
    auto chain = sturm_chain(sf);
    CHECK(sturm_root_count(chain, rat(-2), rat(2)) == 6);
    CHECK(isolate_real_roots(degree14(), rat(-2), rat(2), rat(1, 1000)).size() == 6);
}

TEST_CASE("univariate text round-trip") {
    std::mt19937 rng(31);
    for (int i = 0; i < 100; ++i) {
        UniPoly p = random_poly(rng, 8);
        CHECK(unipoly_from_string(to_string(p)) == p);
    }
    CHECK(to_string(UniPoly()) == "0");
    CHECK(to_string(P("w^6 - w^2 - 1")) == "w^6 - w^2 - 1");
}

TEST_CASE("bivariate arithmetic and text round-trip") {
    BiPoly p = bipoly_from_string("w^4 - e^2*w^2 + 1");
    CHECK(p.degree_w() == 4);
    CHECK(p.degree_e() == 2);
    CHECK(p.coeff(2, 2) == rat(-1));
    CHECK(to_string(p) == "w^4 - w^2*e^2 + 1");
    CHECK(bipoly_from_string(to_string(p)) == p);
    CHECK(p.is_even_even());
    CHECK(!bipoly_from_string("e*w - 1").is_even_even());

    BiPoly q = bipoly_from_string("w^2 + e");
    CHECK(to_string(p * q - q * p) == "0");
    CHECK((p + q) - q == p);

    CHECK(p.substitute_e_w_squared() == unipoly_from_string("-w^6 + w^4 + 1"));
}

TEST_CASE("exact evaluation modes") {
    BiPoly upper_e = bipoly_from_string("w^4 - e^2*w^2 + 1");
    CHECK(eval_exact(upper_e, point_one_sqrt2()).is_zero());
    CHECK(eval_exact(upper_e, point_I()).is_zero());
    CHECK(eval_exact(upper_e, point_III()) == Tower(Rational(1)));

    // Odd-odd monomials go through the w*e product.
    BiPoly lower_e = bipoly_from_string("e*w - 1");
    CHECK(eval_exact(lower_e, point_II()).is_zero());
    CHECK(eval_exact(lower_e, point_III()) == Tower::sqrt2() - Tower(Rational(1)));
    CHECK(eval_exact(lower_e, point_I()) == Tower::sqrt3() - Tower(Rational(1)));

    // Mixed parity cannot be represented at a substituted point.
    BiPoly mixed = bipoly_from_string("w*e^2");
    CHECK_THROWS_AS(eval_exact(mixed, point_III()), std::domain_error);
    // ...but evaluates fine at a direct point.
    CHECK(eval_exact(mixed, point_one_sqrt2()) == Tower(Rational(2)));
}

TEST_CASE("implicit slope of a linear polynomial") {
    BiPoly line = bipoly_from_string("w + e");
    CHECK(implicit_slope(line, point_one_sqrt2()) == Tower(Rational(-1)));
    CHECK(implicit_slope(line, point_figure_eight()) == Tower(Rational(-1)));
    BiPoly const_in_e = bipoly_from_string("w^2 - 1");
    CHECK_THROWS_AS(implicit_slope(const_in_e, point_one_sqrt2()), std::domain_error);
}
