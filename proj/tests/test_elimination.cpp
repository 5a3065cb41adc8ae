#include <catch2/catch_amalgamated.hpp>

#include <cmath>

#include "waistcert/elimination.hpp"

using namespace waistcert;

TEST_CASE("angle elimination reproduces the degree-14 polynomial") {
    auto [rel1, rel2] = coincident_ball_relations();
    EliminationResult res = eliminate_angle(rel1, rel2);
    BiPoly expected = bipoly_from_string("w^14 - 2*w^12 + 2*w^10 - 2*w^8 + 2*w^2 - 1");
    CHECK(res.polynomial == expected);
    CHECK(res.cleared_w_power == 8);
    CHECK(res.cleared_e_power == 0);
    CHECK(res.polynomial.all_integer_coefficients());
    CHECK(res.polynomial.to_univariate_w() ==
          unipoly_from_string("w^14 - 2*w^12 + 2*w^10 - 2*w^8 + 2*w^2 - 1"));
}

TEST_CASE("right-angle degeneration reproduces the upper-e equality locus") {
    auto [rel1, rel2] = right_angle_relations();
    EliminationResult res = eliminate_angle(rel1, rel2);
    // The residual is 2 cos^2(theta), so the cleared polynomial is the
    // square of the upper-e left-hand side: same zero locus.
    BiPoly upper_e = bipoly_from_string("w^4 - e^2*w^2 + 1");
    CHECK(res.polynomial == upper_e * upper_e);
}

TEST_CASE("numeric re-substitution of the eliminated relation") {
    auto [rel1, rel2] = coincident_ball_relations();
    EliminationResult res = eliminate_angle(rel1, rel2);
    for (double w : {1.15, 1.05, 1.3, 0.9}) {
        // Solve the first relation for cos(theta) numerically...
        double cos_theta = (w * w + 1.0 / (w * w) - std::pow(w, 4)) / 2.0;
        // ...and plug into the second; the residual must match the
        // cleared polynomial's prediction.
        double lhs2 = std::pow(w, -8.0);
        double rhs2 = w * w + std::pow(w, -6.0) -
                      (2.0 / (w * w)) * (1.0 - 2.0 * cos_theta * cos_theta);
        double direct_residual = lhs2 - rhs2;
        CHECK(std::abs(direct_residual - res.residual(w, 1.0)) < 1e-12);
    }
}

TEST_CASE("malformed relations are rejected") {
    auto [rel1, rel2] = coincident_ball_relations();
    CosineRelation bad = rel1;
    bad.cos_coeff = Laurent::term(Rational(1), 0, 0) + Laurent::term(Rational(1), 1, 0);
    CHECK_THROWS_AS(eliminate_angle(bad, rel2), std::invalid_argument);
    CHECK_THROWS_AS(eliminate_angle(rel1, bad), std::invalid_argument);

    // A pair carrying no new information eliminates to zero and is
    // rejected: cos(theta) = 0 from the first relation makes the second
    // relation 1 = 0 + 1 * cos(pi - 2 theta) an identity.
    CosineRelation forces_zero;
    forces_zero.lhs = Laurent::term(Rational(1), 0, 0);
    forces_zero.base = Laurent::term(Rational(1), 0, 0);
    forces_zero.cos_coeff = Laurent::term(Rational(1), 0, 0);
    CHECK_THROWS_AS(eliminate_angle(forces_zero, right_angle_relations().second),
                    std::invalid_argument);
}
