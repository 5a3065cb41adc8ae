#include <catch2/catch_amalgamated.hpp>

#include <random>

#include "waistcert/interval.hpp"
#include "waistcert/tower.hpp"

using namespace waistcert;

namespace {

Tower random_tower(std::mt19937& rng) {
    std::uniform_int_distribution<long> num(-20, 20);
    std::uniform_int_distribution<long> den(1, 10);
    auto r = [&] { return rat(num(rng), den(rng)); };
    return Tower(r(), r(), r(), r());
}

}  // namespace

TEST_CASE("defining relations") {
    Tower r2 = Tower::sqrt2();
    Tower r3 = Tower::sqrt3();
    CHECK(r2 * r2 == Tower(Rational(2)));
    CHECK((Tower(Rational(1)) + r2) * (Tower(Rational(1)) - r2) == Tower(Rational(-1)));
    CHECK(r2 * r3 == Tower::sqrt6());
    CHECK(r2 * Tower::sqrt6() == rat(2) * r3);
    CHECK(r3 * Tower::sqrt6() == rat(3) * r2);
}

TEST_CASE("exact sign") {
    CHECK(tower_sign(Tower()) == 0);
    CHECK(tower_sign(rat(4) * Tower::sqrt2() - Tower(Rational(1))) > 0);
    // Coefficient collection: 2r2 + 2r2 - 2r2 - r2 - r2 = 0.
    Tower r2 = Tower::sqrt2();
    Tower y_terms = rat(2) * r2 + rat(2) * r2 - rat(2) * r2 - r2 - r2;
    CHECK(tower_sign(y_terms) == 0);
    CHECK(y_terms.is_zero());

    // Cases that force the squaring comparisons.
    CHECK(tower_sign(Tower(Rational(7)) - rat(5) * Tower::sqrt2()) < 0);   // 49 < 50
    CHECK(tower_sign(Tower(Rational(17)) - rat(12) * Tower::sqrt2()) > 0); // 289 > 288
    CHECK(tower_sign(Tower(Rational(0), Rational(-7), Rational(0), Rational(5))) > 0);  // 5r6 > 7r2
    CHECK(tower_sign(rat(2) * Tower::sqrt2() - Tower::sqrt6() - Tower(rat(1, 2))) < 0);
    CHECK(tower_sign(Tower(Rational(1), Rational(1), Rational(-1), Rational(0))) > 0);
}

TEST_CASE("division and inverse") {
    std::mt19937 rng(7);
    for (int i = 0; i < 200; ++i) {
        Tower x = random_tower(rng);
        if (x.is_zero()) continue;
        Tower inv = tower_inverse(x);
        CHECK(x * inv == Tower(Rational(1)));
    }
    CHECK_THROWS_AS(tower_inverse(Tower()), std::domain_error);
    CHECK_THROWS_AS(Tower(Rational(1)) / Tower(), std::domain_error);
}

TEST_CASE("field axioms on random elements") {
    std::mt19937 rng(11);
    for (int i = 0; i < 200; ++i) {
        Tower x = random_tower(rng), y = random_tower(rng), z = random_tower(rng);
        CHECK((x + y) + z == x + (y + z));
        CHECK((x * y) * z == x * (y * z));
        CHECK(x * (y + z) == x * y + x * z);
        CHECK(x + (-x) == Tower());
        CHECK(x * y == y * x);
    }
}

TEST_CASE("sign agrees with a 100-digit enclosure") {
    std::mt19937 rng(13);
    int decided = 0;
    for (int i = 0; i < 100; ++i) {
        Tower x = random_tower(rng);
        RatInterval enc = tower_enclosure(x, 340);  // ~102 decimal digits
        int s = tower_sign(x);
        if (enc.strictly_positive()) {
            CHECK(s > 0);
            ++decided;
        } else if (enc.strictly_negative()) {
            CHECK(s < 0);
            ++decided;
        } else {
            // An enclosure this tight only straddles zero for zero itself.
            CHECK(s == 0);
        }
    }
    CHECK(decided > 90);
}

TEST_CASE("text round-trip") {
    std::mt19937 rng(17);
    for (int i = 0; i < 200; ++i) {
        Tower x = random_tower(rng);
        CHECK(tower_from_string(to_string(x)) == x);
    }
    CHECK(to_string(Tower()) == "0");
    CHECK(to_string(Tower(Rational(1), rat(-3, 2), Rational(0), Rational(1))) ==
          "1 - 3/2*r2 + r6");
    CHECK(tower_from_string("1 - 3/2*r2 + r6") ==
          Tower(Rational(1), rat(-3, 2), Rational(0), Rational(1)));
    CHECK_THROWS_AS(tower_from_string("1 + bogus"), std::invalid_argument);
}

TEST_CASE("square roots of rationals") {
    CHECK(tower_sqrt_of_rational(rat(2)) == Tower::sqrt2());
    CHECK(tower_sqrt_of_rational(rat(9, 4)) == Tower(rat(3, 2)));
    CHECK(tower_sqrt_of_rational(rat(3, 2)) == rat(1, 2) * Tower::sqrt6());
    CHECK(tower_sqrt_of_rational(rat(12)) == rat(2) * Tower::sqrt3());
    CHECK(tower_sqrt_of_rational(rat(0)) == Tower(Rational(0)));
    CHECK(!tower_sqrt_of_rational(rat(5)).has_value());
    CHECK(!tower_sqrt_of_rational(rat(-4)).has_value());
}
