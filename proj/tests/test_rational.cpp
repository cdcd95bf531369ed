#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "lvnf/errors.hpp"
#include "lvnf/rational.hpp"

#include "test_support.hpp"

#include <random>

using lvnf::Rational;
using testsupport::R;

TEST_CASE("construction reduces to canonical form") {
    CHECK(R(2, 4) == R(1, 2));
    CHECK(R(2, 4).num() == 1);
    CHECK(R(2, 4).den() == 2);

    // Denominator sign is normalized away.
    CHECK(R(1, -2) == R(-1, 2));
    CHECK(R(-1, -2) == R(1, 2));
    CHECK_FALSE(R(1, -2).den() < 0);

    // Zero is always 0/1.
    CHECK(R(0, 7).den() == 1);
    CHECK(R(0, -7) == Rational());

    CHECK_THROWS_AS(R(1, 0), lvnf::DomainError);
}

TEST_CASE("arithmetic is exact") {
    CHECK(R(1, 3) + R(1, 6) == R(1, 2));
    CHECK(R(1, 3) - R(1, 2) == R(-1, 6));
    CHECK(R(2, 3) * R(9, 4) == R(3, 2));
    CHECK(R(2, 3) / R(4, 9) == R(3, 2));
    CHECK(-R(2, 3) == R(-2, 3));
    CHECK(R(-5, 7).abs() == R(5, 7));
    CHECK(R(3, 4).reciprocal() == R(4, 3));

    CHECK_THROWS_AS(R(1, 2) / Rational(), lvnf::DomainError);
    CHECK_THROWS_AS(Rational().reciprocal(), lvnf::DomainError);
}

TEST_CASE("ordering uses exact cross-multiplication") {
    CHECK(R(1, 3) < R(1, 2));
    CHECK(R(-1, 2) < R(-1, 3));
    CHECK(R(2, 4) <= R(1, 2));
    CHECK(R(7, 2) > R(10, 3));
}

TEST_CASE("string round trips") {
    CHECK(R(3, 2).str() == "3/2");
    CHECK(R(-3, 2).str() == "-3/2");
    CHECK(R(5).str() == "5");
    CHECK(Rational().str() == "0");

    CHECK(Rational::parse("3/2") == R(3, 2));
    CHECK(Rational::parse("-3/2") == R(-3, 2));
    CHECK(Rational::parse("3/-2") == R(-3, 2));
    CHECK(Rational::parse("4/2") == R(2));
    CHECK(Rational::parse("-7") == R(-7));
    CHECK(Rational::parse("+5") == R(5));
    CHECK(Rational::parse("1.25") == R(5, 4));
    CHECK(Rational::parse("-0.5") == R(-1, 2));
    CHECK(Rational::parse(".5") == R(1, 2));

    CHECK_THROWS_AS(Rational::parse(""), lvnf::ValidationError);
    CHECK_THROWS_AS(Rational::parse("a/b"), lvnf::ValidationError);
    CHECK_THROWS_AS(Rational::parse("1/0"), lvnf::ValidationError);
    CHECK_THROWS_AS(Rational::parse("1//2"), lvnf::ValidationError);
}

TEST_CASE("double conversion is exact for dyadics") {
    CHECK(Rational::from_double(0.5) == R(1, 2));
    CHECK(Rational::from_double(-0.125) == R(-1, 8));
    CHECK(Rational::from_double(3.0) == R(3));
    CHECK(Rational::from_double(0.0) == Rational());

    // 0.1 is not the rational 1/10, but it converts back to the same double.
    Rational tenth = Rational::from_double(0.1);
    CHECK(tenth != R(1, 10));
    CHECK(tenth.to_double() == 0.1);
    CHECK(tenth.fits_double());

    // 1/3 has no finite binary expansion.
    CHECK_FALSE(R(1, 3).fits_double());
    CHECK(R(1, 3).to_double() == doctest::Approx(1.0 / 3.0).epsilon(1e-15));

    CHECK_THROWS_AS(Rational::from_double(std::numeric_limits<double>::infinity()),
                    lvnf::DomainError);
}

TEST_CASE("random arithmetic identities hold exactly") {
    std::mt19937_64 gen(20260813u);
    for (int trial = 0; trial < 500; ++trial) {
        Rational a = testsupport::random_rational(gen, 50, 20);
        Rational b = testsupport::random_rational(gen, 50, 20);
        CHECK((a + b) - b == a);
        CHECK(a + b == b + a);
        if (!b.is_zero()) {
            CHECK((a * b) / b == a);
        }
        // Canonical invariant: gcd-reduced, positive denominator.
        Rational s = a * b + a - b;
        CHECK(s.den() > 0);
        CHECK(boost::multiprecision::gcd(s.num() < 0 ? lvnf::BigInt(-s.num()) : s.num(),
                                         s.den()) <= 1);
        // Exact double round trip for values built from doubles.
        double d = testsupport::random_dyadic(gen);
        CHECK(Rational::from_double(d).to_double() == d);
    }
}
