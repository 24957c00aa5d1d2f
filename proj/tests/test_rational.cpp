#include <doctest.h>

#include <limits>
#include <stdexcept>

#include "quasimet/rational.hpp"

using quasimet::Rational;

TEST_CASE("rational arithmetic and normalization") {
    Rational a(1, 3);
    Rational b(1, 6);
    CHECK(a + b == Rational(1, 2));
    CHECK(a - b == Rational(1, 6));
    CHECK(a * b == Rational(1, 18));
    CHECK(a / b == Rational(2));
    CHECK(Rational(4, -6) == Rational(-2, 3));
    CHECK(-Rational(3, 7) == Rational(-3, 7));
    CHECK(abs(Rational(-3, 7)) == Rational(3, 7));
    CHECK(Rational(1, 3) < Rational(1, 2));
    CHECK(Rational(-1, 2) < Rational(-1, 3));
}

TEST_CASE("rational parsing") {
    CHECK(Rational::parse("13/10") == Rational(13, 10));
    CHECK(Rational::parse("-3/9") == Rational(-1, 3));
    CHECK(Rational::parse("7") == Rational(7));
    CHECK(Rational::parse("1.3") == Rational(13, 10));
    CHECK(Rational::parse("-0.25") == Rational(-1, 4));
    CHECK(Rational::parse("2.5e-2") == Rational(1, 40));
    CHECK(Rational::parse("1e3") == Rational(1000));
    CHECK(Rational::parse(" 0.7 ") == Rational(7, 10));
    CHECK_THROWS_AS(Rational::parse("1/0"), std::invalid_argument);
    CHECK_THROWS_AS(Rational::parse("abc"), std::invalid_argument);
    CHECK_THROWS_AS(Rational::parse(""), std::invalid_argument);
    CHECK_THROWS_AS(Rational::parse("1.2.3"), std::invalid_argument);
}

TEST_CASE("from_double reads the shortest decimal literal") {
    CHECK(Rational::from_double(1.3) == Rational(13, 10));
    CHECK(Rational::from_double(0.7) == Rational(7, 10));
    CHECK(Rational::from_double(-0.3) == Rational(-3, 10));
    CHECK(Rational::from_double(2.0) == Rational(2));
    CHECK_THROWS(Rational::from_double(std::numeric_limits<double>::quiet_NaN()));
}

TEST_CASE("overflow is detected, not wrapped") {
    Rational big(std::numeric_limits<std::int64_t>::max() / 2, 1);
    CHECK_THROWS_AS(big * Rational(8), std::overflow_error);
    CHECK_THROWS_AS(Rational(1, 3) / Rational(0), std::domain_error);
}

TEST_CASE("formatting round-trips") {
    CHECK(Rational(13, 10).to_string() == "13/10");
    CHECK(Rational(-4).to_string() == "-4");
    CHECK(Rational::parse(Rational(22, 7).to_string()) == Rational(22, 7));
    CHECK(Rational(1, 2).to_double() == doctest::Approx(0.5));
}
