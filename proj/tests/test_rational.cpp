#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>
#include <sstream>

#include "entroscope/rational.hpp"

using namespace entroscope;

TEST_CASE("construction reduces to lowest terms with positive denominator") {
    const Rational q(6, -4);
    CHECK(q.numerator() == -3);
    CHECK(q.denominator() == 2);
    CHECK(Rational(0, 5) == Rational(0));
    CHECK_THROWS_AS(Rational(1, 0), ValidationError);
}

TEST_CASE("parsing accepts p/q, integers and exact decimals") {
    CHECK(*Rational::parse("3/4") == Rational(3, 4));
    CHECK(*Rational::parse("-3/4") == Rational(-3, 4));
    CHECK(*Rational::parse("10/4") == Rational(5, 2));
    CHECK(*Rational::parse("7") == Rational(7));
    CHECK(*Rational::parse(" 1/2 ") == Rational(1, 2));

    // decimals convert exactly in base ten, never through doubles
    CHECK(*Rational::parse("0.25") == Rational(1, 4));
    CHECK(*Rational::parse("-0.125") == Rational(-1, 8));
    CHECK(*Rational::parse("0.1") == Rational(1, 10));
    CHECK(*Rational::parse("2.") == Rational(2));
    CHECK(*Rational::parse(".5") == Rational(1, 2));

    CHECK(!Rational::parse(""));
    CHECK(!Rational::parse("1/0"));
    CHECK(!Rational::parse("a/b"));
    CHECK(!Rational::parse("1.2.3"));
    CHECK(!Rational::parse("--2"));
    CHECK(!Rational::parse("."));
}

TEST_CASE("formatting round-trips exactly") {
    std::mt19937_64 rng(11);
    for (int i = 0; i < 500; ++i) {
        const long num = static_cast<long>(rng() % 20001) - 10000;
        const long den = 1 + static_cast<long>(rng() % 9999);
        const Rational q(num, den);
        CHECK(*Rational::parse(q.str()) == q);
    }
    CHECK(Rational(1, 2).str() == "1/2");
    CHECK(Rational(-1, 2).str() == "-1/2");
    CHECK(Rational(4, 2).str() == "2");
}

TEST_CASE("arithmetic is exact") {
    const Rational a(1, 3), b(1, 6);
    CHECK(a + b == Rational(1, 2));
    CHECK(a - b == Rational(1, 6));
    CHECK(a * b == Rational(1, 18));
    CHECK(a / b == Rational(2));
    CHECK(-a == Rational(-1, 3));
    CHECK(abs(Rational(-5, 7)) == Rational(5, 7));
    CHECK_THROWS_AS(a / Rational(0), ValidationError);

    // denominators that overflow any fixed-width integer
    Rational big(1);
    for (int i = 0; i < 40; ++i) big *= Rational(1, 64);
    CHECK(big > Rational(0));
    CHECK(big * Rational(Integer(1), big.numerator()) / Rational(Integer(1), big.denominator()) ==
          Rational(1));
}

TEST_CASE("ordering is total and exact") {
    CHECK(Rational(1, 3) < Rational(1, 2));
    CHECK(Rational(-1, 2) < Rational(-1, 3));
    CHECK(min(Rational(2, 7), Rational(1, 3)) == Rational(2, 7));
    CHECK(max(Rational(2, 7), Rational(1, 3)) == Rational(1, 3));
    CHECK(Rational(1, 3).sign() == 1);
    CHECK(Rational(-1, 3).sign() == -1);
    CHECK(Rational(0).sign() == 0);
}

TEST_CASE("interval helpers") {
    const Interval iv{Rational(1, 4), Rational(3, 4)};
    CHECK(iv.length() == Rational(1, 2));
    CHECK(iv.contains(Rational(1, 2)));
    CHECK(!iv.contains(Rational(7, 8)));
    CHECK(iv.contains(Interval{Rational(1, 4), Rational(1, 2)}));
    CHECK(!iv.contains(Interval{Rational(0), Rational(1, 2)}));
    std::ostringstream os;
    os << iv;
    CHECK(os.str() == "[1/4, 3/4]");
}
