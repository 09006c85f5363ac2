#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>

#include "zerodim/bigint.hpp"
#include "zerodim/rational.hpp"

using namespace zerodim;

TEST_CASE("small arithmetic agrees with long long") {
    std::mt19937_64 rng(7);
    for (int iter = 0; iter < 2000; ++iter) {
        long long a = static_cast<long long>(rng() % 2000001) - 1000000;
        long long b = static_cast<long long>(rng() % 2000001) - 1000000;
        BigInt A(a), B(b);
        CHECK((A + B).to_longlong() == a + b);
        CHECK((A - B).to_longlong() == a - b);
        CHECK((A * B).to_longlong() == a * b);
        if (b != 0) {
            CHECK((A / B).to_longlong() == a / b);
            CHECK((A % B).to_longlong() == a % b);
        }
        CHECK((A < B) == (a < b));
        CHECK((A == B) == (a == b));
    }
}

TEST_CASE("multi-limb divmod reconstructs the dividend") {
    std::mt19937_64 rng(11);
    for (int iter = 0; iter < 400; ++iter) {
        BigInt a(1), b(1);
        int la = 1 + static_cast<int>(rng() % 6), lb = 1 + static_cast<int>(rng() % 4);
        for (int i = 0; i < la; ++i) a = a * BigInt(rng() | 1ull);
        for (int i = 0; i < lb; ++i) b = b * BigInt(rng() | 1ull);
        BigInt q, r;
        BigInt::divmod(a, b, q, r);
        CHECK(q * b + r == a);
        CHECK(r < b);
        CHECK(!r.is_negative());
    }
}

TEST_CASE("decimal round trip") {
    std::mt19937_64 rng(13);
    for (int iter = 0; iter < 200; ++iter) {
        BigInt a(1);
        for (int i = 0, n = 1 + static_cast<int>(rng() % 5); i < n; ++i) a = a * BigInt(rng());
        if (rng() & 1) a = -a;
        CHECK(BigInt::parse(a.to_string()) == a);
    }
    CHECK(BigInt::parse("0").to_string() == "0");
    CHECK(BigInt::parse("-0").to_string() == "0");
    CHECK(BigInt::parse("00012").to_string() == "12");
}

TEST_CASE("pow2 and pow") {
    CHECK(BigInt::pow2(0) == BigInt(1));
    CHECK(BigInt::pow2(40) == BigInt(1ll << 40));
    CHECK(BigInt::pow(BigInt(4), 10) == BigInt(1048576));
    CHECK(BigInt::pow2(100).to_string() == "1267650600228229401496703205376");
}

TEST_CASE("gcd and divisibility") {
    CHECK(BigInt::gcd(BigInt(12), BigInt(18)) == BigInt(6));
    CHECK(BigInt::gcd(BigInt(0), BigInt(5)) == BigInt(5));
    std::mt19937_64 rng(17);
    for (int iter = 0; iter < 200; ++iter) {
        BigInt a(rng() % 100000), b(rng() % 100000), g = BigInt::gcd(a, b);
        if (!g.is_zero()) {
            CHECK(g.divides(a));
            CHECK(g.divides(b));
        }
    }
    CHECK(BigInt(3).divides(BigInt(6)));
    CHECK(!BigInt(3).divides(BigInt(5)));
}

TEST_CASE("floor division semantics") {
    BigInt q, r;
    BigInt::floordiv(BigInt(-7), BigInt(2), q, r);
    CHECK(q == BigInt(-4));
    CHECK(r == BigInt(1));
    BigInt::floordiv(BigInt(7), BigInt(2), q, r);
    CHECK(q == BigInt(3));
    CHECK(r == BigInt(1));
}

TEST_CASE("rational arithmetic and canonical form") {
    Rational a(1, 3), b(1, 6);
    CHECK((a + b) == Rational(1, 2));
    CHECK((a - b) == Rational(1, 6));
    CHECK((a * b) == Rational(1, 18));
    CHECK((a / b) == Rational(2));
    CHECK(Rational(4, 8).num() == BigInt(1));
    CHECK(Rational(4, 8).den() == BigInt(2));
    CHECK(Rational(BigInt(3), BigInt(-6)) == Rational(-1, 2));
    CHECK(Rational::parse("3/4") == Rational(3, 4));
    CHECK(Rational::parse("0.25") == Rational(1, 4));
    CHECK(Rational::parse("-2") == Rational(-2));
    CHECK(Rational(7, 2).floor() == BigInt(3));
    CHECK(Rational(7, 2).ceil() == BigInt(4));
    CHECK(Rational(-7, 2).floor() == BigInt(-4));
    CHECK(Rational(-7, 2).ceil() == BigInt(-3));
    CHECK(Rational::pow2(-3) == Rational(1, 8));
    CHECK(Rational::pow2(4) == Rational(16));
}

TEST_CASE("rational ordering is exact") {
    CHECK(Rational(1, 3) < Rational(34, 100));
    CHECK(Rational(-1, 2) < Rational(1, 1000000));
    CHECK(Rational(10, 3) > Rational(3));
}

TEST_CASE("extended rationals order the infinity marker last") {
    ExtRational inf = ExtRational::infinity();
    CHECK(ExtRational(Rational(5)) < inf);
    CHECK(inf == ExtRational::infinity());
    CHECK(inf.to_string() == "inf");
    CHECK_THROWS(inf.value());
}
