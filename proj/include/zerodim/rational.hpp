#ifndef ZERODIM_RATIONAL_HPP
#define ZERODIM_RATIONAL_HPP

#include <iosfwd>
#include <string>
#include <string_view>

#include "zerodim/bigint.hpp"

namespace zerodim {

/// Exact rational, always canonical: den > 0, gcd(|num|, den) = 1, zero = 0/1.
class Rational {
public:
    Rational() : num_(0ll), den_(1ll) {}
    Rational(long long v) : num_(v), den_(1ll) {}
    Rational(int v) : num_(static_cast<long long>(v)), den_(1ll) {}
    Rational(BigInt v) : num_(std::move(v)), den_(1ll) {}
    Rational(BigInt num, BigInt den);

    /// Accepts "p/q", plain integers, and decimal strings like "0.25".
    static Rational parse(std::string_view s);

    const BigInt& num() const { return num_; }
    const BigInt& den() const { return den_; }

    bool is_zero() const { return num_.is_zero(); }
    bool is_negative() const { return num_.is_negative(); }
    bool is_integer() const { return den_.is_one(); }

    Rational operator-() const;

    Rational& operator+=(const Rational& rhs);
    Rational& operator-=(const Rational& rhs);
    Rational& operator*=(const Rational& rhs);
    Rational& operator/=(const Rational& rhs);

    friend Rational operator+(Rational a, const Rational& b) { return a += b; }
    friend Rational operator-(Rational a, const Rational& b) { return a -= b; }
    friend Rational operator*(Rational a, const Rational& b) { return a *= b; }
    friend Rational operator/(Rational a, const Rational& b) { return a /= b; }

    int compare(const Rational& rhs) const;
    friend bool operator==(const Rational& a, const Rational& b) { return a.compare(b) == 0; }
    friend bool operator!=(const Rational& a, const Rational& b) { return a.compare(b) != 0; }
    friend bool operator<(const Rational& a, const Rational& b) { return a.compare(b) < 0; }
    friend bool operator<=(const Rational& a, const Rational& b) { return a.compare(b) <= 0; }
    friend bool operator>(const Rational& a, const Rational& b) { return a.compare(b) > 0; }
    friend bool operator>=(const Rational& a, const Rational& b) { return a.compare(b) >= 0; }

    BigInt floor() const;
    BigInt ceil() const;

    /// Dyadic power 2^e for integer e (negative allowed).
    static Rational pow2(long long e);

    std::string to_string() const;  // "p/q" or "p" when integral
    friend std::ostream& operator<<(std::ostream& os, const Rational& v);

private:
    void normalize();
    BigInt num_, den_;
};

/// Rational extended with a distinct infinity marker (for oscillation values
/// and multi-map distances; infinity is never encoded as a sentinel number).
class ExtRational {
public:
    ExtRational() : infinite_(false) {}
    ExtRational(Rational v) : infinite_(false), value_(std::move(v)) {}
    static ExtRational infinity() {
        ExtRational e;
        e.infinite_ = true;
        return e;
    }

    bool is_infinite() const { return infinite_; }
    const Rational& value() const;  // throws on infinity

    int compare(const ExtRational& rhs) const;
    friend bool operator==(const ExtRational& a, const ExtRational& b) { return a.compare(b) == 0; }
    friend bool operator<(const ExtRational& a, const ExtRational& b) { return a.compare(b) < 0; }
    friend bool operator<=(const ExtRational& a, const ExtRational& b) { return a.compare(b) <= 0; }
    friend bool operator>(const ExtRational& a, const ExtRational& b) { return a.compare(b) > 0; }
    friend bool operator>=(const ExtRational& a, const ExtRational& b) { return a.compare(b) >= 0; }

    std::string to_string() const;  // "inf" when infinite

private:
    bool infinite_;
    Rational value_;
};

}  // namespace zerodim

#endif
