#include "zerodim/rational.hpp"

#include <ostream>
#include <stdexcept>

namespace zerodim {

Rational::Rational(BigInt num, BigInt den) : num_(std::move(num)), den_(std::move(den)) {
    if (den_.is_zero()) throw std::domain_error("Rational: zero denominator");
    normalize();
}

void Rational::normalize() {
    if (den_.is_negative()) {
        num_ = -num_;
        den_ = -den_;
    }
    if (num_.is_zero()) {
        den_ = BigInt(1ll);
        return;
    }
    BigInt g = BigInt::gcd(num_, den_);
    if (!g.is_one()) {
        num_ /= g;
        den_ /= g;
    }
}

Rational Rational::parse(std::string_view s) {
    auto slash = s.find('/');
    if (slash != std::string_view::npos) {
        BigInt p = BigInt::parse(s.substr(0, slash));
        BigInt q = BigInt::parse(s.substr(slash + 1));
        return Rational(std::move(p), std::move(q));
    }
    auto dot = s.find('.');
    if (dot != std::string_view::npos) {
        std::string digits(s.substr(0, dot));
        std::string_view frac = s.substr(dot + 1);
        digits.append(frac);
        BigInt p = BigInt::parse(digits);
        BigInt q = BigInt::pow(BigInt(10ll), frac.size());
        return Rational(std::move(p), std::move(q));
    }
    return Rational(BigInt::parse(s));
}

Rational Rational::operator-() const {
    Rational out = *this;
    out.num_ = -out.num_;
    return out;
}

Rational& Rational::operator+=(const Rational& rhs) {
    num_ = num_ * rhs.den_ + rhs.num_ * den_;
    den_ *= rhs.den_;
    normalize();
    return *this;
}

Rational& Rational::operator-=(const Rational& rhs) {
    num_ = num_ * rhs.den_ - rhs.num_ * den_;
    den_ *= rhs.den_;
    normalize();
    return *this;
}

Rational& Rational::operator*=(const Rational& rhs) {
    num_ *= rhs.num_;
    den_ *= rhs.den_;
    normalize();
    return *this;
}

Rational& Rational::operator/=(const Rational& rhs) {
    if (rhs.num_.is_zero()) throw std::domain_error("Rational: division by zero");
    num_ *= rhs.den_;
    den_ *= rhs.num_;
    normalize();
    return *this;
}

int Rational::compare(const Rational& rhs) const {
    return (num_ * rhs.den_).compare(rhs.num_ * den_);
}

BigInt Rational::floor() const {
    BigInt q, r;
    BigInt::floordiv(num_, den_, q, r);
    return q;
}

BigInt Rational::ceil() const {
    BigInt q, r;
    BigInt::floordiv(num_, den_, q, r);
    if (!r.is_zero()) q += BigInt(1ll);
    return q;
}

Rational Rational::pow2(long long e) {
    if (e >= 0) return Rational(BigInt::pow2(static_cast<unsigned long long>(e)));
    return Rational(BigInt(1ll), BigInt::pow2(static_cast<unsigned long long>(-e)));
}

std::string Rational::to_string() const {
    if (den_.is_one()) return num_.to_string();
    return num_.to_string() + "/" + den_.to_string();
}

std::ostream& operator<<(std::ostream& os, const Rational& v) { return os << v.to_string(); }

const Rational& ExtRational::value() const {
    if (infinite_) throw std::logic_error("ExtRational: value() on infinity");
    return value_;
}

int ExtRational::compare(const ExtRational& rhs) const {
    if (infinite_ && rhs.infinite_) return 0;
    if (infinite_) return 1;
    if (rhs.infinite_) return -1;
    return value_.compare(rhs.value_);
}

std::string ExtRational::to_string() const { return infinite_ ? "inf" : value_.to_string(); }

}  // namespace zerodim
