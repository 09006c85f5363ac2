#ifndef ZERODIM_BIGINT_HPP
#define ZERODIM_BIGINT_HPP

#include <cstdint>
#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

namespace zerodim {

/// Arbitrary-precision signed integer, sign-magnitude with 32-bit limbs.
/// Zero is the empty magnitude with positive sign.
class BigInt {
public:
    BigInt() : negative_(false) {}
    BigInt(long long v);
    BigInt(unsigned long long v);
    BigInt(int v) : BigInt(static_cast<long long>(v)) {}
    BigInt(unsigned v) : BigInt(static_cast<unsigned long long>(v)) {}
    BigInt(std::size_t v) : BigInt(static_cast<unsigned long long>(v)) {}

    static BigInt parse(std::string_view decimal);
    static BigInt pow2(unsigned long long e);
    static BigInt pow(const BigInt& base, unsigned long long e);

    bool is_zero() const { return mag_.empty(); }
    bool is_negative() const { return negative_; }
    bool is_one() const { return !negative_ && mag_.size() == 1 && mag_[0] == 1; }
    bool is_even() const { return mag_.empty() || (mag_[0] & 1u) == 0; }

    int sign() const { return mag_.empty() ? 0 : (negative_ ? -1 : 1); }
    std::size_t bit_length() const;

    BigInt operator-() const;
    BigInt abs() const;

    BigInt& operator+=(const BigInt& rhs);
    BigInt& operator-=(const BigInt& rhs);
    BigInt& operator*=(const BigInt& rhs);
    BigInt& operator/=(const BigInt& rhs);  // truncates toward zero
    BigInt& operator%=(const BigInt& rhs);  // sign follows dividend

    friend BigInt operator+(BigInt a, const BigInt& b) { return a += b; }
    friend BigInt operator-(BigInt a, const BigInt& b) { return a -= b; }
    friend BigInt operator*(BigInt a, const BigInt& b) { return a *= b; }
    friend BigInt operator/(BigInt a, const BigInt& b) { return a /= b; }
    friend BigInt operator%(BigInt a, const BigInt& b) { return a %= b; }

    BigInt& operator++() { return *this += BigInt(1ll); }
    BigInt& operator--() { return *this -= BigInt(1ll); }

    /// Quotient and remainder truncated toward zero; remainder carries the
    /// dividend's sign.
    static void divmod(const BigInt& a, const BigInt& b, BigInt& q, BigInt& r);
    /// Floor division: q = floor(a / b), 0 <= r < |b| scaled to b's sign.
    static void floordiv(const BigInt& a, const BigInt& b, BigInt& q, BigInt& r);

    static BigInt gcd(BigInt a, BigInt b);

    bool divides(const BigInt& other) const;  // *this | other

    int compare(const BigInt& rhs) const;
    friend bool operator==(const BigInt& a, const BigInt& b) { return a.compare(b) == 0; }
    friend bool operator!=(const BigInt& a, const BigInt& b) { return a.compare(b) != 0; }
    friend bool operator<(const BigInt& a, const BigInt& b) { return a.compare(b) < 0; }
    friend bool operator<=(const BigInt& a, const BigInt& b) { return a.compare(b) <= 0; }
    friend bool operator>(const BigInt& a, const BigInt& b) { return a.compare(b) > 0; }
    friend bool operator>=(const BigInt& a, const BigInt& b) { return a.compare(b) >= 0; }

    std::string to_string() const;
    friend std::ostream& operator<<(std::ostream& os, const BigInt& v);

    /// Exact conversion; throws std::overflow_error if out of range.
    long long to_longlong() const;
    bool fits_longlong() const;

private:
    static int compare_mag(const std::vector<uint32_t>& a, const std::vector<uint32_t>& b);
    static void add_mag(std::vector<uint32_t>& a, const std::vector<uint32_t>& b);
    static void sub_mag(std::vector<uint32_t>& a, const std::vector<uint32_t>& b);  // a >= b
    static std::vector<uint32_t> mul_mag(const std::vector<uint32_t>& a, const std::vector<uint32_t>& b);
    static void divmod_mag(const std::vector<uint32_t>& a, const std::vector<uint32_t>& b,
                           std::vector<uint32_t>& q, std::vector<uint32_t>& r);
    void trim();

    bool negative_;
    std::vector<uint32_t> mag_;  // little-endian limbs, no trailing zeros
};

}  // namespace zerodim

#endif
