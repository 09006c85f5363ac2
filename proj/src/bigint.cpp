#include "zerodim/bigint.hpp"

#include <algorithm>
#include <ostream>
#include <stdexcept>

namespace zerodim {

namespace {
constexpr uint64_t kBase = 1ull << 32;
}

BigInt::BigInt(long long v) : negative_(v < 0) {
    unsigned long long u = negative_ ? ~static_cast<unsigned long long>(v) + 1ull
                                     : static_cast<unsigned long long>(v);
    while (u) {
        mag_.push_back(static_cast<uint32_t>(u & 0xffffffffull));
        u >>= 32;
    }
}

BigInt::BigInt(unsigned long long v) : negative_(false) {
    while (v) {
        mag_.push_back(static_cast<uint32_t>(v & 0xffffffffull));
        v >>= 32;
    }
}

void BigInt::trim() {
    while (!mag_.empty() && mag_.back() == 0) mag_.pop_back();
    if (mag_.empty()) negative_ = false;
}

BigInt BigInt::parse(std::string_view s) {
    std::size_t i = 0;
    bool neg = false;
    if (i < s.size() && (s[i] == '+' || s[i] == '-')) {
        neg = s[i] == '-';
        ++i;
    }
    if (i == s.size()) throw std::invalid_argument("BigInt::parse: empty numeral");
    BigInt out;
    // consume 9 decimal digits at a time
    while (i < s.size()) {
        uint32_t chunk = 0;
        uint32_t scale = 1;
        std::size_t j = 0;
        for (; j < 9 && i < s.size(); ++j, ++i) {
            char c = s[i];
            if (c < '0' || c > '9') throw std::invalid_argument("BigInt::parse: bad digit");
            chunk = chunk * 10 + static_cast<uint32_t>(c - '0');
            scale *= 10;
        }
        out *= BigInt(static_cast<unsigned long long>(scale));
        out += BigInt(static_cast<unsigned long long>(chunk));
    }
    out.negative_ = neg && !out.mag_.empty();
    return out;
}

BigInt BigInt::pow2(unsigned long long e) {
    BigInt out;
    out.mag_.assign(e / 32 + 1, 0);
    out.mag_.back() = 1u << (e % 32);
    return out;
}

BigInt BigInt::pow(const BigInt& base, unsigned long long e) {
    BigInt acc(1ll), b = base;
    while (e) {
        if (e & 1ull) acc *= b;
        e >>= 1;
        if (e) b *= b;
    }
    return acc;
}

std::size_t BigInt::bit_length() const {
    if (mag_.empty()) return 0;
    uint32_t top = mag_.back();
    std::size_t bits = (mag_.size() - 1) * 32;
    while (top) {
        ++bits;
        top >>= 1;
    }
    return bits;
}

BigInt BigInt::operator-() const {
    BigInt out = *this;
    if (!out.mag_.empty()) out.negative_ = !out.negative_;
    return out;
}

BigInt BigInt::abs() const {
    BigInt out = *this;
    out.negative_ = false;
    return out;
}

int BigInt::compare_mag(const std::vector<uint32_t>& a, const std::vector<uint32_t>& b) {
    if (a.size() != b.size()) return a.size() < b.size() ? -1 : 1;
    for (std::size_t i = a.size(); i-- > 0;)
        if (a[i] != b[i]) return a[i] < b[i] ? -1 : 1;
    return 0;
}

int BigInt::compare(const BigInt& rhs) const {
    if (negative_ != rhs.negative_) return negative_ ? -1 : 1;
    int c = compare_mag(mag_, rhs.mag_);
    return negative_ ? -c : c;
}

void BigInt::add_mag(std::vector<uint32_t>& a, const std::vector<uint32_t>& b) {
    if (a.size() < b.size()) a.resize(b.size(), 0);
    uint64_t carry = 0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        uint64_t sum = carry + a[i] + (i < b.size() ? b[i] : 0);
        a[i] = static_cast<uint32_t>(sum);
        carry = sum >> 32;
    }
    if (carry) a.push_back(static_cast<uint32_t>(carry));
}

void BigInt::sub_mag(std::vector<uint32_t>& a, const std::vector<uint32_t>& b) {
    int64_t borrow = 0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        int64_t diff = static_cast<int64_t>(a[i]) - borrow - (i < b.size() ? b[i] : 0);
        if (diff < 0) {
            diff += static_cast<int64_t>(kBase);
            borrow = 1;
        } else {
            borrow = 0;
        }
        a[i] = static_cast<uint32_t>(diff);
    }
}

BigInt& BigInt::operator+=(const BigInt& rhs) {
    if (negative_ == rhs.negative_) {
        add_mag(mag_, rhs.mag_);
    } else {
        int c = compare_mag(mag_, rhs.mag_);
        if (c == 0) {
            mag_.clear();
            negative_ = false;
        } else if (c > 0) {
            sub_mag(mag_, rhs.mag_);
        } else {
            std::vector<uint32_t> tmp = rhs.mag_;
            sub_mag(tmp, mag_);
            mag_ = std::move(tmp);
            negative_ = rhs.negative_;
        }
    }
    trim();
    return *this;
}

BigInt& BigInt::operator-=(const BigInt& rhs) { return *this += -rhs; }

std::vector<uint32_t> BigInt::mul_mag(const std::vector<uint32_t>& a, const std::vector<uint32_t>& b) {
    if (a.empty() || b.empty()) return {};
    std::vector<uint32_t> out(a.size() + b.size(), 0);
    for (std::size_t i = 0; i < a.size(); ++i) {
        uint64_t carry = 0;
        uint64_t av = a[i];
        for (std::size_t j = 0; j < b.size(); ++j) {
            uint64_t cur = out[i + j] + av * b[j] + carry;
            out[i + j] = static_cast<uint32_t>(cur);
            carry = cur >> 32;
        }
        std::size_t k = i + b.size();
        while (carry) {
            uint64_t cur = out[k] + carry;
            out[k] = static_cast<uint32_t>(cur);
            carry = cur >> 32;
            ++k;
        }
    }
    while (!out.empty() && out.back() == 0) out.pop_back();
    return out;
}

BigInt& BigInt::operator*=(const BigInt& rhs) {
    negative_ = negative_ != rhs.negative_;
    mag_ = mul_mag(mag_, rhs.mag_);
    if (mag_.empty()) negative_ = false;
    return *this;
}

// Knuth algorithm D on 32-bit limbs.
void BigInt::divmod_mag(const std::vector<uint32_t>& a, const std::vector<uint32_t>& b,
                        std::vector<uint32_t>& q, std::vector<uint32_t>& r) {
    if (b.empty()) throw std::domain_error("BigInt: division by zero");
    q.clear();
    r.clear();
    if (compare_mag(a, b) < 0) {
        r = a;
        return;
    }
    if (b.size() == 1) {
        uint64_t d = b[0], rem = 0;
        q.assign(a.size(), 0);
        for (std::size_t i = a.size(); i-- > 0;) {
            uint64_t cur = (rem << 32) | a[i];
            q[i] = static_cast<uint32_t>(cur / d);
            rem = cur % d;
        }
        while (!q.empty() && q.back() == 0) q.pop_back();
        if (rem) r.push_back(static_cast<uint32_t>(rem));
        return;
    }

    // Normalize so the divisor's top limb has its high bit set.
    int shift = 0;
    for (uint32_t top = b.back(); !(top & 0x80000000u); top <<= 1) ++shift;
    const std::size_t n = b.size();
    const std::size_t m = a.size() - n;

    std::vector<uint32_t> u(a.size() + 1, 0), v(n, 0);
    for (std::size_t i = a.size(); i-- > 0;) {
        u[i] |= shift ? (a[i] << shift) : a[i];
        if (shift && i + 1 <= a.size()) u[i + 1] |= static_cast<uint32_t>((static_cast<uint64_t>(a[i]) << shift) >> 32);
    }
    for (std::size_t i = n; i-- > 0;) {
        v[i] = shift ? (b[i] << shift) : b[i];
        if (shift && i + 1 < n) v[i + 1] |= static_cast<uint32_t>((static_cast<uint64_t>(b[i]) << shift) >> 32);
    }

    q.assign(m + 1, 0);
    const uint64_t vtop = v[n - 1], vsec = v[n - 2];
    for (std::size_t j = m + 1; j-- > 0;) {
        uint64_t num = (static_cast<uint64_t>(u[j + n]) << 32) | u[j + n - 1];
        uint64_t qhat = num / vtop;
        uint64_t rhat = num % vtop;
        if (qhat >= kBase) {
            qhat = kBase - 1;
            rhat = num - qhat * vtop;
        }
        while (rhat < kBase && qhat * vsec > ((rhat << 32) | u[j + n - 2])) {
            --qhat;
            rhat += vtop;
        }
        // multiply-subtract
        int64_t borrow = 0;
        uint64_t carry = 0;
        for (std::size_t i = 0; i < n; ++i) {
            uint64_t p = qhat * v[i] + carry;
            carry = p >> 32;
            int64_t t = static_cast<int64_t>(u[i + j]) - borrow - static_cast<int64_t>(p & 0xffffffffull);
            if (t < 0) {
                t += static_cast<int64_t>(kBase);
                borrow = 1;
            } else {
                borrow = 0;
            }
            u[i + j] = static_cast<uint32_t>(t);
        }
        int64_t t = static_cast<int64_t>(u[j + n]) - borrow - static_cast<int64_t>(carry);
        if (t < 0) {
            // qhat was one too large; add back
            t += static_cast<int64_t>(kBase);
            --qhat;
            uint64_t c2 = 0;
            for (std::size_t i = 0; i < n; ++i) {
                uint64_t s = static_cast<uint64_t>(u[i + j]) + v[i] + c2;
                u[i + j] = static_cast<uint32_t>(s);
                c2 = s >> 32;
            }
            t += static_cast<int64_t>(c2);
        }
        u[j + n] = static_cast<uint32_t>(t);
        q[j] = static_cast<uint32_t>(qhat);
    }
    while (!q.empty() && q.back() == 0) q.pop_back();

    r.assign(u.begin(), u.begin() + n);
    if (shift) {
        for (std::size_t i = 0; i < r.size(); ++i) {
            r[i] >>= shift;
            if (i + 1 < n) r[i] |= u[i + 1] << (32 - shift);
        }
    }
    while (!r.empty() && r.back() == 0) r.pop_back();
}

void BigInt::divmod(const BigInt& a, const BigInt& b, BigInt& q, BigInt& r) {
    std::vector<uint32_t> qm, rm;
    divmod_mag(a.mag_, b.mag_, qm, rm);
    q.mag_ = std::move(qm);
    q.negative_ = a.negative_ != b.negative_;
    q.trim();
    r.mag_ = std::move(rm);
    r.negative_ = a.negative_;
    r.trim();
}

void BigInt::floordiv(const BigInt& a, const BigInt& b, BigInt& q, BigInt& r) {
    divmod(a, b, q, r);
    if (!r.is_zero() && (r.is_negative() != b.is_negative())) {
        q -= BigInt(1ll);
        r += b;
    }
}

BigInt& BigInt::operator/=(const BigInt& rhs) {
    BigInt q, r;
    divmod(*this, rhs, q, r);
    return *this = std::move(q);
}

BigInt& BigInt::operator%=(const BigInt& rhs) {
    BigInt q, r;
    divmod(*this, rhs, q, r);
    return *this = std::move(r);
}

BigInt BigInt::gcd(BigInt a, BigInt b) {
    a.negative_ = false;
    b.negative_ = false;
    while (!b.is_zero()) {
        BigInt q, r;
        divmod(a, b, q, r);
        a = std::move(b);
        b = std::move(r);
    }
    return a;
}

bool BigInt::divides(const BigInt& other) const {
    if (is_zero()) return other.is_zero();
    BigInt q, r;
    divmod(other, *this, q, r);
    return r.is_zero();
}

std::string BigInt::to_string() const {
    if (mag_.empty()) return "0";
    std::vector<uint32_t> work = mag_;
    std::string digits;
    while (!work.empty()) {
        // divide by 10^9
        uint64_t rem = 0;
        for (std::size_t i = work.size(); i-- > 0;) {
            uint64_t cur = (rem << 32) | work[i];
            work[i] = static_cast<uint32_t>(cur / 1000000000ull);
            rem = cur % 1000000000ull;
        }
        while (!work.empty() && work.back() == 0) work.pop_back();
        for (int d = 0; d < 9; ++d) {
            digits.push_back(static_cast<char>('0' + rem % 10));
            rem /= 10;
        }
    }
    while (digits.size() > 1 && digits.back() == '0') digits.pop_back();
    if (negative_) digits.push_back('-');
    std::reverse(digits.begin(), digits.end());
    return digits;
}

std::ostream& operator<<(std::ostream& os, const BigInt& v) { return os << v.to_string(); }

bool BigInt::fits_longlong() const {
    if (mag_.size() > 2) return false;
    unsigned long long u = 0;
    if (mag_.size() >= 1) u = mag_[0];
    if (mag_.size() == 2) u |= static_cast<unsigned long long>(mag_[1]) << 32;
    if (negative_) return u <= 0x8000000000000000ull;
    return u <= 0x7fffffffffffffffull;
}

long long BigInt::to_longlong() const {
    if (!fits_longlong()) throw std::overflow_error("BigInt::to_longlong: out of range");
    unsigned long long u = 0;
    if (mag_.size() >= 1) u = mag_[0];
    if (mag_.size() == 2) u |= static_cast<unsigned long long>(mag_[1]) << 32;
    return negative_ ? -static_cast<long long>(u) : static_cast<long long>(u);
}

}  // namespace zerodim
