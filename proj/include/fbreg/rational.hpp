// Exact rational arithmetic over an arbitrary-precision integer. The
// counterexample construction compares measures and double integrals of
// dyadic interval families exactly, so no floating point is allowed on that
// path and 128-bit intermediates are not enough for the cross-multiplied
// comparisons.
#pragma once

#include <algorithm>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

namespace fbreg {

class BigInt {
public:
    BigInt() = default;
    BigInt(long long v) {  // NOLINT(google-explicit-constructor)
        if (v < 0) {
            sign_ = -1;
            // avoid overflow on LLONG_MIN
            unsigned long long m = static_cast<unsigned long long>(-(v + 1)) + 1ull;
            set_magnitude(m);
        } else if (v > 0) {
            sign_ = 1;
            set_magnitude(static_cast<unsigned long long>(v));
        }
    }

    bool is_zero() const { return sign_ == 0; }
    int sign() const { return sign_; }

    BigInt operator-() const {
        BigInt r = *this;
        r.sign_ = -r.sign_;
        return r;
    }

    BigInt abs() const {
        BigInt r = *this;
        if (r.sign_ < 0) r.sign_ = 1;
        return r;
    }

    friend BigInt operator+(const BigInt& a, const BigInt& b) {
        if (a.sign_ == 0) return b;
        if (b.sign_ == 0) return a;
        BigInt r;
        if (a.sign_ == b.sign_) {
            r.mag_ = add_mag(a.mag_, b.mag_);
            r.sign_ = a.sign_;
        } else {
            const int c = cmp_mag(a.mag_, b.mag_);
            if (c == 0) return BigInt();
            if (c > 0) {
                r.mag_ = sub_mag(a.mag_, b.mag_);
                r.sign_ = a.sign_;
            } else {
                r.mag_ = sub_mag(b.mag_, a.mag_);
                r.sign_ = b.sign_;
            }
        }
        return r;
    }

    friend BigInt operator-(const BigInt& a, const BigInt& b) { return a + (-b); }

    friend BigInt operator*(const BigInt& a, const BigInt& b) {
        if (a.sign_ == 0 || b.sign_ == 0) return BigInt();
        BigInt r;
        r.sign_ = a.sign_ * b.sign_;
        r.mag_.assign(a.mag_.size() + b.mag_.size(), 0);
        for (std::size_t i = 0; i < a.mag_.size(); ++i) {
            std::uint64_t carry = 0;
            for (std::size_t j = 0; j < b.mag_.size(); ++j) {
                std::uint64_t cur = static_cast<std::uint64_t>(a.mag_[i]) * b.mag_[j] +
                                    r.mag_[i + j] + carry;
                r.mag_[i + j] = static_cast<std::uint32_t>(cur);
                carry = cur >> 32;
            }
            r.mag_[i + b.mag_.size()] += static_cast<std::uint32_t>(carry);
        }
        r.trim();
        return r;
    }

    // Truncated division: quotient rounds toward zero, |r| < |b|,
    // a == q * b + r with sign(r) == sign(a) (or r == 0).
    static void divmod(const BigInt& a, const BigInt& b, BigInt& q, BigInt& r) {
        if (b.sign_ == 0) throw std::domain_error("BigInt: division by zero");
        const int c = cmp_mag(a.mag_, b.mag_);
        if (a.sign_ == 0 || c < 0) {
            q = BigInt();
            r = a;
            return;
        }
        std::vector<std::uint32_t> qm, rm;
        divmod_mag(a.mag_, b.mag_, qm, rm);
        q.mag_ = std::move(qm);
        q.trim();
        q.sign_ = q.mag_.empty() ? 0 : a.sign_ * b.sign_;
        r.mag_ = std::move(rm);
        r.trim();
        r.sign_ = r.mag_.empty() ? 0 : a.sign_;
    }

    friend BigInt operator/(const BigInt& a, const BigInt& b) {
        BigInt q, r;
        divmod(a, b, q, r);
        return q;
    }

    friend BigInt operator%(const BigInt& a, const BigInt& b) {
        BigInt q, r;
        divmod(a, b, q, r);
        return r;
    }

    // -1 / 0 / +1 for a < b / a == b / a > b
    static int compare(const BigInt& a, const BigInt& b) {
        if (a.sign_ != b.sign_) return a.sign_ < b.sign_ ? -1 : 1;
        const int c = cmp_mag(a.mag_, b.mag_);
        return a.sign_ >= 0 ? c : -c;
    }

    friend bool operator==(const BigInt& a, const BigInt& b) { return compare(a, b) == 0; }
    friend bool operator!=(const BigInt& a, const BigInt& b) { return compare(a, b) != 0; }
    friend bool operator<(const BigInt& a, const BigInt& b) { return compare(a, b) < 0; }
    friend bool operator<=(const BigInt& a, const BigInt& b) { return compare(a, b) <= 0; }
    friend bool operator>(const BigInt& a, const BigInt& b) { return compare(a, b) > 0; }
    friend bool operator>=(const BigInt& a, const BigInt& b) { return compare(a, b) >= 0; }

    static BigInt gcd(BigInt a, BigInt b) {
        a = a.abs();
        b = b.abs();
        while (!b.is_zero()) {
            BigInt q, r;
            divmod(a, b, q, r);
            a = b;
            b = r;
        }
        return a;
    }

    static BigInt pow(BigInt base, unsigned exp) {
        BigInt r(1);
        while (exp > 0) {
            if (exp & 1u) r = r * base;
            base = base * base;
            exp >>= 1u;
        }
        return r;
    }

    std::string to_decimal() const {
        if (sign_ == 0) return "0";
        std::vector<std::uint32_t> m = mag_;
        std::string digits;
        while (!m.empty()) {
            std::uint64_t rem = 0;
            for (std::size_t i = m.size(); i-- > 0;) {
                std::uint64_t cur = (rem << 32) | m[i];
                m[i] = static_cast<std::uint32_t>(cur / 1000000000ull);
                rem = cur % 1000000000ull;
            }
            while (!m.empty() && m.back() == 0) m.pop_back();
            for (int k = 0; k < 9; ++k) {
                digits.push_back(static_cast<char>('0' + rem % 10));
                rem /= 10;
            }
        }
        while (digits.size() > 1 && digits.back() == '0') digits.pop_back();
        std::string out;
        if (sign_ < 0) out.push_back('-');
        out.append(digits.rbegin(), digits.rend());
        return out;
    }

    static BigInt from_decimal(const std::string& s) {
        if (s.empty()) throw std::invalid_argument("BigInt: empty decimal string");
        std::size_t i = 0;
        int sign = 1;
        if (s[0] == '-' || s[0] == '+') {
            sign = s[0] == '-' ? -1 : 1;
            i = 1;
        }
        if (i == s.size()) throw std::invalid_argument("BigInt: no digits");
        BigInt r;
        const BigInt ten(10);
        for (; i < s.size(); ++i) {
            if (s[i] < '0' || s[i] > '9') throw std::invalid_argument("BigInt: bad digit");
            r = r * ten + BigInt(s[i] - '0');
        }
        if (!r.is_zero()) r.sign_ = sign;
        return r;
    }

    double to_double() const {
        double v = 0.0;
        for (std::size_t i = mag_.size(); i-- > 0;) v = v * 4294967296.0 + mag_[i];
        return sign_ < 0 ? -v : v;
    }

private:
    int sign_ = 0;
    std::vector<std::uint32_t> mag_;  // little-endian base 2^32, no leading zeros

    void set_magnitude(unsigned long long m) {
        mag_.clear();
        while (m > 0) {
            mag_.push_back(static_cast<std::uint32_t>(m));
            m >>= 32;
        }
    }

    void trim() {
        while (!mag_.empty() && mag_.back() == 0) mag_.pop_back();
        if (mag_.empty()) sign_ = 0;
    }

    static int cmp_mag(const std::vector<std::uint32_t>& a, const std::vector<std::uint32_t>& b) {
        if (a.size() != b.size()) return a.size() < b.size() ? -1 : 1;
        for (std::size_t i = a.size(); i-- > 0;)
            if (a[i] != b[i]) return a[i] < b[i] ? -1 : 1;
        return 0;
    }

    static std::vector<std::uint32_t> add_mag(const std::vector<std::uint32_t>& a,
                                              const std::vector<std::uint32_t>& b) {
        std::vector<std::uint32_t> r;
        r.reserve(std::max(a.size(), b.size()) + 1);
        std::uint64_t carry = 0;
        for (std::size_t i = 0; i < std::max(a.size(), b.size()); ++i) {
            std::uint64_t cur = carry;
            if (i < a.size()) cur += a[i];
            if (i < b.size()) cur += b[i];
            r.push_back(static_cast<std::uint32_t>(cur));
            carry = cur >> 32;
        }
        if (carry) r.push_back(static_cast<std::uint32_t>(carry));
        return r;
    }

    // requires a >= b
    static std::vector<std::uint32_t> sub_mag(const std::vector<std::uint32_t>& a,
                                              const std::vector<std::uint32_t>& b) {
        std::vector<std::uint32_t> r = a;
        std::int64_t borrow = 0;
        for (std::size_t i = 0; i < r.size(); ++i) {
            std::int64_t cur = static_cast<std::int64_t>(r[i]) - borrow -
                               (i < b.size() ? static_cast<std::int64_t>(b[i]) : 0);
            if (cur < 0) {
                cur += 1ll << 32;
                borrow = 1;
            } else {
                borrow = 0;
            }
            r[i] = static_cast<std::uint32_t>(cur);
        }
        while (!r.empty() && r.back() == 0) r.pop_back();
        return r;
    }

    // schoolbook long division on magnitudes, a >= b > 0
    static void divmod_mag(const std::vector<std::uint32_t>& a, const std::vector<std::uint32_t>& b,
                           std::vector<std::uint32_t>& q, std::vector<std::uint32_t>& r) {
        q.assign(a.size(), 0);
        r.clear();
        for (std::size_t i = a.size(); i-- > 0;) {
            r.insert(r.begin(), a[i]);
            while (!r.empty() && r.back() == 0) r.pop_back();
            // binary search the quotient digit
            std::uint64_t lo = 0, hi = 0xffffffffull;
            while (lo < hi) {
                const std::uint64_t mid = (lo + hi + 1) >> 1;
                if (cmp_mag(mul_small(b, mid), r) <= 0)
                    lo = mid;
                else
                    hi = mid - 1;
            }
            q[i] = static_cast<std::uint32_t>(lo);
            if (lo) r = sub_mag(r, mul_small(b, lo));
        }
    }

    static std::vector<std::uint32_t> mul_small(const std::vector<std::uint32_t>& a,
                                                std::uint64_t m) {
        std::vector<std::uint32_t> r;
        r.reserve(a.size() + 2);
        std::uint64_t carry = 0;
        for (std::uint32_t limb : a) {
            // m < 2^32, so limb * m + carry fits in 2^64
            std::uint64_t cur = limb * m + carry;
            r.push_back(static_cast<std::uint32_t>(cur));
            carry = cur >> 32;
        }
        while (carry) {
            r.push_back(static_cast<std::uint32_t>(carry));
            carry >>= 32;
        }
        while (!r.empty() && r.back() == 0) r.pop_back();
        return r;
    }
};

class Rational {
public:
    Rational() : num_(0), den_(1) {}
    Rational(long long v) : num_(v), den_(1) {}  // NOLINT(google-explicit-constructor)
    Rational(long long num, long long den) : num_(num), den_(den) { normalize(); }
    Rational(BigInt num, BigInt den) : num_(std::move(num)), den_(std::move(den)) { normalize(); }

    const BigInt& num() const { return num_; }
    const BigInt& den() const { return den_; }
    bool is_zero() const { return num_.is_zero(); }
    int sign() const { return num_.sign(); }

    friend Rational operator+(const Rational& a, const Rational& b) {
        return Rational(a.num_ * b.den_ + b.num_ * a.den_, a.den_ * b.den_);
    }
    friend Rational operator-(const Rational& a, const Rational& b) {
        return Rational(a.num_ * b.den_ - b.num_ * a.den_, a.den_ * b.den_);
    }
    friend Rational operator*(const Rational& a, const Rational& b) {
        return Rational(a.num_ * b.num_, a.den_ * b.den_);
    }
    friend Rational operator/(const Rational& a, const Rational& b) {
        if (b.is_zero()) throw std::domain_error("Rational: division by zero");
        return Rational(a.num_ * b.den_, a.den_ * b.num_);
    }
    Rational operator-() const {
        Rational r = *this;
        r.num_ = -r.num_;
        return r;
    }

    static int compare(const Rational& a, const Rational& b) {
        return BigInt::compare(a.num_ * b.den_, b.num_ * a.den_);
    }
    friend bool operator==(const Rational& a, const Rational& b) { return compare(a, b) == 0; }
    friend bool operator!=(const Rational& a, const Rational& b) { return compare(a, b) != 0; }
    friend bool operator<(const Rational& a, const Rational& b) { return compare(a, b) < 0; }
    friend bool operator<=(const Rational& a, const Rational& b) { return compare(a, b) <= 0; }
    friend bool operator>(const Rational& a, const Rational& b) { return compare(a, b) > 0; }
    friend bool operator>=(const Rational& a, const Rational& b) { return compare(a, b) >= 0; }

    static Rational min(const Rational& a, const Rational& b) { return a <= b ? a : b; }
    static Rational max(const Rational& a, const Rational& b) { return a >= b ? a : b; }

    // canonical "p/q" with q >= 1
    std::string to_string() const { return num_.to_decimal() + "/" + den_.to_decimal(); }

    // accepts "p/q", plain integers, and decimal literals like "0.125"
    static Rational from_string(const std::string& s) {
        const std::size_t slash = s.find('/');
        if (slash != std::string::npos) {
            return Rational(BigInt::from_decimal(s.substr(0, slash)),
                            BigInt::from_decimal(s.substr(slash + 1)));
        }
        const std::size_t dot = s.find('.');
        if (dot == std::string::npos) return Rational(BigInt::from_decimal(s), BigInt(1));
        const std::string head = s.substr(0, dot), tail = s.substr(dot + 1);
        if (tail.empty()) return Rational(BigInt::from_decimal(head), BigInt(1));
        const bool neg = !head.empty() && head[0] == '-';
        BigInt scale = BigInt::pow(BigInt(10), static_cast<unsigned>(tail.size()));
        BigInt whole = head.empty() || head == "-" || head == "+"
                           ? BigInt(0)
                           : BigInt::from_decimal(head);
        BigInt frac = BigInt::from_decimal(tail);
        BigInt num = whole.abs() * scale + frac;
        if (neg) num = -num;
        return Rational(num, scale);
    }

    double to_double() const { return num_.to_double() / den_.to_double(); }

private:
    BigInt num_;
    BigInt den_;

    void normalize() {
        if (den_.is_zero()) throw std::domain_error("Rational: zero denominator");
        if (den_.sign() < 0) {
            den_ = -den_;
            num_ = -num_;
        }
        if (num_.is_zero()) {
            den_ = BigInt(1);
            return;
        }
        const BigInt g = BigInt::gcd(num_, den_);
        num_ = num_ / g;
        den_ = den_ / g;
    }
};

}  // namespace fbreg
