#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>

namespace ecc {

// Exact rational on 128-bit integers with overflow checking. Wide enough for
// the q-analog enumeration scales used in tests and oracles (q <= 16, small
// dimensions); larger parameters go through the floating-point views instead.
class Rational {
public:
    Rational() = default;
    Rational(long long v) : n_(v), d_(1) {} // NOLINT: implicit by design
    Rational(__int128 num, __int128 den) : n_(num), d_(den) {
        if (d_ == 0) throw std::domain_error("Rational: zero denominator");
        normalize();
    }

    __int128 num() const { return n_; }
    __int128 den() const { return d_; }

    Rational operator+(const Rational& o) const {
        return Rational(checked_add(checked_mul(n_, o.d_), checked_mul(o.n_, d_)),
                        checked_mul(d_, o.d_));
    }
    Rational operator-(const Rational& o) const {
        return Rational(checked_add(checked_mul(n_, o.d_), -checked_mul(o.n_, d_)),
                        checked_mul(d_, o.d_));
    }
    Rational operator*(const Rational& o) const {
        // Cross-reduce before multiplying to keep intermediates small.
        __int128 g1 = gcd128(abs128(n_), o.d_);
        __int128 g2 = gcd128(abs128(o.n_), d_);
        return Rational(checked_mul(n_ / g1, o.n_ / g2), checked_mul(d_ / g2, o.d_ / g1));
    }
    Rational operator/(const Rational& o) const {
        if (o.n_ == 0) throw std::domain_error("Rational: division by zero");
        return *this * Rational(o.d_, o.n_);
    }
    Rational& operator+=(const Rational& o) { return *this = *this + o; }
    Rational& operator-=(const Rational& o) { return *this = *this - o; }
    Rational& operator*=(const Rational& o) { return *this = *this * o; }
    Rational& operator/=(const Rational& o) { return *this = *this / o; }

    bool operator==(const Rational& o) const { return n_ == o.n_ && d_ == o.d_; }
    bool operator!=(const Rational& o) const { return !(*this == o); }
    bool operator<(const Rational& o) const {
        return checked_mul(n_, o.d_) < checked_mul(o.n_, d_);
    }
    bool operator<=(const Rational& o) const { return *this == o || *this < o; }

    double to_double() const { return double((long double)(n_) / (long double)(d_)); }

    std::string to_string() const {
        std::string s = int128_str(n_);
        if (d_ != 1) s += "/" + int128_str(d_);
        return s;
    }

private:
    static __int128 abs128(__int128 v) { return v < 0 ? -v : v; }

    static __int128 gcd128(__int128 a, __int128 b) {
        a = abs128(a);
        b = abs128(b);
        while (b) {
            __int128 t = a % b;
            a = b;
            b = t;
        }
        return a == 0 ? 1 : a;
    }

    static __int128 checked_add(__int128 a, __int128 b) {
        __int128 r;
        if (__builtin_add_overflow(a, b, &r)) throw std::overflow_error("Rational: add overflow");
        return r;
    }
    static __int128 checked_mul(__int128 a, __int128 b) {
        __int128 r;
        if (__builtin_mul_overflow(a, b, &r)) throw std::overflow_error("Rational: mul overflow");
        return r;
    }

    static std::string int128_str(__int128 v) {
        if (v == 0) return "0";
        bool neg = v < 0;
        unsigned __int128 u = neg ? (unsigned __int128)(-v) : (unsigned __int128)v;
        std::string s;
        while (u) {
            s.insert(s.begin(), char('0' + int(u % 10)));
            u /= 10;
        }
        return neg ? "-" + s : s;
    }

    void normalize() {
        if (d_ < 0) {
            n_ = -n_;
            d_ = -d_;
        }
        __int128 g = gcd128(n_, d_);
        n_ /= g;
        d_ /= g;
    }

    __int128 n_ = 0;
    __int128 d_ = 1;
};

// q^k as a checked 128-bit integer.
inline __int128 int_pow(__int128 base, int k) {
    __int128 r = 1;
    for (int i = 0; i < k; ++i) {
        if (__builtin_mul_overflow(r, base, &r)) throw std::overflow_error("int_pow overflow");
    }
    return r;
}

} // namespace ecc
