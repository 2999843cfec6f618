// Exact arbitrary-precision rational arithmetic used throughout the library.
#pragma once

#include <gmpxx.h>

#include <cstdint>
#include <stdexcept>
#include <string>

namespace penwalk {

using Rational = mpq_class;
using BigInt = mpz_class;

inline Rational rat(long num, long den = 1) {
    if (den == 0) throw std::invalid_argument("rat: zero denominator");
    Rational q(num, den);
    q.canonicalize();
    return q;
}

inline Rational rat(const BigInt& num, const BigInt& den) {
    if (den == 0) throw std::invalid_argument("rat: zero denominator");
    Rational q(num, den);
    q.canonicalize();
    return q;
}

// "num/den" with canonical sign on the numerator; integers render as "n/1"
// so downstream CSV columns stay uniform.
inline std::string to_string(const Rational& q) {
    return q.get_num().get_str() + "/" + q.get_den().get_str();
}

inline double to_double(const Rational& q) { return q.get_d(); }

// Parses "num", "num/den" or decimal-free signed integers. Rejects anything else.
inline Rational parse_rational(const std::string& text) {
    auto bad = [&]() -> std::runtime_error {
        return std::runtime_error("parse_rational: invalid rational literal '" + text + "'");
    };
    if (text.empty()) throw bad();
    const auto slash = text.find('/');
    try {
        if (slash == std::string::npos) {
            Rational q(BigInt(text), BigInt(1));
            q.canonicalize();
            return q;
        }
        const std::string num = text.substr(0, slash);
        const std::string den = text.substr(slash + 1);
        if (num.empty() || den.empty() || den.find('/') != std::string::npos) throw bad();
        BigInt d(den);
        if (d == 0) throw bad();
        Rational q(BigInt(num), d);
        q.canonicalize();
        return q;
    } catch (const std::invalid_argument&) {
        throw bad();
    }
}

// Exact binomial coefficient; 0 outside the triangle.
inline BigInt binomial(long n, long k) {
    if (n < 0 || k < 0 || k > n) return BigInt(0);
    BigInt r;
    mpz_bin_uiui(r.get_mpz_t(), static_cast<unsigned long>(n), static_cast<unsigned long>(k));
    return r;
}

inline BigInt pow2(unsigned long e) {
    BigInt r;
    mpz_ui_pow_ui(r.get_mpz_t(), 2, e);
    return r;
}

inline Rational pow_rat(const Rational& base, unsigned long e) {
    Rational r(1);
    Rational b = base;
    unsigned long n = e;
    while (n > 0) {
        if (n & 1UL) r *= b;
        b *= b;
        n >>= 1UL;
    }
    return r;
}

// Closed rational interval [lo, hi]; used for series without a finite closed
// form, where the library still owes the caller a verified enclosure.
struct RationalInterval {
    Rational lo;
    Rational hi;

    Rational width() const { return hi - lo; }
    Rational midpoint() const { return (lo + hi) / 2; }
    bool contains(const Rational& x) const { return lo <= x && x <= hi; }
};

}  // namespace penwalk
