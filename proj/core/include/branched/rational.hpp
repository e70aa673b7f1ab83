#pragma once

#include <boost/multiprecision/cpp_int.hpp>
#include <cmath>
#include <string>
#include <type_traits>

namespace branched {

// Exact arithmetic used throughout the algebraic layer.  Tree factorials and
// coproduct multiplicities overflow 64 bits well below the tree sizes the
// checks run at, so arbitrary precision is not optional.
using BigInt = boost::multiprecision::cpp_int;
using Rational = boost::multiprecision::cpp_rational;

inline long double to_ld(const BigInt& v) {
    return v.convert_to<long double>();
}

inline long double to_ld(const Rational& v) {
    return v.convert_to<long double>();
}

inline long double to_ld(double v) { return static_cast<long double>(v); }
inline long double to_ld(long double v) { return v; }

template <class S>
S from_bigint(const BigInt& m) {
    if constexpr (std::is_same_v<S, Rational>)
        return Rational(m);
    else
        return static_cast<S>(m.convert_to<long double>());
}

// log|v|, flagged for v == 0.  Norm and bound evaluations work in log space
// because the lemma constants exceed exp(10^5) at small gamma.
struct LogVal {
    bool zero = true;
    long double lg = 0.0L;

    static LogVal from_log(long double l) { return LogVal{false, l}; }
};

inline LogVal log_abs(const Rational& v) {
    if (v == 0) return LogVal{};
    BigInt num = boost::multiprecision::numerator(v);
    BigInt den = boost::multiprecision::denominator(v);
    if (num < 0) num = -num;
    // msb-based scaling keeps the conversion in range for huge integers.
    auto log_big = [](const BigInt& b) -> long double {
        std::size_t bits = boost::multiprecision::msb(b);
        if (bits <= 8000) return std::log(b.convert_to<long double>());
        BigInt shifted = b >> (bits - 64);
        return std::log(shifted.convert_to<long double>()) +
               static_cast<long double>(bits - 64) * 0.6931471805599453094L;
    };
    return LogVal::from_log(log_big(num) - log_big(den));
}

inline LogVal log_abs(long double v) {
    if (v == 0.0L) return LogVal{};
    return LogVal::from_log(std::log(std::fabs(v)));
}

inline LogVal log_abs(double v) { return log_abs(static_cast<long double>(v)); }

inline LogVal lv_mul(const LogVal& a, const LogVal& b) {
    if (a.zero || b.zero) return LogVal{};
    return LogVal::from_log(a.lg + b.lg);
}

inline LogVal lv_add(const LogVal& a, const LogVal& b) {
    if (a.zero) return b;
    if (b.zero) return a;
    long double hi = std::max(a.lg, b.lg);
    long double lo = std::min(a.lg, b.lg);
    return LogVal::from_log(hi + std::log1p(std::exp(lo - hi)));
}

inline LogVal lv_max(const LogVal& a, const LogVal& b) {
    if (a.zero) return b;
    if (b.zero) return a;
    return a.lg >= b.lg ? a : b;
}

inline Rational rational_pow(const Rational& base, long exp) {
    if (exp < 0) return Rational(1) / rational_pow(base, -exp);
    Rational r(1), b = base;
    long e = exp;
    while (e > 0) {
        if (e & 1) r *= b;
        b *= b;
        e >>= 1;
    }
    return r;
}

inline BigInt factorial_big(unsigned n) {
    BigInt r(1);
    for (unsigned i = 2; i <= n; ++i) r *= i;
    return r;
}

inline BigInt binomial_big(unsigned n, unsigned k) {
    if (k > n) return BigInt(0);
    if (k > n - k) k = n - k;
    BigInt r(1);
    for (unsigned i = 0; i < k; ++i) {
        r *= (n - i);
        r /= (i + 1);
    }
    return r;
}

}  // namespace branched
