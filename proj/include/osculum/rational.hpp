#pragma once

#include <boost/multiprecision/cpp_int.hpp>

#include <cmath>
#include <cstdint>
#include <optional>
#include <string>

#include "osculum/errors.hpp"

namespace osculum {

using BigInt = boost::multiprecision::cpp_int;
using Rat = boost::multiprecision::cpp_rational;

inline double to_double(const Rat& q) { return q.template convert_to<double>(); }
inline double to_double(double x) { return x; }

inline Rat rat_of(long long n) { return Rat(n); }
inline Rat rat_of(long long num, long long den) { return Rat(num, den); }

// Doubles are dyadic rationals; the conversion is exact.
inline Rat rat_from_double(double x) {
    if (!std::isfinite(x)) throw DomainError("non-finite value has no rational representation");
    return Rat(x);
}

inline bool is_integer(const Rat& q) { return denominator(q) == 1; }

inline long long to_int(const Rat& q) {
    if (!is_integer(q)) throw DomainError("expected an integer rational");
    return numerator(q).template convert_to<long long>();
}

// floor(q) for rational q.
inline BigInt rat_floor(const Rat& q) {
    BigInt n = numerator(q), d = denominator(q);
    BigInt t = n / d;
    if (n < 0 && t * d != n) --t;
    return t;
}

// Exact integer n-th root, if it exists.
inline std::optional<BigInt> exact_int_nth_root(const BigInt& v, unsigned n) {
    if (v < 0) return std::nullopt;
    if (v == 0 || v == 1 || n == 1) return v;
    BigInt lo = 0, hi = 1;
    while (boost::multiprecision::pow(hi, n) < v) hi <<= 1;
    while (lo < hi) {
        BigInt mid = (lo + hi) / 2;
        if (boost::multiprecision::pow(mid, n) < v) lo = mid + 1; else hi = mid;
    }
    return boost::multiprecision::pow(lo, n) == v ? std::optional<BigInt>(lo) : std::nullopt;
}

// Exact q^e for integer e (e < 0 requires q != 0).
inline Rat rat_pow_int(const Rat& q, long long e) {
    if (e == 0) return Rat(1);
    if (q == 0) {
        if (e < 0) throw DomainError("zero to a negative power");
        return Rat(0);
    }
    Rat base = e < 0 ? Rat(denominator(q), numerator(q)) : q;
    unsigned long long k = static_cast<unsigned long long>(e < 0 ? -e : e);
    Rat acc(1);
    while (k) {
        if (k & 1) acc *= base;
        base *= base;
        k >>= 1;
    }
    return acc;
}

// Exact q^(num/den) for q >= 0, den > 0; throws InexactValue when the result is irrational.
inline Rat rat_pow_exact(const Rat& q, long long num, long long den) {
    if (den <= 0) throw DomainError("non-positive exponent denominator");
    if (q < 0) throw DomainError("rational power of a negative value");
    if (q == 0) {
        if (num <= 0) throw DomainError("zero to a non-positive power");
        return Rat(0);
    }
    if (den == 1) return rat_pow_int(q, num);
    auto rn = exact_int_nth_root(numerator(q), static_cast<unsigned>(den));
    auto rd = exact_int_nth_root(denominator(q), static_cast<unsigned>(den));
    if (!rn || !rd) throw InexactValue("irrational rational-power in exact mode");
    return rat_pow_int(Rat(*rn, *rd), num);
}

inline Rat rat_sqrt_exact(const Rat& q) { return rat_pow_exact(q, 1, 2); }

inline std::string rat_to_string(const Rat& q) {
    std::string s = numerator(q).str();
    if (denominator(q) != 1) s += "/" + denominator(q).str();
    return s;
}

} // namespace osculum
