#pragma once

#include <cmath>
#include <string>
#include <type_traits>
#include <vector>

#include "osculum/rational.hpp"

namespace osculum {

// Numeric mode of a computation. Exact mode is the oracle; float mode serves
// non-rational inputs and the statistical estimators.
enum class NumericMode { Exact, Float };

// Glue between the two scalar types used throughout: exact rationals and doubles.
template <class S>
struct ScalarOps;

template <>
struct ScalarOps<Rat> {
    static constexpr bool exact = true;
    static Rat from_rat(const Rat& q) { return q; }
    static Rat from_double(double x) { return rat_from_double(x); }
    static double to_dbl(const Rat& q) { return to_double(q); }
    static bool is_zero(const Rat& q, double /*tol*/ = 0.0) { return q == 0; }
    static Rat abs(const Rat& q) { return q < 0 ? Rat(-q) : q; }
    // |q|^(num/den); throws InexactValue when irrational.
    static Rat pow_rat(const Rat& q, long long num, long long den) {
        return rat_pow_exact(abs(q), num, den);
    }
    static Rat sqrt(const Rat& q) { return rat_sqrt_exact(q); }
    static std::string str(const Rat& q) { return rat_to_string(q); }
};

template <>
struct ScalarOps<double> {
    static constexpr bool exact = false;
    static double from_rat(const Rat& q) { return to_double(q); }
    static double from_double(double x) { return x; }
    static double to_dbl(double x) { return x; }
    static bool is_zero(double x, double tol = 0.0) { return std::fabs(x) <= tol; }
    static double abs(double x) { return std::fabs(x); }
    static double pow_rat(double x, long long num, long long den) {
        return std::pow(std::fabs(x), static_cast<double>(num) / static_cast<double>(den));
    }
    static double sqrt(double x) {
        if (x < 0) throw DomainError("sqrt of a negative value");
        return std::sqrt(x);
    }
    static std::string str(double x) { return std::to_string(x); }
};

template <class S>
std::vector<double> to_double_vec(const std::vector<S>& v) {
    std::vector<double> out(v.size());
    for (std::size_t i = 0; i < v.size(); ++i) out[i] = ScalarOps<S>::to_dbl(v[i]);
    return out;
}

template <class S>
std::vector<S> from_rat_vec(const std::vector<Rat>& v) {
    std::vector<S> out(v.size());
    for (std::size_t i = 0; i < v.size(); ++i) out[i] = ScalarOps<S>::from_rat(v[i]);
    return out;
}

// Sentinel for an infinite smoothness class.
inline constexpr int kSmoothInfinity = 1 << 28;

} // namespace osculum
