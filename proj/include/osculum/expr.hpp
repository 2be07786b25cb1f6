#pragma once

#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "osculum/jet.hpp"
#include "osculum/rational.hpp"
#include "osculum/scalar.hpp"

namespace osculum {

// Expression language for the scalar functions handled by the library:
// rational constants, variables, field operations, integer powers, |e|^alpha
// with rational alpha > 0, sqrt, sin, cos. Trees are immutable and shared.
enum class ExprKind {
    Constant, Variable, Neg, Add, Sub, Mul, Div, IntPow, AbsPow, Sqrt, Sin, Cos
};

struct ExprNode;

class Expr {
public:
    Expr() = default;

    static Expr constant(Rat value);
    static Expr constant(long long value) { return constant(Rat(value)); }
    static Expr variable(int index); // 0-based; prints as x,y,z,u4..u9

    ExprKind kind() const;
    const Rat& const_value() const;   // Constant
    int var_index() const;            // Variable
    long long int_exponent() const;   // IntPow
    const Rat& abs_exponent() const;  // AbsPow
    const Expr& child(int i = 0) const;
    int child_count() const;

    bool is_null() const { return !n_; }

    // Structural equality.
    bool same_as(const Expr& other) const;

    std::string str() const;

    explicit Expr(std::shared_ptr<const ExprNode> n) : n_(std::move(n)) {}
    const ExprNode* node() const { return n_.get(); }

private:
    std::shared_ptr<const ExprNode> n_;
};

Expr operator-(const Expr& e);
Expr operator+(const Expr& a, const Expr& b);
Expr operator-(const Expr& a, const Expr& b);
Expr operator*(const Expr& a, const Expr& b);
Expr operator/(const Expr& a, const Expr& b);
Expr pow(const Expr& base, long long exponent);
Expr abs_pow(const Expr& e, const Rat& alpha); // |e|^alpha, alpha > 0
Expr abs(const Expr& e);                       // |e|
Expr sqrt(const Expr& e);
Expr sin(const Expr& e);
Expr cos(const Expr& e);

// Parses the expression grammar (see README). Throws ParseError with position.
Expr parse_expr(const std::string& source);

// One higher than the largest variable index appearing in e (0 for constants).
int var_count(const Expr& e);

// Total degree when e is a polynomial (quotients by constants allowed), else nullopt.
std::optional<long long> poly_degree(const Expr& e);

// Replaces variable i by repl[i]; entries may be null to keep the variable.
Expr substitute(const Expr& e, const std::vector<Expr>& repl);

// Value of a subexpression at a rational point, tracked exactly as long as the
// arithmetic stays rational, with a double shadow for the irrational nodes.
struct PointValue {
    std::optional<Rat> exact;
    double approx = 0.0;

    bool is_zero() const {
        return exact ? *exact == 0 : std::fabs(approx) <= 1e-12;
    }
    int sign() const {
        if (exact) return *exact == 0 ? 0 : (*exact < 0 ? -1 : 1);
        if (std::fabs(approx) <= 1e-12) return 0;
        return approx < 0 ? -1 : 1;
    }
};

PointValue eval_point(const Expr& e, const std::vector<Rat>& base);

// Computable smoothness class of e at the base point: kSmoothInfinity along
// analytic nodes away from their singular loci; floor(alpha) for |e|^alpha with
// non-integer alpha at a zero of e (alpha-1 for odd integer alpha, infinite for
// even); minimum over children. Throws DomainError at domain violations
// (vanishing denominators, sqrt of a negative).
int smoothness_class(const Expr& e, const std::vector<Rat>& base);
int smoothness_class(const Expr& e, const std::vector<double>& base);

namespace detail {

template <class S>
Jet<S> binomial_series(const Jet<S>& shifted, const S& scale, const Rat& alpha) {
    // scale * (1 + shifted)^alpha with shifted vanishing at the base.
    int k = shifted.order();
    Jet<S> acc = Jet<S>::constant(shifted.base(), k, {S(1)});
    Jet<S> pw = acc;
    Rat binom(1);
    for (int j = 1; j <= k; ++j) {
        binom *= (alpha - Rat(j - 1)) / Rat(j);
        pw = pw * shifted;
        acc = acc + pw.scaled(ScalarOps<S>::from_rat(binom));
    }
    return acc.scaled(scale);
}

template <class S>
Jet<S> sin_series(const Jet<S>& w) {
    int k = w.order();
    Jet<S> acc(w.base(), k, 1);
    Jet<S> pw = w;
    Rat fact(1);
    for (int j = 1; j <= k; ++j) {
        if (j % 2 == 1) {
            Rat c = Rat((j / 2) % 2 == 0 ? 1 : -1) / fact;
            acc = acc + pw.scaled(ScalarOps<S>::from_rat(c));
        }
        fact *= Rat(j + 1);
        if (j < k) pw = pw * w;
    }
    return acc;
}

template <class S>
Jet<S> cos_series(const Jet<S>& w) {
    int k = w.order();
    Jet<S> acc = Jet<S>::constant(w.base(), k, {S(1)});
    Jet<S> pw = Jet<S>::constant(w.base(), k, {S(1)});
    Rat fact(1);
    for (int j = 1; j <= k; ++j) {
        pw = pw * w;
        fact *= Rat(j);
        if (j % 2 == 0) {
            Rat c = Rat((j / 2) % 2 == 0 ? 1 : -1) / fact;
            acc = acc + pw.scaled(ScalarOps<S>::from_rat(c));
        }
    }
    return acc;
}

template <class S>
Jet<S> expr_jet(const Expr& e, const std::vector<S>& base,
                const std::vector<Rat>& base_rat, int k) {
    using Ops = ScalarOps<S>;
    switch (e.kind()) {
    case ExprKind::Constant:
        return Jet<S>::constant(base, k, {Ops::from_rat(e.const_value())});
    case ExprKind::Variable:
        if (e.var_index() >= static_cast<int>(base.size()))
            throw DimensionMismatch("expression uses variable beyond the base dimension");
        return Jet<S>::variable(base, k, e.var_index());
    case ExprKind::Neg:
        return -expr_jet(e.child(), base, base_rat, k);
    case ExprKind::Add:
        return expr_jet(e.child(0), base, base_rat, k) +
               expr_jet(e.child(1), base, base_rat, k);
    case ExprKind::Sub:
        return expr_jet(e.child(0), base, base_rat, k) -
               expr_jet(e.child(1), base, base_rat, k);
    case ExprKind::Mul:
        return expr_jet(e.child(0), base, base_rat, k) *
               expr_jet(e.child(1), base, base_rat, k);
    case ExprKind::Div: {
        if (eval_point(e.child(1), base_rat).is_zero())
            throw DomainError("denominator vanishes at the base point");
        return expr_jet(e.child(0), base, base_rat, k) /
               expr_jet(e.child(1), base, base_rat, k);
    }
    case ExprKind::IntPow: {
        long long n = e.int_exponent();
        if (n < 0 && eval_point(e.child(), base_rat).is_zero())
            throw DomainError("negative power of a value vanishing at the base point");
        return expr_jet(e.child(), base, base_rat, k).pow_int(n);
    }
    case ExprKind::AbsPow: {
        const Rat& alpha = e.abs_exponent();
        bool integer_alpha = is_integer(alpha);
        PointValue inner = eval_point(e.child(), base_rat);
        if (integer_alpha && to_int(alpha) % 2 == 0) {
            // |e|^(2j) = e^(2j), analytic.
            return expr_jet(e.child(), base, base_rat, k).pow_int(to_int(alpha));
        }
        if (inner.is_zero()) {
            // The jet is identically zero up to the smoothness class, which the
            // caller has already checked against k.
            return Jet<S>(base, k, 1);
        }
        Jet<S> inner_jet = expr_jet(e.child(), base, base_rat, k);
        if (integer_alpha) {
            Jet<S> p = inner_jet.pow_int(to_int(alpha));
            return inner.sign() < 0 ? -p : p;
        }
        S c = inner_jet.value();
        long long a_num = numerator(alpha).template convert_to<long long>();
        long long a_den = denominator(alpha).template convert_to<long long>();
        S mag = Ops::pow_rat(c, a_num, a_den);
        Jet<S> shifted = (inner_jet - Jet<S>::constant(base, inner_jet.order(), {c}))
                             .scaled(S(1) / c);
        return binomial_series(shifted, mag, alpha);
    }
    case ExprKind::Sqrt: {
        PointValue inner = eval_point(e.child(), base_rat);
        if (inner.sign() < 0) throw DomainError("sqrt of a negative value at the base point");
        if (inner.is_zero()) return Jet<S>(base, k, 1); // class 0: only k = 0 reaches here
        Jet<S> inner_jet = expr_jet(e.child(), base, base_rat, k);
        S c = inner_jet.value();
        S mag = Ops::sqrt(c);
        Jet<S> shifted = (inner_jet - Jet<S>::constant(base, inner_jet.order(), {c}))
                             .scaled(S(1) / c);
        return binomial_series(shifted, mag, Rat(1, 2));
    }
    case ExprKind::Sin:
    case ExprKind::Cos: {
        PointValue inner = eval_point(e.child(), base_rat);
        Jet<S> inner_jet = expr_jet(e.child(), base, base_rat, k);
        S c = inner_jet.value();
        Jet<S> w = inner_jet - Jet<S>::constant(base, inner_jet.order(), {c});
        if (inner.is_zero() && inner.exact) {
            return e.kind() == ExprKind::Sin ? sin_series(w) : cos_series(w);
        }
        if constexpr (Ops::exact) {
            throw InexactValue("sin/cos at a non-zero point is irrational");
        } else {
            double cv = Ops::to_dbl(c);
            if (e.kind() == ExprKind::Sin)
                return sin_series(w).scaled(std::cos(cv)) + cos_series(w).scaled(std::sin(cv));
            return cos_series(w).scaled(std::cos(cv)) - sin_series(w).scaled(std::sin(cv));
        }
    }
    }
    throw Error("unhandled expression kind");
}

std::vector<Rat> to_rat_base(const std::vector<Rat>& base);
std::vector<Rat> to_rat_base(const std::vector<double>& base);

} // namespace detail

// Taylor jet of e about the base point, truncated at order k. Requires
// k <= smoothness_class(e, base); throws SmoothnessExceeded otherwise.
// Exact scalars stay exact whenever the values involved are rational.
template <class S>
Jet<S> jet_of_expr(const Expr& e, const std::vector<S>& base, int k) {
    std::vector<Rat> base_rat = detail::to_rat_base(base);
    int cls = smoothness_class(e, base_rat);
    if (k > cls) throw SmoothnessExceeded(k, cls);
    return detail::expr_jet(e, base, base_rat, k);
}

// Stacked jet of a list of component expressions.
template <class S>
Jet<S> jet_of_map(const std::vector<Expr>& components, const std::vector<S>& base, int k) {
    if (components.empty()) throw DimensionMismatch("empty component list");
    Jet<S> out = jet_of_expr(components[0], base, k);
    for (std::size_t i = 1; i < components.size(); ++i)
        out = Jet<S>::vstack(out, jet_of_expr(components[i], base, k));
    return out;
}

// Plain evaluation (order-0 jet).
template <class S>
S eval_expr(const Expr& e, const std::vector<S>& base) {
    return jet_of_expr(e, base, 0).value();
}

} // namespace osculum
