#include "osculum/expr.hpp"

#include <cctype>
#include <cmath>
#include <sstream>

namespace osculum {

struct ExprNode {
    ExprKind kind;
    Rat value;           // Constant
    int var = -1;        // Variable
    long long iexp = 0;  // IntPow
    Rat alpha;           // AbsPow
    std::vector<Expr> kids;
};

namespace {

Expr make(ExprNode n) { return Expr(std::make_shared<const ExprNode>(std::move(n))); }

Expr mk_const(Rat v) {
    ExprNode n;
    n.kind = ExprKind::Constant;
    n.value = std::move(v);
    return make(std::move(n));
}

Expr mk_binary(ExprKind k, Expr a, Expr b) {
    // Canonical folds keeping printed constants re-parseable: a negated
    // constant and a quotient of constants are themselves constants.
    if (k == ExprKind::Div && a.kind() == ExprKind::Constant &&
        b.kind() == ExprKind::Constant && b.const_value() != 0)
        return mk_const(a.const_value() / b.const_value());
    ExprNode n;
    n.kind = k;
    n.kids = {std::move(a), std::move(b)};
    return make(std::move(n));
}

Expr mk_unary(ExprKind k, Expr a) {
    if (k == ExprKind::Neg && a.kind() == ExprKind::Constant)
        return mk_const(-a.const_value());
    ExprNode n;
    n.kind = k;
    n.kids = {std::move(a)};
    return make(std::move(n));
}

} // namespace

Expr Expr::constant(Rat value) { return mk_const(std::move(value)); }

Expr Expr::variable(int index) {
    if (index < 0 || index >= MultiIndexTable::kMaxVars)
        throw DimensionMismatch("variable index out of range");
    ExprNode n;
    n.kind = ExprKind::Variable;
    n.var = index;
    return make(std::move(n));
}

ExprKind Expr::kind() const { return n_->kind; }
const Rat& Expr::const_value() const { return n_->value; }
int Expr::var_index() const { return n_->var; }
long long Expr::int_exponent() const { return n_->iexp; }
const Rat& Expr::abs_exponent() const { return n_->alpha; }
const Expr& Expr::child(int i) const { return n_->kids[i]; }
int Expr::child_count() const { return static_cast<int>(n_->kids.size()); }

bool Expr::same_as(const Expr& o) const {
    if (n_ == o.n_) return true;
    if (!n_ || !o.n_) return false;
    if (n_->kind != o.n_->kind || n_->value != o.n_->value || n_->var != o.n_->var ||
        n_->iexp != o.n_->iexp || n_->alpha != o.n_->alpha ||
        n_->kids.size() != o.n_->kids.size())
        return false;
    for (std::size_t i = 0; i < n_->kids.size(); ++i)
        if (!n_->kids[i].same_as(o.n_->kids[i])) return false;
    return true;
}

Expr operator-(const Expr& e) { return mk_unary(ExprKind::Neg, e); }
Expr operator+(const Expr& a, const Expr& b) { return mk_binary(ExprKind::Add, a, b); }
Expr operator-(const Expr& a, const Expr& b) { return mk_binary(ExprKind::Sub, a, b); }
Expr operator*(const Expr& a, const Expr& b) { return mk_binary(ExprKind::Mul, a, b); }
Expr operator/(const Expr& a, const Expr& b) { return mk_binary(ExprKind::Div, a, b); }

Expr pow(const Expr& base, long long exponent) {
    ExprNode n;
    n.kind = ExprKind::IntPow;
    n.iexp = exponent;
    n.kids = {base};
    return make(std::move(n));
}

Expr abs_pow(const Expr& e, const Rat& alpha) {
    if (alpha <= 0) throw DomainError("abs-power exponent must be positive");
    ExprNode n;
    n.kind = ExprKind::AbsPow;
    n.alpha = alpha;
    n.kids = {e};
    return make(std::move(n));
}

Expr abs(const Expr& e) { return abs_pow(e, Rat(1)); }

Expr sqrt(const Expr& e) { return mk_unary(ExprKind::Sqrt, e); }
Expr sin(const Expr& e) { return mk_unary(ExprKind::Sin, e); }
Expr cos(const Expr& e) { return mk_unary(ExprKind::Cos, e); }

// ---------------------------------------------------------------------------
// Parser
// ---------------------------------------------------------------------------

namespace {

class Parser {
public:
    explicit Parser(const std::string& src) : s_(src) {}

    Expr run() {
        Expr e = expr();
        skip_ws();
        if (pos_ != s_.size()) fail("unexpected trailing input");
        return e;
    }

private:
    [[noreturn]] void fail(const std::string& msg) const { throw ParseError(msg, pos_); }

    void skip_ws() {
        while (pos_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[pos_]))) ++pos_;
    }
    char peek() {
        skip_ws();
        return pos_ < s_.size() ? s_[pos_] : '\0';
    }
    bool eat(char c) {
        if (peek() == c) { ++pos_; return true; }
        return false;
    }
    void expect(char c) {
        if (!eat(c)) fail(std::string("expected '") + c + "'");
    }

    Expr expr() {
        Expr acc = term();
        for (;;) {
            char c = peek();
            if (c == '+') { ++pos_; acc = acc + term(); }
            else if (c == '-') { ++pos_; acc = acc - term(); }
            else break;
        }
        return acc;
    }

    Expr term() {
        Expr acc = factor();
        for (;;) {
            char c = peek();
            if (c == '*') { ++pos_; acc = acc * factor(); }
            else if (c == '/') { ++pos_; acc = acc / factor(); }
            else break;
        }
        return acc;
    }

    Expr factor() {
        if (eat('-')) return -factor_tail();
        return factor_tail();
    }

    Expr factor_tail() {
        bool base_is_abs = false;
        Expr b = base(&base_is_abs);
        if (peek() != '^') return b;
        ++pos_;
        // exponent := ['-'] integer | '(' ['-'] integer '/' integer ')'
        if (eat('(')) {
            std::size_t open_pos = pos_;
            long long num = integer();
            if (eat('/')) {
                long long den = integer();
                expect(')');
                if (den == 0) { pos_ = open_pos; fail("zero exponent denominator"); }
                Rat alpha(num, den);
                if (is_integer(alpha)) return apply_int_exponent(b, base_is_abs, to_int(alpha));
                if (!base_is_abs) {
                    pos_ = open_pos;
                    fail("fractional exponents are legal only directly on abs(...)");
                }
                if (alpha <= 0) { pos_ = open_pos; fail("fractional exponent must be positive"); }
                return abs_pow(b.child(), alpha);
            }
            expect(')');
            return apply_int_exponent(b, base_is_abs, num);
        }
        return apply_int_exponent(b, base_is_abs, integer());
    }

    static Expr apply_int_exponent(const Expr& b, bool base_is_abs, long long n) {
        if (base_is_abs && n >= 1) return abs_pow(b.child(), Rat(n));
        return pow(b, n);
    }

    long long integer() {
        skip_ws();
        std::size_t start = pos_;
        bool neg = pos_ < s_.size() && s_[pos_] == '-';
        if (neg) ++pos_;
        if (pos_ >= s_.size() || !std::isdigit(static_cast<unsigned char>(s_[pos_])))
            { pos_ = start; fail("expected an integer"); }
        long long v = 0;
        while (pos_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[pos_])))
            v = v * 10 + (s_[pos_++] - '0');
        return neg ? -v : v;
    }

    Expr base(bool* is_abs) {
        char c = peek();
        if (c == '(') {
            ++pos_;
            Expr e = expr();
            expect(')');
            return e;
        }
        if (std::isdigit(static_cast<unsigned char>(c))) return number();
        if (std::isalpha(static_cast<unsigned char>(c))) return identifier(is_abs);
        fail("expected a number, identifier or '('");
    }

    Expr number() {
        skip_ws();
        BigInt ipart = 0;
        while (pos_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[pos_])))
            ipart = ipart * 10 + (s_[pos_++] - '0');
        if (pos_ < s_.size() && s_[pos_] == '.') {
            ++pos_;
            if (pos_ >= s_.size() || !std::isdigit(static_cast<unsigned char>(s_[pos_])))
                fail("expected digits after the decimal point");
            BigInt fpart = 0, scale = 1;
            while (pos_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[pos_]))) {
                fpart = fpart * 10 + (s_[pos_++] - '0');
                scale *= 10;
            }
            return mk_const(Rat(ipart) + Rat(fpart, scale));
        }
        return mk_const(Rat(ipart));
    }

    Expr identifier(bool* is_abs) {
        skip_ws();
        std::size_t start = pos_;
        std::string name;
        while (pos_ < s_.size() &&
               (std::isalnum(static_cast<unsigned char>(s_[pos_]))))
            name += s_[pos_++];
        if (pos_ < s_.size() && s_[pos_] == '(') {
            ++pos_;
            Expr arg = expr();
            expect(')');
            if (name == "abs") { *is_abs = true; return abs(arg); }
            if (name == "sqrt") return sqrt(arg);
            if (name == "sin") return sin(arg);
            if (name == "cos") return cos(arg);
            pos_ = start;
            fail("unknown function '" + name + "'");
        }
        if (name == "x") return Expr::variable(0);
        if (name == "y") return Expr::variable(1);
        if (name == "z") return Expr::variable(2);
        if (name.size() == 2 && name[0] == 'u' && name[1] >= '1' && name[1] <= '9')
            return Expr::variable(name[1] - '1');
        pos_ = start;
        fail("unknown identifier '" + name + "'");
    }

    const std::string& s_;
    std::size_t pos_ = 0;
};

} // namespace

Expr parse_expr(const std::string& source) { return Parser(source).run(); }

// ---------------------------------------------------------------------------
// Printer
// ---------------------------------------------------------------------------

namespace {

// Precedence levels: 1 additive, 2 multiplicative, 3 unary minus, 4 power base.
int precedence(const Expr& e) {
    switch (e.kind()) {
    case ExprKind::Add:
    case ExprKind::Sub: return 1;
    case ExprKind::Mul:
    case ExprKind::Div: return 2;
    case ExprKind::Neg: return 3;
    case ExprKind::IntPow:
    case ExprKind::AbsPow: return 4;
    default: return 5;
    }
}

std::string var_name(int i) {
    static const char* named[] = {"x", "y", "z"};
    if (i < 3) return named[i];
    return "u" + std::to_string(i + 1);
}

void print(const Expr& e, std::ostream& os, int parent_prec) {
    int prec = precedence(e);
    bool parens = prec < parent_prec;
    if (parens) os << '(';
    switch (e.kind()) {
    case ExprKind::Constant: {
        const Rat& q = e.const_value();
        if (q < 0) os << '-';
        Rat a = q < 0 ? Rat(-q) : q;
        os << numerator(a).str();
        if (denominator(a) != 1) os << '/' << denominator(a).str();
        break;
    }
    case ExprKind::Variable: os << var_name(e.var_index()); break;
    case ExprKind::Neg:
        os << '-';
        print(e.child(), os, 4);
        break;
    case ExprKind::Add:
        print(e.child(0), os, 1);
        os << " + ";
        print(e.child(1), os, 2);
        break;
    case ExprKind::Sub:
        print(e.child(0), os, 1);
        os << " - ";
        print(e.child(1), os, 2);
        break;
    case ExprKind::Mul:
        print(e.child(0), os, 2);
        os << '*';
        print(e.child(1), os, 3);
        break;
    case ExprKind::Div:
        print(e.child(0), os, 2);
        os << '/';
        print(e.child(1), os, 3);
        break;
    case ExprKind::IntPow:
        print(e.child(), os, 5);
        os << '^' << e.int_exponent();
        break;
    case ExprKind::AbsPow: {
        os << "abs(";
        print(e.child(), os, 0);
        os << ')';
        const Rat& a = e.abs_exponent();
        if (a != 1) {
            os << '^';
            if (is_integer(a)) os << numerator(a).str();
            else os << '(' << numerator(a).str() << '/' << denominator(a).str() << ')';
        }
        break;
    }
    case ExprKind::Sqrt:
    case ExprKind::Sin:
    case ExprKind::Cos:
        os << (e.kind() == ExprKind::Sqrt ? "sqrt" : e.kind() == ExprKind::Sin ? "sin" : "cos")
           << '(';
        print(e.child(), os, 0);
        os << ')';
        break;
    }
    if (parens) os << ')';
}

} // namespace

std::string Expr::str() const {
    std::ostringstream os;
    print(*this, os, 0);
    return os.str();
}

// ---------------------------------------------------------------------------
// Structure queries
// ---------------------------------------------------------------------------

int var_count(const Expr& e) {
    switch (e.kind()) {
    case ExprKind::Constant: return 0;
    case ExprKind::Variable: return e.var_index() + 1;
    default: {
        int m = 0;
        for (int i = 0; i < e.child_count(); ++i) m = std::max(m, var_count(e.child(i)));
        return m;
    }
    }
}

std::optional<long long> poly_degree(const Expr& e) {
    switch (e.kind()) {
    case ExprKind::Constant: return 0;
    case ExprKind::Variable: return 1;
    case ExprKind::Neg: return poly_degree(e.child());
    case ExprKind::Add:
    case ExprKind::Sub: {
        auto a = poly_degree(e.child(0)), b = poly_degree(e.child(1));
        if (!a || !b) return std::nullopt;
        return std::max(*a, *b);
    }
    case ExprKind::Mul: {
        auto a = poly_degree(e.child(0)), b = poly_degree(e.child(1));
        if (!a || !b) return std::nullopt;
        return *a + *b;
    }
    case ExprKind::Div: {
        auto a = poly_degree(e.child(0)), b = poly_degree(e.child(1));
        if (!a || !b || *b != 0) return std::nullopt;
        return a;
    }
    case ExprKind::IntPow: {
        auto a = poly_degree(e.child());
        if (!a) return std::nullopt;
        if (e.int_exponent() < 0) return *a == 0 ? std::optional<long long>(0) : std::nullopt;
        return *a * e.int_exponent();
    }
    default: return std::nullopt;
    }
}

Expr substitute(const Expr& e, const std::vector<Expr>& repl) {
    switch (e.kind()) {
    case ExprKind::Constant: return e;
    case ExprKind::Variable: {
        int i = e.var_index();
        if (i < static_cast<int>(repl.size()) && !repl[i].is_null()) return repl[i];
        return e;
    }
    case ExprKind::Neg: return -substitute(e.child(), repl);
    case ExprKind::Add: return substitute(e.child(0), repl) + substitute(e.child(1), repl);
    case ExprKind::Sub: return substitute(e.child(0), repl) - substitute(e.child(1), repl);
    case ExprKind::Mul: return substitute(e.child(0), repl) * substitute(e.child(1), repl);
    case ExprKind::Div: return substitute(e.child(0), repl) / substitute(e.child(1), repl);
    case ExprKind::IntPow: return pow(substitute(e.child(), repl), e.int_exponent());
    case ExprKind::AbsPow: return abs_pow(substitute(e.child(), repl), e.abs_exponent());
    case ExprKind::Sqrt: return sqrt(substitute(e.child(), repl));
    case ExprKind::Sin: return sin(substitute(e.child(), repl));
    case ExprKind::Cos: return cos(substitute(e.child(), repl));
    }
    throw Error("unhandled expression kind");
}

// ---------------------------------------------------------------------------
// Point values and smoothness class
// ---------------------------------------------------------------------------

PointValue eval_point(const Expr& e, const std::vector<Rat>& base) {
    switch (e.kind()) {
    case ExprKind::Constant:
        return {e.const_value(), to_double(e.const_value())};
    case ExprKind::Variable: {
        int i = e.var_index();
        if (i >= static_cast<int>(base.size()))
            throw DimensionMismatch("expression uses variable beyond the base dimension");
        return {base[i], to_double(base[i])};
    }
    case ExprKind::Neg: {
        PointValue a = eval_point(e.child(), base);
        return {a.exact ? std::optional<Rat>(-*a.exact) : std::nullopt, -a.approx};
    }
    case ExprKind::Add:
    case ExprKind::Sub:
    case ExprKind::Mul:
    case ExprKind::Div: {
        PointValue a = eval_point(e.child(0), base);
        PointValue b = eval_point(e.child(1), base);
        PointValue out;
        switch (e.kind()) {
        case ExprKind::Add:
            out.approx = a.approx + b.approx;
            if (a.exact && b.exact) out.exact = *a.exact + *b.exact;
            break;
        case ExprKind::Sub:
            out.approx = a.approx - b.approx;
            if (a.exact && b.exact) out.exact = *a.exact - *b.exact;
            break;
        case ExprKind::Mul:
            out.approx = a.approx * b.approx;
            if (a.exact && b.exact) out.exact = *a.exact * *b.exact;
            break;
        default:
            if (b.is_zero()) throw DomainError("denominator vanishes at the base point");
            out.approx = a.approx / b.approx;
            if (a.exact && b.exact) out.exact = *a.exact / *b.exact;
            break;
        }
        return out;
    }
    case ExprKind::IntPow: {
        PointValue a = eval_point(e.child(), base);
        long long n = e.int_exponent();
        if (n < 0 && a.is_zero())
            throw DomainError("negative power of a value vanishing at the base point");
        PointValue out;
        out.approx = std::pow(a.approx, static_cast<double>(n));
        if (a.exact) out.exact = rat_pow_int(*a.exact, n);
        return out;
    }
    case ExprKind::AbsPow: {
        PointValue a = eval_point(e.child(), base);
        const Rat& alpha = e.abs_exponent();
        PointValue out;
        out.approx = std::pow(std::fabs(a.approx),
                              to_double(alpha));
        if (a.exact) {
            if (*a.exact == 0) out.exact = Rat(0);
            else {
                try {
                    out.exact = rat_pow_exact(*a.exact < 0 ? Rat(-*a.exact) : *a.exact,
                                              numerator(alpha).convert_to<long long>(),
                                              denominator(alpha).convert_to<long long>());
                } catch (const InexactValue&) {}
            }
        }
        return out;
    }
    case ExprKind::Sqrt: {
        PointValue a = eval_point(e.child(), base);
        if (a.sign() < 0) throw DomainError("sqrt of a negative value at the base point");
        PointValue out;
        out.approx = std::sqrt(std::max(0.0, a.approx));
        if (a.exact) {
            if (*a.exact == 0) out.exact = Rat(0);
            else {
                try { out.exact = rat_sqrt_exact(*a.exact); }
                catch (const InexactValue&) {}
            }
        }
        return out;
    }
    case ExprKind::Sin:
    case ExprKind::Cos: {
        PointValue a = eval_point(e.child(), base);
        PointValue out;
        out.approx = e.kind() == ExprKind::Sin ? std::sin(a.approx) : std::cos(a.approx);
        // sin/cos of a non-zero rational are irrational; only 0 stays exact.
        if (a.exact && *a.exact == 0)
            out.exact = e.kind() == ExprKind::Sin ? Rat(0) : Rat(1);
        return out;
    }
    }
    throw Error("unhandled expression kind");
}

int smoothness_class(const Expr& e, const std::vector<Rat>& base) {
    switch (e.kind()) {
    case ExprKind::Constant:
    case ExprKind::Variable:
        return kSmoothInfinity;
    case ExprKind::Neg:
    case ExprKind::Sin:
    case ExprKind::Cos:
        return smoothness_class(e.child(), base);
    case ExprKind::Add:
    case ExprKind::Sub:
    case ExprKind::Mul:
        return std::min(smoothness_class(e.child(0), base),
                        smoothness_class(e.child(1), base));
    case ExprKind::Div: {
        if (eval_point(e.child(1), base).is_zero())
            throw DomainError("denominator vanishes at the base point");
        return std::min(smoothness_class(e.child(0), base),
                        smoothness_class(e.child(1), base));
    }
    case ExprKind::IntPow: {
        if (e.int_exponent() < 0 && eval_point(e.child(), base).is_zero())
            throw DomainError("negative power of a value vanishing at the base point");
        return smoothness_class(e.child(), base);
    }
    case ExprKind::AbsPow: {
        int inner_class = smoothness_class(e.child(), base);
        const Rat& alpha = e.abs_exponent();
        bool even_integer = is_integer(alpha) && to_int(alpha) % 2 == 0;
        if (even_integer) return inner_class; // |e|^(2j) = e^(2j)
        if (!eval_point(e.child(), base).is_zero()) return inner_class;
        int local = is_integer(alpha)
                        ? static_cast<int>(to_int(alpha)) - 1
                        : static_cast<int>(rat_floor(alpha).convert_to<long long>());
        return std::min(inner_class, local);
    }
    case ExprKind::Sqrt: {
        PointValue v = eval_point(e.child(), base);
        if (v.sign() < 0) throw DomainError("sqrt of a negative value at the base point");
        int inner_class = smoothness_class(e.child(), base);
        return v.is_zero() ? std::min(inner_class, 0) : inner_class;
    }
    }
    throw Error("unhandled expression kind");
}

int smoothness_class(const Expr& e, const std::vector<double>& base) {
    return smoothness_class(e, detail::to_rat_base(base));
}

namespace detail {

std::vector<Rat> to_rat_base(const std::vector<Rat>& base) { return base; }

std::vector<Rat> to_rat_base(const std::vector<double>& base) {
    std::vector<Rat> out(base.size());
    for (std::size_t i = 0; i < base.size(); ++i) out[i] = rat_from_double(base[i]);
    return out;
}

} // namespace detail

} // namespace osculum
