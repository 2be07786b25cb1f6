#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <random>

#include "osculum/expr.hpp"
#include "osculum/jet.hpp"
#include "test_util.hpp"

using namespace osculum;
using testutil::random_poly;

namespace {

Rat coeff1(const Jet<Rat>& j, int deg) {
    return j.coeff(0, MultiIndex{{deg}});
}

} // namespace

TEST_CASE("parser accepts the catalog shapes") {
    Expr e = parse_expr("x^2 - abs(x)^(5/2)");
    CHECK(e.kind() == ExprKind::Sub);
    CHECK(e.child(0).kind() == ExprKind::IntPow);
    CHECK(e.child(1).kind() == ExprKind::AbsPow);
    CHECK(e.child(1).abs_exponent() == Rat(5, 2));

    Expr zero = parse_expr("0");
    CHECK(zero.kind() == ExprKind::Constant);
    CHECK(zero.const_value() == 0);
}

TEST_CASE("fractional exponents are legal only directly on abs") {
    CHECK_THROWS_AS(parse_expr("x^(5/2)"), ParseError);
    CHECK_THROWS_AS(parse_expr("(abs(x))^(5/2)"), ParseError);
    CHECK_NOTHROW(parse_expr("abs(x)^(5/2)"));
}

TEST_CASE("parser reports unknown identifiers and syntax errors with positions") {
    CHECK_THROWS_AS(parse_expr("x + w"), ParseError);
    CHECK_THROWS_AS(parse_expr("foo(x)"), ParseError);
    CHECK_THROWS_AS(parse_expr("x +"), ParseError);
    CHECK_THROWS_AS(parse_expr("(x"), ParseError);
    try {
        parse_expr("x + w");
    } catch (const ParseError& err) {
        CHECK(err.pos == 4);
    }
}

TEST_CASE("printer round-trips through the parser") {
    const char* sources[] = {
        "x^2 - abs(x)^(5/2)",
        "0",
        "1/2*x + 0.25*y^3",
        "-x*y + sin(x)*cos(y)",
        "sqrt(1 + x^2)/(1 - y)",
        "abs(x - y)^(7/3) + u4^2",
        "x^-2 + (x + y)^3",
    };
    for (const char* s : sources) {
        Expr e = parse_expr(s);
        Expr again = parse_expr(e.str());
        CAPTURE(s);
        CAPTURE(e.str());
        CHECK(again.same_as(e));
        CHECK(again.str() == e.str());
    }
}

TEST_CASE("jets of the extension functions match their stated Taylor data") {
    Expr e = parse_expr("x^2 - abs(x)^(5/2)");
    std::vector<Rat> base{Rat(0)};

    CHECK(smoothness_class(e, base) == 2);

    Jet<Rat> j = jet_of_expr(e, base, 2);
    CHECK(coeff1(j, 0) == 0);
    CHECK(coeff1(j, 1) == 0);
    CHECK(coeff1(j, 2) == 1);

    CHECK_THROWS_AS(jet_of_expr(e, base, 3), SmoothnessExceeded);
}

TEST_CASE("sin jet at 0 gives the classical series") {
    Jet<Rat> j = jet_of_expr(parse_expr("sin(x)"), std::vector<Rat>{Rat(0)}, 3);
    CHECK(coeff1(j, 0) == 0);
    CHECK(coeff1(j, 1) == 1);
    CHECK(coeff1(j, 2) == 0);
    CHECK(coeff1(j, 3) == Rat(-1, 6));
}

TEST_CASE("jet arithmetic basics") {
    std::vector<Rat> base{Rat(0)};
    Jet<Rat> one_plus_u = jet_of_expr(parse_expr("1 + x"), base, 2);
    Jet<Rat> sq = one_plus_u * one_plus_u;
    CHECK(coeff1(sq, 0) == 1);
    CHECK(coeff1(sq, 1) == 2);
    CHECK(coeff1(sq, 2) == 1);

    Jet<Rat> j = jet_of_expr(parse_expr("x^3 - x^5 + 2*x"), base, 6);
    CHECK((j - j).vanishing_order() == VanishingOrder::bounded_below(7));
}

TEST_CASE("compose expands sin(2t) correctly") {
    // outer: u - u^3/6 (the sin series), inner: 2t, truncation 3.
    std::vector<Rat> base{Rat(0)};
    Jet<Rat> outer = jet_of_expr(parse_expr("x - x^3/6"), base, 3);
    Jet<Rat> inner = jet_of_expr(parse_expr("2*x"), base, 3);
    Jet<Rat> c = jet_compose(outer, inner);
    CHECK(coeff1(c, 0) == 0);
    CHECK(coeff1(c, 1) == 2);
    CHECK(coeff1(c, 2) == 0);
    CHECK(coeff1(c, 3) == Rat(-8, 6));
}

TEST_CASE("compose requires matching constant term") {
    std::vector<Rat> base{Rat(0)};
    Jet<Rat> outer = jet_of_expr(parse_expr("x^2"), base, 3);
    Jet<Rat> inner = jet_of_expr(parse_expr("1 + x"), base, 3);
    CHECK_THROWS_AS(jet_compose(outer, inner), DimensionMismatch);
}

TEST_CASE("vanishing order") {
    std::vector<Rat> base1{Rat(0)};
    Jet<Rat> j = jet_of_expr(parse_expr("x^3 - x^5"), base1, 6);
    CHECK(j.vanishing_order() == VanishingOrder::exactly(3));

    Jet<Rat> zero(std::vector<Rat>{Rat(0)}, 4, 1);
    CHECK(zero.vanishing_order() == VanishingOrder::bounded_below(5));

    std::vector<Rat> base2{Rat(0), Rat(0)};
    Jet<Rat> m = jet_of_expr(parse_expr("u1^2*u2^2"), base2, 4);
    CHECK(m.vanishing_order() == VanishingOrder::exactly(4));
}

TEST_CASE("exact jets reproduce polynomial coefficients") {
    std::mt19937_64 rng(20260809);
    for (int trial = 0; trial < 60; ++trial) {
        int p = 1 + static_cast<int>(rng() % 3);
        auto poly = random_poly(rng, p, 6, 8);
        std::vector<Rat> base(p, Rat(0));
        Jet<Rat> j = jet_of_expr(poly.expr, base, 6);
        for (std::size_t r = 0; r < j.table().size(); ++r) {
            const MultiIndex& mi = j.table().at(r);
            auto it = poly.coeffs.find(mi.entries);
            Rat expected = it == poly.coeffs.end() ? Rat(0) : it->second;
            CHECK(j.coeff_by_rank(0, r) == expected);
        }
    }
}

TEST_CASE("jet_mul agrees with the jet of the product expression") {
    std::mt19937_64 rng(7);
    for (int trial = 0; trial < 200; ++trial) {
        int p = 1 + static_cast<int>(rng() % 2);
        auto a = random_poly(rng, p, 4, 4);
        auto b = random_poly(rng, p, 4, 4);
        std::vector<Rat> base(p, Rat(0));
        Jet<Rat> ja = jet_of_expr(a.expr, base, 5);
        Jet<Rat> jb = jet_of_expr(b.expr, base, 5);
        Jet<Rat> prod = jet_of_expr(a.expr * b.expr, base, 5);
        CHECK(jet_mul(ja, jb) == prod);
    }
}

TEST_CASE("float-mode jets agree with exact mode to 1e-12 relative") {
    std::mt19937_64 rng(99);
    for (int trial = 0; trial < 40; ++trial) {
        int p = 1 + static_cast<int>(rng() % 2);
        auto a = random_poly(rng, p, 5, 6);
        std::vector<Rat> base_r(p, Rat(1, 3));
        std::vector<double> base_f(p, to_double(Rat(1, 3)));
        Jet<Rat> je = jet_of_expr(a.expr, base_r, 5);
        Jet<double> jf = jet_of_expr(a.expr, base_f, 5);
        for (std::size_t r = 0; r < je.table().size(); ++r) {
            double exact = to_double(je.coeff_by_rank(0, r));
            double approx = jf.coeff_by_rank(0, r);
            double scale = std::max(1.0, std::fabs(exact));
            CHECK(std::fabs(exact - approx) <= 1e-12 * scale);
        }
    }
}

TEST_CASE("non-zero polynomials of degree <= k never pass the o(|u|^k) jet test") {
    // Only the zero polynomial has an identically vanishing degree-k jet.
    std::mt19937_64 rng(424242);
    for (int trial = 0; trial < 500; ++trial) {
        int p = 1 + static_cast<int>(rng() % 3);
        int k = 1 + static_cast<int>(rng() % 6);
        auto poly = random_poly(rng, p, k, 5);
        if (poly.coeffs.empty()) continue; // cancelled to zero: skip
        std::vector<Rat> base(p, Rat(0));
        Jet<Rat> j = jet_of_expr(poly.expr, base, k);
        VanishingOrder vo = j.vanishing_order();
        CHECK(!vo.at_least);
        CHECK(vo.value <= k);
    }
    Jet<Rat> zero = jet_of_expr(parse_expr("0"), std::vector<Rat>{Rat(0)}, 5);
    CHECK(zero.vanishing_order() == VanishingOrder::bounded_below(6));
}

TEST_CASE("division requires a non-vanishing denominator at the base point") {
    CHECK_THROWS_AS(jet_of_expr(parse_expr("1/x"), std::vector<Rat>{Rat(0)}, 2), DomainError);
    Jet<Rat> j = jet_of_expr(parse_expr("1/(1 - x)"), std::vector<Rat>{Rat(0)}, 3);
    for (int d = 0; d <= 3; ++d) CHECK(coeff1(j, d) == 1); // geometric series
}

TEST_CASE("exact mode refuses irrational values") {
    CHECK_THROWS_AS(jet_of_expr(parse_expr("sqrt(2 + x)"), std::vector<Rat>{Rat(0)}, 2),
                    InexactValue);
    CHECK_THROWS_AS(jet_of_expr(parse_expr("sin(1 + x)"), std::vector<Rat>{Rat(0)}, 2),
                    InexactValue);
    // ... but keeps rational configurations exact.
    Jet<Rat> j = jet_of_expr(parse_expr("sqrt(4 + x)"), std::vector<Rat>{Rat(0)}, 2);
    CHECK(coeff1(j, 0) == 2);
    CHECK(coeff1(j, 1) == Rat(1, 4));
    CHECK(coeff1(j, 2) == Rat(-1, 64));
}

TEST_CASE("float mode handles irrational points") {
    Jet<double> j = jet_of_expr(parse_expr("sin(1 + x)"), std::vector<double>{0.0}, 2);
    CHECK(j.value() == doctest::Approx(std::sin(1.0)).epsilon(1e-14));
    CHECK(j.coeff(0, MultiIndex{{1}}) == doctest::Approx(std::cos(1.0)).epsilon(1e-14));
    CHECK(j.coeff(0, MultiIndex{{2}}) == doctest::Approx(-std::sin(1.0) / 2).epsilon(1e-14));
}

TEST_CASE("smoothness class of abs powers") {
    std::vector<Rat> zero{Rat(0)};
    CHECK(smoothness_class(parse_expr("abs(x)"), zero) == 0);
    CHECK(smoothness_class(parse_expr("abs(x)^3"), zero) == 2);
    CHECK(smoothness_class(parse_expr("abs(x)^2"), zero) == kSmoothInfinity);
    CHECK(smoothness_class(parse_expr("abs(x)^(7/2)"), zero) == 3);
    std::vector<Rat> one{Rat(1)};
    CHECK(smoothness_class(parse_expr("abs(x)^(5/2)"), one) == kSmoothInfinity);
}

TEST_CASE("jet of abs power away from the zero locus") {
    // |x|^3 at x = -2 equals -x^3 locally.
    Jet<Rat> j = jet_of_expr(parse_expr("abs(x)^3"), std::vector<Rat>{Rat(-2)}, 2);
    CHECK(j.value() == 8);
    CHECK(j.coeff(0, MultiIndex{{1}}) == -12);
    CHECK(j.coeff(0, MultiIndex{{2}}) == 6); // f''(-2)/2! for f = -x^3
}

TEST_CASE("multi-index table is graded lexicographic with prefix truncation") {
    MultiIndexTable tab(2, 3);
    CHECK(tab.size() == 10);
    CHECK(tab.at(0).entries == std::vector<int>{0, 0});
    CHECK(tab.at(1).entries == std::vector<int>{1, 0});
    CHECK(tab.at(2).entries == std::vector<int>{0, 1});
    CHECK(tab.at(3).entries == std::vector<int>{2, 0});
    CHECK(tab.at(4).entries == std::vector<int>{1, 1});
    CHECK(tab.at(5).entries == std::vector<int>{0, 2});
    MultiIndexTable smaller(2, 2);
    for (std::size_t r = 0; r < smaller.size(); ++r)
        CHECK(smaller.at(r).entries == tab.at(r).entries);
}
