#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <random>

#include "osculum/taylor_order.hpp"
#include "test_util.hpp"

using namespace osculum;
using testutil::random_poly;

namespace {

AdaptedPair graph_pair(const std::string& f, const std::string& ft) {
    return make_adapted_pair(1, 2, {parse_expr(f)}, {parse_expr(ft)});
}

} // namespace

TEST_CASE("first differing Taylor degree fixes the order") {
    OrderResult r = order_from_graphs(graph_pair("x^2", "x^2 + x^5"), 10, NumericMode::Exact);
    CHECK(r.s == OrderBound::exactly(4));
    CHECK_FALSE(r.saturated_by_class);

    OrderResult rf = order_from_graphs(graph_pair("x^2", "x^2 + x^5"), 10, NumericMode::Float);
    CHECK(rf.s == OrderBound::exactly(4));
}

TEST_CASE("order saturates at the smoothness class for the C^2 extension pair") {
    AdaptedPair ck = graph_pair("x^2 - abs(x)^(5/2)", "x^2 + abs(x)^(5/2)");
    OrderResult r = order_from_graphs(ck, 10, NumericMode::Exact);
    CHECK(r.s == OrderBound::exactly(2));
    CHECK(r.saturated_by_class);
    CHECK(r.class_bound == 2);
}

TEST_CASE("identical graph maps report at-least k_max") {
    OrderResult r = order_from_graphs(graph_pair("x^3 + x^2", "x^3 + x^2"), 6,
                                      NumericMode::Exact);
    CHECK(r.s == OrderBound::bounded_below(6));
    CHECK_FALSE(r.saturated_by_class);
}

TEST_CASE("transverse lines have order exactly 0") {
    ParamPatch M = parse_patch({"x", "0"}, {Rat(0)});
    ParamPatch Mt = parse_patch({"x", "x"}, {Rat(0)});
    OrderResult r = tangency_order(M, Mt, {Rat(0), Rat(0)}, 8);
    CHECK(r.s == OrderBound::exactly(0));
}

TEST_CASE("generalized branch pairs have order N, saturated") {
    for (int n : {2, 3, 4, 5}) {
        std::string lo = "x^" + std::to_string(n) + " - abs(x)^(" +
                         std::to_string(2 * n + 1) + "/2)";
        std::string hi = "x^" + std::to_string(n) + " + abs(x)^(" +
                         std::to_string(2 * n + 1) + "/2)";
        ParamPatch M = parse_patch({"x", lo}, {Rat(0)});
        ParamPatch Mt = parse_patch({"x", hi}, {Rat(0)});
        OrderResult r = tangency_order(M, Mt, {Rat(0), Rat(0)}, 10);
        CHECK(r.s == OrderBound::exactly(n));
        CHECK(r.saturated_by_class);
    }
}

TEST_CASE("identical patches report at-least k_max") {
    ParamPatch M = parse_patch({"x", "x^2 + x^3"}, {Rat(0)});
    OrderResult r = tangency_order(M, M, {Rat(0), Rat(0)}, 7);
    CHECK(r.s == OrderBound::bounded_below(7));
}

TEST_CASE("order s means equal Taylor polynomials through degree s and no further") {
    std::mt19937_64 rng(31415);
    int checked = 0;
    while (checked < 60) {
        int p = 1 + static_cast<int>(rng() % 2);
        int codim = 1 + static_cast<int>(rng() % 2);
        std::vector<Expr> F, Ft;
        for (int c = 0; c < codim; ++c) {
            auto base_poly = random_poly(rng, p, 5, 4, 2);
            auto bump = random_poly(rng, p, 6, 2, 2);
            F.push_back(base_poly.expr);
            Ft.push_back(base_poly.expr + bump.expr);
        }
        AdaptedPair pair = make_adapted_pair(p, p + codim, F, Ft);
        OrderResult r = order_from_graphs(pair, 8, NumericMode::Exact);
        if (r.s.at_least) continue; // bump cancelled; uninformative draw
        ++checked;
        int s = r.s.value;
        std::vector<Rat> zero(p, Rat(0));
        Jet<Rat> jf = jet_of_map<Rat>(F, zero, 8);
        Jet<Rat> jft = jet_of_map<Rat>(Ft, zero, 8);
        // Degrees 0..s agree coefficient-wise; degree s+1 does not.
        bool equal_through_s = true;
        for (int d = 0; d <= s; ++d)
            for (std::size_t rk = jf.table().degree_begin(d); rk < jf.table().degree_end(d); ++rk)
                for (int c = 0; c < codim; ++c)
                    equal_through_s = equal_through_s &&
                        jf.coeff_by_rank(c, rk) == jft.coeff_by_rank(c, rk);
        CHECK(equal_through_s);
        bool differ_at_next = false;
        for (std::size_t rk = jf.table().degree_begin(s + 1);
             rk < jf.table().degree_end(s + 1); ++rk)
            for (int c = 0; c < codim; ++c)
                differ_at_next = differ_at_next ||
                    !(jf.coeff_by_rank(c, rk) == jft.coeff_by_rank(c, rk));
        CHECK(differ_at_next);
    }
}

TEST_CASE("tangency order is invariant under affine ambient changes") {
    // Graph-compatible affine maps: invertible on the plane, shear into the
    // normal block, plus a translation and an optional coordinate swap.
    std::mt19937_64 rng(2718);
    std::uniform_int_distribution<int> coef(-3, 3);
    for (int trial = 0; trial < 100; ++trial) {
        auto f = random_poly(rng, 1, 5, 3, 2);
        auto bump = random_poly(rng, 1, 5, 2, 2);
        Expr F = f.expr, Ft = f.expr + bump.expr;
        OrderResult direct = order_from_graphs(make_adapted_pair(1, 2, {F}, {Ft}), 8,
                                               NumericMode::Exact);

        Rat a(coef(rng) == 0 ? 1 : coef(rng));
        if (a == 0) a = 1;
        Rat d(coef(rng) == 0 ? 2 : coef(rng));
        if (d == 0) d = 2;
        Rat q(coef(rng));
        Rat t1(coef(rng)), t2(coef(rng));
        bool swap_coords = (rng() & 1) != 0;

        // phi(x, y) = (a x + t1, q x + d y + t2), optionally followed by a swap.
        Expr X = Expr::constant(a) * Expr::variable(0) + Expr::constant(t1);
        Expr Y = Expr::constant(q) * Expr::variable(0) +
                 Expr::constant(d) * substitute(F, {Expr::variable(0)}) +
                 Expr::constant(t2);
        Expr Yt = Expr::constant(q) * Expr::variable(0) +
                  Expr::constant(d) * substitute(Ft, {Expr::variable(0)}) +
                  Expr::constant(t2);
        std::vector<Expr> compsM = {X, Y}, compsMt = {X, Yt};
        if (swap_coords) {
            std::swap(compsM[0], compsM[1]);
            std::swap(compsMt[0], compsMt[1]);
        }
        ParamPatch M = make_patch(compsM, {Rat(0)});
        ParamPatch Mt = make_patch(compsMt, {Rat(0)});
        std::vector<Rat> x0 = swap_coords ? std::vector<Rat>{t2, t1}
                                          : std::vector<Rat>{t1, t2};
        OrderResult moved = tangency_order(M, Mt, x0, 8);
        CAPTURE(trial);
        CHECK(moved.s == direct.s);
    }
}

TEST_CASE("order monotonicity: order at least k implies order at least k-1") {
    // Holds structurally: the reported s bounds the shared-jet degrees from
    // above, so every k <= s also has equal degree-k polynomials.
    AdaptedPair pair = graph_pair("x^2 + x^4", "x^2 + x^4 + x^6");
    OrderResult r = order_from_graphs(pair, 10, NumericMode::Exact);
    REQUIRE(r.s == OrderBound::exactly(5));
    std::vector<Rat> zero{Rat(0)};
    for (int k = 1; k <= 5; ++k) {
        Jet<Rat> jf = jet_of_expr(pair.F.graph_map[0], zero, k);
        Jet<Rat> jft = jet_of_expr(pair.Ft.graph_map[0], zero, k);
        CHECK(jf == jft);
    }
}
