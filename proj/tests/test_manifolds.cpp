#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "osculum/manifolds.hpp"
#include "test_util.hpp"

using namespace osculum;

namespace {

ParamPatch patch(const std::vector<std::string>& comps, std::vector<Rat> base) {
    return parse_patch(comps, std::move(base));
}

// Applies the recorded affine change to a width-m jet, column by column.
Jet<Rat> apply_change(const AffineChange& ch, const Jet<Rat>& q) {
    int m = static_cast<int>(ch.A.size());
    std::vector<std::vector<Rat>> coeffs(m, std::vector<Rat>(q.table().size(), Rat(0)));
    for (int r = 0; r < m; ++r) {
        for (int c = 0; c < m; ++c)
            for (std::size_t k = 0; k < q.table().size(); ++k)
                coeffs[r][k] += ch.A[r][c] * q.coeff_by_rank(c, k);
        coeffs[r][0] += ch.b[r];
    }
    return Jet<Rat>::from_coeffs(q.base(), q.order(), std::move(coeffs));
}

} // namespace

TEST_CASE("immersion check on the basic patches") {
    CHECK(immersion_check(patch({"x", "x^2"}, {Rat(0)})));
    CHECK_FALSE(immersion_check(patch({"x^2", "x^3"}, {Rat(0)})));
    CHECK(immersion_check(patch({"u1", "u2", "u1*u2"}, {Rat(0), Rat(0)})));
    CHECK(immersion_check(patch({"x", "x^2"}, {Rat(0)}), NumericMode::Float));
    CHECK_FALSE(immersion_check(patch({"x^2", "x^3"}, {Rat(0)}), NumericMode::Float));
}

TEST_CASE("already adapted pairs keep their graph maps and get the identity change") {
    ParamPatch M = patch({"x", "x^2"}, {Rat(0)});
    ParamPatch Mt = patch({"x", "x^2 + x^5"}, {Rat(0)});
    AdaptedPair pair = adapt_to_graphs(M, Mt, {Rat(0), Rat(0)});
    CHECK(pair.F.graph_map[0].same_as(parse_expr("x^2")));
    CHECK(pair.Ft.graph_map[0].same_as(parse_expr("x^2 + x^5")));
    CHECK(pair.change.A == identity_mat<Rat>(2));
    CHECK(pair.change.b == std::vector<Rat>{Rat(0), Rat(0)});
}

TEST_CASE("transverse lines have no common tangent") {
    ParamPatch M = patch({"x", "0"}, {Rat(0)});
    ParamPatch Mt = patch({"x", "x"}, {Rat(0)});
    CHECK_THROWS_AS(adapt_to_graphs(M, Mt, {Rat(0), Rat(0)}), NoCommonTangent);
    ParamPatch axis_y = patch({"0", "x"}, {Rat(0)});
    CHECK_THROWS_AS(adapt_to_graphs(M, axis_y, {Rat(0), Rat(0)}), NoCommonTangent);
}

TEST_CASE("adaptation is idempotent on adapted pairs") {
    AdaptedPair direct = make_adapted_pair(1, 2, {parse_expr("x^3")}, {parse_expr("x^4")});
    ParamPatch M = patch({"x", "x^3"}, {Rat(0)});
    ParamPatch Mt = patch({"x", "x^4"}, {Rat(0)});
    AdaptedPair adapted = adapt_to_graphs(M, Mt, {Rat(0), Rat(0)});
    CHECK(adapted.F.graph_map[0].same_as(direct.F.graph_map[0]));
    CHECK(adapted.Ft.graph_map[0].same_as(direct.Ft.graph_map[0]));
    CHECK(adapted.change.A == identity_mat<Rat>(2));
}

TEST_CASE("graphs over a different coordinate plane") {
    ParamPatch M = patch({"x^2", "x"}, {Rat(0)});
    ParamPatch Mt = patch({"x^3", "x"}, {Rat(0)});
    AdaptedPair pair = adapt_to_graphs(M, Mt, {Rat(0), Rat(0)});
    std::vector<Rat> zero{Rat(0)};
    Jet<Rat> f = jet_of_expr(pair.F.graph_map[0], zero, 3);
    Jet<Rat> ft = jet_of_expr(pair.Ft.graph_map[0], zero, 3);
    CHECK(f.coeff(0, MultiIndex{{2}}) == 1);
    CHECK(ft.coeff(0, MultiIndex{{3}}) == 1);
    CHECK((f - jet_of_expr(parse_expr("x^2"), zero, 3)).vanishing_order().at_least);
}

TEST_CASE("affine reparametrization of the second patch") {
    // Same parabola-like pair, but the second patch runs twice as fast.
    ParamPatch M = patch({"x", "x^2"}, {Rat(0)});
    ParamPatch Mt = patch({"2*x", "4*x^2 + x^3"}, {Rat(0)});
    AdaptedPair pair = adapt_to_graphs(M, Mt, {Rat(0), Rat(0)});
    std::vector<Rat> zero{Rat(0)};
    Jet<Rat> diff = jet_of_expr(pair.Ft.graph_map[0], zero, 4) -
                    jet_of_expr(pair.F.graph_map[0], zero, 4);
    // Ft(v) = v^2 + v^3/8 over the shared plane, so the difference is v^3/8.
    CHECK(diff.vanishing_order() == VanishingOrder::exactly(3));
    CHECK(diff.coeff(0, MultiIndex{{3}}) == Rat(1, 8));
}

TEST_CASE("shear adaptation straightens a tilted tangent") {
    ParamPatch M = patch({"x", "x + x^2"}, {Rat(0)});
    ParamPatch Mt = patch({"x", "x + x^3"}, {Rat(0)});
    AdaptedPair pair = adapt_to_graphs(M, Mt, {Rat(0), Rat(0)});
    CHECK(pair.change.A == Mat<Rat>{{Rat(1), Rat(0)}, {Rat(-1), Rat(1)}});
    std::vector<Rat> zero{Rat(0)};
    Jet<Rat> f = jet_of_expr(pair.F.graph_map[0], zero, 3);
    Jet<Rat> ft = jet_of_expr(pair.Ft.graph_map[0], zero, 3);
    CHECK(f.coeff(0, MultiIndex{{2}}) == 1);
    CHECK(f.coeff(0, MultiIndex{{1}}) == 0);
    CHECK(ft.coeff(0, MultiIndex{{3}}) == 1);
    CHECK(ft.coeff(0, MultiIndex{{1}}) == 0);
}

TEST_CASE("composing back reproduces the original patch on jets to order 3") {
    ParamPatch M = patch({"x", "x + x^2"}, {Rat(0)});
    ParamPatch Mt = patch({"x", "x + x^3 - x^2"}, {Rat(0)});
    AdaptedPair pair = adapt_to_graphs(M, Mt, {Rat(0), Rat(0)});

    for (int side = 0; side < 2; ++side) {
        const ParamPatch& q = side == 0 ? M : Mt;
        const GraphPresentation& g = side == 0 ? pair.F : pair.Ft;
        std::vector<Rat> u0 = q.base_u;
        Jet<Rat> qjet = jet_of_map<Rat>(q.components, u0, 3);
        Jet<Rat> y = apply_change(pair.change, qjet);
        Jet<Rat> top = y.components(0, pair.p);
        Jet<Rat> bottom = y.components(pair.p, pair.m - pair.p);
        std::vector<Rat> zero(pair.p, Rat(0));
        Jet<Rat> graph_jet = jet_of_map<Rat>(g.graph_map, zero, 3);
        Jet<Rat> reproduced = jet_compose(graph_jet, top);
        CHECK(reproduced == bottom);
    }
}

TEST_CASE("fully non-affine immersions are rejected as unsupported") {
    ParamPatch M = patch({"x + x^2", "x - x^2"}, {Rat(0)});
    ParamPatch Mt = patch({"x + x^3", "x - x^3"}, {Rat(0)});
    CHECK_THROWS_AS(adapt_to_graphs(M, Mt, {Rat(0), Rat(0)}), UnsupportedShape);
}

TEST_CASE("base parameter must map to the contact point") {
    ParamPatch M = patch({"x", "x^2"}, {Rat(0)});
    ParamPatch Mt = patch({"x", "x^2 + 1"}, {Rat(0)});
    CHECK_THROWS_AS(adapt_to_graphs(M, Mt, {Rat(0), Rat(0)}), DomainError);
}

TEST_CASE("float-mode adaptation matches exact mode on rational inputs") {
    ParamPatch M = patch({"x", "x + x^2"}, {Rat(0)});
    ParamPatch Mt = patch({"2*x", "2*x + x^3"}, {Rat(0)});
    AdaptedPair ex = adapt_to_graphs(M, Mt, {Rat(0), Rat(0)}, NumericMode::Exact);
    AdaptedPair fl = adapt_to_graphs(M, Mt, {Rat(0), Rat(0)}, NumericMode::Float);
    CHECK(ex.change.A == fl.change.A);
    std::vector<Rat> zero{Rat(0)};
    Jet<Rat> a = jet_of_expr(ex.Ft.graph_map[0], zero, 4);
    Jet<Rat> b = jet_of_expr(fl.Ft.graph_map[0], zero, 4);
    CHECK(a == b);
}

TEST_CASE("colley-kennedy extensions adapt as graphs with class bound 2") {
    ParamPatch M = patch({"x", "x^2 - abs(x)^(5/2)"}, {Rat(0)});
    ParamPatch Mt = patch({"x", "x^2 + abs(x)^(5/2)"}, {Rat(0)});
    AdaptedPair pair = adapt_to_graphs(M, Mt, {Rat(0), Rat(0)});
    CHECK(pair.class_bound() == 2);
    CHECK(pair.F.class_bound == 2);
}
