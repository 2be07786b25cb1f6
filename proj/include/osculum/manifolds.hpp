#pragma once

#include <vector>

#include "osculum/expr.hpp"
#include "osculum/linalg.hpp"

namespace osculum {

// A manifold near a point, given by a parametrization u -> q(u) of a
// neighbourhood, with q an immersion at the base parameter.
struct ParamPatch {
    int p = 0;                    // domain dimension
    int m = 0;                    // ambient dimension
    std::vector<Expr> components; // m expressions in p variables
    std::vector<Rat> base_u;      // base parameter u0

    // Smoothness class at the base parameter (minimum over components).
    int class_r() const;
};

ParamPatch make_patch(std::vector<Expr> components, std::vector<Rat> base_u);
ParamPatch parse_patch(const std::vector<std::string>& component_text,
                       std::vector<Rat> base_u);

// A manifold written as the graph {(v, F(v))} over its tangent plane after an
// ambient affine adaptation: F(0) = 0 and dF(0) = 0.
struct GraphPresentation {
    int p = 0;
    int m = 0;
    std::vector<Expr> graph_map; // m - p components F^j in p variables
    int class_bound = kSmoothInfinity; // min smoothness class of the components at 0
};

// Invertible ambient affine change y = A x + b.
struct AffineChange {
    Mat<Rat> A;
    std::vector<Rat> b;
};

// Two graph presentations over the common tangent plane, sharing one affine
// ambient adaptation.
struct AdaptedPair {
    int p = 0;
    int m = 0;
    GraphPresentation F;
    GraphPresentation Ft;
    AffineChange change;

    int class_bound() const { return std::min(F.class_bound, Ft.class_bound); }
};

// True iff the Jacobian at the base parameter has rank p (exact mode: exact
// rank; float mode: smallest singular value > 1e-9).
bool immersion_check(const ParamPatch& q, NumericMode mode = NumericMode::Exact);

// Builds an adapted pair directly from graph maps known to satisfy
// F(0) = 0, dF(0) = 0 (validated; identity ambient change).
AdaptedPair make_adapted_pair(int p, int m, std::vector<Expr> F, std::vector<Expr> Ft);

// Brings a pair of patches with common tangent space at x0 to graph form over
// the common tangent plane via one affine ambient change. Throws
// NoCommonTangent when the tangent spaces differ, UnsupportedShape when a
// patch is not a graph over a coordinate plane up to affine reparametrization.
AdaptedPair adapt_to_graphs(const ParamPatch& M, const ParamPatch& Mt,
                            const std::vector<Rat>& x0,
                            NumericMode mode = NumericMode::Exact);

// Jacobian of a patch at its base parameter, as an m x p matrix.
template <class S>
Mat<S> patch_jacobian(const ParamPatch& q) {
    std::vector<S> base = from_rat_vec<S>(q.base_u);
    Jet<S> j = jet_of_map<S>(q.components, base, 1);
    Mat<S> J(q.m, std::vector<S>(q.p, S(0)));
    for (int i = 0; i < q.m; ++i)
        for (int k = 0; k < q.p; ++k) {
            MultiIndex mi{std::vector<int>(q.p, 0)};
            mi.entries[k] = 1;
            J[i][k] = j.coeff(i, mi);
        }
    return J;
}

namespace tolerances {
inline constexpr double kImmersionSigma = 1e-9;   // smallest singular value
inline constexpr double kTangentAngle = 1e-9;     // principal angle between tangents
inline constexpr double kPointOnManifold = 1e-9;  // |q(u0) - x0|
} // namespace tolerances

} // namespace osculum
