#include "osculum/manifolds.hpp"

#include <Eigen/Dense>

#include <algorithm>

namespace osculum {

namespace {

Eigen::MatrixXd to_eigen(const Mat<double>& m) {
    Eigen::MatrixXd out(m.size(), m.empty() ? 0 : m[0].size());
    for (std::size_t r = 0; r < m.size(); ++r)
        for (std::size_t c = 0; c < m[r].size(); ++c) out(r, c) = m[r][c];
    return out;
}

Eigen::MatrixXd thin_q(const Eigen::MatrixXd& a) {
    Eigen::HouseholderQR<Eigen::MatrixXd> qr(a);
    return qr.householderQ() * Eigen::MatrixXd::Identity(a.rows(), a.cols());
}

// Largest principal angle between column spans, via its sine.
double tangent_gap(const Mat<double>& j1, const Mat<double>& j2) {
    Eigen::MatrixXd q1 = thin_q(to_eigen(j1));
    Eigen::MatrixXd q2 = thin_q(to_eigen(j2));
    Eigen::MatrixXd r = q2 - q1 * (q1.transpose() * q2);
    Eigen::JacobiSVD<Eigen::MatrixXd> svd(r);
    return svd.singularValues().size() ? svd.singularValues()(0) : 0.0;
}

template <class S>
bool tangent_spaces_equal(const Mat<S>& j1, const Mat<S>& j2, int p) {
    if constexpr (ScalarOps<S>::exact) {
        return mat_rank(hstack(j1, j2)) == p;
    } else {
        return tangent_gap(to_double_mat(j1), to_double_mat(j2)) <
               tolerances::kTangentAngle;
    }
}

// Linear coefficient row of an affine expression, or nullopt when not affine.
template <class S>
std::optional<std::vector<S>> affine_linear_part(const Expr& comp, int p) {
    auto deg = poly_degree(comp);
    if (!deg || *deg > 1) return std::nullopt;
    std::vector<S> zero(p, S(0));
    Jet<S> j = jet_of_expr(comp, zero, 1);
    std::vector<S> row(p);
    for (int k = 0; k < p; ++k) {
        MultiIndex mi{std::vector<int>(p, 0)};
        mi.entries[k] = 1;
        row[k] = j.coeff(0, mi);
    }
    return row;
}

// Linear combination sum_j lin[j] * u_j + cst with a canonical, minimal tree.
Expr affine_expr(const std::vector<Rat>& lin, const Rat& cst) {
    Expr acc;
    auto push = [&acc](const Expr& t) { acc = acc.is_null() ? t : acc + t; };
    if (cst != 0) push(Expr::constant(cst));
    for (std::size_t j = 0; j < lin.size(); ++j) {
        if (lin[j] == 0) continue;
        Expr v = Expr::variable(static_cast<int>(j));
        if (lin[j] == 1) push(v);
        else if (lin[j] == -1) push(-v);
        else push(Expr::constant(lin[j]) * v);
    }
    return acc.is_null() ? Expr::constant(0) : acc;
}

template <class S>
Rat to_rat_exact(const S& v) {
    if constexpr (ScalarOps<S>::exact) return v;
    else return rat_from_double(ScalarOps<S>::to_dbl(v));
}

std::vector<int> complement_of(const std::vector<int>& s, int m) {
    std::vector<int> c;
    for (int i = 0; i < m; ++i)
        if (std::find(s.begin(), s.end(), i) == s.end()) c.push_back(i);
    return c;
}

// All p-subsets of {0..m-1}, lexicographic.
void subsets_rec(int m, int p, int from, std::vector<int>& cur,
                 std::vector<std::vector<int>>& out) {
    if (static_cast<int>(cur.size()) == p) { out.push_back(cur); return; }
    for (int i = from; i < m; ++i) {
        cur.push_back(i);
        subsets_rec(m, p, i + 1, cur, out);
        cur.pop_back();
    }
}

template <class S>
struct PatchOverPlane {
    std::vector<Expr> graph;     // components over the plane, in the shared v coordinates
    Mat<S> normal_jacobian;      // derivative of the graph components at v = 0
};

// Rewrites a patch as a graph over the coordinate plane S (v = x_S - x0_S),
// assuming the components indexed by S are affine with invertible linear part.
template <class S>
std::optional<PatchOverPlane<S>> graph_over_plane(const ParamPatch& q,
                                                  const std::vector<int>& plane) {
    int p = q.p;
    Mat<S> lin(p);
    for (int i = 0; i < p; ++i) {
        auto row = affine_linear_part<S>(q.components[plane[i]], p);
        if (!row) return std::nullopt;
        lin[i] = *row;
    }
    auto lin_inv = mat_inverse(lin);
    if (!lin_inv) return std::nullopt;

    // u = lin^{-1} v + u0, so that the plane components become v + x0_S.
    std::vector<Expr> repl(p);
    for (int i = 0; i < p; ++i) {
        std::vector<Rat> row(p);
        for (int j = 0; j < p; ++j) row[j] = to_rat_exact((*lin_inv)[i][j]);
        repl[i] = affine_expr(row, q.base_u[i]);
    }

    PatchOverPlane<S> out;
    std::vector<int> comp = complement_of(plane, q.m);
    std::vector<S> zero(p, S(0));
    for (int idx : comp) out.graph.push_back(substitute(q.components[idx], repl));
    Jet<S> j = jet_of_map<S>(out.graph, zero, 1);
    out.normal_jacobian.assign(out.graph.size(), std::vector<S>(p, S(0)));
    for (std::size_t r = 0; r < out.graph.size(); ++r)
        for (int k = 0; k < p; ++k) {
            MultiIndex mi{std::vector<int>(p, 0)};
            mi.entries[k] = 1;
            out.normal_jacobian[r][k] = j.coeff(static_cast<int>(r), mi);
        }
    return out;
}

// Subtracts value and linear part at 0 so that F(0) = 0, dF(0) = 0 holds
// structurally, keeping already-adapted maps untouched.
template <class S>
std::vector<Expr> recenter_graph(const std::vector<Expr>& graph, int p) {
    std::vector<S> zero(p, S(0));
    std::vector<Expr> out;
    for (const Expr& g : graph) {
        Jet<S> j = jet_of_expr(g, zero, 1);
        Expr f = g;
        Rat c0 = to_rat_exact(j.value());
        if (c0 != 0) f = f - Expr::constant(c0);
        for (int k = 0; k < p; ++k) {
            MultiIndex mi{std::vector<int>(p, 0)};
            mi.entries[k] = 1;
            Rat ck = to_rat_exact(j.coeff(0, mi));
            if (ck != 0) f = f - Expr::constant(ck) * Expr::variable(k);
        }
        out.push_back(f);
    }
    return out;
}

GraphPresentation make_graph_presentation(int p, int m, std::vector<Expr> graph) {
    GraphPresentation g;
    g.p = p;
    g.m = m;
    g.graph_map = std::move(graph);
    std::vector<Rat> zero(p, Rat(0));
    g.class_bound = kSmoothInfinity;
    for (const Expr& e : g.graph_map)
        g.class_bound = std::min(g.class_bound, smoothness_class(e, zero));
    return g;
}

template <class S>
void check_point_on_patch(const ParamPatch& q, const std::vector<Rat>& x0) {
    std::vector<S> base = from_rat_vec<S>(q.base_u);
    for (int i = 0; i < q.m; ++i) {
        S v = eval_expr(q.components[i], base);
        double gap = std::fabs(ScalarOps<S>::to_dbl(v) - to_double(x0[i]));
        if constexpr (ScalarOps<S>::exact) {
            if (!(v == ScalarOps<S>::from_rat(x0[i])))
                throw DomainError("base parameter does not map to the contact point");
        } else if (gap > tolerances::kPointOnManifold) {
            throw DomainError("base parameter does not map to the contact point");
        }
    }
}

template <class S>
AdaptedPair adapt_impl(const ParamPatch& M, const ParamPatch& Mt,
                       const std::vector<Rat>& x0) {
    if (M.p != Mt.p || M.m != Mt.m)
        throw DimensionMismatch("patch dimensions differ");
    if (static_cast<int>(x0.size()) != M.m)
        throw DimensionMismatch("contact point dimension mismatch");
    int p = M.p, m = M.m;

    check_point_on_patch<S>(M, x0);
    check_point_on_patch<S>(Mt, x0);

    Mat<S> j1 = patch_jacobian<S>(M);
    Mat<S> j2 = patch_jacobian<S>(Mt);
    auto rank_ok = [p](const Mat<S>& j) {
        if constexpr (ScalarOps<S>::exact) return mat_rank(j) == p;
        else {
            Eigen::JacobiSVD<Eigen::MatrixXd> svd(to_eigen(to_double_mat(j)));
            return svd.singularValues()(p - 1) > tolerances::kImmersionSigma;
        }
    };
    if (!rank_ok(j1) || !rank_ok(j2))
        throw DomainError("patch is not an immersion at its base parameter");
    if (!tangent_spaces_equal(j1, j2, p)) throw NoCommonTangent();

    std::vector<std::vector<int>> planes;
    std::vector<int> cur;
    subsets_rec(m, p, 0, cur, planes);

    for (const auto& plane : planes) {
        auto g1 = graph_over_plane<S>(M, plane);
        if (!g1) continue;
        auto g2 = graph_over_plane<S>(Mt, plane);
        if (!g2) continue;
        if constexpr (ScalarOps<S>::exact) {
            // Tangent equality in graph coordinates: the normal Jacobians agree.
            if (!(g1->normal_jacobian == g2->normal_jacobian))
                throw Error("internal: tangent check passed but graph slopes differ");
        }

        AdaptedPair pair;
        pair.p = p;
        pair.m = m;
        pair.F = make_graph_presentation(p, m, recenter_graph<S>(g1->graph, p));
        pair.Ft = make_graph_presentation(p, m, recenter_graph<S>(g2->graph, p));

        // Ambient change: v = x_S - x0_S on top, shear by the common normal
        // Jacobian below, recorded exactly.
        std::vector<int> comp = complement_of(plane, m);
        Mat<Rat> A(m, std::vector<Rat>(m, Rat(0)));
        for (int i = 0; i < p; ++i) A[i][plane[i]] = 1;
        for (int r = 0; r < m - p; ++r) {
            A[p + r][comp[r]] = 1;
            for (int i = 0; i < p; ++i)
                A[p + r][plane[i]] = -to_rat_exact(g1->normal_jacobian[r][i]);
        }
        pair.change.A = A;
        std::vector<Rat> minus_x0(m);
        for (int i = 0; i < m; ++i) minus_x0[i] = -x0[i];
        pair.change.b = matvec(A, minus_x0);
        return pair;
    }
    throw UnsupportedShape(
        "patches are not graphs over a common coordinate plane up to affine "
        "reparametrization");
}

} // namespace

int ParamPatch::class_r() const {
    int cls = kSmoothInfinity;
    for (const Expr& c : components) cls = std::min(cls, smoothness_class(c, base_u));
    return cls;
}

ParamPatch make_patch(std::vector<Expr> components, std::vector<Rat> base_u) {
    ParamPatch q;
    q.p = static_cast<int>(base_u.size());
    q.m = static_cast<int>(components.size());
    if (q.p < 1 || q.m <= q.p)
        throw DimensionMismatch("a patch needs 1 <= p < m");
    for (const Expr& c : components)
        if (var_count(c) > q.p)
            throw DimensionMismatch("component uses a variable beyond the domain dimension");
    q.components = std::move(components);
    q.base_u = std::move(base_u);
    return q;
}

ParamPatch parse_patch(const std::vector<std::string>& component_text,
                       std::vector<Rat> base_u) {
    std::vector<Expr> comps;
    comps.reserve(component_text.size());
    for (const auto& s : component_text) comps.push_back(parse_expr(s));
    return make_patch(std::move(comps), std::move(base_u));
}

bool immersion_check(const ParamPatch& q, NumericMode mode) {
    if (mode == NumericMode::Exact)
        return mat_rank(patch_jacobian<Rat>(q)) == q.p;
    Eigen::JacobiSVD<Eigen::MatrixXd> svd(
        to_eigen(to_double_mat(patch_jacobian<double>(q))));
    return svd.singularValues()(q.p - 1) > tolerances::kImmersionSigma;
}

AdaptedPair make_adapted_pair(int p, int m, std::vector<Expr> F, std::vector<Expr> Ft) {
    if (p < 1 || m <= p) throw DimensionMismatch("need 1 <= p < m");
    if (static_cast<int>(F.size()) != m - p || static_cast<int>(Ft.size()) != m - p)
        throw DimensionMismatch("graph maps need m - p components");
    std::vector<Rat> zero(p, Rat(0));
    for (const std::vector<Expr>* side : {&F, &Ft}) {
        for (const Expr& e : *side) {
            if (var_count(e) > p)
                throw DimensionMismatch("graph component uses a variable beyond p");
            if (smoothness_class(e, zero) < 1)
                throw DomainError("graph map must be at least C^1 at the origin");
            Jet<Rat> j = jet_of_expr(e, zero, 1);
            if (!(j.vanishing_order() == VanishingOrder::bounded_below(2)))
                throw DomainError("graph map must satisfy F(0) = 0 and dF(0) = 0");
        }
    }
    AdaptedPair pair;
    pair.p = p;
    pair.m = m;
    pair.F = make_graph_presentation(p, m, std::move(F));
    pair.Ft = make_graph_presentation(p, m, std::move(Ft));
    pair.change.A = identity_mat<Rat>(m);
    pair.change.b.assign(m, Rat(0));
    return pair;
}

AdaptedPair adapt_to_graphs(const ParamPatch& M, const ParamPatch& Mt,
                            const std::vector<Rat>& x0, NumericMode mode) {
    return mode == NumericMode::Exact ? adapt_impl<Rat>(M, Mt, x0)
                                      : adapt_impl<double>(M, Mt, x0);
}

} // namespace osculum
