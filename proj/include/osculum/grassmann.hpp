#pragma once

#include "osculum/manifolds.hpp"
#include "osculum/taylor_order.hpp"

namespace osculum {

// Level-l graph map of the iterated lift: h collects the graph components of
// the current level, H(u) = (u, h(u)), with width (m-p)*(1+p)^level.
template <class S>
struct GraphMapLevel {
    int level = 0;
    int codim = 0; // m - p of the underlying manifold
    Jet<S> h;
};

// One lift step in the graph-type chart: u -> (h(u), dh/du(u)) with the
// Jacobian entries appended in row-major order; consumes one jet order.
template <class S>
GraphMapLevel<S> image_map_step(const GraphMapLevel<S>& g) {
    const Jet<S>& h = g.h;
    if (h.order() < 1)
        throw InsufficientJetOrder("image map step needs jet order >= 1");
    int p = h.vars();
    int w = h.width();
    int new_order = h.order() - 1;
    Jet<S> head = h.truncate(new_order);
    std::vector<Jet<S>> dh;
    dh.reserve(p);
    for (int j = 0; j < p; ++j) dh.push_back(h.derivative(j));

    std::size_t tab_size = head.table().size();
    std::vector<std::vector<S>> coeffs(w * (1 + p), std::vector<S>(tab_size, S(0)));
    for (int c = 0; c < w; ++c)
        for (std::size_t r = 0; r < tab_size; ++r) coeffs[c][r] = head.coeff_by_rank(c, r);
    for (int c = 0; c < w; ++c)
        for (int j = 0; j < p; ++j)
            for (std::size_t r = 0; r < tab_size; ++r)
                coeffs[w + c * p + j][r] = dh[j].coeff_by_rank(c, r);

    GraphMapLevel<S> out{g.level + 1, g.codim,
                         Jet<S>::from_coeffs(h.base(), new_order, std::move(coeffs))};
    return out;
}

// One block of chart coordinates: all ordered nu-th partials of the graph map,
// (m-p) * p^nu scalars. Mixed partials taken in different orders keep separate
// slots on purpose; the counts would not close up under the recursion otherwise.
struct BlockDesc {
    int nu = 0;
    int size = 0;
    bool operator==(const BlockDesc& o) const { return nu == o.nu && size == o.size; }
};

// Chart coordinates of the level-l lift evaluated at the base point, laid out
// as (u, f(u); C(l,1) x f_[1](u), ..., C(l,l) x f_[l](u)).
template <class S>
struct ChartPoint {
    int level = 0;
    int p = 0;
    int m = 0;
    std::vector<BlockDesc> layout; // blocks after the leading u entries
    std::vector<S> coords;         // p entries of u, then the blocks

    bool operator==(const ChartPoint& o) const {
        return level == o.level && p == o.p && m == o.m && layout == o.layout &&
               coords == o.coords;
    }
};

inline long long binomial_ll(int n, int k) {
    if (k < 0 || k > n) return 0;
    long long r = 1;
    for (int i = 1; i <= k; ++i) r = r * (n - k + i) / i;
    return r;
}

// Evaluates the k-fold image-map recursion at the base point and flattens into
// the grouped chart layout.
template <class S>
ChartPoint<S> recursive_lift(const Jet<S>& graph_jet, int k) {
    if (graph_jet.order() < k) throw InsufficientJetOrder("need jets to order k");
    int p = graph_jet.vars();
    int codim = graph_jet.width();

    GraphMapLevel<S> g{0, codim, graph_jet};
    struct Block { int nu; int start; int size; };
    std::vector<Block> blocks{{0, 0, codim}};
    for (int l = 0; l < k; ++l) {
        int w = g.h.width();
        std::vector<Block> next = blocks;
        for (const Block& b : blocks)
            next.push_back({b.nu + 1, w + b.start * p, b.size * p});
        g = image_map_step(g);
        blocks = std::move(next);
    }

    ChartPoint<S> out;
    out.level = k;
    out.p = p;
    out.m = p + codim;
    out.coords = graph_jet.base();
    std::stable_sort(blocks.begin(), blocks.end(),
                     [](const Block& a, const Block& b) { return a.nu < b.nu; });
    for (const Block& b : blocks) {
        out.layout.push_back({b.nu, b.size});
        for (int i = 0; i < b.size; ++i)
            out.coords.push_back(g.h.coeff_by_rank(b.start + i, 0));
    }
    return out;
}

// Assembles the same chart point directly from the jet coefficients:
// block nu holds all ordered nu-th partials, repeated C(k, nu) times.
template <class S>
ChartPoint<S> closed_form_lift(const Jet<S>& graph_jet, int k) {
    if (graph_jet.order() < k) throw InsufficientJetOrder("need jets to order k");
    int p = graph_jet.vars();
    int codim = graph_jet.width();

    ChartPoint<S> out;
    out.level = k;
    out.p = p;
    out.m = p + codim;
    out.coords = graph_jet.base();

    for (int nu = 0; nu <= k; ++nu) {
        // Ordered partial values: coefficient times the multi-index factorial.
        std::vector<S> block;
        std::vector<int> tuple(nu, 0);
        for (int c = 0; c < codim; ++c) {
            for (;;) {
                MultiIndex beta{std::vector<int>(p, 0)};
                for (int t : tuple) ++beta.entries[t];
                S fact(1);
                for (int e : beta.entries)
                    for (int i = 2; i <= e; ++i) fact *= S(i);
                block.push_back(graph_jet.coeff(c, beta) * fact);
                int i = nu - 1;
                while (i >= 0 && tuple[i] == p - 1) tuple[i--] = 0;
                if (i < 0) break;
                ++tuple[i];
            }
        }
        long long copies = binomial_ll(k, nu);
        for (long long rep = 0; rep < copies; ++rep) {
            out.layout.push_back({nu, static_cast<int>(block.size())});
            out.coords.insert(out.coords.end(), block.begin(), block.end());
        }
    }
    return out;
}

template <class S>
ChartPoint<S> recursive_lift(const std::vector<Expr>& F, const std::vector<S>& u0, int k) {
    return recursive_lift(jet_of_map<S>(F, u0, k), k);
}

template <class S>
ChartPoint<S> closed_form_lift(const std::vector<Expr>& F, const std::vector<S>& u0, int k) {
    return closed_form_lift(jet_of_map<S>(F, u0, k), k);
}

namespace tolerances {
// Float-mode per-coordinate tolerance for chart-point comparison.
inline constexpr double kChartCoord = 1e-10;
} // namespace tolerances

// Theorem test: the level-k lifts of the two graph maps coincide at the base
// point iff the order of tangency is at least k (1 <= k <= class bound).
template <class S>
bool lifts_equal(const AdaptedPair& pair, int k,
                 double tol = tolerances::kChartCoord) {
    if (k < 1) throw DimensionMismatch("lift level must be >= 1");
    if (k > pair.class_bound())
        throw SmoothnessExceeded(k, pair.class_bound());
    std::vector<S> zero(pair.p, S(0));
    ChartPoint<S> a = closed_form_lift<S>(pair.F.graph_map, zero, k);
    ChartPoint<S> b = closed_form_lift<S>(pair.Ft.graph_map, zero, k);
    if constexpr (ScalarOps<S>::exact) {
        return a == b;
    } else {
        if (a.coords.size() != b.coords.size()) return false;
        for (std::size_t i = 0; i < a.coords.size(); ++i)
            if (std::fabs(a.coords[i] - b.coords[i]) > tol) return false;
        return true;
    }
}

inline bool lifts_equal(const AdaptedPair& pair, int k, NumericMode mode,
                        double tol = tolerances::kChartCoord) {
    return mode == NumericMode::Exact ? lifts_equal<Rat>(pair, k, tol)
                                      : lifts_equal<double>(pair, k, tol);
}

// Chart dimensions d_l of the iterated bundle: d_0 = m,
// d_l = d_{l-1} + p (d_{l-1} - p).
std::vector<long long> chart_dimension_recursion(int p, int m, int l);

// Coordinate count p + (m-p)(1+p)^l of the level-l chart; checked against the
// bundle-dimension recursion.
long long chart_coordinate_count(int p, int m, int l);

} // namespace osculum
