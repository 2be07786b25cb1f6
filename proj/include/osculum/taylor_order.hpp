#pragma once

#include "osculum/manifolds.hpp"

namespace osculum {

// Result of an order-of-tangency computation. The order is the largest k such
// that the two graph maps share their degree-k Taylor polynomials; it is
// reported as "at least k_max" when the search horizon, rather than a
// non-zero coefficient, stopped it. saturated_by_class is set when the
// smoothness class bound stopped the search (the s < r hypothesis of the
// curve mini-max theorem fails, as for the C^2 extension pairs).
struct OrderResult {
    OrderBound s;
    bool saturated_by_class = false;
    int k_max = 0;
    int class_bound = kSmoothInfinity;
};

namespace tolerances {
// Float-mode coefficient-zero threshold for order decisions.
inline constexpr double kCoeffZero = 1e-10;
} // namespace tolerances

// Order of tangency of a pair of width-t jets of graph maps at 0 (both must
// satisfy F(0) = 0, dF(0) = 0). probe_order is the number of Taylor degrees
// actually available in the jets.
template <class S>
OrderResult order_from_jets(const Jet<S>& f, const Jet<S>& ft, int k_max,
                            int class_bound = kSmoothInfinity,
                            double tol = tolerances::kCoeffZero) {
    OrderResult out;
    out.k_max = k_max;
    out.class_bound = class_bound;
    Jet<S> diff = ft - f;
    VanishingOrder nu = diff.vanishing_order(tol);
    int probe = diff.order(); // comparisons available up to this degree
    if (!nu.at_least) {
        out.s = OrderBound::exactly(nu.value - 1);
        out.saturated_by_class = out.s.value >= class_bound;
        return out;
    }
    // All compared coefficients agree through degree `probe`.
    if (probe >= k_max + 1) {
        out.s = OrderBound::bounded_below(k_max);
    } else if (probe >= class_bound) {
        // The class bound stopped the search: the order saturates at the class.
        out.s = OrderBound::exactly(class_bound);
        out.saturated_by_class = true;
    } else {
        out.s = OrderBound::bounded_below(probe);
    }
    return out;
}

// Order of tangency via Taylor comparison of the two adapted graph maps.
template <class S>
OrderResult order_from_graphs(const AdaptedPair& pair, int k_max,
                              double tol = tolerances::kCoeffZero) {
    if (k_max < 1) throw DimensionMismatch("k_max must be >= 1");
    int cls = pair.class_bound();
    int probe = std::min(k_max + 1, cls);
    std::vector<S> zero(pair.p, S(0));
    Jet<S> f = jet_of_map<S>(pair.F.graph_map, zero, probe);
    Jet<S> ft = jet_of_map<S>(pair.Ft.graph_map, zero, probe);
    return order_from_jets(f, ft, k_max, cls, tol);
}

inline OrderResult order_from_graphs(const AdaptedPair& pair, int k_max,
                                     NumericMode mode,
                                     double tol = tolerances::kCoeffZero) {
    return mode == NumericMode::Exact ? order_from_graphs<Rat>(pair, k_max, tol)
                                      : order_from_graphs<double>(pair, k_max, tol);
}

inline constexpr int kDefaultKMax = 16;

// Order of tangency of two patches at x0: 0 when the tangent spaces differ,
// otherwise the Taylor comparison of the adapted pair.
inline OrderResult tangency_order(const ParamPatch& M, const ParamPatch& Mt,
                                  const std::vector<Rat>& x0,
                                  int k_max = kDefaultKMax,
                                  NumericMode mode = NumericMode::Exact) {
    try {
        AdaptedPair pair = adapt_to_graphs(M, Mt, x0, mode);
        return order_from_graphs(pair, k_max, mode);
    } catch (const NoCommonTangent&) {
        OrderResult out;
        out.s = OrderBound::exactly(0);
        out.k_max = k_max;
        return out;
    }
}

} // namespace osculum
