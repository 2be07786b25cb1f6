#pragma once

#include <cmath>
#include <random>

#include "osculum/manifolds.hpp"
#include "osculum/parallel.hpp"
#include "osculum/taylor_order.hpp"

namespace osculum {

// One-variable curve in parameter space, t -> u0 + c w t + higher terms with
// c != 0, stored as a width-p jet in t about t = 0.
template <class S>
struct CurveJet {
    Jet<S> curve;

    static CurveJet line(const std::vector<S>& direction, int order) {
        int p = static_cast<int>(direction.size());
        std::vector<std::vector<S>> coeffs(p, std::vector<S>(order + 1, S(0)));
        for (int i = 0; i < p; ++i) coeffs[i][1] = direction[i];
        return {Jet<S>::from_coeffs({S(0)}, order, std::move(coeffs))};
    }
};

// Contact order of two ambient curves given as width-m jets in t: the largest
// l with |delta(t) - delta_t(t)| = o(|t|^l), clamped to "at least l_max" when
// it exceeds the probing horizon.
template <class S>
OrderBound curve_contact_order(const Jet<S>& delta, const Jet<S>& delta_t, int l_max,
                               double tol = tolerances::kCoeffZero) {
    VanishingOrder nu = (delta - delta_t).vanishing_order(tol);
    OrderBound contact{nu.value - 1, nu.at_least};
    if (contact.value >= l_max) return OrderBound::bounded_below(l_max);
    return contact;
}

// Ambient curve delta(t) = (u(t), F(u(t))) of a parameter curve through an
// adapted graph map (F given as a jet at 0).
template <class S>
Jet<S> ambient_curve(const Jet<S>& graph_jet, const Jet<S>& param_curve) {
    return Jet<S>::vstack(param_curve, jet_compose(graph_jet, param_curve));
}

struct MinimaxParams {
    int n_dirs = 64;        // random directions besides the +-coordinate ones
    int n_curves = 32;      // random curve pairs per direction
    int curve_degree = 6;   // polynomial degree of the sampled parameter curves
    int l_max = 12;
    std::uint64_t seed = 0;
    Exec exec = Exec::Parallel;
    // Extra directions (rational representatives), e.g. a certified witness.
    std::vector<std::vector<Rat>> extra_directions;
};

struct DirectionRecord {
    std::vector<double> w;      // unit direction (for reporting)
    std::vector<Rat> w_exact;   // rational representative used in the arithmetic
    OrderBound inner_max;
    enum class Kind { Coordinate, Random, Extra } kind = Kind::Random;
};

struct MinimaxReport {
    std::vector<DirectionRecord> directions;
    OrderBound outer_min;
    std::vector<int> attaining; // indices of directions attaining the outer min
    std::uint64_t seed = 0;
    int n_dirs = 0, n_curves = 0, curve_degree = 0, l_max = 0;
    int probe_order = 0;        // jet order actually available (class-limited)
    bool class_saturation_warning = false; // s = r: the mini-max theorem's
                                           // hypothesis fails for this pair
};

namespace detail {

inline Rat dyadic_uniform(std::mt19937_64& rng, const Rat& lo, const Rat& hi,
                          int bits = 16) {
    std::uint64_t draw = rng() >> (64 - bits);
    Rat frac(draw, 1ull << bits);
    return lo + (hi - lo) * frac;
}

// Box-Muller gaussian rationalized to a dyadic grid; deterministic and
// identical across numeric modes.
inline std::vector<Rat> random_direction(std::mt19937_64& rng, int p) {
    for (int attempt = 0; attempt < 16; ++attempt) {
        std::vector<Rat> w(p);
        bool nonzero = false;
        for (int i = 0; i < p; ++i) {
            double u1 = (static_cast<double>(rng() >> 11) + 1.0) / 9007199254740993.0;
            double u2 = static_cast<double>(rng() >> 11) / 9007199254740992.0;
            double g = std::sqrt(-2.0 * std::log(u1)) * std::cos(6.283185307179586 * u2);
            long long grid = std::llround(g * 1048576.0);
            w[i] = Rat(grid, 1048576);
            nonzero = nonzero || grid != 0;
        }
        if (nonzero) return w;
    }
    std::vector<Rat> w(p, Rat(0));
    w[0] = 1;
    return w;
}

template <class S>
Jet<S> random_param_curve(std::mt19937_64& rng, const std::vector<Rat>& w_exact,
                          int degree, int order) {
    int p = static_cast<int>(w_exact.size());
    Rat c = dyadic_uniform(rng, Rat(1, 2), Rat(2));
    std::vector<std::vector<S>> coeffs(p, std::vector<S>(order + 1, S(0)));
    for (int i = 0; i < p; ++i)
        coeffs[i][1] = ScalarOps<S>::from_rat(c * w_exact[i]);
    for (int d = 2; d <= std::min(degree, order); ++d)
        for (int i = 0; i < p; ++i)
            coeffs[i][d] = ScalarOps<S>::from_rat(dyadic_uniform(rng, Rat(-1), Rat(1)));
    return Jet<S>::from_coeffs({S(0)}, order, std::move(coeffs));
}

inline std::vector<double> unit_direction(const std::vector<Rat>& w) {
    std::vector<double> out(w.size());
    double norm = 0;
    for (std::size_t i = 0; i < w.size(); ++i) {
        out[i] = to_double(w[i]);
        norm += out[i] * out[i];
    }
    norm = std::sqrt(norm);
    for (double& v : out) v /= norm;
    return out;
}

} // namespace detail

// Mini-max estimator: for every sampled tangent direction, the best contact
// order over curve pairs with velocities parallel to it; then the minimum over
// directions. For polynomial pairs with adequate sampling the outer minimum
// equals the Taylor tangency order whenever that order lies strictly below the
// smoothness class.
template <class S>
MinimaxReport minimax_tangency(const AdaptedPair& pair, const MinimaxParams& prm) {
    int p = pair.p;
    int cls = pair.class_bound();
    int probe = std::min(prm.l_max + 1, cls);
    std::vector<S> zero(p, S(0));
    Jet<S> f = jet_of_map<S>(pair.F.graph_map, zero, probe);
    Jet<S> ft = jet_of_map<S>(pair.Ft.graph_map, zero, probe);

    MinimaxReport rep;
    rep.seed = prm.seed;
    rep.n_dirs = prm.n_dirs;
    rep.n_curves = prm.n_curves;
    rep.curve_degree = prm.curve_degree;
    rep.l_max = prm.l_max;
    rep.probe_order = probe;
    rep.class_saturation_warning =
        order_from_jets(f, ft, prm.l_max, cls).saturated_by_class;

    std::vector<DirectionRecord> dirs;
    for (int i = 0; i < p; ++i)
        for (int sign : {1, -1}) {
            DirectionRecord d;
            d.w_exact.assign(p, Rat(0));
            d.w_exact[i] = sign;
            d.kind = DirectionRecord::Kind::Coordinate;
            dirs.push_back(std::move(d));
        }
    for (const auto& w : prm.extra_directions) {
        DirectionRecord d;
        d.w_exact = w;
        d.kind = DirectionRecord::Kind::Extra;
        dirs.push_back(std::move(d));
    }
    for (int i = 0; i < prm.n_dirs; ++i) {
        std::mt19937_64 rng(mix_seed(prm.seed, 0xd1ff00d5ull, i));
        DirectionRecord d;
        d.w_exact = detail::random_direction(rng, p);
        d.kind = DirectionRecord::Kind::Random;
        dirs.push_back(std::move(d));
    }

    auto eval_direction = [&](int di) {
        DirectionRecord& d = dirs[di];
        d.w = detail::unit_direction(d.w_exact);
        std::vector<S> w_s = from_rat_vec<S>(d.w_exact);
        // Canonical pair: both curves run straight along the direction.
        Jet<S> line = CurveJet<S>::line(w_s, probe).curve;
        Jet<S> canonical = ambient_curve(f, line);
        Jet<S> canonical_t = ambient_curve(ft, line);
        OrderBound best = curve_contact_order(canonical, canonical_t, prm.l_max);
        for (int cj = 0; cj < prm.n_curves; ++cj) {
            std::mt19937_64 rng(mix_seed(prm.seed, di + 1, cj + 1));
            Jet<S> u = detail::random_param_curve<S>(rng, d.w_exact, prm.curve_degree, probe);
            Jet<S> ut = detail::random_param_curve<S>(rng, d.w_exact, prm.curve_degree, probe);
            OrderBound contact =
                curve_contact_order(ambient_curve(f, u), ambient_curve(ft, ut), prm.l_max);
            if (contact.key() > best.key()) best = contact;
        }
        d.inner_max = best;
    };

    int n = static_cast<int>(dirs.size());
    if (prm.exec == Exec::Parallel) {
#pragma omp parallel for schedule(dynamic)
        for (int di = 0; di < n; ++di) eval_direction(di);
    } else {
        for (int di = 0; di < n; ++di) eval_direction(di);
    }

    rep.outer_min = dirs[0].inner_max;
    for (const auto& d : dirs)
        if (d.inner_max.key() < rep.outer_min.key()) rep.outer_min = d.inner_max;
    for (int di = 0; di < n; ++di)
        if (dirs[di].inner_max.key() == rep.outer_min.key()) rep.attaining.push_back(di);
    rep.directions = std::move(dirs);
    return rep;
}

inline MinimaxReport minimax_tangency(const AdaptedPair& pair, const MinimaxParams& prm,
                                      NumericMode mode) {
    return mode == NumericMode::Exact ? minimax_tangency<Rat>(pair, prm)
                                      : minimax_tangency<double>(pair, prm);
}

// Witness direction certificate: a direction where the degree-(s+1)
// homogeneous part of some component of Ft - F does not vanish. Together with
// the vanishing of all lower degrees this pins the inner max at the direction
// to exactly s.
struct WitnessCertificate {
    std::vector<double> direction;     // unit vector
    std::vector<Rat> direction_exact;  // integer representative
    int component = 0;                 // index j of the certifying component
    Rat value_at_representative;       // homogeneous value at the representative
    double value_at_unit = 0.0;        // same, rescaled to the unit direction
    bool lower_degrees_vanish = false;
    int canonical_contact = 0;         // contact order of the canonical pair
};

WitnessCertificate find_witness_direction(const AdaptedPair& pair, int s);

} // namespace osculum
