#include "osculum/contact.hpp"

#include <cmath>
#include <random>

namespace osculum {

namespace {

Vec3 cross(const Vec3& a, const Vec3& b) {
    return {a[1] * b[2] - a[2] * b[1], a[2] * b[0] - a[0] * b[2],
            a[0] * b[1] - a[1] * b[0]};
}

double dot(const Vec3& a, const Vec3& b) { return a[0] * b[0] + a[1] * b[1] + a[2] * b[2]; }

double norm(const Vec3& a) { return std::sqrt(dot(a, a)); }

} // namespace

Vec3 Distribution2in3::normal_at(const Vec3& q) const {
    std::vector<double> base{q[0], q[1], q[2]};
    return {eval_expr(a, base), eval_expr(b, base), eval_expr(c, base)};
}

Distribution2in3 parse_distribution(const std::string& a, const std::string& b,
                                    const std::string& c) {
    return {parse_expr(a), parse_expr(b), parse_expr(c)};
}

Vec3 SurfacePatch3::point_at(const std::array<double, 2>& xy) const {
    std::vector<double> base{xy[0], xy[1]};
    return {xy[0], xy[1], eval_expr(g, base)};
}

Vec3 SurfacePatch3::normal_at(const std::array<double, 2>& xy) const {
    std::vector<double> base{xy[0], xy[1]};
    Jet<double> j = jet_of_expr(g, base, 1);
    double gx = j.coeff(0, MultiIndex{{1, 0}});
    double gy = j.coeff(0, MultiIndex{{0, 1}});
    return {-gx, -gy, 1.0};
}

double plane_angle(const Plane3& p, const Plane3& q) {
    double np = norm(p.normal), nq = norm(q.normal);
    if (np == 0.0 || nq == 0.0) throw DomainError("degenerate plane");
    double s = norm(cross(p.normal, q.normal));
    double c = std::fabs(dot(p.normal, q.normal));
    return std::atan2(s, c);
}

namespace {

double angle_at(const Distribution2in3& xi, const SurfacePatch3& surf,
                const std::array<double, 2>& xy) {
    return plane_angle({surf.normal_at(xy)}, {xi.normal_at(surf.point_at(xy))});
}

// Surface point at prescribed ambient distance rho from the marked point,
// walking along a fixed parameter-plane direction. The in-plane displacement
// bounds the ambient distance below, so [0, rho] brackets the crossing.
std::array<double, 2> at_radius(const SurfacePatch3& surf, double theta, double rho) {
    Vec3 p = surf.marked_point();
    auto offset = [&](double t) -> std::array<double, 2> {
        return {surf.p_xy[0] + t * std::cos(theta), surf.p_xy[1] + t * std::sin(theta)};
    };
    auto radius = [&](double t) {
        Vec3 q = surf.point_at(offset(t));
        return std::sqrt(dot({q[0] - p[0], q[1] - p[1], q[2] - p[2]},
                             {q[0] - p[0], q[1] - p[1], q[2] - p[2]}));
    };
    double lo = 0.0, hi = rho;
    for (int it = 0; it < 80; ++it) {
        double mid = 0.5 * (lo + hi);
        if (radius(mid) >= rho) hi = mid;
        else lo = mid;
    }
    return offset(0.5 * (lo + hi));
}

} // namespace

ContactOrderEstimate contact_order_estimate(const Distribution2in3& xi,
                                            const SurfacePatch3& surface,
                                            const ContactProbeParams& prm) {
    ContactOrderEstimate out;
    out.l_max = prm.l_max;
    out.tangent_gap = angle_at(xi, surface, surface.p_xy);
    if (out.tangent_gap > tolerances::kTangentGap) {
        out.kind = ContactOrderEstimate::Kind::ZeroOrder;
        out.order = 0.0;
        return out;
    }

    std::vector<double> rhos = prm.scales;
    std::sort(rhos.begin(), rhos.end(), std::greater<>());
    out.per_direction.assign(prm.n_directions, {});

    auto eval_direction = [&](int k) {
        DirectionAngleFit& rec = out.per_direction[k];
        rec.theta = 2.0 * 3.141592653589793 * k / prm.n_directions;
        ExponentFit fit;
        bool any_above_floor = false;
        for (double rho : rhos) {
            std::array<double, 2> xy = at_radius(surface, rec.theta, rho);
            double ang = angle_at(xi, surface, xy);
            if (ang >= tolerances::kAngleFloor) {
                any_above_floor = true;
                fit.samples.emplace_back(rho, ang);
            }
        }
        if (!any_above_floor || fit.samples.size() < 3) {
            rec.identically_zero = !any_above_floor;
            return;
        }
        int n = static_cast<int>(fit.samples.size());
        double sx = 0, sy = 0;
        for (auto& [r, a] : fit.samples) { sx += std::log(r); sy += std::log(a); }
        double mx = sx / n, my = sy / n;
        double sxx = 0, sxy = 0;
        for (auto& [r, a] : fit.samples) {
            sxx += (std::log(r) - mx) * (std::log(r) - mx);
            sxy += (std::log(r) - mx) * (std::log(a) - my);
        }
        fit.alpha = sxy / sxx;
        double ss = 0;
        for (auto& [r, a] : fit.samples) {
            double res = std::log(a) - (my + fit.alpha * (std::log(r) - mx));
            ss += res * res;
        }
        fit.std_error = n > 2 ? std::sqrt(ss / (n - 2) / sxx) : 0.0;
        fit.rho_max = fit.samples.front().first;
        fit.rho_min = fit.samples.back().first;
        rec.fit = fit;
    };

    if (prm.exec == Exec::Parallel) {
#pragma omp parallel for schedule(dynamic)
        for (int k = 0; k < prm.n_directions; ++k) eval_direction(k);
    } else {
        for (int k = 0; k < prm.n_directions; ++k) eval_direction(k);
    }

    bool any_fit = false;
    for (const auto& rec : out.per_direction) {
        if (!rec.fit) continue;
        if (!any_fit || rec.fit->alpha < out.worst->alpha) out.worst = rec.fit;
        any_fit = true;
    }
    if (!any_fit) {
        out.kind = ContactOrderEstimate::Kind::AngleUnderflow;
        out.order = static_cast<double>(prm.l_max);
        return out;
    }
    out.kind = ContactOrderEstimate::Kind::Estimated;
    out.order = out.worst->alpha;
    return out;
}

GeigesReport geiges_check(const Distribution2in3& xi,
                          const std::vector<SurfacePatch3>& surfaces,
                          const ContactProbeParams& prm) {
    GeigesReport rep;
    rep.surfaces.assign(surfaces.size(), {});
    int n = static_cast<int>(surfaces.size());

    // Per-surface estimates run serially here; the probe parallelizes inside.
    ContactProbeParams inner = prm;
    for (int i = 0; i < n; ++i) {
        SurfaceVerdict& v = rep.surfaces[i];
        v.marked_point = surfaces[i].marked_point();
        v.estimate = contact_order_estimate(xi, surfaces[i], inner);
        v.tangent = v.estimate.kind != ContactOrderEstimate::Kind::ZeroOrder;
        switch (v.estimate.kind) {
        case ContactOrderEstimate::Kind::ZeroOrder:
            v.within_bound = true;
            break;
        case ContactOrderEstimate::Kind::Estimated:
            v.within_bound = v.estimate.order <= tolerances::kGeigesBound;
            break;
        case ContactOrderEstimate::Kind::AngleUnderflow:
            v.within_bound = false;
            break;
        }
    }
    rep.pass = true;
    for (int i = 0; i < n; ++i) {
        if (!rep.surfaces[i].within_bound) {
            rep.pass = false;
            bool order_two = rep.surfaces[i].estimate.kind ==
                                 ContactOrderEstimate::Kind::AngleUnderflow ||
                             rep.surfaces[i].estimate.order >= 2.0;
            if (order_two && !rep.witness) rep.witness = i;
        }
    }
    return rep;
}

std::vector<SurfacePatch3> random_tangent_quadratics(int count, std::uint64_t seed) {
    std::vector<SurfacePatch3> out;
    out.reserve(count);
    for (int i = 0; i < count; ++i) {
        std::mt19937_64 rng(mix_seed(seed, 0xc0ffee, i));
        auto coef = [&rng]() {
            long long grid = static_cast<long long>(rng() >> 48) - 32768;
            return Rat(grid, 32768);
        };
        Expr x = Expr::variable(0), y = Expr::variable(1);
        Expr g = Expr::constant(coef()) * x * x + Expr::constant(coef()) * x * y +
                 Expr::constant(coef()) * y * y;
        out.push_back({g, {0.0, 0.0}});
    }
    return out;
}

} // namespace osculum
