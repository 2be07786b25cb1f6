#include "osculum/separation.hpp"

#include <omp.h>

#include <algorithm>
#include <cmath>

namespace osculum {

namespace {

double dist2(const Vec2& a, const Vec2& b) {
    double dx = a[0] - b[0], dy = a[1] - b[1];
    return dx * dx + dy * dy;
}

struct ScanBest {
    double d2 = std::numeric_limits<double>::infinity();
    int idx = -1;
    void consider(double v, int i) {
        if (v < d2 || (v == d2 && i < idx)) { d2 = v; idx = i; }
    }
    void merge(const ScanBest& o) { consider(o.d2, o.idx); }
};

} // namespace

double BranchSampler::dist_to(const Vec2& x, Exec exec) const {
    const int n = kScanSamples;
    const double step = t_max_ / (n - 1);
    ScanBest best;
    if (exec == Exec::Parallel) {
#pragma omp parallel
        {
            ScanBest local;
#pragma omp for nowait
            for (int i = 0; i < n; ++i) local.consider(dist2(point_(i * step), x), i);
#pragma omp critical
            best.merge(local);
        }
    } else {
        for (int i = 0; i < n; ++i) best.consider(dist2(point_(i * step), x), i);
    }

    // Golden-section refinement around the best sample; the distance is
    // unimodal near the foot point at these scales.
    double lo = std::max(0, best.idx - 1) * step;
    double hi = std::min(n - 1, best.idx + 1) * step;
    const double phi = 0.6180339887498949;
    double a = lo, b = hi;
    double c = b - phi * (b - a), d = a + phi * (b - a);
    double fc = dist2(point_(c), x), fd = dist2(point_(d), x);
    for (int it = 0; it < kGoldenIters; ++it) {
        if (fc < fd) {
            b = d; d = c; fd = fc;
            c = b - phi * (b - a);
            fc = dist2(point_(c), x);
        } else {
            a = c; c = d; fc = fd;
            d = a + phi * (b - a);
            fd = dist2(point_(d), x);
        }
    }
    double refined = std::min(fc, fd);
    return std::sqrt(std::min(best.d2, refined));
}

double BranchSampler::param_at_radius(double rho) const {
    const int n = kScanSamples;
    const double step = t_max_ / (n - 1);
    double prev = 0.0;
    double t_hit = -1.0;
    for (int i = 1; i < n; ++i) {
        double t = i * step;
        if (std::sqrt(dist2(point_(t), contact_)) >= rho) { t_hit = t; break; }
        prev = t;
    }
    if (t_hit < 0)
        throw DomainError("scale exceeds the branch parameter range");
    double lo = prev, hi = t_hit;
    for (int it = 0; it < 80; ++it) {
        double mid = 0.5 * (lo + hi);
        if (std::sqrt(dist2(point_(mid), contact_)) >= rho) hi = mid;
        else lo = mid;
    }
    return 0.5 * (lo + hi);
}

std::vector<double> default_scales() { return dyadic_scales(3, 12); }

std::vector<double> dyadic_scales(int lo, int hi) {
    std::vector<double> s;
    for (int e = lo; e <= hi; ++e) s.push_back(std::ldexp(1.0, -e));
    return s;
}

ExponentFit estimate_separation_exponent(const BranchSampler& X, const BranchSampler& Y,
                                         const std::vector<double>& scales,
                                         std::uint64_t seed, Exec exec) {
    if (dist2(X.contact(), Y.contact()) > 1e-20)
        throw DomainError("branches must share the contact point");
    std::vector<double> rhos = scales;
    std::sort(rhos.begin(), rhos.end(), std::greater<>());
    if (rhos.size() < 3) throw DomainError("need at least three scales");

    ExponentFit fit;
    fit.seed = seed;
    for (double rho : rhos) {
        double t = X.param_at_radius(rho);
        double d = Y.dist_to(X.point(t), exec);
        if (d < 1e-14)
            throw DegenerateDistance("branches coincide at scale " + std::to_string(rho));
        fit.samples.emplace_back(rho, d);
    }
    fit.rho_max = rhos.front();
    fit.rho_min = rhos.back();

    // Least squares on (log rho, log d).
    int n = static_cast<int>(fit.samples.size());
    double sx = 0, sy = 0;
    for (auto& [r, d] : fit.samples) { sx += std::log(r); sy += std::log(d); }
    double mx = sx / n, my = sy / n;
    double sxx = 0, sxy = 0;
    for (auto& [r, d] : fit.samples) {
        double dx = std::log(r) - mx, dy = std::log(d) - my;
        sxx += dx * dx;
        sxy += dx * dy;
    }
    fit.alpha = sxy / sxx;
    double ss_res = 0;
    for (auto& [r, d] : fit.samples) {
        double pred = my + fit.alpha * (std::log(r) - mx);
        double res = std::log(d) - pred;
        ss_res += res * res;
    }
    fit.std_error = std::sqrt(ss_res / (n - 2) / sxx);
    return fit;
}

// ---------------------------------------------------------------------------
// Symbolic leading exponent
// ---------------------------------------------------------------------------

namespace {

// Normal form: c * sign(x)^sigma * |x|^tau, keyed by (tau, sigma).
using TermKey = std::pair<Rat, int>;
using TermMap = std::map<TermKey, Rat>;

void add_term(TermMap& m, const TermKey& k, const Rat& c) {
    Rat& v = m[k];
    v += c;
    if (v == 0) m.erase(k);
}

TermMap normalize_terms(const Expr& e);

TermMap term_product(const TermMap& a, const TermMap& b) {
    TermMap out;
    for (const auto& [ka, ca] : a)
        for (const auto& [kb, cb] : b)
            add_term(out, {ka.first + kb.first, ka.second ^ kb.second}, ca * cb);
    return out;
}

TermMap normalize_terms(const Expr& e) {
    switch (e.kind()) {
    case ExprKind::Constant: {
        TermMap m;
        if (e.const_value() != 0) add_term(m, {Rat(0), 0}, e.const_value());
        return m;
    }
    case ExprKind::Variable: {
        if (e.var_index() != 0)
            throw UnsupportedShape("leading exponent supports one variable only");
        TermMap m;
        add_term(m, {Rat(1), 1}, Rat(1));
        return m;
    }
    case ExprKind::Neg: {
        TermMap m = normalize_terms(e.child());
        for (auto& [k, c] : m) c = -c;
        return m;
    }
    case ExprKind::Add:
    case ExprKind::Sub: {
        TermMap m = normalize_terms(e.child(0));
        TermMap b = normalize_terms(e.child(1));
        for (const auto& [k, c] : b)
            add_term(m, k, e.kind() == ExprKind::Add ? c : Rat(-c));
        return m;
    }
    case ExprKind::Mul:
        return term_product(normalize_terms(e.child(0)), normalize_terms(e.child(1)));
    case ExprKind::Div: {
        TermMap d = normalize_terms(e.child(1));
        if (d.size() != 1 || d.begin()->first != TermKey{Rat(0), 0})
            throw UnsupportedShape("division is supported by constants only");
        TermMap m = normalize_terms(e.child(0));
        for (auto& [k, c] : m) c /= d.begin()->second;
        return m;
    }
    case ExprKind::IntPow: {
        long long n = e.int_exponent();
        TermMap base = normalize_terms(e.child());
        if (n < 0) {
            if (base.size() != 1 || base.begin()->first != TermKey{Rat(0), 0})
                throw UnsupportedShape("negative powers are supported on constants only");
            TermMap m;
            add_term(m, {Rat(0), 0}, rat_pow_int(base.begin()->second, n));
            return m;
        }
        TermMap acc;
        add_term(acc, {Rat(0), 0}, Rat(1));
        for (long long i = 0; i < n; ++i) acc = term_product(acc, base);
        return acc;
    }
    case ExprKind::AbsPow: {
        TermMap inner = normalize_terms(e.child());
        if (inner.empty()) return {};
        if (inner.size() != 1)
            throw UnsupportedShape("abs-power of a multi-term expression");
        const auto& [k, c] = *inner.begin();
        const Rat& alpha = e.abs_exponent();
        TermMap m;
        Rat mag = c < 0 ? Rat(-c) : c;
        add_term(m, {k.first * alpha, 0},
                 rat_pow_exact(mag, numerator(alpha).convert_to<long long>(),
                               denominator(alpha).convert_to<long long>()));
        return m;
    }
    default:
        throw UnsupportedShape("expression outside the x^k / |x|^q catalog shape");
    }
}

} // namespace

Rat leading_exponent_graph(const Expr& F, const Expr& Ft) {
    TermMap diff = normalize_terms(Ft - F);
    if (diff.empty())
        throw NoSeparation("the two graph maps coincide");
    Rat best = diff.begin()->first.first;
    for (const auto& kv : diff) best = std::min(best, kv.first.first);
    return best;
}

// ---------------------------------------------------------------------------
// Implicit branch solver
// ---------------------------------------------------------------------------

double tworzewski_radius(int d, int s) {
    if (!(1 < d && d < s)) throw DomainError("need 1 < d < s");
    // Keeps the reduced equation's z-derivative above 1/2 on |z| <= 1.
    double bound = 1.0 / (2.0 * d * std::ldexp(1.0, d - 1));
    double expo = static_cast<double>(d - 1) * (s - d);
    return std::pow(bound, 1.0 / expo);
}

BranchSolution tworzewski_solve(int d, int s, double x) {
    if (!(1 < d && d < s)) throw DomainError("need 1 < d < s");
    BranchSolution out;
    if (x == 0.0) {
        if (d % 2 == 0) out.transversal = 0.0;
        return out;
    }
    if (std::fabs(x) >= tworzewski_radius(d, s))
        throw NewtonDivergence("x outside the convergence radius");

    auto residual = [&](double y) {
        return std::fabs(std::pow(y, d) + y * std::pow(x, d - 1) + std::pow(x, s));
    };

    // Tangent branch: (z-1)^d X + z = 0 with X = x^((d-1)(s-d)), z(0) = 0.
    double X = std::pow(x, (d - 1) * (s - d));
    double z = 0.0;
    bool converged = false;
    for (int it = 0; it < 100; ++it) {
        double zm = z - 1.0;
        double g = std::pow(zm, d) * X + z;
        double gp = d * std::pow(zm, d - 1) * X + 1.0;
        double step = g / gp;
        z -= step;
        if (std::fabs(z) > 0.75)
            throw NewtonDivergence("tangent-branch iteration left the basin");
        if (std::fabs(step) < 1e-16) { converged = true; break; }
    }
    if (!converged) throw NewtonDivergence("tangent-branch iteration did not converge");
    out.z = z;
    out.tangent = std::pow(x, s - d + 1) * (z - 1.0);
    out.tangent_residual = residual(out.tangent);
    if (out.tangent_residual >= 1e-12)
        throw NewtonDivergence("tangent-branch residual above 1e-12");

    // Transversal branch for even d: (z - x^(s-d))^d + z = 0 with z(0) = -1.
    if (d % 2 == 0) {
        double Xp = std::pow(x, s - d);
        double radius = 1.0 / (4.0 * d * std::ldexp(1.0, d));
        if (std::fabs(Xp) < radius) {
            double zt = -1.0;
            bool ok = false;
            for (int it = 0; it < 100; ++it) {
                double w = zt - Xp;
                double g = std::pow(w, d) + zt;
                double gp = d * std::pow(w, d - 1) + 1.0;
                double step = g / gp;
                zt -= step;
                if (std::fabs(zt + 1.0) > 0.5)
                    throw NewtonDivergence("transversal-branch iteration left the basin");
                if (std::fabs(step) < 1e-16) { ok = true; break; }
            }
            if (ok) {
                double yt = x * zt - std::pow(x, s - d + 1);
                if (residual(yt) < 1e-12) {
                    out.transversal = yt;
                    out.transversal_residual = residual(yt);
                }
            }
        }
    }
    return out;
}

// ---------------------------------------------------------------------------
// Taylor coefficients of a sampled function
// ---------------------------------------------------------------------------

namespace {

// Exact polynomial interpolation through (nodes, values) via Newton divided
// differences, expanded to monomial coefficients.
std::vector<Rat> interpolate_monomials(const std::vector<Rat>& nodes,
                                       const std::vector<Rat>& values) {
    std::size_t n = nodes.size();
    std::vector<Rat> dd = values;
    for (std::size_t level = 1; level < n; ++level)
        for (std::size_t i = n - 1; i >= level; --i)
            dd[i] = (dd[i] - dd[i - 1]) / (nodes[i] - nodes[i - level]);
    // Horner expansion of the Newton form.
    std::vector<Rat> poly{dd[n - 1]};
    for (std::size_t i = n - 1; i-- > 0;) {
        poly.insert(poly.begin(), Rat(0));
        for (std::size_t j = 0; j + 1 < poly.size(); ++j) poly[j] -= nodes[i] * poly[j + 1];
        poly[0] += dd[i];
    }
    return poly;
}

std::vector<double> coeffs_at_scale(const std::function<double(double)>& f, int n_nodes,
                                    double h) {
    std::vector<Rat> nodes, values;
    for (int i = 0; nodes.size() < static_cast<std::size_t>(n_nodes); ++i) {
        double t = std::ldexp(h, -i / 2) * (i % 2 == 0 ? 1.0 : -1.0);
        nodes.push_back(rat_from_double(t));
        values.push_back(rat_from_double(f(t)));
    }
    std::vector<Rat> poly = interpolate_monomials(nodes, values);
    std::vector<double> out(poly.size());
    for (std::size_t i = 0; i < poly.size(); ++i) out[i] = to_double(poly[i]);
    return out;
}

} // namespace

std::vector<double> extract_taylor_coeffs(const std::function<double(double)>& f,
                                          int order, double h, double* max_err) {
    int n_nodes = order + 6;
    std::vector<double> coarse = coeffs_at_scale(f, n_nodes, h);
    std::vector<double> fine = coeffs_at_scale(f, n_nodes, h / 2);
    std::vector<double> out(order + 1);
    double err = 0;
    for (int j = 0; j <= order; ++j) {
        // Richardson: interpolation error scales like h^(n_nodes - j).
        double rate = std::ldexp(1.0, n_nodes - j);
        out[j] = (fine[j] * rate - coarse[j]) / (rate - 1.0);
        err = std::max(err, std::fabs(out[j] - fine[j]));
    }
    if (max_err) *max_err = err;
    return out;
}

// ---------------------------------------------------------------------------
// Catalog
// ---------------------------------------------------------------------------

namespace {

long long need_param(const std::map<std::string, long long>& params, const std::string& k) {
    auto it = params.find(k);
    if (it == params.end()) throw DomainError("catalog entry needs parameter " + k);
    return it->second;
}

} // namespace

CatalogEntry catalog(const std::string& name,
                     const std::map<std::string, long long>& params) {
    if (name == "colley_kennedy") {
        long long n = params.count("N") ? params.at("N") : 2;
        if (n < 1) throw DomainError("colley_kennedy needs N >= 1");
        double t_max = 0.6;
        auto lower = [n](double t) -> Vec2 {
            return {t, std::pow(t, n) - std::pow(t, n + 0.5)};
        };
        auto upper = [n](double t) -> Vec2 {
            return {t, std::pow(t, n) + std::pow(t, n + 0.5)};
        };
        auto residual = [n](const Vec2& v) {
            double lhs = std::pow(v[1] - std::pow(v[0], n), 2.0);
            return lhs - std::pow(v[0], 2 * n + 1);
        };
        CatalogEntry e{
            name + "(" + std::to_string(n) + ")",
            "(y - x^" + std::to_string(n) + ")^2 = x^" + std::to_string(2 * n + 1),
            BranchSampler(lower, residual, t_max, {0, 0}),
            BranchSampler(upper, residual, t_max, {0, 0}),
            Rat(2 * n + 1, 2),
            static_cast<int>(n),
            std::nullopt};
        std::string ae = "abs(x)^(" + std::to_string(2 * n + 1) + "/2)";
        std::string px = "x^" + std::to_string(n);
        e.graph_pair = std::make_pair(parse_expr(px + " - " + ae),
                                      parse_expr(px + " + " + ae));
        return e;
    }
    if (name == "quatrefoil") {
        // The two half-petals tangent to the positive x-axis at the origin:
        // phi near 0+ (above the axis) and phi near pi- (below it).
        auto above = [](double t) -> Vec2 {
            return {std::cos(t) * std::sin(2 * t), std::sin(t) * std::sin(2 * t)};
        };
        auto below = [](double t) -> Vec2 {
            return {std::cos(t) * std::sin(2 * t), -std::sin(t) * std::sin(2 * t)};
        };
        auto residual = [](const Vec2& v) {
            double r2 = v[0] * v[0] + v[1] * v[1];
            double lhs = v[0] * v[0] * v[1] * v[1];
            return lhs - 0.25 * r2 * r2 * r2;
        };
        return CatalogEntry{name,
                            "(x*y)^2 = (1/4)*(x^2 + y^2)^3",
                            BranchSampler(above, residual, 0.85, {0, 0}),
                            BranchSampler(below, residual, 0.85, {0, 0}),
                            Rat(2),
                            std::nullopt,
                            std::nullopt};
    }
    if (name == "cardioid") {
        // r = (1 + cos phi)/2 near the cusp phi = pi; y >= 0 and y <= 0 branches.
        auto up = [](double t) -> Vec2 {
            double r = 0.5 * (1.0 - std::cos(t));
            return {-r * std::cos(t), r * std::sin(t)};
        };
        auto down = [](double t) -> Vec2 {
            double r = 0.5 * (1.0 - std::cos(t));
            return {-r * std::cos(t), -r * std::sin(t)};
        };
        auto residual = [](const Vec2& v) {
            double r2 = v[0] * v[0] + v[1] * v[1];
            double lhs = r2 - 0.5 * v[0];
            return lhs * lhs - 0.25 * r2;
        };
        return CatalogEntry{name,
                            "(x^2 + y^2 - (1/2)*x)^2 = (1/4)*(x^2 + y^2)",
                            BranchSampler(up, residual, 1.3, {0, 0}),
                            BranchSampler(down, residual, 1.3, {0, 0}),
                            Rat(3, 2),
                            std::nullopt,
                            std::nullopt,
                            dyadic_scales(8, 17)};
    }
    if (name == "tworzewski") {
        long long d = need_param(params, "d");
        long long s = need_param(params, "s");
        if (!(1 < d && d < s)) throw DomainError("tworzewski needs 1 < d < s");
        int di = static_cast<int>(d), si = static_cast<int>(s);
        double t_max = 0.9 * tworzewski_radius(di, si);
        auto axis = [](double t) -> Vec2 { return {t, 0.0}; };
        auto axis_residual = [](const Vec2& v) { return v[1]; };
        auto branch = [di, si](double t) -> Vec2 {
            return {t, tworzewski_solve(di, si, t).tangent};
        };
        auto branch_residual = [di, si](const Vec2& v) {
            return std::pow(v[1], di) + v[1] * std::pow(v[0], di - 1) + std::pow(v[0], si);
        };
        // Keep rho^exponent above the float floor of the distance oracle.
        int exponent = static_cast<int>(s - d + 1);
        int hi = std::max(7, std::min(12, 34 / exponent));
        return CatalogEntry{
            name + "(" + std::to_string(d) + "," + std::to_string(s) + ")",
            "y^" + std::to_string(d) + " + y*x^" + std::to_string(d - 1) + " + x^" +
                std::to_string(s) + " = 0",
            BranchSampler(axis, axis_residual, t_max, {0, 0}),
            BranchSampler(branch, branch_residual, t_max, {0, 0}),
            Rat(s - d + 1),
            static_cast<int>(s - d),
            std::nullopt,
            dyadic_scales(2, hi)};
    }
    throw DomainError("unknown catalog entry '" + name + "'");
}

} // namespace osculum
