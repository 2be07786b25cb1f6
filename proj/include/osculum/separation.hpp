#pragma once

#include <array>
#include <functional>
#include <map>
#include <optional>
#include <string>

#include "osculum/expr.hpp"
#include "osculum/parallel.hpp"

namespace osculum {

using Vec2 = std::array<double, 2>;

// Scale/distance samples with the fitted scaling exponent of d against rho.
struct ExponentFit {
    std::vector<std::pair<double, double>> samples; // (rho, d), rho strictly decreasing
    double alpha = 0.0;
    double std_error = 0.0;
    double rho_max = 0.0;
    double rho_min = 0.0;
    std::uint64_t seed = 0;
};

// A parametrized semialgebraic branch with its contact point at t = 0,
// a membership residual, and a nearest-distance oracle.
class BranchSampler {
public:
    using PointFn = std::function<Vec2(double)>;
    using ResidualFn = std::function<double(const Vec2&)>;

    BranchSampler(PointFn point, ResidualFn residual, double t_max, Vec2 contact)
        : point_(std::move(point)), residual_(std::move(residual)), t_max_(t_max),
          contact_(contact) {}

    Vec2 point(double t) const { return point_(t); }
    double residual_at(double t) const { return residual_(point_(t)); }
    double t_max() const { return t_max_; }
    const Vec2& contact() const { return contact_; }

    // Distance from x to the branch: dense parameter scan refined by
    // golden-section minimization (the kernel with a serial reference).
    double dist_to(const Vec2& x, Exec exec = Exec::Parallel) const;

    // Parameter t with |point(t) - contact| = rho, by bracketing + bisection.
    double param_at_radius(double rho) const;

    static constexpr int kScanSamples = 4096;
    static constexpr int kGoldenIters = 60;

private:
    PointFn point_;
    ResidualFn residual_;
    double t_max_;
    Vec2 contact_;
};

// Geometric scales 2^-3 .. 2^-12.
std::vector<double> default_scales();

// Geometric scales 2^-lo .. 2^-hi.
std::vector<double> dyadic_scales(int lo, int hi);

// Fits the scaling exponent of dist(x, Y) against |x - x0| for x in X.
// The seed is recorded in the fit; the estimator itself is deterministic.
ExponentFit estimate_separation_exponent(const BranchSampler& X, const BranchSampler& Y,
                                         const std::vector<double>& scales = default_scales(),
                                         std::uint64_t seed = 0,
                                         Exec exec = Exec::Parallel);

// Exact leading exponent of Ft - F when the difference is a finite sum of
// monomials c x^k and c |x|^q in one variable; throws UnsupportedShape for
// anything else and NoSeparation when the difference vanishes identically.
Rat leading_exponent_graph(const Expr& F, const Expr& Ft);

// Branches of y^d + y x^(d-1) + x^s = 0 near the origin (1 < d < s):
// the branch tangent to the x-axis, solved as y = x^(s-d+1) (z(x) - 1) by
// Newton continuation on the reduced equation, plus (for even d) the second,
// transversal branch with slope -1 through 0.
struct BranchSolution {
    double tangent = 0.0;
    double tangent_residual = 0.0;
    double z = 0.0;
    std::optional<double> transversal;
    double transversal_residual = 0.0;
};

BranchSolution tworzewski_solve(int d, int s, double x);

// Conservative convergence radius in x for the tangent-branch Newton solve.
double tworzewski_radius(int d, int s);

// Taylor coefficients of f about 0 up to `order`: polynomial interpolation on
// a symmetric geometric stencil (divided differences evaluated in exact
// rational arithmetic) with one Richardson refinement; max_err receives the
// per-coefficient discrepancy between the two stencil scales.
std::vector<double> extract_taylor_coeffs(const std::function<double(double)>& f,
                                          int order, double h, double* max_err = nullptr);

// Named branch-pair catalog with ground truth.
struct CatalogEntry {
    std::string name;
    std::string equation_text;
    BranchSampler branch_x;
    BranchSampler branch_y;
    Rat exponent_truth;
    std::optional<int> order_truth;
    // C^r graph extensions of the two branches, when the pair has them.
    std::optional<std::pair<Expr, Expr>> graph_pair;
    // Scale window keeping the samples inside the asymptotic regime and the
    // distances above the float floor.
    std::vector<double> scales = default_scales();
};

// name in {colley_kennedy (N), quatrefoil, cardioid, tworzewski (d, s)}.
CatalogEntry catalog(const std::string& name,
                     const std::map<std::string, long long>& params = {});

} // namespace osculum
