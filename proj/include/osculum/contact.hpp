#pragma once

#include <array>
#include <optional>

#include "osculum/expr.hpp"
#include "osculum/parallel.hpp"
#include "osculum/separation.hpp"

namespace osculum {

using Vec3 = std::array<double, 3>;

// Rank-2 distribution xi = ker(a dx + b dy + c dz) with expression
// coefficients in x, y, z; (a, b, c) must not vanish on the probed domain.
struct Distribution2in3 {
    Expr a, b, c;

    Vec3 normal_at(const Vec3& q) const;
};

Distribution2in3 parse_distribution(const std::string& a, const std::string& b,
                                    const std::string& c);

// Surface given as the graph z = g(x, y) with a marked point above p_xy.
struct SurfacePatch3 {
    Expr g;
    std::array<double, 2> p_xy{0.0, 0.0};

    Vec3 point_at(const std::array<double, 2>& xy) const;
    Vec3 normal_at(const std::array<double, 2>& xy) const; // (-g_x, -g_y, 1)
    Vec3 marked_point() const { return point_at(p_xy); }
};

// 2-plane in R^3 represented by a normal vector.
struct Plane3 {
    Vec3 normal;
};

// Angle between two planes, folded to [0, pi/2]; throws on a zero normal.
double plane_angle(const Plane3& p, const Plane3& q);

struct DirectionAngleFit {
    double theta = 0.0;            // direction in the surface parameter plane
    bool identically_zero = false; // every sampled angle below the floor
    std::optional<ExponentFit> fit;
};

// Estimated order of smallness of the angle between T_q Sigma and xi_q as q
// approaches the marked point within the surface.
struct ContactOrderEstimate {
    enum class Kind { ZeroOrder, Estimated, AngleUnderflow };
    Kind kind = Kind::ZeroOrder;
    double order = 0.0; // fitted order when Estimated
    int l_max = 0;      // AngleUnderflow reports "at least l_max"
    double tangent_gap = 0.0; // angle between xi_p and T_p Sigma
    std::vector<DirectionAngleFit> per_direction;
    std::optional<ExponentFit> worst; // minimal-slope direction fit
};

struct ContactProbeParams {
    std::vector<double> scales = default_scales();
    int n_directions = 8;
    int l_max = 8;
    Exec exec = Exec::Parallel;
};

// Order 0 exactly when xi_p != T_p Sigma (no sampling); otherwise the
// worst-case (minimal-slope) log-log fit of the angle against the distance.
ContactOrderEstimate contact_order_estimate(const Distribution2in3& xi,
                                            const SurfacePatch3& surface,
                                            const ContactProbeParams& prm = {});

struct SurfaceVerdict {
    Vec3 marked_point;
    bool tangent = false;
    ContactOrderEstimate estimate;
    bool within_bound = false; // order <= 1.1, or trivially (order 0)
};

struct GeigesReport {
    bool pass = false;
    std::optional<int> witness; // surface index with order >= 2 when found
    std::vector<SurfaceVerdict> surfaces;
    // The check samples finitely many surfaces; it can refute but not prove.
    static constexpr const char* kCaveat =
        "sampled criterion: a pass is evidence, not a proof, over all surfaces";
};

// Checks the angle-order criterion over a list of surfaces: pass when every
// tangent surface has estimated order <= 1 + 0.1; reports a witness surface
// with order >= 2 when one is found.
GeigesReport geiges_check(const Distribution2in3& xi,
                          const std::vector<SurfacePatch3>& surfaces,
                          const ContactProbeParams& prm = {});

// Random quadratic graphs z = a x^2 + b xy + c y^2 tangent to {z = 0} at the
// origin; tangent test surfaces for distributions with xi_0 = {z = 0}.
std::vector<SurfacePatch3> random_tangent_quadratics(int count, std::uint64_t seed);

namespace tolerances {
inline constexpr double kTangentGap = 1e-9;   // order-0 detection threshold
inline constexpr double kAngleFloor = 1e-14;  // angle-underflow threshold
inline constexpr double kGeigesBound = 1.1;   // pass bound: order <= 1 + 0.1
} // namespace tolerances

} // namespace osculum
