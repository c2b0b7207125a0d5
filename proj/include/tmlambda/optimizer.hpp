#ifndef TMLAMBDA_OPTIMIZER_HPP
#define TMLAMBDA_OPTIMIZER_HPP

#include <optional>
#include <utility>
#include <vector>

#include "tmlambda/zeeman.hpp"

namespace tmlambda {

/// Per-tesla splittings and branching ratio of the two site classes along a
/// bisector-plane orientation scan. Branching entries are empty where an
/// effective field is degenerate.
struct OrientationScan {
    struct ClassCurve {
        std::vector<double> delta_g;  // MHz/T
        std::vector<double> delta_e;  // MHz/T
        std::vector<std::optional<double>> branching;
    };
    std::vector<double> theta_rad;
    ClassCurve site1;
    ClassCurve site35;
};

/// Tilt optimum for a field swept out of the local xOz plane at fixed
/// azimuth phi (phi measured from the local x axis toward z).
struct TiltOptimum {
    double theta0_local = 0.0;     // rad, tilt from the B_y = 0 direction
    double dtheta0_crystal = 0.0;  // rad, via crystal_tilt()
    double r_max_bound = 0.0;
    double r_max_exact = 0.0;
    double phi = 0.0;              // rad
};

/// Factors of the decomposition sin^2(alpha) = base^2 + A*C*F at the
/// optimal tilt, plus the residual of that identity.
struct DisparityFactors {
    double a = 0.0;
    double c = 0.0;
    double f = 0.0;
    double identity_residual = 0.0;
};

/// Scans the bisector plane: for each theta builds the unit field, transforms
/// into the site-1 and site-3 frames and evaluates per-tesla splittings and
/// branching ratios for both site classes.
OrientationScan scan_bisector(const GyroTensor& gamma_g, const GyroTensor& gamma_e,
                              double theta_min, double theta_max, double step);

/// Closed-form in-plane (xOy) optimum: theta0 = sqrt(re*rg),
/// r_max = ((sqrt(re)-sqrt(rg))/(sqrt(re)+sqrt(rg)))^2, with r = gamma_x/gamma_y.
std::pair<double, double> tilt_optimum_xoy(double r_e, double r_g);

/// Lower bound on the optimal branching ratio and the optimal local tilt,
/// from the B_y = 0 splittings (MHz/T) and the gamma_y values (MHz/T).
/// Returns (r_max_bound, theta0) with tan(theta0) = sqrt(dg*de/(gy_g*gy_e)).
std::pair<double, double> bound_from_splittings(double delta_g, double delta_e,
                                                double gy_g, double gy_e);

/// Optimal tilt at fixed azimuth phi: theta0 from the cross-product maximum,
/// the bound from the B_y = 0 splittings, and the exact branching ratio at
/// theta0. dtheta0_crystal applies crystal_tilt() to theta0.
TiltOptimum general_tilt(const GyroTensor& gamma_g, const GyroTensor& gamma_e, double phi);

/// A, C, F factors evaluated at the general_tilt theta0, with the residual of
/// the sin^2(alpha) decomposition identity checked against the exact fields.
DisparityFactors disparity_decomposition(const GyroTensor& gamma_g, const GyroTensor& gamma_e,
                                         double phi);

/// Numerical maximum of the branching ratio over theta in (0, pi/2) at fixed
/// phi: 1000-point coarse grid to bracket, then golden section to 1e-8 rad.
/// Returns (theta_star, r_star). Throws NoInteriorMaximumError when the
/// coarse maximum sits at an interval end.
std::pair<double, double> numeric_maximize(const GyroTensor& gamma_g,
                                           const GyroTensor& gamma_e, double phi);

/// Crystal-frame tilt from [-1-11] for a local tilt theta0 at sites 3 and 5:
/// 2*theta0/sqrt(3). Small-angle identification; see small_tilt_ok().
double crystal_tilt(double theta0_local);

/// The crystal_tilt() identification assumes theta0 < 0.3 rad.
bool small_tilt_ok(double theta0_local);

/// Local field direction (cos(theta)cos(phi), sin(theta), cos(theta)sin(phi)).
Vec3 tilted_field_direction(double theta, double phi);

/// Azimuth of the B_y = 0 direction in the site-3/5 local frames for a
/// bisector-plane field: atan(1/sqrt(2)).
double phi_site35();

}  // namespace tmlambda

#endif
