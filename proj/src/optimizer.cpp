#include "tmlambda/optimizer.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

#include "tmlambda/errors.hpp"

namespace tmlambda {

namespace {

double branching_at(const GyroTensor& g, const GyroTensor& e, const Vec3& b_local)
{
    return branching_ratio(effective_field(g, b_local), effective_field(e, b_local))
        .branching_ratio;
}

// Splitting per tesla at B_y = 0 for azimuth phi.
double by0_splitting(const GyroTensor& g, double phi)
{
    return splitting(g, {std::cos(phi), 0.0, std::sin(phi)});
}

}  // namespace

Vec3 tilted_field_direction(double theta, double phi)
{
    const double ct = std::cos(theta);
    return {ct * std::cos(phi), std::sin(theta), ct * std::sin(phi)};
}

double phi_site35() { return std::atan(1.0 / std::sqrt(2.0)); }

OrientationScan scan_bisector(const GyroTensor& gamma_g, const GyroTensor& gamma_e,
                              double theta_min, double theta_max, double step)
{
    if (step <= 0.0)
        throw std::invalid_argument("scan_bisector: step must be positive");

    OrientationScan scan;
    const SiteFrame& frame1 = site_frames()[0];
    const SiteFrame& frame3 = site_frames()[2];

    const long n_points =
        theta_max < theta_min
            ? 0
            : static_cast<long>(std::floor((theta_max - theta_min) / step + 1e-9)) + 1;
    for (long i = 0; i < n_points; ++i) {
        const double theta = theta_min + i * step;
        scan.theta_rad.push_back(theta);
        const Vec3 b = bisector_field(theta);

        const auto eval = [&](const SiteFrame& frame, OrientationScan::ClassCurve& curve) {
            const Vec3 local = to_local(frame, b);
            curve.delta_g.push_back(splitting(gamma_g, local));
            curve.delta_e.push_back(splitting(gamma_e, local));
            try {
                curve.branching.push_back(branching_at(gamma_g, gamma_e, local));
            } catch (const DegenerateFieldError&) {
                curve.branching.push_back(std::nullopt);
            }
        };
        eval(frame1, scan.site1);
        eval(frame3, scan.site35);
    }
    return scan;
}

std::pair<double, double> tilt_optimum_xoy(double r_e, double r_g)
{
    if (r_e <= 0.0 || r_g <= 0.0)
        throw std::invalid_argument("tilt_optimum_xoy: ratios must be positive");
    const double theta0 = std::sqrt(r_e * r_g);
    const double se = std::sqrt(r_e), sg = std::sqrt(r_g);
    const double r_max = ((se - sg) / (se + sg)) * ((se - sg) / (se + sg));
    return {theta0, r_max};
}

std::pair<double, double> bound_from_splittings(double delta_g, double delta_e,
                                                double gy_g, double gy_e)
{
    if (delta_g <= 0.0 || delta_e <= 0.0 || gy_g <= 0.0 || gy_e <= 0.0)
        throw std::invalid_argument("bound_from_splittings: inputs must be positive");
    const double wg = std::sqrt(delta_g / gy_g);
    const double we = std::sqrt(delta_e / gy_e);
    const double bound = ((wg - we) / (wg + we)) * ((wg - we) / (wg + we));
    const double theta0 = std::atan(std::sqrt(delta_g * delta_e / (gy_g * gy_e)));
    return {bound, theta0};
}

TiltOptimum general_tilt(const GyroTensor& gamma_g, const GyroTensor& gamma_e, double phi)
{
    const double dg = by0_splitting(gamma_g, phi);
    const double de = by0_splitting(gamma_e, phi);

    TiltOptimum opt;
    opt.phi = phi;
    const auto [bound, theta0] =
        bound_from_splittings(dg, de, gamma_g.gamma_y, gamma_e.gamma_y);
    opt.r_max_bound = bound;
    opt.theta0_local = theta0;
    opt.dtheta0_crystal = crystal_tilt(theta0);
    opt.r_max_exact = branching_at(gamma_g, gamma_e, tilted_field_direction(theta0, phi));
    return opt;
}

DisparityFactors disparity_decomposition(const GyroTensor& gamma_g, const GyroTensor& gamma_e,
                                         double phi)
{
    const double r_g = gamma_g.gamma_x / gamma_g.gamma_y;
    const double s_g = gamma_g.gamma_z / gamma_g.gamma_y;
    const double r_e = gamma_e.gamma_x / gamma_e.gamma_y;
    const double s_e = gamma_e.gamma_z / gamma_e.gamma_y;

    DisparityFactors out;
    const double disparity_num = r_e * s_g - r_g * s_e;
    const double disparity_den = r_e * s_g + r_g * s_e;
    out.a = disparity_den != 0.0
                ? (disparity_num / disparity_den) * (disparity_num / disparity_den)
                : 0.0;

    const double tan_phi = std::tan(phi);
    const double cos_phi = std::cos(phi);
    if (cos_phi == 0.0 || !std::isfinite(tan_phi)) {
        // phi = pi/2: the x components drop out and the decomposition
        // degenerates to its yOz limit.
        out.c = 0.0;
        out.f = 2.0;
    } else {
        const double rho_e2 = r_e * r_e + s_e * s_e * tan_phi * tan_phi;
        const double rho_g2 = r_g * r_g + s_g * s_g * tan_phi * tan_phi;
        const double y0_2 = std::sqrt(rho_e2 * rho_g2);  // (tan(theta0)/cos(phi))^2
        const double de2 = rho_e2 + y0_2;
        const double dg2 = rho_g2 + y0_2;
        const double c_num = disparity_den * tan_phi;
        out.c = c_num * c_num / (de2 * dg2);

        const double t_e = s_e / r_e, t_g = s_g / r_g;
        const double delta_e = std::sqrt(1.0 + t_e * t_e * tan_phi * tan_phi);
        const double delta_g = std::sqrt(1.0 + t_g * t_g * tan_phi * tan_phi);
        out.f = 1.0 + 2.0 * delta_e * delta_g /
                          (1.0 + delta_e * delta_g + t_e * t_g * tan_phi * tan_phi);
    }

    // Residual of sin^2(alpha) = base^2 + A*C*F against the exact fields.
    const TiltOptimum opt = general_tilt(gamma_g, gamma_e, phi);
    const Vec3 b = tilted_field_direction(opt.theta0_local, phi);
    const EffectiveField fg = effective_field(gamma_g, b);
    const EffectiveField fe = effective_field(gamma_e, b);
    const Vec3 cr = cross({fe.x, fe.y, fe.z}, {fg.x, fg.y, fg.z});
    const double sin2_exact = dot(cr, cr);

    const double wg = by0_splitting(gamma_g, phi) / gamma_g.gamma_y;
    const double we = by0_splitting(gamma_e, phi) / gamma_e.gamma_y;
    const double base = (wg - we) / (wg + we);
    out.identity_residual = std::abs(sin2_exact - (base * base + out.a * out.c * out.f));
    return out;
}

std::pair<double, double> numeric_maximize(const GyroTensor& gamma_g,
                                           const GyroTensor& gamma_e, double phi)
{
    const auto r_of = [&](double theta) {
        return branching_at(gamma_g, gamma_e, tilted_field_direction(theta, phi));
    };

    constexpr int n_coarse = 1000;
    constexpr double lo = 1e-6;
    constexpr double hi = std::numbers::pi / 2 - 1e-6;
    const double coarse_step = (hi - lo) / (n_coarse - 1);

    int best = 0;
    double best_r = -1.0, worst_r = 2.0;
    for (int i = 0; i < n_coarse; ++i) {
        const double r = r_of(lo + i * coarse_step);
        if (r > best_r) {
            best_r = r;
            best = i;
        }
        worst_r = std::min(worst_r, r);
    }

    if (best_r - worst_r < 1e-15)  // flat; identical effective-field directions
        return {0.5 * (lo + hi), best_r};
    if (best == 0 || best == n_coarse - 1)
        throw NoInteriorMaximumError(
            "numeric_maximize: branching ratio is monotone over (0, pi/2)");

    // Golden-section on the bracketing interval.
    constexpr double inv_golden = 0.61803398874989484820;
    double a = lo + (best - 1) * coarse_step;
    double b = lo + (best + 1) * coarse_step;
    double x1 = b - inv_golden * (b - a);
    double x2 = a + inv_golden * (b - a);
    double f1 = r_of(x1), f2 = r_of(x2);
    while (b - a > 1e-8) {
        if (f1 > f2) {
            b = x2;
            x2 = x1;
            f2 = f1;
            x1 = b - inv_golden * (b - a);
            f1 = r_of(x1);
        } else {
            a = x1;
            x1 = x2;
            f1 = f2;
            x2 = a + inv_golden * (b - a);
            f2 = r_of(x2);
        }
    }
    const double theta_star = 0.5 * (a + b);
    return {theta_star, r_of(theta_star)};
}

double crystal_tilt(double theta0_local) { return 2.0 * theta0_local / std::sqrt(3.0); }

bool small_tilt_ok(double theta0_local) { return std::abs(theta0_local) < 0.3; }

}  // namespace tmlambda
