#include "tmlambda/fit.hpp"

#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>

#include "tmlambda/errors.hpp"
#include "tmlambda/optimizer.hpp"

namespace tmlambda {

namespace {

constexpr double kSqrt32 = 1.22474487139158905;  // sqrt(3/2)
constexpr double kSqrt3 = 1.73205080756887729;

void require_direction(const SplittingMeasurement& m, MeasuredDirection expected)
{
    if (m.direction != expected)
        throw std::invalid_argument("fit: expected measurement along " +
                                    direction_label(expected) + ", got " +
                                    direction_label(m.direction));
    if (m.delta_g <= 0.0 || m.sigma_g < 0.0)
        throw std::invalid_argument("fit: invalid ground splitting along " +
                                    direction_label(expected));
    if (m.delta_e && (*m.delta_e <= 0.0 || (m.sigma_e && *m.sigma_e < 0.0)))
        throw std::invalid_argument("fit: invalid excited splitting along " +
                                    direction_label(expected));
}

double sigma_e_of(const SplittingMeasurement& m)
{
    return m.sigma_e ? *m.sigma_e : 0.0;
}

// Combination route sqrt(d001^2 + 3/4 (d111^2 - dbar^2)) with its first-order
// sigma and the sigma of (primary - combination), which share the d111 input.
struct CombRoute {
    double value, sigma, sigma_diff;
};

CombRoute combination_route(double d001, double s001, double d111, double s111,
                            double dbar, double sbar)
{
    const double arg = d001 * d001 + 0.75 * (d111 * d111 - dbar * dbar);
    if (arg <= 0.0)
        throw std::invalid_argument("fit: combination route has no real solution");
    const double gc = std::sqrt(arg);
    const double d_d001 = d001 / gc;
    const double d_d111 = 0.75 * d111 / gc;
    const double d_dbar = -0.75 * dbar / gc;
    const double sigma = std::sqrt(d_d001 * d_d001 * s001 * s001 +
                                   d_d111 * d_d111 * s111 * s111 +
                                   d_dbar * d_dbar * sbar * sbar);
    const double diff_d111 = kSqrt32 - d_d111;
    const double sigma_diff = std::sqrt(diff_d111 * diff_d111 * s111 * s111 +
                                        d_d001 * d_d001 * s001 * s001 +
                                        d_dbar * d_dbar * sbar * sbar);
    return {gc, sigma, sigma_diff};
}

}  // namespace

std::string direction_label(MeasuredDirection d)
{
    switch (d) {
        case MeasuredDirection::Neg111: return "[-1-11]";
        case MeasuredDirection::C001: return "[001]";
        case MeasuredDirection::C111: return "[111]";
    }
    return "?";
}

FitResult fit_gamma_y(const SplittingMeasurement& m111, const SplittingMeasurement& m001,
                      const SplittingMeasurement& m_bar)
{
    require_direction(m111, MeasuredDirection::C111);
    require_direction(m001, MeasuredDirection::C001);
    require_direction(m_bar, MeasuredDirection::Neg111);
    if (!m111.delta_e)
        throw std::invalid_argument("fit: missing excited splitting along [111]");

    FitResult fit;
    fit.gy_g = {kSqrt32 * m111.delta_g, kSqrt32 * m111.sigma_g};
    fit.gy_e = {kSqrt32 * *m111.delta_e, kSqrt32 * sigma_e_of(m111)};

    const CombRoute comb_g = combination_route(m001.delta_g, m001.sigma_g, m111.delta_g,
                                               m111.sigma_g, m_bar.delta_g, m_bar.sigma_g);
    fit.gy_g_comb = {comb_g.value, comb_g.sigma};
    // The gate needs stated uncertainties; exact synthetic data differs between
    // routes by the gamma_z-neglect bias alone.
    if (comb_g.sigma_diff > 0.0 &&
        std::abs(fit.gy_g.value - comb_g.value) > 3.0 * comb_g.sigma_diff)
        throw InconsistentDataError(
            "fit: ground gamma_y routes disagree beyond 3 sigma");

    if (m001.delta_e && m_bar.delta_e) {
        const CombRoute comb_e =
            combination_route(*m001.delta_e, sigma_e_of(m001), *m111.delta_e,
                              sigma_e_of(m111), *m_bar.delta_e, sigma_e_of(m_bar));
        fit.gy_e_comb = ValueWithSigma{comb_e.value, comb_e.sigma};
        if (comb_e.sigma_diff > 0.0 &&
            std::abs(fit.gy_e.value - comb_e.value) > 3.0 * comb_e.sigma_diff)
            throw InconsistentDataError(
                "fit: excited gamma_y routes disagree beyond 3 sigma");
    }
    return fit;
}

FitResult anisotropy_ratios(FitResult fit, const SplittingMeasurement& m_bar)
{
    require_direction(m_bar, MeasuredDirection::Neg111);
    if (!m_bar.delta_e)
        throw std::invalid_argument("fit: missing excited splitting along [-1-11]");

    const auto ratio_with_sigma = [](double num, double snum, const ValueWithSigma& gy,
                                     double factor) {
        const double r = factor * num / gy.value;
        const double rel2 = (snum / num) * (snum / num) +
                            (gy.sigma / gy.value) * (gy.sigma / gy.value);
        return ValueWithSigma{r, r * std::sqrt(rel2)};
    };

    fit.ratio_comb_g = ratio_with_sigma(m_bar.delta_g, m_bar.sigma_g, fit.gy_g, kSqrt3);
    fit.ratio_comb_e = ratio_with_sigma(*m_bar.delta_e, sigma_e_of(m_bar), fit.gy_e, kSqrt3);
    fit.ratio_xy_e = ratio_with_sigma(*m_bar.delta_e, sigma_e_of(m_bar), fit.gy_e, kSqrt32);
    fit.ratio_xy_g_upper = kSqrt32 * m_bar.delta_g / fit.gy_g.value;
    return fit;
}

LambdaFigures lambda_figures(const FitResult& fit, const SplittingMeasurement& m_bar)
{
    require_direction(m_bar, MeasuredDirection::Neg111);
    if (!m_bar.delta_e)
        throw std::invalid_argument("fit: missing excited splitting along [-1-11]");

    const double dg = m_bar.delta_g, de = *m_bar.delta_e;
    const double sg = m_bar.sigma_g, se = sigma_e_of(m_bar);
    const double gyg = fit.gy_g.value, gye = fit.gy_e.value;

    const auto [bound, theta0] = bound_from_splittings(dg, de, gyg, gye);

    LambdaFigures fig;
    fig.r_max_bound.value = bound;
    fig.dtheta0_deg.value = crystal_tilt(theta0) * 180.0 / std::numbers::pi;

    // First-order propagation through u = dg/gyg, v = de/gye.
    const double u = dg / gyg, v = de / gye;
    const double w = std::sqrt(u), x = std::sqrt(v);
    const double q = (w - x) / (w + x);
    const double dfdu = 2.0 * q * x / (w * (w + x) * (w + x));
    const double dfdv = -2.0 * q * w / (x * (w + x) * (w + x));
    const double su = u * std::hypot(sg / dg, fit.gy_g.sigma / gyg);
    const double sv = v * std::hypot(se / de, fit.gy_e.sigma / gye);
    fig.r_max_bound.sigma = std::hypot(dfdu * su, dfdv * sv);

    const double g = std::sqrt(u * v);  // tan(theta0)
    const double rel_g = 0.5 * std::sqrt((sg / dg) * (sg / dg) + (se / de) * (se / de) +
                                         (fit.gy_g.sigma / gyg) * (fit.gy_g.sigma / gyg) +
                                         (fit.gy_e.sigma / gye) * (fit.gy_e.sigma / gye));
    const double sigma_theta0 = g * rel_g / (1.0 + g * g);
    fig.dtheta0_deg.sigma = crystal_tilt(sigma_theta0) * 180.0 / std::numbers::pi;
    return fig;
}

ConsistencyReport consistency_check(const FitResult& fit, const SplittingMeasurement& m001)
{
    require_direction(m001, MeasuredDirection::C001);

    const auto entry = [](Level level, double gx, double sgx, const ValueWithSigma& gy,
                          double measured, double sigma_measured) {
        ConsistencyEntry e;
        e.level = level;
        e.predicted = std::sqrt(0.5 * (gx * gx + gy.value * gy.value));
        e.sigma_predicted =
            std::hypot(gx * sgx, gy.value * gy.sigma) / (2.0 * e.predicted);
        e.measured = measured;
        e.sigma_measured = sigma_measured;
        const double diff = std::abs(e.predicted - measured);
        const double sigma = std::hypot(e.sigma_predicted, sigma_measured);
        if (sigma > 0.0)
            e.deviation_sigma = diff / sigma;
        else  // exact inputs: zero deviation up to roundoff
            e.deviation_sigma =
                diff <= 1e-9 * std::max(1.0, std::abs(measured))
                    ? 0.0
                    : std::numeric_limits<double>::infinity();
        return e;
    };

    ConsistencyReport report;
    // gamma_x is only bounded in the ground state; zero fallback.
    report.push_back(entry(Level::Ground, 0.0, 0.0, fit.gy_g, m001.delta_g, m001.sigma_g));
    if (m001.delta_e && fit.ratio_xy_e) {
        const double gx = fit.ratio_xy_e->value * fit.gy_e.value;
        const double sgx = gx * std::hypot(fit.ratio_xy_e->sigma / fit.ratio_xy_e->value,
                                           fit.gy_e.sigma / fit.gy_e.value);
        report.push_back(
            entry(Level::Excited, gx, sgx, fit.gy_e, *m001.delta_e, sigma_e_of(m001)));
    }
    return report;
}

}  // namespace tmlambda
