#include "tmlambda/zeeman.hpp"

#include <cmath>
#include <stdexcept>

#include "tmlambda/errors.hpp"

namespace tmlambda {

GyroTensor::GyroTensor(double gx, double gy, double gz, Level lvl)
    : gamma_x(gx), gamma_y(gy), gamma_z(gz), level(lvl)
{
    if (!std::isfinite(gx) || !std::isfinite(gy) || !std::isfinite(gz))
        throw std::invalid_argument("GyroTensor: components must be finite");
    if (gy <= 0.0)
        throw std::invalid_argument("GyroTensor: gamma_y must be positive");
}

double splitting(const GyroTensor& g, const Vec3& b_local)
{
    const double fx = g.gamma_x * b_local.x;
    const double fy = g.gamma_y * b_local.y;
    const double fz = g.gamma_z * b_local.z;
    return std::sqrt(fx * fx + fy * fy + fz * fz);
}

EffectiveField effective_field(const GyroTensor& g, const Vec3& b_local)
{
    const double delta = splitting(g, b_local);
    if (delta <= 0.0)
        throw DegenerateFieldError("effective_field: zero splitting, direction undefined");
    return {g.gamma_x * b_local.x / delta, g.gamma_y * b_local.y / delta,
            g.gamma_z * b_local.z / delta, delta};
}

std::pair<SpinEigenstate, SpinEigenstate> eigenstates(const EffectiveField& eff)
{
    // Standard spin-1/2 diagonalization of (X Ix + Y Iy + Z Iz) with the
    // overall phase fixed so that b is real and non-negative.
    const double rho = std::hypot(eff.x, eff.y);
    const std::complex<double> phase_conj =
        rho > 0.0 ? std::complex<double>(eff.x / rho, -eff.y / rho) : std::complex<double>(1.0, 0.0);

    const double cos_half = std::sqrt(std::max(0.0, 0.5 * (1.0 + eff.z)));
    const double sin_half = std::sqrt(std::max(0.0, 0.5 * (1.0 - eff.z)));

    SpinEigenstate minus{-phase_conj * sin_half, {cos_half, 0.0}};  // eigenvalue -1/2
    SpinEigenstate plus{phase_conj * cos_half, {sin_half, 0.0}};    // eigenvalue +1/2
    return {minus, plus};
}

LambdaSystem branching_ratio(const EffectiveField& eff_g, const EffectiveField& eff_e)
{
    const Vec3 g{eff_g.x, eff_g.y, eff_g.z};
    const Vec3 e{eff_e.x, eff_e.y, eff_e.z};
    const double c = dot(g, e);
    if (c <= -1.0 + 1e-12)
        throw AntiparallelFieldsError("branching_ratio: effective fields antiparallel, R diverges");

    const Vec3 cr = cross(e, g);
    const double cross2 = dot(cr, cr);

    const double r_angle = (1.0 - c) / (1.0 + c);
    const double r_cross = cross2 / ((1.0 + c) * (1.0 + c));
    if (std::abs(r_angle - r_cross) > 1e-12 * std::max(1.0, r_angle + r_cross))
        throw std::logic_error("branching_ratio: the two closed forms disagree");

    LambdaSystem out;
    out.eff_ground = eff_g;
    out.eff_excited = eff_e;
    out.alpha_eff = std::atan2(std::sqrt(cross2), c);
    out.branching_ratio = r_angle;
    return out;
}

std::array<std::array<double, 2>, 2> overlap_matrix(
    const std::pair<SpinEigenstate, SpinEigenstate>& ground,
    const std::pair<SpinEigenstate, SpinEigenstate>& excited)
{
    const SpinEigenstate gs[2] = {ground.first, ground.second};
    const SpinEigenstate es[2] = {excited.first, excited.second};
    std::array<std::array<double, 2>, 2> m{};
    for (int i = 0; i < 2; ++i)
        for (int j = 0; j < 2; ++j) {
            const std::complex<double> amp =
                std::conj(gs[i].a) * es[j].a + std::conj(gs[i].b) * es[j].b;
            m[i][j] = std::norm(amp);
        }
    return m;
}

}  // namespace tmlambda
