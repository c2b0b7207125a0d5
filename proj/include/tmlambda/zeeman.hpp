#ifndef TMLAMBDA_ZEEMAN_HPP
#define TMLAMBDA_ZEEMAN_HPP

#include <array>
#include <complex>
#include <utility>

#include "tmlambda/geometry.hpp"

namespace tmlambda {

enum class Level { Ground, Excited };

/// Diagonal gyromagnetic factors of one electronic level in the site frame,
/// MHz per tesla. gamma_y > 0 by convention; the overall sign is unobservable
/// and only relative signs within a level affect the branching ratio.
struct GyroTensor {
    GyroTensor(double gx, double gy, double gz, Level lvl);

    double gamma_x;
    double gamma_y;
    double gamma_z;
    Level level;
};

/// Unit vector the nuclear spin quantizes along, with the level splitting
/// attached (MHz for a field in tesla, MHz/T for a unit direction).
struct EffectiveField {
    double x = 0.0, y = 0.0, z = 0.0;
    double delta = 0.0;
};

/// Spin-1/2 state as amplitudes on the I_z basis |+>, |->.
struct SpinEigenstate {
    std::complex<double> a;
    std::complex<double> b;
};

/// The two-level splitting of one electronic level for a local-frame field:
/// sqrt(gx^2 Bx^2 + gy^2 By^2 + gz^2 Bz^2).
double splitting(const GyroTensor& g, const Vec3& b_local);

/// Effective field unit vector (gx Bx, gy By, gz Bz)/delta.
/// Throws DegenerateFieldError when the splitting vanishes.
EffectiveField effective_field(const GyroTensor& g, const Vec3& b_local);

/// Eigenstates of X I_x + Y I_y + Z I_z. The first state has
/// |a|^2 = (1-Z)/2 (eigenvalue -1/2), the second |a|^2 = (1+Z)/2 (+1/2).
/// Phase convention: b real and non-negative.
std::pair<SpinEigenstate, SpinEigenstate> eigenstates(const EffectiveField& eff);

/// Effective-field pair with the forbidden/allowed transition probability
/// ratio R = tan^2(alpha_eff/2).
struct LambdaSystem {
    EffectiveField eff_ground;
    EffectiveField eff_excited;
    double alpha_eff = 0.0;       // radians
    double branching_ratio = 0.0;
};

/// Branching ratio from the angle between the two effective fields. Evaluates
/// both the (1-cos)/(1+cos) and the |cross|^2/(1+dot)^2 forms and checks they
/// agree. Throws AntiparallelFieldsError when the fields are antiparallel.
LambdaSystem branching_ratio(const EffectiveField& eff_g, const EffectiveField& eff_e);

/// Transition probabilities |<g_i|e_j>|^2. Rows (ground index) and columns
/// (excited index) each sum to 1.
std::array<std::array<double, 2>, 2> overlap_matrix(
    const std::pair<SpinEigenstate, SpinEigenstate>& ground,
    const std::pair<SpinEigenstate, SpinEigenstate>& excited);

}  // namespace tmlambda

#endif
