#ifndef TMLAMBDA_FIT_HPP
#define TMLAMBDA_FIT_HPP

#include <optional>
#include <string>
#include <vector>

#include "tmlambda/zeeman.hpp"

namespace tmlambda {

enum class MeasuredDirection { Neg111, C001, C111 };  // [-1-11], [001], [111]

std::string direction_label(MeasuredDirection d);

/// Per-tesla splitting measurement along one of the three calibration
/// directions. The excited entry may be absent for [001].
struct SplittingMeasurement {
    MeasuredDirection direction;
    double delta_g = 0.0;  // MHz/T
    double sigma_g = 0.0;  // MHz/T
    std::optional<double> delta_e;  // MHz/T
    std::optional<double> sigma_e;  // MHz/T
};

struct ValueWithSigma {
    double value = 0.0;
    double sigma = 0.0;
};

/// gamma_y per level from the splitting data, both extraction routes, and the
/// anisotropy combinations the data determine. gamma_x and gamma_z cannot be
/// separated from these measurements.
struct FitResult {
    ValueWithSigma gy_g;  // primary route, gamma_z neglected
    ValueWithSigma gy_e;
    ValueWithSigma gy_g_comb;  // cross-check combination route
    std::optional<ValueWithSigma> gy_e_comb;

    std::optional<ValueWithSigma> ratio_comb_g;  // sqrt(2 gx^2 + gz^2)/gy
    std::optional<ValueWithSigma> ratio_comb_e;
    std::optional<ValueWithSigma> ratio_xy_e;          // gamma_x/gamma_y
    std::optional<double> ratio_xy_g_upper;            // upper bound only
};

struct LambdaFigures {
    ValueWithSigma r_max_bound;
    ValueWithSigma dtheta0_deg;
};

struct ConsistencyEntry {
    Level level;
    double predicted = 0.0;        // MHz/T
    double sigma_predicted = 0.0;  // MHz/T
    double measured = 0.0;         // MHz/T
    double sigma_measured = 0.0;   // MHz/T
    double deviation_sigma = 0.0;  // |predicted-measured| over combined sigma
};

using ConsistencyReport = std::vector<ConsistencyEntry>;

/// Extracts gamma_y per level. Primary route: gamma_y = Delta[111]*sqrt(3/2)
/// (gamma_z neglected). Cross-check route: the three-direction combination
/// sqrt(Delta[001]^2 + 3/4 (Delta[111]^2 - Delta[-1-11]^2)). Both are
/// reported; throws InconsistentDataError when they disagree beyond 3 sigma
/// of their (correlated) difference.
FitResult fit_gamma_y(const SplittingMeasurement& m111, const SplittingMeasurement& m001,
                      const SplittingMeasurement& m_bar);

/// Adds the anisotropy combinations: ratio_comb = sqrt(3)*Delta[-1-11]/gamma_y
/// per level, ratio_xy_e = Delta[-1-11]_e*sqrt(3/2)/gamma_y_e (gamma_z
/// neglected), and the ground-state gamma_x/gamma_y upper bound.
FitResult anisotropy_ratios(FitResult fit, const SplittingMeasurement& m_bar);

/// Branching-ratio bound and crystal tilt angle from the fitted gamma_y and
/// the [-1-11] splittings, with first-order propagated uncertainties.
LambdaFigures lambda_figures(const FitResult& fit, const SplittingMeasurement& m_bar);

/// Predicts Delta[001] per level from the fit (gamma_x from the ratios, zero
/// fallback for the ground state) and reports the deviation from measurement.
ConsistencyReport consistency_check(const FitResult& fit, const SplittingMeasurement& m001);

}  // namespace tmlambda

#endif
