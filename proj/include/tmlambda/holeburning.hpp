#ifndef TMLAMBDA_HOLEBURNING_HPP
#define TMLAMBDA_HOLEBURNING_HPP

#include <array>
#include <utility>
#include <vector>

namespace tmlambda {

enum class LineClass { Allowed, Forbidden };

/// One of the four optical transitions of an ion, at a fixed offset from the
/// ion center frequency. Strengths are normalized per ground sublevel:
/// allowed 1/(1+R), forbidden R/(1+R).
struct SpectralLine {
    double offset_mhz = 0.0;
    int ground_sublevel = 0;   // 1 or 2
    int excited_sublevel = 0;  // 1 or 2
    LineClass cls = LineClass::Allowed;
    double strength = 0.0;
};

struct LineStructure {
    double delta_g = 0.0;  // MHz
    double delta_e = 0.0;  // MHz
    double branching = 0.0;
    std::array<SpectralLine, 4> lines;
};

struct Sideband {
    double offset_mhz = 0.0;
    double relative_amplitude = 0.0;
};

/// Burn-stage parameters. P(detuning) = p0 * Lorentzian normalized to P(0)=p0,
/// FWHM gamma_h. branching_r is the optical branching ratio R, decay_r1 the
/// decay branching ratio R1, gamma0 the ground relaxation rate.
struct BurnConfig {
    double omega0_mhz = 0.0;   // burn frequency, window-relative
    double p0 = 0.0;           // peak excitation rate, 1/s
    double gamma_h_mhz = 0.1;  // homogeneous FWHM
    double branching_r = 0.0;
    double decay_r1 = 0.0;
    double gamma0 = 1.0;       // 1/s
    std::vector<Sideband> sidebands;
};

struct TransmissionSpectrum {
    std::vector<double> probe_mhz;      // window-relative
    std::vector<double> optical_depth;
    double baseline_od = 0.0;
};

enum class FeatureKind { Hole, Antihole };

struct Feature {
    double position_mhz = 0.0;  // relative to the burn frequency
    FeatureKind kind = FeatureKind::Hole;
    double depth_od = 0.0;
};

using FeatureList = std::vector<Feature>;

/// One contribution to a hole/anti-hole position: the class of the burning
/// transition and of the probing transition. Probe-forbidden contributions
/// are not expected to be observed away from the field direction that
/// optimizes the branching ratio.
struct FeatureContribution {
    LineClass burn = LineClass::Allowed;
    LineClass probe = LineClass::Allowed;
    bool expected_observable = true;
};

struct ClassifiedPosition {
    double position_mhz = 0.0;  // signed, relative to the burn frequency
    FeatureKind kind = FeatureKind::Hole;
    std::vector<FeatureContribution> contributions;
};

/// The four-line structure of an ion for given sublevel splittings and
/// optical branching ratio. Offsets are relative to the ion center.
LineStructure line_structure(double delta_g, double delta_e, double branching_r);

struct PumpRates {
    double w12 = 0.0;  // 1/s, sublevel 1 -> 2
    double w21 = 0.0;  // 1/s, sublevel 2 -> 1
};

/// Optical pumping rates between the ground sublevels for given line
/// detunings from the burn carrier (line_detunings[i] belongs to
/// lines.lines[i]). Sidebands contribute at their shifted detunings.
PumpRates pump_rates(const LineStructure& lines, const std::array<double, 4>& line_detunings,
                     const BurnConfig& config);

/// Stationary ground-sublevel populations under pumping and thermal
/// relaxation toward (1/2, 1/2) at rate gamma0. Returns (n1, n2), n1+n2 = 1.
std::pair<double, double> steady_state(double w12, double w21, double gamma0);

/// Synthesizes a burned transmission spectrum over a probe window of full
/// width window_mhz centered on the burn frequency, grid step resolution_mhz,
/// integrating a flat inhomogeneous ion-center distribution. Throws
/// WindowTooNarrowError when delta_g + delta_e exceeds half the window.
/// The ion-center integration runs on `workers` threads (0 = hardware count);
/// the fixed chunk partition makes the result identical for any worker count.
TransmissionSpectrum synthesize_spectrum(double delta_g, double delta_e,
                                         const BurnConfig& config, double window_mhz,
                                         double resolution_mhz, double baseline_od = 0.3,
                                         unsigned workers = 0);

/// The hole/anti-hole family with its burn/probe class decomposition, in
/// increasing position order. Duplicate positions (e.g. delta_e = 0) merge.
std::vector<ClassifiedPosition> classify_features(double delta_g, double delta_e);

struct SaturationReport {
    bool allowed_ok = true;    // P0 R1/(1+R1) < Gamma0
    bool forbidden_ok = true;  // P0 R /(1+R1) < Gamma0
    bool bleached = false;     // P0 R1/(1+R1) > 10 Gamma0
};

SaturationReport saturation_check(const BurnConfig& config);

/// Local extrema of the optical depth relative to the median baseline, with
/// parabolic sub-grid position refinement. Positions are reported relative
/// to burn_offset_mhz.
FeatureList detect_features(const TransmissionSpectrum& spectrum, double min_depth_od,
                            double burn_offset_mhz = 0.0);

}  // namespace tmlambda

#endif
