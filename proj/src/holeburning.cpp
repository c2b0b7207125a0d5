#include "tmlambda/holeburning.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <stdexcept>
#include <thread>

#include "tmlambda/errors.hpp"

namespace tmlambda {

namespace {

double lorentz_peak1(double detuning, double fwhm)
{
    const double hw2 = 0.25 * fwhm * fwhm;
    return hw2 / (detuning * detuning + hw2);
}

void validate_config(const BurnConfig& config)
{
    if (config.p0 < 0.0)
        throw std::invalid_argument("burn config: p0 must be >= 0");
    if (config.gamma_h_mhz <= 0.0)
        throw std::invalid_argument("burn config: gamma_h_mhz must be positive");
    if (config.gamma0 <= 0.0)
        throw std::invalid_argument("burn config: gamma0 must be positive");
    if (config.branching_r < 0.0 || config.decay_r1 < 0.0)
        throw std::invalid_argument("burn config: branching ratios must be >= 0");
    for (const Sideband& sb : config.sidebands)
        if (sb.relative_amplitude < 0.0)
            throw std::invalid_argument("burn config: sideband amplitude must be >= 0");
}

}  // namespace

LineStructure line_structure(double delta_g, double delta_e, double branching_r)
{
    if (delta_g < 0.0 || delta_e < 0.0)
        throw std::invalid_argument("line_structure: splittings must be >= 0");
    if (branching_r < 0.0)
        throw std::invalid_argument("line_structure: branching ratio must be >= 0");

    const double allowed = 1.0 / (1.0 + branching_r);
    const double forbidden = branching_r / (1.0 + branching_r);
    const double half_diff = 0.5 * (delta_g - delta_e);
    const double half_sum = 0.5 * (delta_g + delta_e);

    LineStructure ls;
    ls.delta_g = delta_g;
    ls.delta_e = delta_e;
    ls.branching = branching_r;
    // Spin-conserving pairs (g1,e1) and (g2,e2) are the allowed ones.
    ls.lines = {{
        {half_diff, 1, 1, LineClass::Allowed, allowed},
        {half_sum, 1, 2, LineClass::Forbidden, forbidden},
        {-half_sum, 2, 1, LineClass::Forbidden, forbidden},
        {-half_diff, 2, 2, LineClass::Allowed, allowed},
    }};
    return ls;
}

PumpRates pump_rates(const LineStructure& lines, const std::array<double, 4>& line_detunings,
                     const BurnConfig& config)
{
    validate_config(config);
    const double allowed_fraction = config.decay_r1 / (1.0 + config.decay_r1);
    const double forbidden_fraction = config.branching_r / (1.0 + config.decay_r1);

    PumpRates rates;
    for (std::size_t i = 0; i < lines.lines.size(); ++i) {
        const SpectralLine& line = lines.lines[i];
        const double channel =
            line.cls == LineClass::Allowed ? allowed_fraction : forbidden_fraction;
        if (channel == 0.0)
            continue;

        double excitation = config.p0 * lorentz_peak1(line_detunings[i], config.gamma_h_mhz);
        for (const Sideband& sb : config.sidebands)
            excitation += sb.relative_amplitude * config.p0 *
                          lorentz_peak1(line_detunings[i] - sb.offset_mhz, config.gamma_h_mhz);

        const double w = excitation * channel;
        if (line.ground_sublevel == 1)
            rates.w12 += w;
        else
            rates.w21 += w;
    }
    return rates;
}

std::pair<double, double> steady_state(double w12, double w21, double gamma0)
{
    if (gamma0 <= 0.0)
        throw std::invalid_argument("steady_state: gamma0 must be positive");
    const double n1 = (w21 + 0.5 * gamma0) / (w12 + w21 + gamma0);
    return {n1, 1.0 - n1};
}

TransmissionSpectrum synthesize_spectrum(double delta_g, double delta_e,
                                         const BurnConfig& config, double window_mhz,
                                         double resolution_mhz, double baseline_od,
                                         unsigned workers)
{
    validate_config(config);
    if (window_mhz <= 0.0 || resolution_mhz <= 0.0)
        throw std::invalid_argument("synthesize_spectrum: window and resolution must be positive");
    if (resolution_mhz >= 0.25 * config.gamma_h_mhz)
        throw std::invalid_argument("synthesize_spectrum: resolution must be < gamma_h/4");
    if (baseline_od <= 0.0)
        throw std::invalid_argument("synthesize_spectrum: baseline_od must be positive");
    if (delta_g + delta_e > 0.5 * window_mhz)
        throw WindowTooNarrowError(
            "synthesize_spectrum: delta_g + delta_e exceeds half the probe window");

    const LineStructure lines = line_structure(delta_g, delta_e, config.branching_r);

    const int n_probe = static_cast<int>(std::lround(window_mhz / resolution_mhz)) + 1;
    TransmissionSpectrum spec;
    spec.baseline_od = baseline_od;
    spec.probe_mhz.resize(n_probe);
    // Probe positions relative to the burn; shifted to window coordinates below.
    std::vector<double> x(n_probe);
    for (int k = 0; k < n_probe; ++k) {
        x[k] = -0.5 * window_mhz + k * resolution_mhz;
        spec.probe_mhz[k] = config.omega0_mhz + x[k];
    }

    // Ion-center range: wide enough that every probe point sees a full flat
    // distribution through the Lorentzian tails it samples.
    const double span = 0.5 * (delta_g + delta_e);
    const double pad = 20.0 * config.gamma_h_mhz;
    const double c_lo = -0.5 * window_mhz - span - pad;
    const double c_hi = 0.5 * window_mhz + span + pad;
    const double dc = std::min(resolution_mhz, 0.25 * config.gamma_h_mhz);
    const long n_centers = std::lround((c_hi - c_lo) / dc) + 1;

    // Fixed partition: results are independent of the worker count.
    const int n_chunks = 64;
    struct ChunkBuffers {
        std::vector<double> burned;
        std::vector<double> unburned;
    };
    std::vector<ChunkBuffers> chunks(n_chunks);

    const auto run_chunk = [&](int chunk) {
        ChunkBuffers buf;
        buf.burned.assign(n_probe, 0.0);
        buf.unburned.assign(n_probe, 0.0);
        const long begin = chunk * n_centers / n_chunks;
        const long end = (chunk + 1) * n_centers / n_chunks;
        for (long ic = begin; ic < end; ++ic) {
            const double c = c_lo + ic * dc;
            std::array<double, 4> detunings;
            for (std::size_t i = 0; i < 4; ++i)
                detunings[i] = c + lines.lines[i].offset_mhz;

            const PumpRates rates = pump_rates(lines, detunings, config);
            const auto [n1, n2] = steady_state(rates.w12, rates.w21, config.gamma0);
            const double pop[2] = {n1, n2};

            for (std::size_t i = 0; i < 4; ++i) {
                const SpectralLine& line = lines.lines[i];
                const double center = c + line.offset_mhz;
                const double burned_amp = line.strength * pop[line.ground_sublevel - 1];
                const double unburned_amp = line.strength * 0.5;
                const double hw2 = 0.25 * config.gamma_h_mhz * config.gamma_h_mhz;
                for (int k = 0; k < n_probe; ++k) {
                    const double d = x[k] - center;
                    const double shape = hw2 / (d * d + hw2);
                    buf.burned[k] += burned_amp * shape;
                    buf.unburned[k] += unburned_amp * shape;
                }
            }
        }
        return buf;
    };

    std::atomic<int> next_chunk{0};
    if (workers == 0)
        workers = std::thread::hardware_concurrency();
    const unsigned n_workers =
        std::max(1u, std::min(workers, static_cast<unsigned>(n_chunks)));
    std::vector<std::thread> pool;
    pool.reserve(n_workers);
    for (unsigned t = 0; t < n_workers; ++t)
        pool.emplace_back([&] {
            for (int chunk = next_chunk.fetch_add(1); chunk < n_chunks;
                 chunk = next_chunk.fetch_add(1))
                chunks[chunk] = run_chunk(chunk);
        });
    for (std::thread& w : pool)
        w.join();

    // Merge in fixed chunk order, then normalize so the unburned spectrum
    // sits exactly at the baseline optical depth.
    std::vector<double> burned(n_probe, 0.0), unburned(n_probe, 0.0);
    for (const ChunkBuffers& buf : chunks)
        for (int k = 0; k < n_probe; ++k) {
            burned[k] += buf.burned[k];
            unburned[k] += buf.unburned[k];
        }

    spec.optical_depth.resize(n_probe);
    for (int k = 0; k < n_probe; ++k)
        spec.optical_depth[k] = baseline_od * burned[k] / unburned[k];
    return spec;
}

std::vector<ClassifiedPosition> classify_features(double delta_g, double delta_e)
{
    const LineStructure ls = line_structure(delta_g, delta_e, 0.0);
    constexpr double tol = 1e-9;

    std::vector<ClassifiedPosition> positions;
    for (const SpectralLine& burn : ls.lines)
        for (const SpectralLine& probe : ls.lines) {
            const double pos = probe.offset_mhz - burn.offset_mhz;
            const FeatureKind kind = probe.ground_sublevel == burn.ground_sublevel
                                         ? FeatureKind::Hole
                                         : FeatureKind::Antihole;
            const FeatureContribution contrib{burn.cls, probe.cls,
                                              probe.cls == LineClass::Allowed};

            auto it = std::find_if(positions.begin(), positions.end(),
                                   [&](const ClassifiedPosition& p) {
                                       return std::abs(p.position_mhz - pos) < tol &&
                                              p.kind == kind;
                                   });
            if (it == positions.end()) {
                positions.push_back({pos, kind, {contrib}});
                continue;
            }
            const bool duplicate = std::any_of(
                it->contributions.begin(), it->contributions.end(),
                [&](const FeatureContribution& e) {
                    return e.burn == contrib.burn && e.probe == contrib.probe;
                });
            if (!duplicate)
                it->contributions.push_back(contrib);
        }

    for (ClassifiedPosition& p : positions)
        std::sort(p.contributions.begin(), p.contributions.end(),
                  [](const FeatureContribution& a, const FeatureContribution& b) {
                      if (a.probe != b.probe)
                          return a.probe == LineClass::Allowed;
                      return a.burn < b.burn;
                  });
    std::sort(positions.begin(), positions.end(),
              [](const ClassifiedPosition& a, const ClassifiedPosition& b) {
                  return a.position_mhz < b.position_mhz;
              });
    return positions;
}

SaturationReport saturation_check(const BurnConfig& config)
{
    validate_config(config);
    const double allowed_rate = config.p0 * config.decay_r1 / (1.0 + config.decay_r1);
    const double forbidden_rate = config.p0 * config.branching_r / (1.0 + config.decay_r1);
    SaturationReport report;
    report.allowed_ok = allowed_rate < config.gamma0;
    report.forbidden_ok = forbidden_rate < config.gamma0;
    report.bleached = allowed_rate > 10.0 * config.gamma0;
    return report;
}

FeatureList detect_features(const TransmissionSpectrum& spectrum, double min_depth_od,
                            double burn_offset_mhz)
{
    const std::size_t n = spectrum.optical_depth.size();
    if (spectrum.probe_mhz.size() != n)
        throw std::invalid_argument("detect_features: grid/depth size mismatch");
    if (n < 3)
        return {};
    for (std::size_t i = 1; i < n; ++i)
        if (spectrum.probe_mhz[i] <= spectrum.probe_mhz[i - 1])
            throw std::invalid_argument("detect_features: grid must be strictly increasing");

    std::vector<double> sorted = spectrum.optical_depth;
    std::nth_element(sorted.begin(), sorted.begin() + n / 2, sorted.end());
    const double baseline = sorted[n / 2];

    FeatureList features;
    const std::vector<double>& od = spectrum.optical_depth;
    for (std::size_t i = 1; i + 1 < n; ++i) {
        const bool is_max = od[i] > od[i - 1] && od[i] >= od[i + 1];
        const bool is_min = od[i] < od[i - 1] && od[i] <= od[i + 1];
        if (!is_max && !is_min)
            continue;

        const double step = spectrum.probe_mhz[i] - spectrum.probe_mhz[i - 1];
        const double denom = od[i - 1] - 2.0 * od[i] + od[i + 1];
        double shift = 0.0;
        double vertex = od[i];
        if (std::abs(denom) > 1e-300) {
            shift = 0.5 * (od[i - 1] - od[i + 1]) / denom;
            shift = std::clamp(shift, -0.5, 0.5);
            vertex = od[i] - 0.125 * (od[i - 1] - od[i + 1]) * (od[i - 1] - od[i + 1]) / denom;
        }

        if (is_max && vertex >= baseline + min_depth_od)
            features.push_back({spectrum.probe_mhz[i] + shift * step - burn_offset_mhz,
                                FeatureKind::Antihole, vertex - baseline});
        else if (is_min && vertex <= baseline - min_depth_od)
            features.push_back({spectrum.probe_mhz[i] + shift * step - burn_offset_mhz,
                                FeatureKind::Hole, baseline - vertex});
    }
    return features;
}

}  // namespace tmlambda
