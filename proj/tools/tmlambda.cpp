// tmlambda: command-line front end for the Tm:YAG lambda-system toolkit.
//
// Subcommands: sites, scan, optimize, fit, spectrum. Each takes a key=value
// config file plus overriding flags; outputs are CSV/JSON written atomically.

#include <CLI11.hpp>

#include <cmath>
#include <fstream>
#include <iostream>
#include <map>
#include <numbers>
#include <optional>
#include <sstream>
#include <string>

#include "tmlambda/errors.hpp"
#include "tmlambda/fit.hpp"
#include "tmlambda/holeburning.hpp"
#include "tmlambda/io.hpp"
#include "tmlambda/optimizer.hpp"
#include "tmlambda/zeeman.hpp"

namespace {

using tmlambda::json;
using tmlambda::Vec3;

constexpr double kDeg = 180.0 / std::numbers::pi;

/// Configuration problem: exit code 1.
struct ConfigError : std::runtime_error {
    explicit ConfigError(const std::string& msg) : std::runtime_error(msg) {}
};

std::map<std::string, std::string> parse_config_file(const std::string& path)
{
    std::ifstream is(path);
    if (!is)
        throw ConfigError("config: cannot open " + path);
    std::map<std::string, std::string> kv;
    std::string line;
    int lineno = 0;
    while (std::getline(is, line)) {
        ++lineno;
        const auto hash = line.find('#');
        if (hash != std::string::npos)
            line.erase(hash);
        const auto eq = line.find('=');
        if (eq == std::string::npos) {
            if (line.find_first_not_of(" \t\r") != std::string::npos)
                throw ConfigError("config: line " + std::to_string(lineno) +
                                  " is not a key = value pair");
            continue;
        }
        const auto trim = [](std::string s) {
            const auto b = s.find_first_not_of(" \t\r");
            const auto e = s.find_last_not_of(" \t\r");
            return b == std::string::npos ? std::string() : s.substr(b, e - b + 1);
        };
        const std::string key = trim(line.substr(0, eq));
        const std::string value = trim(line.substr(eq + 1));
        if (key.empty())
            throw ConfigError("config: empty key on line " + std::to_string(lineno));
        kv[key] = value;
    }
    return kv;
}

/// Key-value settings with typed access; every failure names the key.
class Settings {
public:
    void merge_file(const std::string& path)
    {
        for (auto& [k, v] : parse_config_file(path))
            kv_[k] = v;
    }
    void set(const std::string& key, const std::string& value) { kv_[key] = value; }
    bool has(const std::string& key) const { return kv_.count(key) != 0; }

    std::string str(const std::string& key) const
    {
        const auto it = kv_.find(key);
        if (it == kv_.end())
            throw ConfigError(key + ": missing required setting");
        return it->second;
    }
    std::string str_or(const std::string& key, const std::string& fallback) const
    {
        const auto it = kv_.find(key);
        return it == kv_.end() ? fallback : it->second;
    }

    double number(const std::string& key) const { return to_number(key, str(key)); }
    double number_or(const std::string& key, double fallback) const
    {
        return has(key) ? number(key) : fallback;
    }

    bool flag_or(const std::string& key, bool fallback) const
    {
        if (!has(key))
            return fallback;
        const std::string v = str(key);
        if (v == "true" || v == "1" || v == "yes" || v == "on")
            return true;
        if (v == "false" || v == "0" || v == "no" || v == "off")
            return false;
        throw ConfigError(key + ": expected a boolean, got '" + v + "'");
    }

private:
    static double to_number(const std::string& key, const std::string& v)
    {
        try {
            std::size_t used = 0;
            const double x = std::stod(v, &used);
            if (used != v.size() || !std::isfinite(x))
                throw std::invalid_argument(v);
            return x;
        } catch (const std::exception&) {
            throw ConfigError(key + ": expected a number, got '" + v + "'");
        }
    }

    std::map<std::string, std::string> kv_;
};

/// "[hkl]" labels with single signed digits ([-1-11], [001], ...) or "x,y,z"
/// component triplets. Returns the normalized direction.
Vec3 parse_direction(const std::string& key, const std::string& text)
{
    const auto fail = [&](const std::string& why) -> Vec3 {
        throw ConfigError(key + ": " + why + " ('" + text + "')");
    };

    if (!text.empty() && text.front() == '[') {
        if (text.back() != ']')
            return fail("unterminated direction label");
        const std::string body = text.substr(1, text.size() - 2);
        double comp[3];
        int n = 0;
        for (std::size_t i = 0; i < body.size();) {
            double sign = 1.0;
            if (body[i] == '-') {
                sign = -1.0;
                ++i;
            }
            if (i >= body.size() || body[i] < '0' || body[i] > '9' || n == 3)
                return fail("expected three signed digits");
            comp[n++] = sign * (body[i] - '0');
            ++i;
        }
        if (n != 3)
            return fail("expected three signed digits");
        if (comp[0] == 0 && comp[1] == 0 && comp[2] == 0)
            return fail("direction must be non-zero");
        return tmlambda::unit({comp[0], comp[1], comp[2]});
    }

    std::istringstream is(text);
    double x, y, z;
    char c1, c2;
    if (!(is >> x >> c1 >> y >> c2 >> z) || c1 != ',' || c2 != ',' || !(is >> std::ws).eof())
        return fail("expected a [hkl] label or three comma-separated components");
    if (x == 0 && y == 0 && z == 0)
        return fail("direction must be non-zero");
    return tmlambda::unit({x, y, z});
}

tmlambda::GyroTensor parse_tensor(const Settings& cfg, const std::string& key,
                                  tmlambda::Level level)
{
    const std::string text = cfg.str(key);
    std::istringstream is(text);
    double gx, gy, gz;
    char c1, c2;
    if (!(is >> gx >> c1 >> gy >> c2 >> gz) || c1 != ',' || c2 != ',' ||
        !(is >> std::ws).eof())
        throw ConfigError(key + ": expected 'gx,gy,gz' in MHz/T, got '" + text + "'");
    try {
        return tmlambda::GyroTensor(gx, gy, gz, level);
    } catch (const std::invalid_argument& e) {
        throw ConfigError(key + ": " + e.what());
    }
}

void emit(const Settings& cfg, const std::string& content)
{
    if (cfg.has("out") && cfg.str("out") != "-")
        tmlambda::write_text_atomic(cfg.str("out"), content);
    else
        std::cout << content;
}

// ---------------------------------------------------------------------------

int cmd_sites(const Settings& cfg)
{
    // theta_deg (bisector-plane angle) takes precedence over a direction key
    Vec3 direction;
    if (cfg.has("theta_deg"))
        direction = tmlambda::bisector_field(cfg.number("theta_deg") / kDeg);
    else
        direction = parse_direction("direction", cfg.str("direction"));
    const Vec3 polarization = parse_direction("polarization", cfg.str("polarization"));

    const tmlambda::SiteClassification cls =
        tmlambda::classify_sites(direction, polarization);

    double total_weight = 0.0;
    for (const auto& class_sites : cls.active_classes)
        for (int site : class_sites) {
            const double p =
                tmlambda::dipole_projection(tmlambda::site_frames()[site - 1], polarization);
            total_weight += p * p;
        }

    json classes = json::array();
    std::size_t optimized = 0;
    double best_by = 0.0;
    for (std::size_t k = 0; k < cls.active_classes.size(); ++k) {
        double weight = 0.0, mean_by = 0.0;
        for (int site : cls.active_classes[k]) {
            const tmlambda::SiteFrame& frame = tmlambda::site_frames()[site - 1];
            const double p = tmlambda::dipole_projection(frame, polarization);
            weight += p * p;
            mean_by += std::abs(tmlambda::to_local(frame, direction).y);
        }
        mean_by /= static_cast<double>(cls.active_classes[k].size());
        classes.push_back(json{{"sites", cls.active_classes[k]},
                               {"od_fraction", weight / total_weight},
                               {"mean_local_by", mean_by}});
        if (k == 0 || mean_by < best_by) {
            best_by = mean_by;
            optimized = k;
        }
    }

    json out = tmlambda::frames_to_json();
    out["direction"] = {direction.x, direction.y, direction.z};
    out["polarization"] = {polarization.x, polarization.y, polarization.z};
    out["dark_sites"] = cls.dark_sites;
    out["active_classes"] = classes;
    if (!cls.active_classes.empty()) {
        out["optimized_class"] = json{
            {"sites", cls.active_classes[optimized]},
            {"od_fraction", classes[optimized]["od_fraction"]},
        };
    }
    emit(cfg, out.dump(2) + "\n");
    return 0;
}

int cmd_scan(const Settings& cfg)
{
    const tmlambda::GyroTensor gamma_g = parse_tensor(cfg, "gamma_g", tmlambda::Level::Ground);
    const tmlambda::GyroTensor gamma_e = parse_tensor(cfg, "gamma_e", tmlambda::Level::Excited);
    const double theta_min = cfg.number_or("theta_min_deg", -90.0);
    const double theta_max = cfg.number_or("theta_max_deg", 90.0);
    const double step = cfg.number_or("theta_step_deg", 0.25);
    if (step <= 0.0)
        throw ConfigError("theta_step_deg: must be positive");

    const tmlambda::OrientationScan scan = tmlambda::scan_bisector(
        gamma_g, gamma_e, theta_min / kDeg, theta_max / kDeg, step / kDeg);

    std::ostringstream os;
    tmlambda::scan_to_csv(os, scan);
    emit(cfg, os.str());
    return 0;
}

int cmd_optimize(const Settings& cfg)
{
    const tmlambda::GyroTensor gamma_g = parse_tensor(cfg, "gamma_g", tmlambda::Level::Ground);
    const tmlambda::GyroTensor gamma_e = parse_tensor(cfg, "gamma_e", tmlambda::Level::Excited);
    const double phi = cfg.number_or("phi_deg", tmlambda::phi_site35() * kDeg) / kDeg;

    const tmlambda::TiltOptimum opt = tmlambda::general_tilt(gamma_g, gamma_e, phi);
    const tmlambda::DisparityFactors factors =
        tmlambda::disparity_decomposition(gamma_g, gamma_e, phi);
    const auto [theta_star, r_star] = tmlambda::numeric_maximize(gamma_g, gamma_e, phi);

    if (!tmlambda::small_tilt_ok(opt.theta0_local))
        std::cerr << "warning: theta0 = " << opt.theta0_local
                  << " rad exceeds the small-tilt range of the crystal-angle "
                     "conversion\n";

    emit(cfg, tmlambda::tilt_report_to_json(opt, factors, theta_star, r_star).dump(2) + "\n");
    return 0;
}

int cmd_fit(const Settings& cfg)
{
    const std::string path = cfg.str("measurements");
    std::ifstream is(path);
    if (!is)
        throw ConfigError("measurements: cannot open " + path);
    json doc;
    try {
        is >> doc;
    } catch (const json::exception& e) {
        throw ConfigError("measurements: " + std::string(e.what()));
    }

    tmlambda::MeasurementSet set = tmlambda::measurements_from_json(doc);
    tmlambda::FitResult fit = tmlambda::fit_gamma_y(set.m111, set.m001, set.m_bar);
    fit = tmlambda::anisotropy_ratios(fit, set.m_bar);
    const tmlambda::LambdaFigures figures = tmlambda::lambda_figures(fit, set.m_bar);
    const tmlambda::ConsistencyReport consistency =
        tmlambda::consistency_check(fit, set.m001);

    emit(cfg, tmlambda::fit_report_to_json(fit, figures, consistency).dump(2) + "\n");
    return 0;
}

int cmd_spectrum(const Settings& cfg)
{
    double delta_g, delta_e;
    if (cfg.has("delta_g_mhz") || cfg.has("delta_e_mhz")) {
        delta_g = cfg.number("delta_g_mhz");
        delta_e = cfg.number("delta_e_mhz");
    } else {
        const double field = cfg.number("field_tesla");
        if (field <= 0.0)
            throw ConfigError("field_tesla: must be positive");
        delta_g = cfg.number("delta_g_mhz_per_t") * field;
        delta_e = cfg.number("delta_e_mhz_per_t") * field;
    }

    tmlambda::BurnConfig burn;
    burn.omega0_mhz = cfg.number_or("omega0_mhz", 0.0);
    burn.p0 = cfg.number_or("p0_per_s", 1.0);
    burn.gamma_h_mhz = cfg.number_or("gamma_h_mhz", 0.1);
    burn.branching_r = cfg.number_or("branching_r", 0.0);
    burn.decay_r1 = cfg.number_or("decay_r1", 1.0);
    burn.gamma0 = cfg.number_or("gamma0_per_s", 1.0);
    if (cfg.flag_or("sidebands", false)) {
        const double offset = cfg.number_or("sideband_offset_mhz", 0.864);
        const double amplitude = cfg.number_or("sideband_amplitude", 0.25);
        burn.sidebands = {{offset, amplitude}, {-offset, amplitude}};
    }

    const double window = cfg.number_or("window_mhz", 20.0);
    const double resolution = cfg.number_or("resolution_mhz", 0.02);
    const double baseline = cfg.number_or("baseline_od", 0.3);
    const double min_depth = cfg.number_or("min_depth_od", 1e-4);

    tmlambda::TransmissionSpectrum spec;
    try {
        spec = tmlambda::synthesize_spectrum(delta_g, delta_e, burn, window, resolution,
                                             baseline);
    } catch (const std::invalid_argument& e) {
        throw ConfigError(e.what());
    }
    const tmlambda::FeatureList features =
        tmlambda::detect_features(spec, min_depth, burn.omega0_mhz);

    std::ostringstream csv;
    tmlambda::spectrum_to_csv(csv, spec);
    emit(cfg, csv.str());

    const std::string features_path = cfg.str_or("features_out", "features.json");
    tmlambda::write_text_atomic(
        features_path,
        tmlambda::features_to_json(features, burn.omega0_mhz).dump(2) + "\n");
    return 0;
}

// ---------------------------------------------------------------------------

struct CommonFlags {
    std::string config_path;
    std::string out;
    std::string direction, polarization;
    double theta_deg = 0.0, field_tesla = 0.0, phi_deg = 0.0;
    double theta_min = 0.0, theta_max = 0.0, theta_step = 0.0;
    std::string gamma_g, gamma_e, measurements, features_out;
    bool sidebands = false;
    bool error_json = false;
};

void add_common(CLI::App* cmd, CommonFlags& flags)
{
    cmd->add_option("--config", flags.config_path, "key = value config file");
    cmd->add_option("--out", flags.out, "output path ('-' for stdout)");
    cmd->add_flag("--error-json", flags.error_json,
                  "report failures as JSON on stdout");
}

Settings collect(const CLI::App* cmd, const CommonFlags& flags)
{
    Settings cfg;
    if (!flags.config_path.empty())
        cfg.merge_file(flags.config_path);

    const auto flag_given = [&](const char* flag) {
        const CLI::Option* opt = cmd->get_option_no_throw(flag);
        return opt != nullptr && opt->count() > 0;
    };
    const auto override_if = [&](const char* flag, const char* key,
                                 const std::string& value) {
        if (flag_given(flag))
            cfg.set(key, value);
    };
    const auto override_num = [&](const char* flag, const char* key, double value) {
        if (flag_given(flag)) {
            std::ostringstream os;
            os.precision(17);
            os << value;
            cfg.set(key, os.str());
        }
    };

    override_if("--out", "out", flags.out);
    override_if("--direction", "direction", flags.direction);
    override_if("--polarization", "polarization", flags.polarization);
    override_if("--gamma-g", "gamma_g", flags.gamma_g);
    override_if("--gamma-e", "gamma_e", flags.gamma_e);
    override_if("--measurements", "measurements", flags.measurements);
    override_if("--features-out", "features_out", flags.features_out);
    override_num("--theta-deg", "theta_deg", flags.theta_deg);
    override_num("--field-tesla", "field_tesla", flags.field_tesla);
    override_num("--phi-deg", "phi_deg", flags.phi_deg);
    override_num("--theta-min-deg", "theta_min_deg", flags.theta_min);
    override_num("--theta-max-deg", "theta_max_deg", flags.theta_max);
    override_num("--theta-step-deg", "theta_step_deg", flags.theta_step);
    if (flag_given("--sidebands"))
        cfg.set("sidebands", "true");
    return cfg;
}

}  // namespace

int main(int argc, char** argv)
{
    CLI::App app{"Tm:YAG lambda-system toolkit"};
    app.require_subcommand(1);

    CommonFlags flags;

    CLI::App* sites = app.add_subcommand("sites", "site frames and classification");
    add_common(sites, flags);
    sites->add_option("--direction", flags.direction, "field direction ([hkl] or x,y,z)");
    sites->add_option("--theta-deg", flags.theta_deg, "bisector-plane angle from [001]");
    sites->add_option("--polarization", flags.polarization, "light polarization");

    CLI::App* scan = app.add_subcommand("scan", "bisector-plane orientation scan (CSV)");
    add_common(scan, flags);
    scan->add_option("--gamma-g", flags.gamma_g, "ground tensor gx,gy,gz in MHz/T");
    scan->add_option("--gamma-e", flags.gamma_e, "excited tensor gx,gy,gz in MHz/T");
    scan->add_option("--theta-min-deg", flags.theta_min, "scan start (default -90)");
    scan->add_option("--theta-max-deg", flags.theta_max, "scan end (default 90)");
    scan->add_option("--theta-step-deg", flags.theta_step, "scan step (default 0.25)");

    CLI::App* optimize = app.add_subcommand("optimize", "branching-ratio tilt optimum (JSON)");
    add_common(optimize, flags);
    optimize->add_option("--gamma-g", flags.gamma_g, "ground tensor gx,gy,gz in MHz/T");
    optimize->add_option("--gamma-e", flags.gamma_e, "excited tensor gx,gy,gz in MHz/T");
    optimize->add_option("--phi-deg", flags.phi_deg,
                         "local xOz azimuth (default: sites 3/5 bisector value)");

    CLI::App* fit = app.add_subcommand("fit", "gamma_y fit from splitting measurements (JSON)");
    add_common(fit, flags);
    fit->add_option("--measurements", flags.measurements, "measurements JSON path");

    CLI::App* spectrum = app.add_subcommand("spectrum", "hole-burning spectrum (CSV + JSON)");
    add_common(spectrum, flags);
    spectrum->add_option("--field-tesla", flags.field_tesla, "field magnitude");
    spectrum->add_option("--features-out", flags.features_out,
                         "detected-features JSON path (default features.json)");
    spectrum->add_flag("--sidebands", flags.sidebands, "enable the 864 kHz sideband pair");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 1;
    }

    CLI::App* cmd = app.get_subcommands().front();
    const auto fail = [&](const std::string& type, const std::string& message, int code) {
        if (flags.error_json)
            std::cout << json{{"error", {{"type", type}, {"message", message}}}}.dump(2)
                      << "\n";
        std::cerr << "error: " << message << "\n";
        return code;
    };

    try {
        const Settings cfg = collect(cmd, flags);
        if (cmd == sites)
            return cmd_sites(cfg);
        if (cmd == scan)
            return cmd_scan(cfg);
        if (cmd == optimize)
            return cmd_optimize(cfg);
        if (cmd == fit)
            return cmd_fit(cfg);
        if (cmd == spectrum)
            return cmd_spectrum(cfg);
        return fail("internal", "unknown subcommand", 1);
    } catch (const ConfigError& e) {
        return fail("validation", e.what(), 1);
    } catch (const std::invalid_argument& e) {
        return fail("validation", e.what(), 1);
    } catch (const tmlambda::DegenerateFieldError& e) {
        return fail("degenerate_field", e.what(), 2);
    } catch (const tmlambda::AntiparallelFieldsError& e) {
        return fail("antiparallel_fields", e.what(), 2);
    } catch (const tmlambda::NoInteriorMaximumError& e) {
        return fail("no_interior_maximum", e.what(), 2);
    } catch (const tmlambda::InconsistentDataError& e) {
        return fail("inconsistent_data", e.what(), 2);
    } catch (const tmlambda::WindowTooNarrowError& e) {
        return fail("window_too_narrow", e.what(), 2);
    } catch (const std::exception& e) {
        return fail("computation", e.what(), 2);
    }
}
