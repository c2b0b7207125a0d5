#include "tmlambda/io.hpp"

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <numbers>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>
#include <stdexcept>

namespace tmlambda {

namespace {

json vec_to_json(const Vec3& v) { return json::array({v.x, v.y, v.z}); }

json value_to_json(const ValueWithSigma& v)
{
    return json{{"value", v.value}, {"sigma", v.sigma}};
}

const char* kind_name(FeatureKind kind)
{
    return kind == FeatureKind::Hole ? "hole" : "antihole";
}

std::string csv_num(double v)
{
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.12g", v);
    return buf;
}

SplittingMeasurement measurement_from_json(const json& j, MeasuredDirection dir)
{
    SplittingMeasurement m;
    m.direction = dir;
    m.delta_g = j.at("delta_g").get<double>();
    m.sigma_g = j.value("sigma_g", 0.0);
    if (j.contains("delta_e")) {
        m.delta_e = j.at("delta_e").get<double>();
        m.sigma_e = j.value("sigma_e", 0.0);
    }
    return m;
}

}  // namespace

json frames_to_json()
{
    json sites = json::array();
    for (const SiteFrame& f : site_frames())
        sites.push_back(json{{"site_id", f.site_id},
                             {"x_axis", vec_to_json(f.x_axis)},
                             {"y_axis", vec_to_json(f.y_axis)},
                             {"z_axis", vec_to_json(f.z_axis)}});
    return json{{"sites", sites}};
}

json classification_to_json(const SiteClassification& cls)
{
    json out;
    out["dark_sites"] = cls.dark_sites;
    out["active_classes"] = json::array();
    for (const std::vector<int>& c : cls.active_classes)
        out["active_classes"].push_back(c);
    return out;
}

MeasurementSet measurements_from_json(const json& doc)
{
    const json& list = doc.is_array() ? doc : doc.at("measurements");
    if (!list.is_array())
        throw std::invalid_argument("measurements: expected an array");

    std::optional<SplittingMeasurement> m111, m001, m_bar;
    for (const json& entry : list) {
        const std::string dir = entry.at("direction").get<std::string>();
        if (dir == "[111]")
            m111 = measurement_from_json(entry, MeasuredDirection::C111);
        else if (dir == "[001]")
            m001 = measurement_from_json(entry, MeasuredDirection::C001);
        else if (dir == "[-1-11]")
            m_bar = measurement_from_json(entry, MeasuredDirection::Neg111);
        else
            throw std::invalid_argument("measurements: unknown direction " + dir);
    }
    if (!m111)
        throw std::invalid_argument("measurements: missing direction [111]");
    if (!m001)
        throw std::invalid_argument("measurements: missing direction [001]");
    if (!m_bar)
        throw std::invalid_argument("measurements: missing direction [-1-11]");
    return {*m111, *m001, *m_bar};
}

json fit_report_to_json(const FitResult& fit, const LambdaFigures& figures,
                        const ConsistencyReport& consistency)
{
    json out;
    out["gamma_y"] = {{"ground", value_to_json(fit.gy_g)},
                      {"excited", value_to_json(fit.gy_e)}};
    out["gamma_y_combination"] = {{"ground", value_to_json(fit.gy_g_comb)}};
    if (fit.gy_e_comb)
        out["gamma_y_combination"]["excited"] = value_to_json(*fit.gy_e_comb);

    json ratios;
    if (fit.ratio_comb_g)
        ratios["comb_ground"] = value_to_json(*fit.ratio_comb_g);
    if (fit.ratio_comb_e)
        ratios["comb_excited"] = value_to_json(*fit.ratio_comb_e);
    if (fit.ratio_xy_e)
        ratios["xy_excited"] = value_to_json(*fit.ratio_xy_e);
    if (fit.ratio_xy_g_upper)
        ratios["xy_ground_upper_bound"] = *fit.ratio_xy_g_upper;
    out["anisotropy_ratios"] = ratios;

    out["lambda_figures"] = {{"r_max_bound", value_to_json(figures.r_max_bound)},
                             {"dtheta0_deg", value_to_json(figures.dtheta0_deg)}};

    json checks = json::array();
    for (const ConsistencyEntry& e : consistency)
        checks.push_back(json{{"level", e.level == Level::Ground ? "ground" : "excited"},
                              {"predicted_delta_001", e.predicted},
                              {"sigma_predicted", e.sigma_predicted},
                              {"measured_delta_001", e.measured},
                              {"sigma_measured", e.sigma_measured},
                              {"deviation_sigma", e.deviation_sigma}});
    out["consistency_001"] = checks;
    return out;
}

json tilt_report_to_json(const TiltOptimum& opt, const DisparityFactors& factors,
                         double theta_star, double r_star)
{
    constexpr double deg = 180.0 / std::numbers::pi;
    return json{
        {"phi_rad", opt.phi},
        {"phi_deg", opt.phi * deg},
        {"theta0_local_rad", opt.theta0_local},
        {"theta0_local_deg", opt.theta0_local * deg},
        {"dtheta0_crystal_rad", opt.dtheta0_crystal},
        {"dtheta0_deg", opt.dtheta0_crystal * deg},
        {"small_tilt_ok", small_tilt_ok(opt.theta0_local)},
        {"r_max_bound", opt.r_max_bound},
        {"r_max_exact", opt.r_max_exact},
        {"numeric", {{"theta_star_rad", theta_star}, {"r_star", r_star}}},
        {"disparity",
         {{"a", factors.a},
          {"c", factors.c},
          {"f", factors.f},
          {"identity_residual", factors.identity_residual}}},
    };
}

json features_to_json(const FeatureList& features, double burn_offset_mhz)
{
    json list = json::array();
    for (const Feature& f : features)
        list.push_back(json{{"position_mhz", f.position_mhz},
                            {"kind", kind_name(f.kind)},
                            {"depth_od", f.depth_od}});
    return json{{"burn_offset_mhz", burn_offset_mhz}, {"features", list}};
}

void spectrum_to_csv(std::ostream& os, const TransmissionSpectrum& spectrum)
{
    os << "probe_offset_mhz,optical_depth,transmission\n";
    for (std::size_t i = 0; i < spectrum.probe_mhz.size(); ++i)
        os << csv_num(spectrum.probe_mhz[i]) << ',' << csv_num(spectrum.optical_depth[i])
           << ',' << csv_num(std::exp(-spectrum.optical_depth[i])) << '\n';
}

TransmissionSpectrum spectrum_from_csv(std::istream& is)
{
    TransmissionSpectrum spec;
    std::string line;
    bool first = true;
    while (std::getline(is, line)) {
        if (line.empty())
            continue;
        std::istringstream row(line);
        std::string a, b, c;
        if (!std::getline(row, a, ',') || !std::getline(row, b, ','))
            throw std::invalid_argument("spectrum csv: expected at least two columns");
        const bool has_od_column = static_cast<bool>(std::getline(row, c, ','));
        if (first) {
            first = false;
            // Skip a header row.
            try {
                std::stod(a);
            } catch (const std::exception&) {
                continue;
            }
        }
        const double freq = std::stod(a);
        // Two columns: measured trace (frequency_mhz, transmission).
        // Three columns: our own output (probe, optical_depth, transmission).
        if (has_od_column) {
            const double od = std::stod(b);
            if (od < 0.0)
                throw std::invalid_argument("spectrum csv: optical depth must be >= 0");
            spec.probe_mhz.push_back(freq);
            spec.optical_depth.push_back(od);
        } else {
            const double transmission = std::stod(b);
            if (transmission <= 0.0 || transmission > 1.0)
                throw std::invalid_argument(
                    "spectrum csv: transmission must be in (0, 1]");
            spec.probe_mhz.push_back(freq);
            spec.optical_depth.push_back(-std::log(transmission));
        }
    }
    return spec;
}

void scan_to_csv(std::ostream& os, const OrientationScan& scan)
{
    constexpr double deg = 180.0 / std::numbers::pi;
    os << "theta_deg,delta_g_site1,delta_e_site1,r_site1,"
          "delta_g_site35,delta_e_site35,r_site35\n";
    for (std::size_t i = 0; i < scan.theta_rad.size(); ++i) {
        const auto opt_num = [](const std::optional<double>& v) {
            return v ? csv_num(*v) : std::string();
        };
        os << csv_num(scan.theta_rad[i] * deg) << ',' << csv_num(scan.site1.delta_g[i])
           << ',' << csv_num(scan.site1.delta_e[i]) << ',' << opt_num(scan.site1.branching[i])
           << ',' << csv_num(scan.site35.delta_g[i]) << ',' << csv_num(scan.site35.delta_e[i])
           << ',' << opt_num(scan.site35.branching[i]) << '\n';
    }
}

void write_text_atomic(const std::string& path, const std::string& content)
{
    const std::filesystem::path target(path);
    std::filesystem::path tmp = target;
    tmp += ".tmp";
    {
        std::ofstream os(tmp, std::ios::binary | std::ios::trunc);
        if (!os)
            throw std::runtime_error("cannot open " + tmp.string() + " for writing");
        os << content;
        if (!os.flush())
            throw std::runtime_error("write failed for " + tmp.string());
    }
    std::filesystem::rename(tmp, target);
}

}  // namespace tmlambda
