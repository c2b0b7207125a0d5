#ifndef TMLAMBDA_IO_HPP
#define TMLAMBDA_IO_HPP

#include <iosfwd>
#include <optional>
#include <string>

#include <json.hpp>

#include "tmlambda/fit.hpp"
#include "tmlambda/holeburning.hpp"
#include "tmlambda/optimizer.hpp"

namespace tmlambda {

using json = nlohmann::ordered_json;

/// Frame table as a JSON document (site_id, axes as 3-vectors).
json frames_to_json();

json classification_to_json(const SiteClassification& cls);

/// Measurement set along the three calibration directions, parsed from
/// {"measurements": [{"direction": "[111]", "delta_g": ..., ...}, ...]} or a
/// bare array. Throws std::invalid_argument naming any missing direction.
struct MeasurementSet {
    SplittingMeasurement m111;
    SplittingMeasurement m001;
    SplittingMeasurement m_bar;
};

MeasurementSet measurements_from_json(const json& doc);

json fit_report_to_json(const FitResult& fit, const LambdaFigures& figures,
                        const ConsistencyReport& consistency);

json tilt_report_to_json(const TiltOptimum& opt, const DisparityFactors& factors,
                         double theta_star, double r_star);

json features_to_json(const FeatureList& features, double burn_offset_mhz);

void spectrum_to_csv(std::ostream& os, const TransmissionSpectrum& spectrum);

/// Measured two-column CSV (frequency_mhz, transmission) -> spectrum with
/// optical_depth = -ln(transmission). Also reads back the three-column
/// spectrum_to_csv output (the optical-depth column is used directly).
TransmissionSpectrum spectrum_from_csv(std::istream& is);

void scan_to_csv(std::ostream& os, const OrientationScan& scan);

/// Writes content to path via a temporary file and rename.
void write_text_atomic(const std::string& path, const std::string& content);

}  // namespace tmlambda

#endif
