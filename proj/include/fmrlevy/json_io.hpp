#pragma once

#include <iosfwd>
#include <optional>
#include <string>

#include <json.hpp>

#include "fmrlevy/calibration.hpp"
#include "fmrlevy/group_params.hpp"
#include "fmrlevy/levy_measure.hpp"
#include "fmrlevy/multiscale.hpp"
#include "fmrlevy/pricing.hpp"

namespace fmrlevy {

using Json = nlohmann::ordered_json;

/// Parses JSON text; syntax errors become InputError naming line and column.
Json parse_json(const std::string& text, const std::string& source);

Json to_json(const LevyMeasure& measure);
LevyMeasure measure_from_json(const Json& j);

Json to_json(const ModelParams& theta);
Json to_json(const OuSpec& ou);
Json to_json(const GroupParams& g);
Json to_json(const SlowParams& slow);

/// Contents of a model file. Either the averaged form
///   {"sig2_bar", "zeta_bar", "measure", "v3e", "u3e", "v2e", "u2e"}
/// or the factor form {"ou": {a, b, beta, Lam, rho, eps}, "measure"}, whose
/// θ follows from the closed-form group parameters. An optional "slow" block
/// holds {v1, v0, u1, u0[, dsig2_dz, dzeta_dz]} or the factor products
/// {g, gamma, rho_xz, sigma, dsig2_dz, dzeta_dz, delta}.
struct ModelFile {
  ModelParams theta;
  std::optional<OuSpec> ou;
  std::optional<SlowParams> slow;
};

ModelFile model_from_json(const Json& j);
ModelFile read_model_file(const std::string& path);

/// Surface CSV with header `t_years,log_strike,spot,iv`.
VolSurface read_surface_csv(std::istream& in, const std::string& source);
VolSurface read_surface_file(const std::string& path);
void write_surface_csv(std::ostream& out, const VolSurface& surface);

Json to_json(const CalibrationResult& result, const VolSurface& surface);

}  // namespace fmrlevy

namespace fmrlevy {

/// Shortest round-trip decimal form, used for all CSV output.
std::string format_number(double v);

}  // namespace fmrlevy
