#pragma once

#include "sphericity/curve.hpp"
#include "sphericity/warped.hpp"

#include <json.hpp>

namespace sphericity {

using Json = nlohmann::json;

Json space_to_json(const SpaceForm& space);
SpaceForm space_from_json(const Json& j, const std::string& path = "");

// Values are rounded to `digits` significant digits; 17 round-trips exactly.
Json curve_to_json(const ClosedCurve& curve, int digits = 17);
// Stored curvatures are kept as serialised; tangents are re-derived.
ClosedCurve curve_from_json(const Json& j, const std::string& path = "");

Json warp_profile_to_json(const WarpProfile& profile);
WarpProfile warp_profile_from_json(const Json& j, const std::string& path = "");

Json metric_to_json(const WarpedMetric& metric);
// Rebuilds and re-certifies the metric from its profile.
WarpedMetric metric_from_json(const Json& j, const std::string& path = "");

Json radial_to_json(const RadialFunction& rho);
RadialFunction radial_from_json(const Json& j, const std::string& path = "");

Json harmonics_to_json(const std::vector<Harmonic>& hs);
std::vector<Harmonic> harmonics_from_json(const Json& j, const std::string& path = "");

Json warped_curve_to_json(const WarpedMetric& metric, const WarpedCurve& curve, int digits = 17);
// Rebuilt from the radial function in the header.
WarpedCurve warped_curve_from_json(const WarpedMetric& metric, const Json& j, const std::string& path = "");

double round_digits(double v, int digits);

}  // namespace sphericity
