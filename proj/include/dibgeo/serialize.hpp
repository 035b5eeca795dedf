#pragma once

#include <string>
#include <vector>

#include <json.hpp>

#include "dibgeo/baselines.hpp"
#include "dibgeo/dib.hpp"
#include "dibgeo/model_selection.hpp"

namespace dibgeo {

// Insertion-ordered JSON keeps repeated runs byte-identical.
using Json = nlohmann::ordered_json;

Json record_to_json(const SolutionRecord& record);
Json curve_to_json(const InformationCurve& curve);

// One row per curve entry: H, I, n_c, beta_min, beta_max, theta; the kink
// fields are empty for entries without a defined kink.
std::string curve_to_csv(const InformationCurve& curve);

// Rows "curve id, x1, x2"; the id carries the polyline ordinal as
// "<name>.<k>" so separate contour pieces stay distinguishable.
std::string boundaries_to_csv(
    const std::vector<std::pair<std::string, std::vector<Polyline>>>& curves);

}  // namespace dibgeo
