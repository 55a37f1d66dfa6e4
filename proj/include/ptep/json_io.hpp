#pragma once

// JSON forms of the model types and exceptional-point solutions.
// Floating-point numbers are written with 17 significant digits.

#include <istream>
#include <string>
#include <vector>

#include <json.hpp>

#include "ptep/epfinder.hpp"
#include "ptep/model.hpp"

namespace ptep::json_io {

using Json = nlohmann::ordered_json;

/// indent < 0 gives a single line.
std::string dump(const Json& j, int indent = 2);

Json to_json(const model::GainLossProfile& p);
Json to_json(const model::ArrayGeometry& g);
Json to_json(const model::PhysicalConstants& c);
Json to_json(const epfinder::EpSolution& s);
Json to_json(const std::vector<epfinder::EpSolution>& list);

// The readers throw InvalidInput on missing or mistyped fields.
model::GainLossProfile profile_from_json(const Json& j);
model::ArrayGeometry geometry_from_json(const Json& j);
model::PhysicalConstants constants_from_json(const Json& j);
epfinder::EpSolution solution_from_json(const Json& j);

/// Accepts an array of solutions or a single solution object.
std::vector<epfinder::EpSolution> solutions_from_json(const Json& j);

Json parse(std::istream& in);
Json parse_file(const std::string& path);

}  // namespace ptep::json_io
