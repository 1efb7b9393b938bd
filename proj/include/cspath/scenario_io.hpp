#pragma once

#include <filesystem>
#include <string>

#include "cspath/model.hpp"

namespace cspath {

/// Parses an angle given in radians ("4.7124") or as a fraction of pi in
/// the paper's notation ("3pi/2", "pi", "-pi/4", "5pi/6").
double parse_angle(const std::string& text);

/// Loads a JSON scenario file. Positions may be planar {x, y} pairs or
/// geographic {lat, lon} pairs (projected on load, mixing allowed); angles
/// may be numbers or pi-fraction strings. Violated invariants surface as
/// errors naming the offending field.
ScenarioConfig load_scenario(const std::filesystem::path& path);

/// Canonical planar dump; load_scenario(save_scenario(c)) == c.
void save_scenario(const ScenarioConfig& config, const std::filesystem::path& path);

}  // namespace cspath
