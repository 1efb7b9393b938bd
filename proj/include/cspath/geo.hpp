#pragma once

#include <string>

#include "cspath/geometry.hpp"

namespace cspath {

inline constexpr double kEarthRadiusKm = 6371.0;

/// Geographic coordinate in signed decimal degrees.
struct GeoPoint {
  double latitude = 0.0;
  double longitude = 0.0;
  double reference_radius = kEarthRadiusKm;

  GeoPoint() = default;
  GeoPoint(double latitude, double longitude, double reference_radius = kEarthRadiusKm);
};

/// Per-point equirectangular projection to planar kilometers:
/// x = R * cos(lat) * lon_rad, y = R * lat_rad.
Point project(const GeoPoint& p);

/// Parses degrees given either as a signed decimal number ("22.7377") or as
/// a degree-minute-second string as printed on maps (22°44'15.66"N). The
/// hemisphere letter, when present, fixes the sign.
double parse_degrees(const std::string& text);

}  // namespace cspath
