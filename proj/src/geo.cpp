#include "cspath/geo.hpp"

#include <cctype>
#include <cmath>
#include <stdexcept>

namespace cspath {

namespace {

double deg2rad(double deg) { return deg * kPi / 180.0; }

}  // namespace

GeoPoint::GeoPoint(double latitude_, double longitude_, double reference_radius_)
    : latitude(latitude_), longitude(longitude_), reference_radius(reference_radius_) {
  if (!std::isfinite(latitude) || std::abs(latitude) > 90.0) {
    throw std::invalid_argument("latitude out of range [-90, 90]");
  }
  if (!std::isfinite(longitude) || std::abs(longitude) > 180.0) {
    throw std::invalid_argument("longitude out of range [-180, 180]");
  }
  if (!(reference_radius > 0.0)) {
    throw std::invalid_argument("reference radius must be positive");
  }
}

Point project(const GeoPoint& p) {
  return {p.reference_radius * std::cos(deg2rad(p.latitude)) * deg2rad(p.longitude),
          p.reference_radius * deg2rad(p.latitude)};
}

double parse_degrees(const std::string& text) {
  // Accepted forms: "22.7377", "-89.05", 22°44'15.66"N (degree sign may be
  // the UTF-8 character or a plain 'd'), with N/S/E/W optionally trailing.
  std::string s;
  s.reserve(text.size());
  for (char c : text) {
    if (!std::isspace(static_cast<unsigned char>(c))) s.push_back(c);
  }
  if (s.empty()) throw std::invalid_argument("empty coordinate");

  double sign = 1.0;
  const char hemi = static_cast<char>(std::toupper(static_cast<unsigned char>(s.back())));
  bool has_hemi = false;
  if (hemi == 'N' || hemi == 'E') {
    has_hemi = true;
    s.pop_back();
  } else if (hemi == 'S' || hemi == 'W') {
    has_hemi = true;
    sign = -1.0;
    s.pop_back();
  }

  // split on the degree/minute/second markers if any are present
  const std::string degree_utf8 = "\xc2\xb0";
  std::size_t deg_pos = s.find(degree_utf8);
  std::size_t deg_len = degree_utf8.size();
  if (deg_pos == std::string::npos) {
    deg_pos = s.find('d');
    deg_len = 1;
  }
  try {
    if (deg_pos == std::string::npos) {
      std::size_t used = 0;
      const double v = std::stod(s, &used);
      if (used != s.size()) throw std::invalid_argument("trailing characters");
      if (has_hemi && v < 0.0) throw std::invalid_argument("sign conflicts with hemisphere");
      return sign * v;
    }
    const double deg = std::stod(s.substr(0, deg_pos));
    if (deg < 0.0) throw std::invalid_argument("DMS degrees must be nonnegative");
    double minutes = 0.0, seconds = 0.0;
    std::string rest = s.substr(deg_pos + deg_len);
    if (!rest.empty()) {
      const std::size_t min_pos = rest.find('\'');
      if (min_pos == std::string::npos) throw std::invalid_argument("missing minute mark");
      minutes = std::stod(rest.substr(0, min_pos));
      std::string sec_part = rest.substr(min_pos + 1);
      if (!sec_part.empty()) {
        std::size_t sec_mark = sec_part.find('"');
        if (sec_mark == std::string::npos) sec_mark = sec_part.find("''");
        if (sec_mark == std::string::npos) throw std::invalid_argument("missing second mark");
        seconds = std::stod(sec_part.substr(0, sec_mark));
      }
    }
    if (minutes < 0.0 || minutes >= 60.0 || seconds < 0.0 || seconds >= 60.0) {
      throw std::invalid_argument("minutes/seconds out of range");
    }
    return sign * (deg + minutes / 60.0 + seconds / 3600.0);
  } catch (const std::invalid_argument&) {
    throw;
  } catch (const std::exception&) {
    throw std::invalid_argument("cannot parse coordinate '" + text + "'");
  }
}

}  // namespace cspath
