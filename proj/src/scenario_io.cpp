#include "cspath/scenario_io.hpp"

#include <cmath>
#include <fstream>
#include <stdexcept>

#include "cspath/geo.hpp"
#include "json.hpp"

namespace cspath {

namespace {

using nlohmann::json;

[[noreturn]] void fail(const std::string& field, const std::string& why) {
  throw std::invalid_argument("scenario field '" + field + "': " + why);
}

double angle_field(const json& obj, const std::string& field) {
  const json& v = obj.at(field);
  if (v.is_number()) return v.get<double>();
  if (v.is_string()) return parse_angle(v.get<std::string>());
  fail(field, "expected a number (radians) or a pi-fraction string");
}

double number_field(const json& obj, const std::string& field) {
  const json& v = obj.at(field);
  if (!v.is_number()) fail(field, "expected a number");
  return v.get<double>();
}

double degrees_field(const json& obj, const std::string& field) {
  const json& v = obj.at(field);
  if (v.is_number()) return v.get<double>();
  if (v.is_string()) return parse_degrees(v.get<std::string>());
  fail(field, "expected decimal degrees or a DMS string");
}

// A position is either {x, y} or {lat, lon}; geographic ones get projected.
Point position_of(const json& obj, const std::string& who, double reference_radius) {
  const bool planar = obj.contains("x") || obj.contains("y");
  const bool geographic = obj.contains("lat") || obj.contains("lon");
  if (planar && geographic) fail(who, "give either x/y or lat/lon, not both");
  if (planar) {
    return {number_field(obj, "x"), number_field(obj, "y")};
  }
  if (geographic) {
    GeoPoint gp(degrees_field(obj, "lat"), degrees_field(obj, "lon"), reference_radius);
    return project(gp);
  }
  fail(who, "missing position (x/y or lat/lon)");
}

}  // namespace

double parse_angle(const std::string& text) {
  std::string s;
  for (char c : text) {
    if (!std::isspace(static_cast<unsigned char>(c))) s.push_back(c);
  }
  if (s.empty()) throw std::invalid_argument("empty angle");
  double sign = 1.0;
  std::size_t i = 0;
  if (s[0] == '+' || s[0] == '-') {
    sign = s[0] == '-' ? -1.0 : 1.0;
    i = 1;
  }
  const std::size_t pi_pos = s.find("pi", i);
  try {
    if (pi_pos == std::string::npos) {
      std::size_t used = 0;
      const double v = std::stod(s.substr(i), &used);
      if (i + used != s.size()) throw std::invalid_argument("trailing characters in angle");
      return sign * v;
    }
    double numerator = 1.0;
    if (pi_pos > i) {
      const std::string num = s.substr(i, pi_pos - i);
      numerator = std::stod(num);
    }
    double denominator = 1.0;
    const std::size_t after = pi_pos + 2;
    if (after < s.size()) {
      if (s[after] != '/') throw std::invalid_argument("expected '/' after pi");
      denominator = std::stod(s.substr(after + 1));
      if (denominator == 0.0) throw std::invalid_argument("zero denominator");
    }
    return sign * numerator * kPi / denominator;
  } catch (const std::invalid_argument&) {
    throw;
  } catch (const std::exception&) {
    throw std::invalid_argument("cannot parse angle '" + text + "'");
  }
}

ScenarioConfig load_scenario(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open scenario file " + path.string());
  json doc;
  try {
    in >> doc;
  } catch (const std::exception& e) {
    throw std::runtime_error("scenario file " + path.string() + " is not valid JSON: " + e.what());
  }

  double reference_radius = kEarthRadiusKm;
  if (doc.contains("geo")) {
    reference_radius = number_field(doc.at("geo"), "reference_radius");
  }

  if (!doc.contains("pursuer")) fail("pursuer", "missing");
  if (!doc.contains("target")) fail("target", "missing");
  const json& jp = doc.at("pursuer");
  const json& jt = doc.at("target");

  const Point pp = position_of(jp, "pursuer", reference_radius);
  const Point tp = position_of(jt, "target", reference_radius);

  std::vector<ObstacleSpec> obstacles;
  if (doc.contains("obstacles")) {
    for (const json& jo : doc.at("obstacles")) {
      const Point op = position_of(jo, "obstacle", reference_radius);
      const double radius = number_field(jo, "radius");
      if (!(radius > 0.0)) fail("obstacles[].radius", "must be positive");
      obstacles.emplace_back(op.x, op.y, radius);
    }
  }

  const double pursuer_speed = number_field(jp, "speed");
  const double target_speed = number_field(jt, "speed");
  const double turn_radius = number_field(jp, "turn_radius");
  if (!(pursuer_speed > target_speed)) {
    fail("pursuer.speed", "must exceed target.speed for interception");
  }
  if (!(turn_radius > 0.0)) fail("pursuer.turn_radius", "must be positive");

  return ScenarioConfig(Pose{pp.x, pp.y, angle_field(jp, "theta")}, pursuer_speed, turn_radius,
                        Pose{tp.x, tp.y, angle_field(jt, "theta")}, target_speed,
                        std::move(obstacles));
}

void save_scenario(const ScenarioConfig& config, const std::filesystem::path& path) {
  json doc;
  doc["pursuer"] = {{"x", config.pursuer.x},
                    {"y", config.pursuer.y},
                    {"theta", config.pursuer.theta},
                    {"speed", config.pursuer_speed},
                    {"turn_radius", config.min_turn_radius}};
  doc["target"] = {{"x", config.target.x},
                   {"y", config.target.y},
                   {"theta", config.target.theta},
                   {"speed", config.target_speed}};
  doc["obstacles"] = json::array();
  for (const ObstacleSpec& o : config.obstacles) {
    doc["obstacles"].push_back({{"x", o.x}, {"y", o.y}, {"radius", o.radius}});
  }
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write scenario file " + path.string());
  out << doc.dump(2) << "\n";
}

}  // namespace cspath
