#include "cspath/geometry.hpp"

#include <cmath>
#include <stdexcept>

namespace cspath {

namespace {

void require_finite(double v, const char* what) {
  if (!std::isfinite(v)) {
    throw std::invalid_argument(std::string("non-finite ") + what);
  }
}

}  // namespace

double normalize_angle(double theta) {
  double wrapped = std::fmod(theta, kTwoPi);
  if (wrapped < 0.0) wrapped += kTwoPi;
  // fmod can return exactly kTwoPi after the correction when theta is a
  // tiny negative number.
  if (wrapped >= kTwoPi) wrapped -= kTwoPi;
  return wrapped;
}

double distance(const Point& a, const Point& b) {
  return std::hypot(a.x - b.x, a.y - b.y);
}

Pose::Pose(double x_, double y_, double theta_) : x(x_), y(y_), theta(normalize_angle(theta_)) {
  require_finite(x, "pose x");
  require_finite(y, "pose y");
  require_finite(theta_, "pose heading");
}

SignedCurvature SignedCurvature::left(double magnitude) {
  if (!(magnitude > 0.0)) throw std::invalid_argument("curvature magnitude must be positive");
  return {magnitude};
}

SignedCurvature SignedCurvature::right(double magnitude) {
  if (!(magnitude > 0.0)) throw std::invalid_argument("curvature magnitude must be positive");
  return {-magnitude};
}

double SignedCurvature::turn_radius() const {
  if (is_straight()) throw std::invalid_argument("straight segment has no turn radius");
  return 1.0 / std::abs(value);
}

SegmentSpec::SegmentSpec(SignedCurvature curvature_, double length_)
    : curvature(curvature_), length(length_) {
  require_finite(length, "segment length");
  if (length < 0.0) throw std::invalid_argument("segment length must be nonnegative");
  if (!curvature.is_straight() && length * std::abs(curvature.value) >= kTwoPi) {
    throw std::invalid_argument("arc segment sweeps a full revolution or more");
  }
}

ObstacleSpec::ObstacleSpec(double x_, double y_, double radius_) : x(x_), y(y_), radius(radius_) {
  require_finite(x, "obstacle x");
  require_finite(y, "obstacle y");
  require_finite(radius, "obstacle radius");
  if (!(radius > 0.0)) throw std::invalid_argument("obstacle radius must be positive");
}

Pose propagate_arc(const Pose& start, SignedCurvature curvature, double arc_length) {
  require_finite(arc_length, "arc length");
  if (curvature.is_straight() || !std::isfinite(curvature.value)) {
    throw std::invalid_argument("propagate_arc needs a nonzero finite curvature");
  }
  if (arc_length < 0.0) throw std::invalid_argument("arc length must be nonnegative");
  if (arc_length == 0.0) return start;
  const double u = curvature.value;
  const double theta_end = start.theta + u * arc_length;  // unnormalized on purpose
  const double x = start.x + (std::sin(theta_end) - std::sin(start.theta)) / u;
  const double y = start.y - (std::cos(theta_end) - std::cos(start.theta)) / u;
  return Pose{x, y, theta_end};
}

Pose propagate_straight(const Pose& start, double length) {
  require_finite(length, "straight length");
  if (length < 0.0) throw std::invalid_argument("straight length must be nonnegative");
  if (length == 0.0) return start;
  return Pose{start.x + length * std::cos(start.theta), start.y + length * std::sin(start.theta),
              start.theta};
}

Pose propagate_segment(const Pose& start, const SegmentSpec& segment) {
  return segment.curvature.is_straight() ? propagate_straight(start, segment.length)
                                         : propagate_arc(start, segment.curvature, segment.length);
}

Point obstacle_entry_point(const ObstacleSpec& obstacle, double heading) {
  require_finite(heading, "entry heading");
  return {obstacle.x - obstacle.radius * std::cos(heading),
          obstacle.y + obstacle.radius * std::sin(heading)};
}

std::vector<Pose> sample_path(const Pose& start, std::span<const SegmentSpec> segments,
                              double step) {
  if (!(step > 0.0) || !std::isfinite(step)) {
    throw std::invalid_argument("sample step must be positive");
  }
  std::vector<Pose> poses;
  poses.push_back(start);
  Pose cursor = start;
  for (const SegmentSpec& seg : segments) {
    if (seg.length == 0.0) continue;
    const auto whole_steps = static_cast<long>(seg.length / step);
    for (long i = 1; i <= whole_steps; ++i) {
      const double s = static_cast<double>(i) * step;
      if (s >= seg.length) break;
      SegmentSpec part{seg.curvature, s};
      poses.push_back(propagate_segment(cursor, part));
    }
    cursor = propagate_segment(cursor, seg);
    poses.push_back(cursor);
  }
  return poses;
}

}  // namespace cspath
