#pragma once

#include <span>
#include <vector>

namespace cspath {

inline constexpr double kPi = 3.14159265358979323846;
inline constexpr double kTwoPi = 2.0 * kPi;

/// Wraps an angle into [0, 2*pi).
double normalize_angle(double theta);

struct Point {
  double x = 0.0;
  double y = 0.0;
};

double distance(const Point& a, const Point& b);

/// Planar position plus heading. The heading is kept in [0, 2*pi); the
/// constructor normalizes whatever it is given.
struct Pose {
  double x = 0.0;
  double y = 0.0;
  double theta = 0.0;

  Pose() = default;
  Pose(double x, double y, double theta);

  Point position() const { return {x, y}; }
};

/// Signed curvature of a path segment: positive turns left
/// (counterclockwise), negative turns right, zero goes straight.
struct SignedCurvature {
  double value = 0.0;

  static SignedCurvature left(double magnitude);
  static SignedCurvature right(double magnitude);
  static SignedCurvature straight() { return {}; }

  bool is_straight() const { return value == 0.0; }
  double turn_radius() const;
};

/// One piece of a piecewise-constant-curvature path. Arc segments are kept
/// strictly below one full revolution; a minimal path never loops, and the
/// cap removes the 2*pi-periodic solution family.
struct SegmentSpec {
  SignedCurvature curvature;
  double length = 0.0;

  SegmentSpec() = default;
  SegmentSpec(SignedCurvature curvature, double length);
};

/// Static circular obstacle. Its boundary doubles as a turning circle of
/// curvature 1/radius, so radius and curvature are tied exactly.
struct ObstacleSpec {
  double x = 0.0;
  double y = 0.0;
  double radius = 0.0;

  ObstacleSpec() = default;
  ObstacleSpec(double x, double y, double radius);

  Point center() const { return {x, y}; }
  double curvature() const { return 1.0 / radius; }
};

/// Advances a pose along a circular arc of the given signed curvature.
/// The trigonometry runs on the unnormalized accumulated angle; only the
/// returned heading is wrapped.
Pose propagate_arc(const Pose& start, SignedCurvature curvature, double arc_length);

/// Advances a pose along its current heading.
Pose propagate_straight(const Pose& start, double length);

/// Dispatches on the segment's curvature.
Pose propagate_segment(const Pose& start, const SegmentSpec& segment);

/// Entry point of a tour of `obstacle` for an approach heading `theta`:
/// (x_b - R*cos(theta), y_b + R*sin(theta)). The point always lies on the
/// obstacle circle; it is not, in general, the perpendicular tangency point
/// of a line with that heading (the validator measures the gap).
Point obstacle_entry_point(const ObstacleSpec& obstacle, double heading);

/// Samples a segment chain at arc-length spacing <= step. The first pose is
/// `start`; the last is the exact composed endpoint. An empty chain yields
/// just the start pose.
std::vector<Pose> sample_path(const Pose& start, std::span<const SegmentSpec> segments,
                              double step);

}  // namespace cspath
