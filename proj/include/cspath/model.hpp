#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "cspath/geometry.hpp"

namespace cspath {

enum class Turn { Left, Right };

/// One left/right choice per turning circle: entry 0 is the pursuer's own
/// circle, entries 1..n the obstacle circles in touring order. Ordering is
/// lexicographic with Left < Right.
struct TurnPattern {
  std::vector<Turn> signs;

  std::size_t size() const { return signs.size(); }
  /// Compact form, e.g. "LR".
  std::string letters() const;
  /// Path notation, e.g. "LS+RS+S_T".
  std::string path_string() const;
  /// Mirror image (every turn flipped).
  TurnPattern flipped() const;

  bool operator==(const TurnPattern&) const = default;
  bool operator<(const TurnPattern& other) const;
};

/// Full problem instance. The obstacle order is the touring order and is
/// never permuted.
struct ScenarioConfig {
  Pose pursuer;
  double pursuer_speed = 0.0;
  double min_turn_radius = 0.0;
  Pose target;
  double target_speed = 0.0;
  std::vector<ObstacleSpec> obstacles;

  ScenarioConfig(Pose pursuer, double pursuer_speed, double min_turn_radius, Pose target,
                 double target_speed, std::vector<ObstacleSpec> obstacles);

  std::size_t obstacle_count() const { return obstacles.size(); }
  double pursuer_curvature() const { return 1.0 / min_turn_radius; }

  /// Curvature magnitude of turning circle k: k = 0 is the pursuer's own
  /// circle, k = 1..n the obstacle circles.
  double circle_curvature(std::size_t k) const;
  double circle_radius(std::size_t k) const;

  /// Characteristic coordinate magnitude; tolerances on residuals scale
  /// with it so the same settings work at desk scale and at map scale.
  double length_scale() const;
};

/// Segment lengths l_1..l_{3n+4}. Layout: for each turning circle k
/// (0-based), slot 3k is the left-arc length, 3k+1 the right-arc length,
/// 3k+2 the straight leaving the circle; the final slot is the target's
/// straight-line length.
struct LengthVector {
  std::vector<double> values;

  LengthVector() = default;
  explicit LengthVector(std::vector<double> v) : values(std::move(v)) {}
  static LengthVector zeros(std::size_t obstacle_count);
  static std::size_t dimension_for(std::size_t obstacle_count) { return 3 * obstacle_count + 4; }

  std::size_t size() const { return values.size(); }
  double& operator[](std::size_t i) { return values[i]; }
  double operator[](std::size_t i) const { return values[i]; }
  double target_length() const { return values.back(); }

  bool all_nonnegative(double tol = 0.0) const;
};

/// Heading-rate coefficients alpha_1..alpha_{3n+3}: the repeating
/// (+a_k, -a_k, 0) pattern over turning circles, a_1 the pursuer curvature
/// and a_{k>=2} the obstacle curvatures.
struct AlphaCoefficients {
  std::vector<double> values;

  static AlphaCoefficients for_scenario(const ScenarioConfig& config);
};

/// Pursuer headings theta(t_0)..theta(t_{3n+3}) accumulated along the
/// segment chain. `cumulative` is unnormalized so derivatives stay smooth;
/// `normalized()` wraps each entry into [0, 2*pi).
struct JunctionHeadings {
  std::vector<double> cumulative;

  std::vector<double> normalized() const;
};

JunctionHeadings junction_headings(const ScenarioConfig& config, const LengthVector& lengths);

/// Total path length f = sum of all entries.
double objective(const LengthVector& lengths);

/// Equality-constraint residuals, dimension 2n+3. Entries 2j, 2j+1
/// (0-based) are the x/y junction residuals for obstacle j; then the
/// intercept x/y pair; the last entry is the timing residual
/// |V_T|*sum(pursuer lengths) - |V_P|*target length.
std::vector<double> residuals(const ScenarioConfig& config, const LengthVector& lengths);

/// Analytic Jacobian d residual_i / d length_m, dense (2n+3) x (3n+4).
std::vector<std::vector<double>> residual_jacobian(const ScenarioConfig& config,
                                                   const LengthVector& lengths);

/// Expands pattern-reduced unknowns (one arc per circle, the straights and
/// the target length) into the full layout, zeroing each circle's inactive
/// arc slot.
LengthVector apply_pattern(const TurnPattern& pattern, std::span<const double> arcs,
                           std::span<const double> straights, double target_length);

/// Straight-line target displacement after traveling `target_length`.
Point target_position(const ScenarioConfig& config, double target_length);

/// Max-norm of a residual vector with per-row weights: position rows are
/// weighted by the scenario length scale, the timing row additionally by
/// the larger speed. Makes residual_tol settings dimensionless.
double scaled_residual_norm(const ScenarioConfig& config, std::span<const double> residual_values);

bool is_model_feasible(const ScenarioConfig& config, const LengthVector& lengths,
                       double tol = 1e-8);

/// Paper-exact reconstruction of the pursuer chain by composed propagation,
/// jumping to the pinned entry point after each obstacle-approach straight.
/// `pin_jumps` records the displacement each jump introduces (zero at a
/// feasible solution).
struct ChainTrace {
  std::vector<Pose> segment_starts;  // one per pursuer segment, 3n+3 entries
  Pose end;
  std::vector<double> pin_jumps;  // n entries
};

ChainTrace reconstruct_chain(const ScenarioConfig& config, const LengthVector& lengths);

/// Segment chain of the pursuer path (3n+3 specs, zero-length entries
/// included) for sampling and plotting.
std::vector<SegmentSpec> pursuer_segments(const ScenarioConfig& config,
                                          const LengthVector& lengths);

}  // namespace cspath
