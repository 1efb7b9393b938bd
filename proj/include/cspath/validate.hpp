#pragma once

#include <vector>

#include "cspath/model.hpp"
#include "cspath/solver.hpp"

namespace cspath {

/// Piecewise-constant curvature command for the pursuer.
struct ControlSchedule {
  struct Piece {
    SignedCurvature curvature;
    double duration = 0.0;
  };
  std::vector<Piece> pieces;

  static ControlSchedule from_solution(const ScenarioConfig& config, const PathSolution& solution);

  double total_duration() const;
  double min_nonzero_duration() const;
};

struct TimedPose {
  double t = 0.0;
  Pose pose;
};

struct Trajectory {
  std::vector<TimedPose> pursuer;
  std::vector<TimedPose> target;
  double dt = 0.0;
};

enum class ReplayMode {
  PaperExact,  // snap to the pinned entry point after each approach straight
  Continuous,  // never snap; junction gaps show up in the diagnostics
};

struct ClearanceViolation {
  std::size_t obstacle_index = 0;
  double penetration = 0.0;  // max depth inside the obstacle disk
};

struct JunctionDiagnostic {
  /// |distance(straight-approach line, obstacle center) - R_b|.
  double tangency_gap = 0.0;
  /// Displacement applied (PaperExact) or skipped (Continuous) at the pin.
  double pin_jump = 0.0;
};

struct ValidationReport {
  double miss_distance = 0.0;
  std::vector<ClearanceViolation> clearance_violations;
  std::vector<JunctionDiagnostic> junctions;
  double length_error = 0.0;
  double time_error = 0.0;
  double max_penetration = 0.0;
};

/// Fixed-step fourth-order (RK4) replay of the pursuer kinematics under the
/// schedule and of the target's straight-line motion. Steps are shortened
/// so piece boundaries are hit exactly. Requires dt > 0 and
/// dt <= (smallest nonzero piece duration) / 10.
Trajectory integrate(const ScenarioConfig& config, const ControlSchedule& schedule, double dt);

/// dt used by the validate overload without an explicit step:
/// (min nonzero segment duration)/1000, floored at 1e-6.
double default_validation_dt(const ScenarioConfig& config, const PathSolution& solution);

/// Replays the solution kinematically and quantifies how well it does what
/// the model claims: interception coincidence, obstacle clearance, junction
/// tangency, and length/time bookkeeping. Clamps dt into its admissible
/// range instead of throwing.
ValidationReport validate(const ScenarioConfig& config, const PathSolution& solution, double dt,
                          ReplayMode mode = ReplayMode::PaperExact);
ValidationReport validate(const ScenarioConfig& config, const PathSolution& solution);

struct TimeBreakdown {
  std::vector<double> per_segment;  // pursuer segments, then the target's
  double total = 0.0;               // pursuer travel time
};

/// Segment durations from lengths and speeds. A static target with a
/// nonzero target length is contradictory and rejected.
TimeBreakdown time_breakdown(const ScenarioConfig& config, const PathSolution& solution);

}  // namespace cspath
