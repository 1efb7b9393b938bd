#include "cspath/validate.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace cspath {

namespace {

struct State {
  double x, y, theta;
};

// One RK4 step of the unicycle x' = V cos(theta), y' = V sin(theta),
// theta' = V * u with constant u over the step.
State rk4_step(const State& s, double speed, double u, double h) {
  auto deriv = [speed, u](const State& q) {
    return State{speed * std::cos(q.theta), speed * std::sin(q.theta), speed * u};
  };
  const State k1 = deriv(s);
  const State k2 = deriv({s.x + 0.5 * h * k1.x, s.y + 0.5 * h * k1.y, s.theta + 0.5 * h * k1.theta});
  const State k3 = deriv({s.x + 0.5 * h * k2.x, s.y + 0.5 * h * k2.y, s.theta + 0.5 * h * k2.theta});
  const State k4 = deriv({s.x + h * k3.x, s.y + h * k3.y, s.theta + h * k3.theta});
  return {s.x + h / 6.0 * (k1.x + 2.0 * k2.x + 2.0 * k3.x + k4.x),
          s.y + h / 6.0 * (k1.y + 2.0 * k2.y + 2.0 * k3.y + k4.y),
          s.theta + h / 6.0 * (k1.theta + 2.0 * k2.theta + 2.0 * k3.theta + k4.theta)};
}

Pose to_pose(const State& s) { return Pose{s.x, s.y, s.theta}; }

}  // namespace

ControlSchedule ControlSchedule::from_solution(const ScenarioConfig& config,
                                               const PathSolution& solution) {
  ControlSchedule sched;
  const std::vector<SegmentSpec> segs = pursuer_segments(config, solution.lengths);
  sched.pieces.reserve(segs.size());
  for (const SegmentSpec& seg : segs) {
    sched.pieces.push_back({seg.curvature, seg.length / config.pursuer_speed});
  }
  return sched;
}

double ControlSchedule::total_duration() const {
  double t = 0.0;
  for (const Piece& p : pieces) t += p.duration;
  return t;
}

double ControlSchedule::min_nonzero_duration() const {
  double m = std::numeric_limits<double>::infinity();
  for (const Piece& p : pieces) {
    if (p.duration > 0.0) m = std::min(m, p.duration);
  }
  return m;
}

Trajectory integrate(const ScenarioConfig& config, const ControlSchedule& schedule, double dt) {
  if (!(dt > 0.0) || !std::isfinite(dt)) throw std::invalid_argument("dt must be positive");
  const double min_piece = schedule.min_nonzero_duration();
  if (std::isfinite(min_piece) && dt > min_piece / 10.0) {
    throw std::invalid_argument("dt exceeds a tenth of the smallest nonzero segment duration");
  }
  Trajectory traj;
  traj.dt = dt;
  State p{config.pursuer.x, config.pursuer.y, config.pursuer.theta};
  double t = 0.0;
  traj.pursuer.push_back({t, to_pose(p)});
  for (const ControlSchedule::Piece& piece : schedule.pieces) {
    double remaining = piece.duration;
    while (remaining > 0.0) {
      const double h = std::min(dt, remaining);
      p = rk4_step(p, config.pursuer_speed, piece.curvature.value, h);
      remaining -= h;
      t += h;
      traj.pursuer.push_back({t, to_pose(p)});
    }
  }
  // The target's motion integrates exactly; RK4 reproduces the line, but we
  // still march it so both trajectories share timestamps.
  State q{config.target.x, config.target.y, config.target.theta};
  traj.target.push_back({0.0, to_pose(q)});
  for (std::size_t i = 1; i < traj.pursuer.size(); ++i) {
    const double h = traj.pursuer[i].t - traj.pursuer[i - 1].t;
    q = rk4_step(q, config.target_speed, 0.0, h);
    traj.target.push_back({traj.pursuer[i].t, to_pose(q)});
  }
  return traj;
}

double default_validation_dt(const ScenarioConfig& config, const PathSolution& solution) {
  const ControlSchedule sched = ControlSchedule::from_solution(config, solution);
  const double min_piece = sched.min_nonzero_duration();
  if (!std::isfinite(min_piece)) return 1e-6;
  return std::max(min_piece / 1000.0, 1e-6);
}

ValidationReport validate(const ScenarioConfig& config, const PathSolution& solution, double dt,
                          ReplayMode mode) {
  const std::size_t n = config.obstacle_count();
  const ControlSchedule sched = ControlSchedule::from_solution(config, solution);
  const double min_piece = sched.min_nonzero_duration();
  if (std::isfinite(min_piece)) {
    dt = std::clamp(dt, 1e-12, min_piece / 10.0);
  }

  ValidationReport report;
  report.junctions.resize(n);

  State p{config.pursuer.x, config.pursuer.y, config.pursuer.theta};
  double t = 0.0;
  double traveled = 0.0;
  std::vector<double> min_obstacle_distance(n, std::numeric_limits<double>::infinity());
  auto observe = [&](const State& s) {
    for (std::size_t j = 0; j < n; ++j) {
      const double d = std::hypot(s.x - config.obstacles[j].x, s.y - config.obstacles[j].y);
      min_obstacle_distance[j] = std::min(min_obstacle_distance[j], d);
    }
  };
  observe(p);

  for (std::size_t i = 0; i < sched.pieces.size(); ++i) {
    const ControlSchedule::Piece& piece = sched.pieces[i];
    const bool is_straight = piece.curvature.is_straight();
    const std::size_t block = i / 3;
    if (is_straight && block < n && piece.duration > 0.0) {
      // tangency of the approach line against the obstacle it leads to
      const double dx = std::cos(p.theta), dy = std::sin(p.theta);
      const ObstacleSpec& obs = config.obstacles[block];
      const double line_dist = std::abs(dy * (obs.x - p.x) - dx * (obs.y - p.y));
      report.junctions[block].tangency_gap = std::abs(line_dist - obs.radius);
    }
    double remaining = piece.duration;
    while (remaining > 0.0) {
      const double h = std::min(dt, remaining);
      const State next = rk4_step(p, config.pursuer_speed, piece.curvature.value, h);
      traveled += std::hypot(next.x - p.x, next.y - p.y);
      p = next;
      remaining -= h;
      t += h;
      observe(p);
    }
    if (i % 3 == 2 && block < n) {
      // end of a CS block: the model pins the position to the entry point
      const Point entry = obstacle_entry_point(config.obstacles[block], normalize_angle(p.theta));
      const double jump = std::hypot(p.x - entry.x, p.y - entry.y);
      report.junctions[block].pin_jump = jump;
      if (mode == ReplayMode::PaperExact) {
        p.x = entry.x;
        p.y = entry.y;
        observe(p);
      }
    }
  }

  const Point target_end = target_position(config, solution.lengths.target_length());
  report.miss_distance = std::hypot(p.x - target_end.x, p.y - target_end.y);
  for (std::size_t j = 0; j < n; ++j) {
    const double depth = config.obstacles[j].radius - min_obstacle_distance[j];
    if (depth > 1e-6 * config.obstacles[j].radius) {
      report.clearance_violations.push_back({j, depth});
    }
    report.max_penetration = std::max(report.max_penetration, std::max(0.0, depth));
  }
  double pursuer_length = 0.0;
  for (std::size_t i = 0; i + 1 < solution.lengths.size(); ++i) pursuer_length += solution.lengths[i];
  report.length_error = std::abs(traveled - pursuer_length);
  report.time_error = std::abs(t - solution.total_time);
  return report;
}

ValidationReport validate(const ScenarioConfig& config, const PathSolution& solution) {
  return validate(config, solution, default_validation_dt(config, solution));
}

TimeBreakdown time_breakdown(const ScenarioConfig& config, const PathSolution& solution) {
  const LengthVector& lengths = solution.lengths;
  TimeBreakdown out;
  out.per_segment.resize(lengths.size());
  for (std::size_t i = 0; i + 1 < lengths.size(); ++i) {
    out.per_segment[i] = lengths[i] / config.pursuer_speed;
    out.total += out.per_segment[i];
  }
  if (config.target_speed == 0.0) {
    if (lengths.target_length() > 0.0) {
      throw std::invalid_argument("static target cannot travel a nonzero length");
    }
    out.per_segment.back() = 0.0;
  } else {
    out.per_segment.back() = lengths.target_length() / config.target_speed;
  }
  return out;
}

}  // namespace cspath
