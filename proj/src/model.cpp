#include "cspath/model.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace cspath {

namespace {

void check_dimension(const ScenarioConfig& config, const LengthVector& lengths) {
  const std::size_t want = LengthVector::dimension_for(config.obstacle_count());
  if (lengths.size() != want) {
    throw std::invalid_argument("length vector has dimension " + std::to_string(lengths.size()) +
                                ", scenario needs " + std::to_string(want));
  }
}

}  // namespace

std::string TurnPattern::letters() const {
  std::string out;
  out.reserve(signs.size());
  for (Turn t : signs) out.push_back(t == Turn::Left ? 'L' : 'R');
  return out;
}

std::string TurnPattern::path_string() const {
  std::string out;
  for (Turn t : signs) {
    out += (t == Turn::Left ? "LS+" : "RS+");
  }
  out += "S_T";
  return out;
}

TurnPattern TurnPattern::flipped() const {
  TurnPattern out = *this;
  for (Turn& t : out.signs) t = (t == Turn::Left ? Turn::Right : Turn::Left);
  return out;
}

bool TurnPattern::operator<(const TurnPattern& other) const {
  return signs < other.signs;  // Left enumerates before Right
}

ScenarioConfig::ScenarioConfig(Pose pursuer_, double pursuer_speed_, double min_turn_radius_,
                               Pose target_, double target_speed_,
                               std::vector<ObstacleSpec> obstacles_)
    : pursuer(pursuer_),
      pursuer_speed(pursuer_speed_),
      min_turn_radius(min_turn_radius_),
      target(target_),
      target_speed(target_speed_),
      obstacles(std::move(obstacles_)) {
  if (!(pursuer_speed > 0.0) || !std::isfinite(pursuer_speed)) {
    throw std::invalid_argument("pursuer speed must be positive");
  }
  if (!(target_speed >= 0.0) || !std::isfinite(target_speed)) {
    throw std::invalid_argument("target speed must be nonnegative");
  }
  if (!(pursuer_speed > target_speed)) {
    throw std::invalid_argument("pursuer speed must exceed target speed");
  }
  if (!(min_turn_radius > 0.0) || !std::isfinite(min_turn_radius)) {
    throw std::invalid_argument("minimum turn radius must be positive");
  }
  for (const ObstacleSpec& o : obstacles) {
    if (!(o.radius > 0.0)) throw std::invalid_argument("obstacle radius must be positive");
  }
}

double ScenarioConfig::circle_curvature(std::size_t k) const {
  return k == 0 ? pursuer_curvature() : obstacles.at(k - 1).curvature();
}

double ScenarioConfig::circle_radius(std::size_t k) const {
  return k == 0 ? min_turn_radius : obstacles.at(k - 1).radius;
}

double ScenarioConfig::length_scale() const {
  double s = 1.0;
  auto grow = [&s](double v) { s = std::max(s, std::abs(v)); };
  grow(pursuer.x);
  grow(pursuer.y);
  grow(target.x);
  grow(target.y);
  grow(min_turn_radius);
  for (const ObstacleSpec& o : obstacles) {
    grow(o.x);
    grow(o.y);
    grow(o.radius);
  }
  return s;
}

LengthVector LengthVector::zeros(std::size_t obstacle_count) {
  return LengthVector(std::vector<double>(dimension_for(obstacle_count), 0.0));
}

bool LengthVector::all_nonnegative(double tol) const {
  return std::all_of(values.begin(), values.end(), [tol](double v) { return v >= -tol; });
}

AlphaCoefficients AlphaCoefficients::for_scenario(const ScenarioConfig& config) {
  const std::size_t n = config.obstacle_count();
  AlphaCoefficients out;
  out.values.resize(3 * n + 3);
  for (std::size_t k = 0; k <= n; ++k) {
    const double a = config.circle_curvature(k);
    out.values[3 * k] = a;
    out.values[3 * k + 1] = -a;
    out.values[3 * k + 2] = 0.0;
  }
  return out;
}

JunctionHeadings junction_headings(const ScenarioConfig& config, const LengthVector& lengths) {
  check_dimension(config, lengths);
  const AlphaCoefficients alpha = AlphaCoefficients::for_scenario(config);
  JunctionHeadings out;
  out.cumulative.resize(alpha.values.size() + 1);
  out.cumulative[0] = config.pursuer.theta;
  for (std::size_t i = 0; i < alpha.values.size(); ++i) {
    out.cumulative[i + 1] = out.cumulative[i] + alpha.values[i] * lengths[i];
  }
  return out;
}

std::vector<double> JunctionHeadings::normalized() const {
  std::vector<double> out(cumulative.size());
  std::transform(cumulative.begin(), cumulative.end(), out.begin(), normalize_angle);
  return out;
}

double objective(const LengthVector& lengths) {
  double sum = 0.0;
  for (double v : lengths.values) sum += v;
  return sum;
}

// Residual layout, 0-based circle index k = 0..n:
//   chain_k = start-of-circle-k position + both-arc displacement + straight
// For k < n the chain must land on the pinned entry point of obstacle k
// (heading taken after the circle's arcs); for k = n it must land on the
// moving target. The chain start for circle k+1 is the pinned entry of
// obstacle k, not the chain end, which is what makes the pinning a model
// statement rather than a tautology.
std::vector<double> residuals(const ScenarioConfig& config, const LengthVector& lengths) {
  check_dimension(config, lengths);
  const std::size_t n = config.obstacle_count();
  const JunctionHeadings h = junction_headings(config, lengths);
  const auto& th = h.cumulative;

  std::vector<double> r(2 * n + 3);
  double sx = config.pursuer.x;
  double sy = config.pursuer.y;
  double pursuer_total = 0.0;
  for (std::size_t k = 0; k <= n; ++k) {
    const double a = config.circle_curvature(k);
    const double wx =
        (-std::sin(th[3 * k]) + 2.0 * std::sin(th[3 * k + 1]) - std::sin(th[3 * k + 2])) / a;
    const double wy =
        (std::cos(th[3 * k]) - 2.0 * std::cos(th[3 * k + 1]) + std::cos(th[3 * k + 2])) / a;
    const double straight = lengths[3 * k + 2];
    const double hx = sx + wx + straight * std::cos(th[3 * k + 3]);
    const double hy = sy + wy + straight * std::sin(th[3 * k + 3]);
    pursuer_total += lengths[3 * k] + lengths[3 * k + 1] + straight;
    if (k < n) {
      const Point entry = obstacle_entry_point(config.obstacles[k], th[3 * k + 3]);
      r[2 * k] = hx - entry.x;
      r[2 * k + 1] = hy - entry.y;
      sx = entry.x;
      sy = entry.y;
    } else {
      // written out rather than via target_position(): residuals get
      // evaluated at raw solver iterates, where lengths may dip negative
      const double lt = lengths.target_length();
      r[2 * k] = hx - (config.target.x + lt * std::cos(config.target.theta));
      r[2 * k + 1] = hy - (config.target.y + lt * std::sin(config.target.theta));
    }
  }
  r[2 * n + 2] = config.target_speed * pursuer_total - config.pursuer_speed * lengths.target_length();
  return r;
}

std::vector<std::vector<double>> residual_jacobian(const ScenarioConfig& config,
                                                   const LengthVector& lengths) {
  check_dimension(config, lengths);
  const std::size_t n = config.obstacle_count();
  const std::size_t rows = 2 * n + 3;
  const std::size_t cols = lengths.size();
  const AlphaCoefficients alpha = AlphaCoefficients::for_scenario(config);
  const JunctionHeadings h = junction_headings(config, lengths);
  const auto& th = h.cumulative;

  // d theta[j] / d length[m] = alpha[m] when m < j.
  auto dth = [&alpha](std::size_t j, std::size_t m) {
    return (m < j && m < alpha.values.size()) ? alpha.values[m] : 0.0;
  };

  std::vector<std::vector<double>> J(rows, std::vector<double>(cols, 0.0));
  // Derivative of the running chain-start position; the pursuer start is
  // constant, pinned entries depend on the headings.
  std::vector<double> dsx(cols, 0.0), dsy(cols, 0.0);

  for (std::size_t k = 0; k <= n; ++k) {
    const double a = config.circle_curvature(k);
    const double straight = lengths[3 * k + 2];
    const std::size_t j0 = 3 * k, j1 = 3 * k + 1, j2 = 3 * k + 2, j3 = 3 * k + 3;
    for (std::size_t m = 0; m < cols; ++m) {
      double dwx = (-std::cos(th[j0]) * dth(j0, m) + 2.0 * std::cos(th[j1]) * dth(j1, m) -
                    std::cos(th[j2]) * dth(j2, m)) /
                   a;
      double dwy = (-std::sin(th[j0]) * dth(j0, m) + 2.0 * std::sin(th[j1]) * dth(j1, m) -
                    std::sin(th[j2]) * dth(j2, m)) /
                   a;
      double dhx = dsx[m] + dwx - straight * std::sin(th[j3]) * dth(j3, m);
      double dhy = dsy[m] + dwy + straight * std::cos(th[j3]) * dth(j3, m);
      if (m == j2) {
        dhx += std::cos(th[j3]);
        dhy += std::sin(th[j3]);
      }
      if (k < n) {
        const double R = config.obstacles[k].radius;
        const double dex = R * std::sin(th[j3]) * dth(j3, m);
        const double dey = R * std::cos(th[j3]) * dth(j3, m);
        J[2 * k][m] = dhx - dex;
        J[2 * k + 1][m] = dhy - dey;
        dsx[m] = dex;
        dsy[m] = dey;
      } else {
        J[2 * k][m] = dhx - (m == cols - 1 ? std::cos(config.target.theta) : 0.0);
        J[2 * k + 1][m] = dhy - (m == cols - 1 ? std::sin(config.target.theta) : 0.0);
      }
    }
  }
  for (std::size_t m = 0; m + 1 < cols; ++m) J[rows - 1][m] = config.target_speed;
  J[rows - 1][cols - 1] = -config.pursuer_speed;
  return J;
}

LengthVector apply_pattern(const TurnPattern& pattern, std::span<const double> arcs,
                           std::span<const double> straights, double target_length) {
  const std::size_t circles = pattern.size();
  if (circles == 0) throw std::invalid_argument("pattern must cover at least one turning circle");
  if (arcs.size() != circles || straights.size() != circles) {
    throw std::invalid_argument("apply_pattern needs one arc and one straight per circle");
  }
  if (target_length < 0.0) throw std::invalid_argument("negative target length");
  LengthVector out = LengthVector::zeros(circles - 1);
  for (std::size_t k = 0; k < circles; ++k) {
    if (arcs[k] < 0.0 || straights[k] < 0.0) {
      throw std::invalid_argument("negative length in pattern-reduced vector");
    }
    out[3 * k + (pattern.signs[k] == Turn::Left ? 0 : 1)] = arcs[k];
    out[3 * k + 2] = straights[k];
  }
  out[3 * circles] = target_length;
  return out;
}

Point target_position(const ScenarioConfig& config, double target_length) {
  if (target_length < 0.0) throw std::invalid_argument("negative target length");
  return {config.target.x + target_length * std::cos(config.target.theta),
          config.target.y + target_length * std::sin(config.target.theta)};
}

double scaled_residual_norm(const ScenarioConfig& config,
                            std::span<const double> residual_values) {
  if (residual_values.empty()) return 0.0;
  const double ls = config.length_scale();
  const double speed = std::max(config.pursuer_speed, std::max(config.target_speed, 1.0));
  double norm = 0.0;
  for (std::size_t i = 0; i + 1 < residual_values.size(); ++i) {
    norm = std::max(norm, std::abs(residual_values[i]) / ls);
  }
  norm = std::max(norm, std::abs(residual_values.back()) / (speed * ls));
  return norm;
}

bool is_model_feasible(const ScenarioConfig& config, const LengthVector& lengths, double tol) {
  if (!lengths.all_nonnegative()) return false;
  return scaled_residual_norm(config, residuals(config, lengths)) <= tol;
}

std::vector<SegmentSpec> pursuer_segments(const ScenarioConfig& config,
                                          const LengthVector& lengths) {
  check_dimension(config, lengths);
  const std::size_t n = config.obstacle_count();
  std::vector<SegmentSpec> segs;
  segs.reserve(3 * n + 3);
  for (std::size_t k = 0; k <= n; ++k) {
    const double a = config.circle_curvature(k);
    segs.emplace_back(SignedCurvature{a}, lengths[3 * k]);
    segs.emplace_back(SignedCurvature{-a}, lengths[3 * k + 1]);
    segs.emplace_back(SignedCurvature::straight(), lengths[3 * k + 2]);
  }
  return segs;
}

ChainTrace reconstruct_chain(const ScenarioConfig& config, const LengthVector& lengths) {
  const std::size_t n = config.obstacle_count();
  const std::vector<SegmentSpec> segs = pursuer_segments(config, lengths);
  ChainTrace trace;
  trace.segment_starts.reserve(segs.size());
  Pose cursor = config.pursuer;
  for (std::size_t i = 0; i < segs.size(); ++i) {
    trace.segment_starts.push_back(cursor);
    cursor = propagate_segment(cursor, segs[i]);
    const bool block_end = (i % 3 == 2);
    const std::size_t block = i / 3;
    if (block_end && block < n) {
      const Point entry = obstacle_entry_point(config.obstacles[block], cursor.theta);
      trace.pin_jumps.push_back(std::hypot(cursor.x - entry.x, cursor.y - entry.y));
      cursor = Pose{entry.x, entry.y, cursor.theta};
    }
  }
  trace.end = cursor;
  return trace;
}

}  // namespace cspath
