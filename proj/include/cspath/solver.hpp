#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "cspath/model.hpp"

namespace cspath {

enum class SolveMode { PatternNewton, FullNlp, Both };

struct SolverSettings {
  int newton_max_iter = 100;
  double newton_damping = 0.5;  // backtracking factor in (0,1)
  double residual_tol = 1e-10;  // scaled max-norm (see scaled_residual_norm)
  int multistart_count = 32;
  std::uint64_t seed = 0;
  SolveMode mode = SolveMode::PatternNewton;
};

/// One feasible path: the full length vector with its pattern and every
/// derived quantity of the paper's result tables.
struct PathSolution {
  TurnPattern pattern;
  LengthVector lengths;
  double objective = 0.0;           // recomputed sum of lengths
  std::vector<double> headings;     // cumulative junction headings
  Point intercept;                  // target position at the final time
  std::vector<double> segment_times;  // pursuer segments, then the target's
  double total_time = 0.0;
};

struct PatternDiagnostics {
  TurnPattern pattern;
  bool converged = false;
  int iterations = 0;      // Newton iterations spent on the reported root
  int starts_tried = 0;
  int roots_found = 0;
  double residual_norm = 0.0;  // scaled max-norm achieved (best over starts)
  double wall_time_sec = 0.0;  // informational only; excluded from determinism
};

struct PatternSolveResult {
  std::optional<PathSolution> solution;
  PatternDiagnostics diagnostics;
};

struct PlanReport {
  std::optional<PathSolution> best;
  std::vector<PathSolution> all_feasible;  // one per converged pattern
  std::vector<PatternDiagnostics> diagnostics;
};

/// All 2^(n+1) turn patterns in lexicographic order (L before R).
std::vector<TurnPattern> enumerate_patterns(std::size_t obstacle_count);

/// Assembles a PathSolution (headings, intercept, per-segment times) from a
/// length vector known to solve the model for this pattern.
PathSolution make_solution(const ScenarioConfig& config, const TurnPattern& pattern,
                           LengthVector lengths);

/// Damped-Newton multistart solve of the square pattern-reduced system.
/// Converged roots with any negative length or a full-revolution arc are
/// rejected; among the surviving roots the smallest objective wins.
PatternSolveResult solve_pattern(const ScenarioConfig& config, const TurnPattern& pattern,
                                 const SolverSettings& settings);

/// Augmented-Lagrangian solve of the full both-arc program (all 3n+4
/// lengths free, nonnegativity by projection), polished to residual_tol.
PatternSolveResult solve_full_nlp(const ScenarioConfig& config, const SolverSettings& settings);

/// Runs every pattern (and the full NLP when the mode asks for it) and
/// selects the minimum-objective feasible solution. Ties within 1e-9 break
/// by pattern order, then by smaller total arc length.
PlanReport plan(const ScenarioConfig& config, const SolverSettings& settings = {});

/// Brute-force verification oracle: grids the arc lengths, recovers the
/// straight and target lengths from the linear structure of the residuals,
/// and polishes near-feasible grid points derivative-free (Nelder-Mead).
/// No Newton steps or Jacobians anywhere on this route.
std::optional<PathSolution> grid_oracle(const ScenarioConfig& config, int resolution);

}  // namespace cspath
