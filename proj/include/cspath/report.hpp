#pragma once

#include <filesystem>
#include <optional>
#include <vector>

#include "cspath/solver.hpp"
#include "cspath/validate.hpp"

namespace cspath {

/// Writes segments.csv, summary.csv, path.svg and report.txt into out_dir
/// (created if missing). Returns the written paths. With an empty feasible
/// set the summary carries an INFEASIBLE row, segments.csv only its header,
/// and the SVG shows the scenario alone.
std::vector<std::filesystem::path> emit_report(const ScenarioConfig& config,
                                               const PlanReport& report,
                                               const std::optional<ValidationReport>& validation,
                                               const std::filesystem::path& out_dir);

/// Reads a segments.csv back into a PathSolution (lengths and pattern; the
/// derived fields are recomputed against the scenario).
PathSolution load_solution_csv(const ScenarioConfig& config, const std::filesystem::path& path);

/// Fixed formatting with six significant digits, never scientific, used by
/// every emitted table so files are byte-stable.
std::string format_number(double v);

}  // namespace cspath
