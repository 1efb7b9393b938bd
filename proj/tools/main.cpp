#include <cstdio>
#include <exception>
#include <filesystem>
#include <iostream>
#include <optional>
#include <string>

#include "CLI11.hpp"
#include "cspath/geo.hpp"
#include "cspath/model.hpp"
#include "cspath/report.hpp"
#include "cspath/scenario_io.hpp"
#include "cspath/solver.hpp"
#include "cspath/validate.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitError = 1;
constexpr int kExitInfeasible = 2;

void print_solution(const cspath::ScenarioConfig& config, const cspath::PathSolution& s) {
  std::cout << "pattern:    " << s.pattern.path_string() << "\n";
  std::cout << "f:          " << cspath::format_number(s.objective) << "\n";
  std::cout << "intercept:  (" << cspath::format_number(s.intercept.x) << ", "
            << cspath::format_number(s.intercept.y) << ")\n";
  std::cout << "total time: " << cspath::format_number(s.total_time) << "\n";
  std::cout << "lengths:   ";
  for (std::size_t i = 0; i < s.lengths.size(); ++i) {
    std::cout << ' ' << cspath::format_number(s.lengths[i]);
  }
  std::cout << "\n";
  const auto r = cspath::residuals(config, s.lengths);
  std::cout << "scaled residual max-norm: " << cspath::scaled_residual_norm(config, r) << "\n";
}

int run_plan(const std::string& scenario_path, const std::string& mode_name, std::uint64_t seed,
             const std::string& out_dir) {
  const cspath::ScenarioConfig config = cspath::load_scenario(scenario_path);
  cspath::SolverSettings settings;
  settings.seed = seed;
  if (mode_name == "pattern") {
    settings.mode = cspath::SolveMode::PatternNewton;
  } else if (mode_name == "nlp") {
    settings.mode = cspath::SolveMode::FullNlp;
  } else if (mode_name == "both") {
    settings.mode = cspath::SolveMode::Both;
  } else {
    std::cerr << "unknown mode '" << mode_name << "'\n";
    return kExitError;
  }
  const cspath::PlanReport report = cspath::plan(config, settings);
  std::optional<cspath::ValidationReport> validation;
  if (report.best) {
    validation = cspath::validate(config, *report.best);
    print_solution(config, *report.best);
    std::cout << "replay miss distance: " << validation->miss_distance << "\n";
  } else {
    std::cout << "no feasible path found\n";
  }
  if (!out_dir.empty()) {
    const auto written = cspath::emit_report(config, report, validation, out_dir);
    for (const auto& p : written) std::cout << "wrote " << p.string() << "\n";
  }
  return report.best ? kExitOk : kExitInfeasible;
}

int run_validate(const std::string& scenario_path, const std::string& csv_path) {
  const cspath::ScenarioConfig config = cspath::load_scenario(scenario_path);
  const cspath::PathSolution solution = cspath::load_solution_csv(config, csv_path);
  const cspath::ValidationReport report = cspath::validate(config, solution);
  std::cout << "miss distance:   " << report.miss_distance << "\n";
  std::cout << "length error:    " << report.length_error << "\n";
  std::cout << "time error:      " << report.time_error << "\n";
  std::cout << "max penetration: " << report.max_penetration << "\n";
  for (std::size_t j = 0; j < report.junctions.size(); ++j) {
    std::cout << "junction " << j + 1 << ": tangency gap " << report.junctions[j].tangency_gap
              << ", pin jump " << report.junctions[j].pin_jump << "\n";
  }
  if (!report.clearance_violations.empty()) {
    for (const auto& v : report.clearance_violations) {
      std::cout << "CLEARANCE VIOLATION: obstacle " << v.obstacle_index + 1 << " penetrated by "
                << v.penetration << "\n";
    }
    return kExitInfeasible;
  }
  return kExitOk;
}

int run_oracle(const std::string& scenario_path, int resolution) {
  const cspath::ScenarioConfig config = cspath::load_scenario(scenario_path);
  const auto best = cspath::grid_oracle(config, resolution);
  if (!best) {
    std::cout << "oracle found no near-feasible grid point\n";
    return kExitInfeasible;
  }
  print_solution(config, *best);
  return kExitOk;
}

int run_project(const std::string& lat, const std::string& lon, double radius) {
  const cspath::GeoPoint gp(cspath::parse_degrees(lat), cspath::parse_degrees(lon), radius);
  const cspath::Point p = cspath::project(gp);
  std::cout << cspath::format_number(p.x) << " " << cspath::format_number(p.y) << "\n";
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"curvature-straight interception path planner"};
  app.require_subcommand(1);

  std::string scenario_path, out_dir, csv_path, mode_name = "pattern";
  std::string lat, lon;
  std::uint64_t seed = 0;
  int resolution = 128;
  double radius = cspath::kEarthRadiusKm;

  CLI::App* plan_cmd = app.add_subcommand("plan", "plan an interception path");
  plan_cmd->add_option("scenario", scenario_path, "scenario JSON file")->required();
  plan_cmd->add_option("--mode", mode_name, "pattern | nlp | both");
  plan_cmd->add_option("--seed", seed, "multistart seed");
  plan_cmd->add_option("--out", out_dir, "directory for csv/svg/report output");

  CLI::App* validate_cmd = app.add_subcommand("validate", "replay a solution kinematically");
  validate_cmd->add_option("scenario", scenario_path, "scenario JSON file")->required();
  validate_cmd->add_option("solution", csv_path, "segments.csv produced by plan")->required();

  CLI::App* oracle_cmd = app.add_subcommand("oracle", "brute-force grid search");
  oracle_cmd->add_option("scenario", scenario_path, "scenario JSON file")->required();
  oracle_cmd->add_option("--resolution", resolution, "grid points per arc axis");

  CLI::App* project_cmd = app.add_subcommand("project", "project lat/lon to planar km");
  project_cmd->add_option("lat", lat, "latitude (decimal or DMS)")->required();
  project_cmd->add_option("lon", lon, "longitude (decimal or DMS)")->required();
  project_cmd->add_option("--radius", radius, "reference sphere radius in km");

  CLI11_PARSE(app, argc, argv);

  try {
    if (plan_cmd->parsed()) return run_plan(scenario_path, mode_name, seed, out_dir);
    if (validate_cmd->parsed()) return run_validate(scenario_path, csv_path);
    if (oracle_cmd->parsed()) return run_oracle(scenario_path, resolution);
    if (project_cmd->parsed()) return run_project(lat, lon, radius);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitError;
  }
  return kExitError;
}
