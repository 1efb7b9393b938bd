#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "cspath/report.hpp"
#include "cspath/scenario_io.hpp"
#include "cspath/solver.hpp"
#include "cspath/validate.hpp"

using namespace cspath;
namespace fs = std::filesystem;

namespace {

fs::path scenario(const char* name) {
  return fs::path(CSPATH_SCENARIO_DIR) / name;
}

fs::path temp_dir(const char* tag) {
  fs::path p = fs::temp_directory_path() / (std::string("cspath_test_") + tag);
  fs::create_directories(p);
  return p;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace

TEST_CASE("parse_angle") {
  CHECK(parse_angle("0") == 0.0);
  CHECK(parse_angle("1.5") == doctest::Approx(1.5));
  CHECK(parse_angle("pi") == doctest::Approx(kPi));
  CHECK(parse_angle("3pi/2") == doctest::Approx(3 * kPi / 2));
  CHECK(parse_angle("5pi/6") == doctest::Approx(5 * kPi / 6));
  CHECK(parse_angle("-pi/4") == doctest::Approx(-kPi / 4));
  CHECK(parse_angle(" 7pi/6 ") == doctest::Approx(7 * kPi / 6));
  CHECK_THROWS_AS(parse_angle("pi/0"), std::invalid_argument);
  CHECK_THROWS_AS(parse_angle("2tau"), std::invalid_argument);
  CHECK_THROWS_AS(parse_angle(""), std::invalid_argument);
}

TEST_CASE("load_scenario reads the bundled single-obstacle fixture") {
  const ScenarioConfig cfg = load_scenario(scenario("table1a.json"));
  CHECK(cfg.pursuer.x == 0.0);
  CHECK(cfg.pursuer.theta == doctest::Approx(3 * kPi / 2));
  CHECK(cfg.pursuer_speed == 6.0);
  CHECK(cfg.min_turn_radius == 1.0);
  CHECK(cfg.target.x == 20.0);
  CHECK(cfg.target.theta == doctest::Approx(kPi));
  CHECK(cfg.target_speed == 1.0);
  REQUIRE(cfg.obstacles.size() == 1);
  CHECK(cfg.obstacles[0].x == 4.0);
  CHECK(cfg.obstacles[0].y == 8.0);
  CHECK(cfg.obstacles[0].radius == 2.0);
}

TEST_CASE("load_scenario projects the geographic real-world fixture") {
  const ScenarioConfig cfg = load_scenario(scenario("realworld.json"));
  CHECK(std::abs(cfg.pursuer.x - 9133.10) < 0.5);
  CHECK(std::abs(cfg.pursuer.y - 2528.32) < 0.5);
  CHECK(std::abs(cfg.target.x - 9351.30) < 0.5);
  CHECK(std::abs(cfg.target.y - 2560.40) < 0.5);
  REQUIRE(cfg.obstacles.size() == 2);
  CHECK(std::abs(cfg.obstacles[0].x - 9147.19) < 0.5);
  CHECK(std::abs(cfg.obstacles[1].y - 2629.00) < 0.5);
  CHECK(cfg.pursuer_speed == 800.0);
  CHECK(cfg.target_speed == 400.0);
  CHECK(cfg.min_turn_radius == 10.0);
}

TEST_CASE("load_scenario errors name the offending field") {
  const fs::path dir = temp_dir("bad");
  {
    std::ofstream out(dir / "slow.json");
    out << R"({"pursuer": {"x":0,"y":0,"theta":0,"speed":1,"turn_radius":1},
               "target": {"x":5,"y":5,"theta":0,"speed":1}, "obstacles": []})";
  }
  try {
    load_scenario(dir / "slow.json");
    FAIL("expected a throw");
  } catch (const std::invalid_argument& e) {
    CHECK(std::string(e.what()).find("speed") != std::string::npos);
  }
  {
    std::ofstream out(dir / "broken.json");
    out << "{ not json";
  }
  CHECK_THROWS(load_scenario(dir / "broken.json"));
  CHECK_THROWS(load_scenario(dir / "missing.json"));
}

TEST_CASE("scenario round-trips through the canonical dump") {
  const ScenarioConfig cfg = load_scenario(scenario("table4b.json"));
  const fs::path dir = temp_dir("roundtrip");
  save_scenario(cfg, dir / "dump.json");
  const ScenarioConfig again = load_scenario(dir / "dump.json");
  CHECK(again.pursuer.x == cfg.pursuer.x);
  CHECK(again.pursuer.theta == cfg.pursuer.theta);
  CHECK(again.pursuer_speed == cfg.pursuer_speed);
  CHECK(again.min_turn_radius == cfg.min_turn_radius);
  CHECK(again.target.x == cfg.target.x);
  CHECK(again.target.theta == cfg.target.theta);
  REQUIRE(again.obstacles.size() == cfg.obstacles.size());
  for (std::size_t i = 0; i < cfg.obstacles.size(); ++i) {
    CHECK(again.obstacles[i].x == cfg.obstacles[i].x);
    CHECK(again.obstacles[i].y == cfg.obstacles[i].y);
    CHECK(again.obstacles[i].radius == cfg.obstacles[i].radius);
  }
}

TEST_CASE("emitted CSV totals match the summary") {
  const ScenarioConfig cfg = load_scenario(scenario("table1a.json"));
  const PlanReport report = plan(cfg, {});
  REQUIRE(report.best.has_value());
  const ValidationReport validation = validate(cfg, *report.best);
  const fs::path dir = temp_dir("emit");
  const auto written = emit_report(cfg, report, validation, dir);
  CHECK(written.size() == 4);

  // segments.csv: length column sums to f, pursuer durations to total time
  std::ifstream csv(dir / "segments.csv");
  std::string line;
  std::getline(csv, line);
  CHECK(line == "index,kind,signed_curvature,length,duration,start_x,start_y,start_theta");
  double length_sum = 0.0, pursuer_time = 0.0;
  int rows = 0;
  while (std::getline(csv, line)) {
    std::stringstream ss(line);
    std::string cell;
    std::vector<std::string> cells;
    while (std::getline(ss, cell, ',')) cells.push_back(cell);
    REQUIRE(cells.size() == 8);
    length_sum += std::stod(cells[3]);
    if (cells[1] != "Target") pursuer_time += std::stod(cells[4]);
    ++rows;
  }
  CHECK(rows == 7);
  // the columns are printed with six significant digits; totals agree at
  // that precision
  CHECK(std::abs(length_sum - report.best->objective) < 1e-3);
  CHECK(std::abs(pursuer_time - report.best->total_time) < 1e-3);

  std::ifstream summary(dir / "summary.csv");
  std::getline(summary, line);
  CHECK(line == "pattern,f,intercept_x,intercept_y,total_time");
  std::getline(summary, line);
  CHECK(line.find("LS+RS+S_T") == 0);

  const std::string txt = slurp(dir / "report.txt");
  CHECK(txt.find("best: LS+RS+S_T") != std::string::npos);
  CHECK(txt.find("miss distance") != std::string::npos);
}

TEST_CASE("infeasible report writes an INFEASIBLE summary") {
  const ScenarioConfig cfg = load_scenario(scenario("table1a.json"));
  PlanReport empty;
  const fs::path dir = temp_dir("infeasible");
  emit_report(cfg, empty, std::nullopt, dir);
  const std::string summary = slurp(dir / "summary.csv");
  CHECK(summary.find("INFEASIBLE") != std::string::npos);
  std::ifstream csv(dir / "segments.csv");
  std::string line;
  int lines = 0;
  while (std::getline(csv, line)) ++lines;
  CHECK(lines == 1);  // header only
  CHECK(slurp(dir / "path.svg").find("<svg") != std::string::npos);
}

TEST_CASE("SVG output is byte-identical across runs") {
  const ScenarioConfig cfg = load_scenario(scenario("table4d.json"));
  SolverSettings settings;
  settings.seed = 9;
  const PlanReport report = plan(cfg, settings);
  const ValidationReport validation = validate(cfg, *report.best);
  const fs::path d1 = temp_dir("svg1"), d2 = temp_dir("svg2");
  emit_report(cfg, report, validation, d1);
  emit_report(cfg, plan(cfg, settings), validation, d2);
  CHECK(slurp(d1 / "path.svg") == slurp(d2 / "path.svg"));
  CHECK(slurp(d1 / "path.svg").find("viewBox") != std::string::npos);
}

TEST_CASE("segments.csv round-trips into a validatable solution") {
  const ScenarioConfig cfg = load_scenario(scenario("table1b.json"));
  const PlanReport report = plan(cfg, {});
  REQUIRE(report.best.has_value());
  const fs::path dir = temp_dir("solcsv");
  emit_report(cfg, report, std::nullopt, dir);
  const PathSolution loaded = load_solution_csv(cfg, dir / "segments.csv");
  CHECK(loaded.pattern == report.best->pattern);
  // six significant digits in the CSV
  CHECK(std::abs(loaded.objective - report.best->objective) < 1e-3);
  const ValidationReport v = validate(cfg, loaded);
  CHECK(v.miss_distance < 1e-2);
}

TEST_CASE("format_number uses six significant digits without scientific notation") {
  CHECK(format_number(30.4264069) == "30.4264");
  CHECK(format_number(9133.10423) == "9133.10");
  CHECK(format_number(0.0) == "0.00000");
  CHECK(format_number(-2.5) == "-2.50000");
  CHECK(format_number(0.000123456) == "0.000123456");
  CHECK(format_number(123456.7) == "123457");
}
