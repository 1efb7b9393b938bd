#include "cspath/report.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace cspath {

namespace {

char segment_kind(std::size_t i) {
  switch (i % 3) {
    case 0: return 'L';
    case 1: return 'R';
    default: return 'S';
  }
}

struct BoundingBox {
  double min_x = 0.0, min_y = 0.0, max_x = 0.0, max_y = 0.0;
  bool empty = true;

  void grow(double x, double y, double pad = 0.0) {
    if (empty) {
      min_x = x - pad;
      max_x = x + pad;
      min_y = y - pad;
      max_y = y + pad;
      empty = false;
      return;
    }
    min_x = std::min(min_x, x - pad);
    max_x = std::max(max_x, x + pad);
    min_y = std::min(min_y, y - pad);
    max_y = std::max(max_y, y + pad);
  }
};

// SVG is emitted y-up by negating y coordinates; the viewBox covers the
// negated space.
class SvgWriter {
 public:
  void circle(double x, double y, double r, const std::string& style) {
    bbox_.grow(x, -y, r);
    body_ << "  <circle cx=\"" << format_number(x) << "\" cy=\"" << format_number(-y)
          << "\" r=\"" << format_number(r) << "\" " << style << "/>\n";
  }

  void polyline(const std::vector<Point>& pts, const std::string& style) {
    if (pts.empty()) return;
    body_ << "  <polyline points=\"";
    for (std::size_t i = 0; i < pts.size(); ++i) {
      bbox_.grow(pts[i].x, -pts[i].y);
      if (i) body_ << ' ';
      body_ << format_number(pts[i].x) << ',' << format_number(-pts[i].y);
    }
    body_ << "\" " << style << "/>\n";
  }

  void line(Point a, Point b, const std::string& style) {
    bbox_.grow(a.x, -a.y);
    bbox_.grow(b.x, -b.y);
    body_ << "  <line x1=\"" << format_number(a.x) << "\" y1=\"" << format_number(-a.y)
          << "\" x2=\"" << format_number(b.x) << "\" y2=\"" << format_number(-b.y) << "\" "
          << style << "/>\n";
  }

  std::string finish() const {
    BoundingBox b = bbox_;
    if (b.empty) b.grow(0.0, 0.0, 1.0);
    const double w = std::max(b.max_x - b.min_x, 1e-9);
    const double h = std::max(b.max_y - b.min_y, 1e-9);
    const double margin = 0.1 * std::max(w, h);
    std::ostringstream out;
    out << "<svg xmlns=\"http://www.w3.org/2000/svg\" viewBox=\""
        << format_number(b.min_x - margin) << ' ' << format_number(b.min_y - margin) << ' '
        << format_number(w + 2.0 * margin) << ' ' << format_number(h + 2.0 * margin) << "\">\n"
        << body_.str() << "</svg>\n";
    return out.str();
  }

 private:
  std::ostringstream body_;
  BoundingBox bbox_;
};

std::string render_svg(const ScenarioConfig& config, const PlanReport& report) {
  SvgWriter svg;
  const double scale = config.length_scale();
  const double marker = 0.008 * scale;

  for (const ObstacleSpec& o : config.obstacles) {
    svg.circle(o.x, o.y, o.radius,
               "fill=\"#dddddd\" stroke=\"#555555\" stroke-width=\"" +
                   format_number(0.002 * scale) + "\"");
  }

  if (report.best) {
    const PathSolution& best = *report.best;
    // pursuer turning circle for the chosen first turn
    const double side = best.pattern.signs.front() == Turn::Left ? 1.0 : -1.0;
    const double cx = config.pursuer.x - side * config.min_turn_radius * std::sin(config.pursuer.theta);
    const double cy = config.pursuer.y + side * config.min_turn_radius * std::cos(config.pursuer.theta);
    svg.circle(cx, cy, config.min_turn_radius,
               "fill=\"none\" stroke=\"#88aacc\" stroke-width=\"" + format_number(0.002 * scale) +
                   "\" stroke-dasharray=\"" + format_number(0.01 * scale) + "\"");

    // pursuer path, drawn block by block so the entry pins are honoured
    const ChainTrace trace = reconstruct_chain(config, best.lengths);
    const std::vector<SegmentSpec> segs = pursuer_segments(config, best.lengths);
    std::vector<Point> path;
    const double step = 0.004 * scale;
    for (std::size_t i = 0; i < segs.size(); ++i) {
      const std::vector<Pose> poses =
          sample_path(trace.segment_starts[i], std::span(&segs[i], 1), step);
      for (const Pose& p : poses) path.push_back({p.x, p.y});
    }
    path.push_back({trace.end.x, trace.end.y});
    svg.polyline(path, "fill=\"none\" stroke=\"#cc3333\" stroke-width=\"" +
                           format_number(0.003 * scale) + "\"");

    // target line and interception point
    svg.line(config.target.position(), best.intercept,
             "stroke=\"#3366cc\" stroke-width=\"" + format_number(0.003 * scale) +
                 "\" stroke-dasharray=\"" + format_number(0.015 * scale) + "\"");
    svg.circle(best.intercept.x, best.intercept.y, marker, "fill=\"#3366cc\" stroke=\"none\"");

    // entry/exit markers: start of each straight (arc exit) and each pinned entry
    for (std::size_t k = 0; 3 * k + 2 < trace.segment_starts.size(); ++k) {
      const Pose& exit_pose = trace.segment_starts[3 * k + 2];
      svg.circle(exit_pose.x, exit_pose.y, marker, "fill=\"#cc8800\" stroke=\"none\"");
      if (3 * (k + 1) < trace.segment_starts.size()) {
        const Pose& entry_pose = trace.segment_starts[3 * (k + 1)];
        svg.circle(entry_pose.x, entry_pose.y, marker, "fill=\"#228833\" stroke=\"none\"");
      }
    }
  } else {
    svg.line(config.target.position(),
             target_position(config, 2.0 * config.min_turn_radius),
             "stroke=\"#3366cc\" stroke-width=\"" + format_number(0.003 * scale) + "\"");
  }
  svg.circle(config.pursuer.x, config.pursuer.y, marker, "fill=\"#cc3333\" stroke=\"none\"");
  svg.circle(config.target.x, config.target.y, marker, "fill=\"#3366cc\" stroke=\"none\"");
  return svg.finish();
}

}  // namespace

std::string format_number(double v) {
  if (!std::isfinite(v)) return v > 0 ? "inf" : (v < 0 ? "-inf" : "nan");
  if (v == 0.0) return "0.00000";
  const double mag = std::abs(v);
  int int_digits = mag >= 1.0 ? static_cast<int>(std::floor(std::log10(mag))) + 1 : 1;
  int decimals = std::max(0, 6 - int_digits);
  if (mag < 1.0) {
    // keep six significant digits for small values too
    decimals = 5 + std::min(12, static_cast<int>(std::ceil(-std::log10(mag))));
  }
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*f", decimals, v);
  return buf;
}

std::vector<std::filesystem::path> emit_report(const ScenarioConfig& config,
                                               const PlanReport& report,
                                               const std::optional<ValidationReport>& validation,
                                               const std::filesystem::path& out_dir) {
  namespace fs = std::filesystem;
  std::error_code ec;
  fs::create_directories(out_dir, ec);
  std::vector<fs::path> written;

  auto open = [&](const char* name) {
    fs::path p = out_dir / name;
    std::ofstream out(p, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write " + p.string());
    written.push_back(p);
    return out;
  };

  {
    std::ofstream csv = open("segments.csv");
    csv << "index,kind,signed_curvature,length,duration,start_x,start_y,start_theta\n";
    if (report.best) {
      const PathSolution& best = *report.best;
      const ChainTrace trace = reconstruct_chain(config, best.lengths);
      const std::vector<SegmentSpec> segs = pursuer_segments(config, best.lengths);
      for (std::size_t i = 0; i < segs.size(); ++i) {
        csv << (i + 1) << ',' << segment_kind(i) << ','
            << format_number(segs[i].curvature.value) << ',' << format_number(best.lengths[i])
            << ',' << format_number(best.segment_times[i]) << ','
            << format_number(trace.segment_starts[i].x) << ','
            << format_number(trace.segment_starts[i].y) << ','
            << format_number(trace.segment_starts[i].theta) << '\n';
      }
      csv << segs.size() + 1 << ",Target," << format_number(0.0) << ','
          << format_number(best.lengths.target_length()) << ','
          << format_number(best.segment_times.back()) << ',' << format_number(config.target.x)
          << ',' << format_number(config.target.y) << ',' << format_number(config.target.theta)
          << '\n';
    }
  }

  {
    std::ofstream csv = open("summary.csv");
    csv << "pattern,f,intercept_x,intercept_y,total_time\n";
    if (report.best) {
      const PathSolution& best = *report.best;
      csv << best.pattern.path_string() << ',' << format_number(best.objective) << ','
          << format_number(best.intercept.x) << ',' << format_number(best.intercept.y) << ','
          << format_number(best.total_time) << '\n';
    } else {
      csv << "INFEASIBLE,,,,\n";
    }
  }

  {
    std::ofstream svg = open("path.svg");
    svg << render_svg(config, report);
  }

  {
    std::ofstream txt = open("report.txt");
    txt << "scenario: pursuer (" << format_number(config.pursuer.x) << ", "
        << format_number(config.pursuer.y) << ", theta " << format_number(config.pursuer.theta)
        << "), speed " << format_number(config.pursuer_speed) << ", turn radius "
        << format_number(config.min_turn_radius) << "\n";
    txt << "          target  (" << format_number(config.target.x) << ", "
        << format_number(config.target.y) << ", theta " << format_number(config.target.theta)
        << "), speed " << format_number(config.target_speed) << "\n";
    for (const ObstacleSpec& o : config.obstacles) {
      txt << "          obstacle (" << format_number(o.x) << ", " << format_number(o.y)
          << "), radius " << format_number(o.radius) << "\n";
    }
    txt << "\npattern solves:\n";
    for (const PatternDiagnostics& d : report.diagnostics) {
      txt << "  " << d.pattern.path_string() << ": "
          << (d.converged ? "converged" : "no feasible root") << ", starts " << d.starts_tried
          << ", roots " << d.roots_found << ", iterations " << d.iterations
          << ", scaled residual " << d.residual_norm << ", wall " << d.wall_time_sec << " s\n";
    }
    txt << "\nfeasible solutions:\n";
    for (const PathSolution& s : report.all_feasible) {
      txt << "  " << s.pattern.path_string() << ": f = " << format_number(s.objective)
          << ", intercept (" << format_number(s.intercept.x) << ", "
          << format_number(s.intercept.y) << "), time " << format_number(s.total_time) << "\n";
    }
    if (report.best) {
      txt << "\nbest: " << report.best->pattern.path_string()
          << ", f = " << format_number(report.best->objective) << "\n";
    } else {
      txt << "\nbest: none (infeasible)\n";
    }
    if (validation) {
      txt << "\nvalidation (kinematic replay):\n";
      txt << "  miss distance:  " << validation->miss_distance << "\n";
      txt << "  length error:   " << validation->length_error << "\n";
      txt << "  time error:     " << validation->time_error << "\n";
      txt << "  max penetration: " << validation->max_penetration << "\n";
      for (std::size_t j = 0; j < validation->junctions.size(); ++j) {
        txt << "  junction " << j + 1 << ": tangency gap "
            << validation->junctions[j].tangency_gap << ", pin jump "
            << validation->junctions[j].pin_jump << "\n";
      }
      if (!validation->clearance_violations.empty()) {
        for (const ClearanceViolation& v : validation->clearance_violations) {
          txt << "  CLEARANCE VIOLATION: obstacle " << v.obstacle_index + 1 << " penetrated by "
              << v.penetration << "\n";
        }
      } else {
        txt << "  no clearance violations\n";
      }
    }
  }

  return written;
}

PathSolution load_solution_csv(const ScenarioConfig& config, const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open solution file " + path.string());
  std::string line;
  if (!std::getline(in, line)) throw std::runtime_error("empty solution file " + path.string());

  const std::size_t n = config.obstacle_count();
  LengthVector lengths = LengthVector::zeros(n);
  TurnPattern pattern;
  pattern.signs.assign(n + 1, Turn::Left);
  std::vector<bool> arc_seen(n + 1, false);

  std::size_t row = 0;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::stringstream ss(line);
    std::string cell;
    std::vector<std::string> cells;
    while (std::getline(ss, cell, ',')) cells.push_back(cell);
    if (cells.size() < 4) throw std::runtime_error("malformed row in " + path.string());
    const std::string& kind = cells[1];
    const double length = std::stod(cells[3]);
    if (kind == "Target") {
      lengths[lengths.size() - 1] = length;
      continue;
    }
    if (row >= lengths.size() - 1) throw std::runtime_error("too many segment rows");
    lengths[row] = length;
    const std::size_t circle = row / 3;
    if (row % 3 != 2 && length > 0.0 && !arc_seen[circle]) {
      pattern.signs[circle] = (kind == "L") ? Turn::Left : Turn::Right;
      arc_seen[circle] = true;
    }
    ++row;
  }
  return make_solution(config, pattern, std::move(lengths));
}

}  // namespace cspath
