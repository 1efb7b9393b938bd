#include "cspath/solver.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace cspath {

namespace {

constexpr double kArcCapMargin = 1e-9;  // keep arcs strictly under a revolution

// ---------------------------------------------------------------------------
// Small dense linear algebra: the systems here are (2n+3) x (2n+3) with n a
// handful at most, so Gaussian elimination with partial pivoting is plenty.

bool solve_linear(std::vector<std::vector<double>> A, std::vector<double> b,
                  std::vector<double>& x) {
  const std::size_t n = b.size();
  for (std::size_t col = 0; col < n; ++col) {
    std::size_t piv = col;
    for (std::size_t r = col + 1; r < n; ++r) {
      if (std::abs(A[r][col]) > std::abs(A[piv][col])) piv = r;
    }
    if (std::abs(A[piv][col]) < 1e-300) return false;
    std::swap(A[piv], A[col]);
    std::swap(b[piv], b[col]);
    for (std::size_t r = col + 1; r < n; ++r) {
      const double f = A[r][col] / A[col][col];
      if (f == 0.0) continue;
      for (std::size_t c = col; c < n; ++c) A[r][c] -= f * A[col][c];
      b[r] -= f * b[col];
    }
  }
  x.assign(n, 0.0);
  for (std::size_t i = n; i-- > 0;) {
    double acc = b[i];
    for (std::size_t c = i + 1; c < n; ++c) acc -= A[i][c] * x[c];
    x[i] = acc / A[i][i];
  }
  return std::all_of(x.begin(), x.end(), [](double v) { return std::isfinite(v); });
}

// ---------------------------------------------------------------------------
// Low-discrepancy start points: Halton sequence with a seed-derived index
// offset, deterministic for a given seed.

constexpr int kHaltonPrimes[] = {2,  3,  5,  7,  11, 13, 17, 19, 23, 29,
                                 31, 37, 41, 43, 47, 53, 59, 61, 67, 71};

double halton(std::uint64_t index, int base) {
  double f = 1.0, r = 0.0;
  while (index > 0) {
    f /= base;
    r += f * static_cast<double>(index % base);
    index /= base;
  }
  return r;
}

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

struct LowDiscrepancy {
  std::uint64_t offset;
  explicit LowDiscrepancy(std::uint64_t seed) : offset(splitmix64(seed) % 65536 + 17) {}

  // dim-th coordinate of the i-th point, in (0,1)
  double coord(std::uint64_t i, std::size_t dim) const {
    const int base = kHaltonPrimes[dim % std::size(kHaltonPrimes)];
    double v = halton(offset + i, base);
    return std::min(std::max(v, 1e-9), 1.0 - 1e-9);
  }
};

// ---------------------------------------------------------------------------
// Pattern-reduced view of the model: z = [arcs(0..n), straights(0..n), lT].

struct ReducedSystem {
  const ScenarioConfig& config;
  TurnPattern pattern;
  std::size_t circles;  // n + 1
  std::vector<std::size_t> full_col;  // full-length-vector column per z entry

  ReducedSystem(const ScenarioConfig& cfg, const TurnPattern& pat)
      : config(cfg), pattern(pat), circles(pat.size()) {
    if (circles != cfg.obstacle_count() + 1) {
      throw std::invalid_argument("pattern length must be obstacle count + 1");
    }
    full_col.reserve(2 * circles + 1);
    for (std::size_t k = 0; k < circles; ++k) {
      full_col.push_back(3 * k + (pattern.signs[k] == Turn::Left ? 0 : 1));
    }
    for (std::size_t k = 0; k < circles; ++k) full_col.push_back(3 * k + 2);
    full_col.push_back(3 * circles);
  }

  std::size_t dim() const { return 2 * circles + 1; }

  LengthVector expand(std::span<const double> z) const {
    LengthVector full = LengthVector::zeros(circles - 1);
    for (std::size_t q = 0; q < z.size(); ++q) full[full_col[q]] = z[q];
    return full;
  }

  std::vector<double> residual(std::span<const double> z) const {
    return residuals(config, expand(z));
  }

  std::vector<std::vector<double>> jacobian(std::span<const double> z) const {
    const auto Jf = residual_jacobian(config, expand(z));
    std::vector<std::vector<double>> J(Jf.size(), std::vector<double>(dim()));
    for (std::size_t i = 0; i < Jf.size(); ++i) {
      for (std::size_t q = 0; q < dim(); ++q) J[i][q] = Jf[i][full_col[q]];
    }
    return J;
  }
};

struct NewtonOutcome {
  bool converged = false;
  int iterations = 0;
  double norm = std::numeric_limits<double>::infinity();
};

NewtonOutcome newton_solve(const ReducedSystem& sys, std::vector<double>& z,
                           const SolverSettings& settings) {
  NewtonOutcome out;
  const double bail = 1e7 * sys.config.length_scale();
  std::vector<double> r = sys.residual(z);
  double norm = scaled_residual_norm(sys.config, r);
  for (int it = 0; it < settings.newton_max_iter; ++it) {
    if (!std::isfinite(norm)) return out;
    if (norm <= settings.residual_tol) {
      out.converged = true;
      out.iterations = it;
      out.norm = norm;
      // one extra full step tightens the root well below the tolerance
      std::vector<double> d;
      if (solve_linear(sys.jacobian(z), r, d)) {
        std::vector<double> zp(z);
        for (std::size_t q = 0; q < zp.size(); ++q) zp[q] -= d[q];
        const double npolish = scaled_residual_norm(sys.config, sys.residual(zp));
        if (npolish < norm) {
          z = zp;
          out.norm = npolish;
        }
      }
      return out;
    }
    std::vector<double> d;
    if (!solve_linear(sys.jacobian(z), r, d)) return out;
    double t = 1.0;
    std::vector<double> z_next(z.size());
    std::vector<double> r_next;
    double norm_next = norm;
    while (true) {
      for (std::size_t q = 0; q < z.size(); ++q) z_next[q] = z[q] - t * d[q];
      r_next = sys.residual(z_next);
      norm_next = scaled_residual_norm(sys.config, r_next);
      if (std::isfinite(norm_next) && norm_next <= norm * (1.0 - 1e-4 * t)) break;
      t *= settings.newton_damping;
      if (t < 1e-12) return out;  // stalled
    }
    z = z_next;
    r = std::move(r_next);
    norm = norm_next;
    out.norm = std::min(out.norm, norm);
    if (std::any_of(z.begin(), z.end(), [bail](double v) { return std::abs(v) > bail; })) {
      return out;  // diverging iterate
    }
  }
  return out;
}

struct Anchors {
  std::vector<double> hop;  // pursuer -> obstacle 1 -> ... -> target
  double direct;            // pursuer -> target
};

Anchors anchor_distances(const ScenarioConfig& config) {
  Anchors a;
  Point prev = config.pursuer.position();
  for (const ObstacleSpec& o : config.obstacles) {
    a.hop.push_back(distance(prev, o.center()));
    prev = o.center();
  }
  a.hop.push_back(distance(prev, config.target.position()));
  a.direct = distance(config.pursuer.position(), config.target.position());
  for (double& d : a.hop) d = std::max(d, 0.1 * config.length_scale());
  a.direct = std::max(a.direct, 0.1 * config.length_scale());
  return a;
}

bool passes_caps(const ScenarioConfig& config, std::span<const double> arcs) {
  for (std::size_t k = 0; k < arcs.size(); ++k) {
    if (arcs[k] * config.circle_curvature(k) >= kTwoPi - kArcCapMargin) return false;
  }
  return true;
}

// Given the arcs of a pattern, the straights and the target length are
// nearly determined: each junction leaves one unknown against two linear
// equations, the final leg two unknowns against three. Closing them by
// least squares turns a point in arc space into a full candidate vector
// with a misfit score. The grid oracle searches this space exhaustively;
// the Newton solver uses a coarse pass over it to seed its starts.
struct ClosureEval {
  double merit = std::numeric_limits<double>::infinity();  // scaled residual max-norm
  double merit_sq = std::numeric_limits<double>::infinity();
  LengthVector lengths;
  double objective = std::numeric_limits<double>::infinity();
};

ClosureEval closure_eval(const ScenarioConfig& config, const TurnPattern& pattern,
                         std::span<const double> arcs) {
  const std::size_t n = config.obstacle_count();
  ClosureEval out;
  std::vector<double> straights(n + 1, 0.0);
  double arc_sum = 0.0;
  for (double a : arcs) arc_sum += a;

  double hx = config.pursuer.x, hy = config.pursuer.y;
  double heading = config.pursuer.theta;
  for (std::size_t k = 0; k <= n; ++k) {
    const double c = (pattern.signs[k] == Turn::Left ? 1.0 : -1.0) * config.circle_curvature(k);
    const double heading_out = heading + c * arcs[k];
    hx += (std::sin(heading_out) - std::sin(heading)) / c;
    hy -= (std::cos(heading_out) - std::cos(heading)) / c;
    heading = heading_out;
    const double dx = std::cos(heading), dy = std::sin(heading);
    if (k < n) {
      const Point entry = obstacle_entry_point(config.obstacles[k], heading);
      const double s = std::max(0.0, (entry.x - hx) * dx + (entry.y - hy) * dy);
      straights[k] = s;
      hx = entry.x;
      hy = entry.y;
    } else {
      const double ex = std::cos(config.target.theta), ey = std::sin(config.target.theta);
      const double vs = std::max(config.pursuer_speed, std::max(config.target_speed, 1.0));
      const double vT = config.target_speed / vs, vP = config.pursuer_speed / vs;
      double fixed_len = arc_sum;
      for (std::size_t q = 0; q < n; ++q) fixed_len += straights[q];
      const double b0 = config.target.x - hx;
      const double b1 = config.target.y - hy;
      const double b2 = -vT * fixed_len;
      const double a00 = dx * dx + dy * dy + vT * vT;
      const double a01 = -(dx * ex + dy * ey + vT * vP);
      const double a11 = ex * ex + ey * ey + vP * vP;
      const double r0 = dx * b0 + dy * b1 + vT * b2;
      const double r1 = -(ex * b0 + ey * b1 + vP * b2);
      const double det = a00 * a11 - a01 * a01;
      if (std::abs(det) < 1e-14) return out;
      double s = std::max(0.0, (r0 * a11 - a01 * r1) / det);
      double lT = std::max(0.0, (a00 * r1 - a01 * r0) / det);
      straights[n] = s;
      out.lengths = apply_pattern(pattern, arcs, straights, lT);
    }
  }
  const std::vector<double> r = residuals(config, out.lengths);
  out.merit = scaled_residual_norm(config, r);
  out.merit_sq = 0.0;
  const double ls = config.length_scale();
  const double vs = std::max(config.pursuer_speed, std::max(config.target_speed, 1.0));
  for (std::size_t i = 0; i + 1 < r.size(); ++i) out.merit_sq += (r[i] / ls) * (r[i] / ls);
  const double rt = r.back() / (vs * ls);
  out.merit_sq += rt * rt;
  out.objective = objective(out.lengths);
  return out;
}

// Coarse closure-grid pass: the most promising arc combinations, used to
// seed Newton so roots with small basins are not left to luck.
std::vector<std::vector<double>> grid_seed_starts(const ScenarioConfig& config,
                                                  const TurnPattern& pattern, std::size_t count) {
  const std::size_t n = config.obstacle_count();
  const std::size_t dims = n + 1;
  int res = 6;
  if (dims == 1) res = 96;
  else if (dims == 2) res = 40;
  else if (dims == 3) res = 16;
  std::vector<double> caps(dims);
  for (std::size_t k = 0; k < dims; ++k) caps[k] = kTwoPi / config.circle_curvature(k);

  struct Candidate {
    double merit;
    std::vector<double> z;
  };
  std::vector<Candidate> cands;
  std::vector<double> arcs(dims, 0.0);
  std::vector<std::size_t> idx(dims, 0);
  while (true) {
    for (std::size_t k = 0; k < dims; ++k) {
      arcs[k] = caps[k] * (static_cast<double>(idx[k]) + 0.5) / res;
    }
    ClosureEval e = closure_eval(config, pattern, arcs);
    if (std::isfinite(e.merit)) {
      std::vector<double> z(2 * dims + 1);
      for (std::size_t k = 0; k < dims; ++k) z[k] = arcs[k];
      for (std::size_t k = 0; k < dims; ++k) z[dims + k] = e.lengths[3 * k + 2];
      z[2 * dims] = e.lengths.target_length();
      cands.push_back({e.merit, std::move(z)});
    }
    std::size_t d = 0;
    while (d < dims && ++idx[d] == static_cast<std::size_t>(res)) {
      idx[d] = 0;
      ++d;
    }
    if (d == dims) break;
  }
  std::sort(cands.begin(), cands.end(),
            [](const Candidate& a, const Candidate& b) { return a.merit < b.merit; });
  std::vector<std::vector<double>> out;
  for (std::size_t i = 0; i < cands.size() && out.size() < count; ++i) {
    out.push_back(std::move(cands[i].z));
  }
  return out;
}

}  // namespace

std::vector<TurnPattern> enumerate_patterns(std::size_t obstacle_count) {
  const std::size_t circles = obstacle_count + 1;
  std::vector<TurnPattern> out;
  out.reserve(std::size_t{1} << circles);
  for (std::size_t mask = 0; mask < (std::size_t{1} << circles); ++mask) {
    TurnPattern p;
    p.signs.resize(circles);
    for (std::size_t i = 0; i < circles; ++i) {
      p.signs[i] = (mask >> (circles - 1 - i)) & 1 ? Turn::Right : Turn::Left;
    }
    out.push_back(std::move(p));
  }
  return out;
}

PathSolution make_solution(const ScenarioConfig& config, const TurnPattern& pattern,
                           LengthVector lengths) {
  PathSolution s;
  s.pattern = pattern;
  s.objective = objective(lengths);
  s.headings = junction_headings(config, lengths).cumulative;
  s.intercept = target_position(config, lengths.target_length());
  const std::size_t pursuer_segments = lengths.size() - 1;
  s.segment_times.resize(lengths.size());
  double pursuer_time = 0.0;
  for (std::size_t i = 0; i < pursuer_segments; ++i) {
    s.segment_times[i] = lengths[i] / config.pursuer_speed;
    pursuer_time += s.segment_times[i];
  }
  s.total_time = pursuer_time;
  // A static target sits at the intercept point for the whole engagement.
  s.segment_times.back() =
      config.target_speed > 0.0 ? lengths.target_length() / config.target_speed : pursuer_time;
  s.lengths = std::move(lengths);
  return s;
}

PatternSolveResult solve_pattern(const ScenarioConfig& config, const TurnPattern& pattern,
                                 const SolverSettings& settings) {
  const auto t0 = std::chrono::steady_clock::now();
  ReducedSystem sys(config, pattern);
  const std::size_t n = config.obstacle_count();
  const std::size_t dim = sys.dim();
  const Anchors anchors = anchor_distances(config);
  const LowDiscrepancy lds(settings.seed);
  const double scale = config.length_scale();
  const double speed_ratio = config.target_speed / config.pursuer_speed;

  struct Root {
    std::vector<double> z;
    double objective;
    int iterations;
  };
  std::vector<Root> roots;
  PatternDiagnostics diag;
  diag.pattern = pattern;
  diag.residual_norm = std::numeric_limits<double>::infinity();

  // Starts: the best coarse closure-grid points first, then low-discrepancy
  // samples (arcs over their sub-revolution range, straights sized by the
  // inter-center hops, target length by the speed ratio).
  std::vector<std::vector<double>> starts =
      grid_seed_starts(config, pattern, std::max<std::size_t>(8, settings.multistart_count / 2));
  for (int s = 0; s < std::max(1, settings.multistart_count); ++s) {
    std::vector<double> z(dim);
    for (std::size_t k = 0; k <= n; ++k) {
      const double cap = kTwoPi / config.circle_curvature(k);
      z[k] = lds.coord(s, k) * cap * 0.97 + 0.005 * cap;
    }
    for (std::size_t k = 0; k <= n; ++k) {
      z[n + 1 + k] = anchors.hop[k] * (0.2 + 1.6 * lds.coord(s, n + 1 + k));
    }
    z[2 * n + 2] = anchors.direct * (speed_ratio * (0.2 + 2.2 * lds.coord(s, 2 * n + 2)) + 0.01);
    starts.push_back(std::move(z));
  }

  for (std::vector<double>& z : starts) {
    NewtonOutcome res = newton_solve(sys, z, settings);
    ++diag.starts_tried;
    diag.residual_norm = std::min(diag.residual_norm, res.norm);
    if (!res.converged) continue;
    // Only the converged point is screened: negative lengths or an arc at a
    // full revolution make the root infeasible for this pattern.
    bool ok = true;
    for (double& v : z) {
      if (v < -1e-13 * scale) {
        ok = false;
        break;
      }
      if (v < 0.0) v = 0.0;
    }
    if (!ok || !passes_caps(config, std::span<const double>(z.data(), n + 1))) continue;
    const bool duplicate =
        std::any_of(roots.begin(), roots.end(), [&](const Root& r) {
          double d = 0.0;
          for (std::size_t q = 0; q < dim; ++q) d = std::max(d, std::abs(r.z[q] - z[q]));
          return d < 1e-6 * scale;
        });
    if (duplicate) continue;
    double f = 0.0;
    for (double v : z) f += v;
    roots.push_back({z, f, res.iterations});
  }

  PatternSolveResult result;
  if (!roots.empty()) {
    const Root* best = &roots.front();
    for (const Root& r : roots) {
      double arcs_r = 0.0, arcs_b = 0.0;
      for (std::size_t k = 0; k <= n; ++k) {
        arcs_r += r.z[k];
        arcs_b += best->z[k];
      }
      if (r.objective < best->objective - 1e-9 ||
          (std::abs(r.objective - best->objective) <= 1e-9 && arcs_r < arcs_b)) {
        best = &r;
      }
    }
    LengthVector lengths = sys.expand(best->z);
    result.solution = make_solution(config, pattern, std::move(lengths));
    diag.converged = true;
    diag.iterations = best->iterations;
    diag.residual_norm =
        scaled_residual_norm(config, residuals(config, result.solution->lengths));
  }
  diag.roots_found = static_cast<int>(roots.size());
  diag.wall_time_sec = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  result.diagnostics = std::move(diag);
  return result;
}

// ---------------------------------------------------------------------------
// Full both-arc program: augmented Lagrangian outer loop, projected
// Barzilai-Borwein descent inside, Newton polish on the induced pattern.

namespace {

struct BoxBounds {
  std::vector<double> lo, hi;
};

BoxBounds full_box(const ScenarioConfig& config) {
  const std::size_t n = config.obstacle_count();
  const std::size_t dim = LengthVector::dimension_for(n);
  const Anchors anchors = anchor_distances(config);
  double reach = anchors.direct;
  for (double d : anchors.hop) reach += d;
  BoxBounds box;
  box.lo.assign(dim, 0.0);
  box.hi.assign(dim, 40.0 * reach);
  for (std::size_t k = 0; k <= n; ++k) {
    const double cap = (kTwoPi - 1e-7) / config.circle_curvature(k);
    box.hi[3 * k] = cap;
    box.hi[3 * k + 1] = cap;
  }
  return box;
}

void project_box(std::vector<double>& w, const BoxBounds& box) {
  for (std::size_t i = 0; i < w.size(); ++i) w[i] = std::clamp(w[i], box.lo[i], box.hi[i]);
}

double augmented_value(const ScenarioConfig& config, const LengthVector& w,
                       const std::vector<double>& lambda, double mu, std::vector<double>& r) {
  r = residuals(config, w);
  double val = objective(w);
  for (std::size_t i = 0; i < r.size(); ++i) val += lambda[i] * r[i] + 0.5 * mu * r[i] * r[i];
  return val;
}

std::vector<double> augmented_gradient(const ScenarioConfig& config, const LengthVector& w,
                                       const std::vector<double>& lambda, double mu,
                                       const std::vector<double>& r) {
  const auto J = residual_jacobian(config, w);
  std::vector<double> g(w.size(), 1.0);  // d objective / d length = 1
  for (std::size_t i = 0; i < r.size(); ++i) {
    const double c = lambda[i] + mu * r[i];
    for (std::size_t m = 0; m < w.size(); ++m) g[m] += c * J[i][m];
  }
  return g;
}

}  // namespace

PatternSolveResult solve_full_nlp(const ScenarioConfig& config, const SolverSettings& settings) {
  const auto t0 = std::chrono::steady_clock::now();
  const std::size_t n = config.obstacle_count();
  const std::size_t dim = LengthVector::dimension_for(n);
  const BoxBounds box = full_box(config);
  const Anchors anchors = anchor_distances(config);
  const LowDiscrepancy lds(splitmix64(settings.seed ^ 0x51f4a11eULL));
  const double scale = config.length_scale();
  const double speed_ratio = config.target_speed / config.pursuer_speed;

  PatternDiagnostics diag;
  diag.residual_norm = std::numeric_limits<double>::infinity();
  std::optional<PathSolution> best;

  const int starts = std::max(1, std::min(settings.multistart_count, 12));
  for (int s = 0; s < starts; ++s) {
    ++diag.starts_tried;
    std::vector<double> w(dim, 0.0);
    for (std::size_t k = 0; k <= n; ++k) {
      const double cap = kTwoPi / config.circle_curvature(k);
      const double arc = lds.coord(s, k) * cap * 0.9 + 0.01 * cap;
      // seed one side of each pair, alternating with the start index
      if (((s >> k) & 1) == 0) {
        w[3 * k] = arc;
      } else {
        w[3 * k + 1] = arc;
      }
      w[3 * k + 2] = anchors.hop[k] * (0.2 + 1.6 * lds.coord(s, n + 1 + k));
    }
    w[3 * n + 3] = anchors.direct * (speed_ratio * (0.2 + 2.2 * lds.coord(s, 2 * n + 2)) + 0.01);
    project_box(w, box);

    std::vector<double> lambda(2 * n + 3, 0.0);
    double mu = 10.0 / scale;
    double prev_cnorm = std::numeric_limits<double>::infinity();
    LengthVector wl(w);
    std::vector<double> r;

    for (int outer = 0; outer < 18; ++outer) {
      // inner projected BB descent on the augmented Lagrangian
      double val = augmented_value(config, wl, lambda, mu, r);
      std::vector<double> g = augmented_gradient(config, wl, lambda, mu, r);
      double step = 1.0 / std::max(1.0, mu);
      std::vector<double> w_prev = wl.values, g_prev = g;
      for (int inner = 0; inner < 400; ++inner) {
        std::vector<double> w_try(dim);
        double t = step;
        double val_try = std::numeric_limits<double>::infinity();
        std::vector<double> r_try;
        for (int bt = 0; bt < 40; ++bt) {
          for (std::size_t i = 0; i < dim; ++i) w_try[i] = wl.values[i] - t * g[i];
          project_box(w_try, box);
          LengthVector cand(w_try);
          val_try = augmented_value(config, cand, lambda, mu, r_try);
          if (std::isfinite(val_try) && val_try <= val - 1e-12 * std::abs(val)) break;
          t *= 0.5;
        }
        if (!std::isfinite(val_try) || val_try > val) break;
        w_prev = wl.values;
        g_prev = g;
        wl.values = w_try;
        val = val_try;
        r = r_try;
        g = augmented_gradient(config, wl, lambda, mu, r);
        // BB1 step from the last displacement
        double sy = 0.0, ss = 0.0;
        for (std::size_t i = 0; i < dim; ++i) {
          const double si = wl.values[i] - w_prev[i];
          sy += si * (g[i] - g_prev[i]);
          ss += si * si;
        }
        step = (sy > 1e-300) ? ss / sy : step * 2.0;
        step = std::clamp(step, 1e-12, 1e6);
        // projected-gradient stationarity
        double pg = 0.0;
        for (std::size_t i = 0; i < dim; ++i) {
          const double moved = std::clamp(wl.values[i] - g[i], box.lo[i], box.hi[i]);
          pg = std::max(pg, std::abs(moved - wl.values[i]));
        }
        if (pg < 1e-10 * scale) break;
      }
      const double cnorm = scaled_residual_norm(config, r);
      diag.residual_norm = std::min(diag.residual_norm, cnorm);
      if (cnorm <= 1e-9) break;
      for (std::size_t i = 0; i < r.size(); ++i) lambda[i] += mu * r[i];
      if (cnorm > 0.25 * prev_cnorm) mu = std::min(mu * 8.0, 1e14);
      prev_cnorm = cnorm;
    }

    // Read the active pattern off the both-arc point and polish it with the
    // square-system solver so the result meets residual_tol exactly.
    TurnPattern pat;
    pat.signs.resize(n + 1);
    std::vector<double> z(2 * n + 3);
    for (std::size_t k = 0; k <= n; ++k) {
      const double left = wl[3 * k], right = wl[3 * k + 1];
      pat.signs[k] = right > left ? Turn::Right : Turn::Left;
      z[k] = std::max(left, right);
      z[n + 1 + k] = wl[3 * k + 2];
    }
    z[2 * n + 2] = wl[3 * n + 3];
    ReducedSystem sys(config, pat);
    SolverSettings polish = settings;
    polish.newton_max_iter = 60;
    NewtonOutcome res = newton_solve(sys, z, polish);
    if (!res.converged) continue;
    bool ok = true;
    for (double& v : z) {
      if (v < -1e-13 * scale) {
        ok = false;
        break;
      }
      if (v < 0.0) v = 0.0;
    }
    if (!ok || !passes_caps(config, std::span<const double>(z.data(), n + 1))) continue;
    PathSolution cand = make_solution(config, pat, sys.expand(z));
    diag.residual_norm = std::min(
        diag.residual_norm, scaled_residual_norm(config, residuals(config, cand.lengths)));
    if (!best || cand.objective < best->objective - 1e-9) {
      best = std::move(cand);
      diag.iterations = res.iterations;
    }
  }

  PatternSolveResult result;
  if (best) {
    diag.converged = true;
    diag.pattern = best->pattern;
    diag.roots_found = 1;
  }
  diag.wall_time_sec = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  result.solution = std::move(best);
  result.diagnostics = std::move(diag);
  return result;
}

namespace {

bool better_solution(const PathSolution& a, const PathSolution& b) {
  if (a.objective < b.objective - 1e-9) return true;
  if (b.objective < a.objective - 1e-9) return false;
  if (a.pattern < b.pattern) return true;
  if (b.pattern < a.pattern) return false;
  auto total_arcs = [](const PathSolution& s) {
    double t = 0.0;
    for (std::size_t k = 0; 3 * k + 1 < s.lengths.size(); ++k) {
      t += s.lengths[3 * k] + s.lengths[3 * k + 1];
    }
    return t;
  };
  return total_arcs(a) < total_arcs(b);
}

}  // namespace

PlanReport plan(const ScenarioConfig& config, const SolverSettings& settings) {
  PlanReport report;
  if (settings.mode != SolveMode::FullNlp) {
    for (const TurnPattern& pattern : enumerate_patterns(config.obstacle_count())) {
      PatternSolveResult r = solve_pattern(config, pattern, settings);
      report.diagnostics.push_back(r.diagnostics);
      if (r.solution) report.all_feasible.push_back(std::move(*r.solution));
    }
  }
  if (settings.mode != SolveMode::PatternNewton) {
    PatternSolveResult r = solve_full_nlp(config, settings);
    report.diagnostics.push_back(r.diagnostics);
    if (r.solution) {
      const bool have_pattern = std::any_of(
          report.all_feasible.begin(), report.all_feasible.end(),
          [&](const PathSolution& s) { return s.pattern == r.solution->pattern; });
      if (!have_pattern) report.all_feasible.push_back(std::move(*r.solution));
    }
  }
  for (const PathSolution& s : report.all_feasible) {
    if (!report.best || better_solution(s, *report.best)) report.best = s;
  }
  return report;
}

// ---------------------------------------------------------------------------
// Grid oracle. Independent of the Newton path: the straight lengths come
// from the linear structure of the residuals, the arcs from exhaustive
// search plus coordinate descent. No Jacobians, no Newton steps.

std::optional<PathSolution> grid_oracle(const ScenarioConfig& config, int resolution) {
  if (resolution < 8) throw std::invalid_argument("oracle resolution must be at least 8");
  const std::size_t n = config.obstacle_count();
  const std::size_t arc_dims = n + 1;
  std::vector<double> caps(arc_dims);
  for (std::size_t k = 0; k < arc_dims; ++k) caps[k] = kTwoPi / config.circle_curvature(k);

  const double grid_tol = 6.0 / resolution;   // admits the basin, not the answer
  const double accept_tol = 1e-8;             // feasibility after refinement

  std::optional<PathSolution> best;
  for (const TurnPattern& pattern : enumerate_patterns(n)) {
    // Exhaustive scan. Several candidates per pattern get refined: the
    // closest-to-feasible point plus the lowest objectives among the
    // near-feasible ones (a single loosely-feasible "best" can be a
    // degenerate corner whose refinement goes nowhere).
    struct Candidate {
      double objective;
      std::vector<double> arcs;
    };
    std::vector<double> arcs(arc_dims, 0.0);
    std::vector<std::size_t> idx(arc_dims, 0);
    double best_merit = std::numeric_limits<double>::infinity();
    std::vector<double> best_merit_arcs;
    std::vector<Candidate> by_objective;
    const std::size_t keep = 8;
    while (true) {
      for (std::size_t k = 0; k < arc_dims; ++k) {
        arcs[k] = caps[k] * static_cast<double>(idx[k]) / resolution;
      }
      ClosureEval e = closure_eval(config, pattern, arcs);
      if (e.merit < best_merit) {
        best_merit = e.merit;
        best_merit_arcs = arcs;
      }
      if (e.merit <= grid_tol) {
        if (by_objective.size() < keep) {
          by_objective.push_back({e.objective, arcs});
          std::push_heap(by_objective.begin(), by_objective.end(),
                         [](const Candidate& a, const Candidate& b) {
                           return a.objective < b.objective;
                         });
        } else if (e.objective < by_objective.front().objective) {
          std::pop_heap(by_objective.begin(), by_objective.end(),
                        [](const Candidate& a, const Candidate& b) {
                          return a.objective < b.objective;
                        });
          by_objective.back() = {e.objective, arcs};
          std::push_heap(by_objective.begin(), by_objective.end(),
                         [](const Candidate& a, const Candidate& b) {
                           return a.objective < b.objective;
                         });
        }
      }
      std::size_t d = 0;
      while (d < arc_dims && ++idx[d] == static_cast<std::size_t>(resolution)) {
        idx[d] = 0;
        ++d;
      }
      if (d == arc_dims) break;
    }
    std::vector<std::vector<double>> candidates;
    if (!best_merit_arcs.empty() && best_merit <= grid_tol) candidates.push_back(best_merit_arcs);
    for (const Candidate& c : by_objective) candidates.push_back(c.arcs);
    if (candidates.empty()) continue;

    // Derivative-free polish of the best grid point: Nelder-Mead on the
    // arcs (the closure supplies the rest), clamped to the sub-revolution
    // box. Restarted once with a fresh simplex to escape degeneracy.
    auto clamp_arcs = [&](std::vector<double>& a) {
      for (std::size_t k = 0; k < arc_dims; ++k) {
        a[k] = std::clamp(a[k], 0.0, caps[k] * (1.0 - 1e-9));
      }
    };
    auto score = [&](std::vector<double> a) {
      clamp_arcs(a);
      return closure_eval(config, pattern, a).merit_sq;
    };
    auto refine = [&](const std::vector<double>& cand_arcs) {
      std::vector<double> cur = cand_arcs;
      for (int attempt = 0; attempt < 2; ++attempt) {
        const std::size_t m = arc_dims;
        std::vector<std::vector<double>> simplex(m + 1, cur);
        std::vector<double> fval(m + 1);
        const double h0 = (attempt == 0 ? 1.0 : 0.1) / resolution;
        for (std::size_t k = 0; k < m; ++k) simplex[k + 1][k] += h0 * caps[k];
        for (std::size_t i = 0; i <= m; ++i) fval[i] = score(simplex[i]);
        for (int it = 0; it < 800; ++it) {
          std::size_t lo = 0, hi = 0, hi2 = 0;
          for (std::size_t i = 1; i <= m; ++i) {
            if (fval[i] < fval[lo]) lo = i;
            if (fval[i] > fval[hi]) hi = i;
          }
          for (std::size_t i = 0; i <= m; ++i) {
            if (i != hi && fval[i] > fval[hi2]) hi2 = i;
          }
          if (fval[lo] < 1e-26 || fval[hi] - fval[lo] < 1e-30) break;
          std::vector<double> centroid(m, 0.0);
          for (std::size_t i = 0; i <= m; ++i) {
            if (i == hi) continue;
            for (std::size_t k = 0; k < m; ++k) centroid[k] += simplex[i][k] / m;
          }
          auto blend = [&](double t) {
            std::vector<double> p(m);
            for (std::size_t k = 0; k < m; ++k) p[k] = centroid[k] + t * (simplex[hi][k] - centroid[k]);
            clamp_arcs(p);
            return p;
          };
          std::vector<double> refl = blend(-1.0);
          double f_refl = score(refl);
          if (f_refl < fval[lo]) {
            std::vector<double> expand = blend(-2.0);
            double f_expand = score(expand);
            if (f_expand < f_refl) {
              simplex[hi] = expand;
              fval[hi] = f_expand;
            } else {
              simplex[hi] = refl;
              fval[hi] = f_refl;
            }
          } else if (f_refl < fval[hi2]) {
            simplex[hi] = refl;
            fval[hi] = f_refl;
          } else {
            std::vector<double> contract = blend(0.5);
            double f_contract = score(contract);
            if (f_contract < fval[hi]) {
              simplex[hi] = contract;
              fval[hi] = f_contract;
            } else {
              for (std::size_t i = 0; i <= m; ++i) {
                if (i == lo) continue;
                for (std::size_t k = 0; k < m; ++k) {
                  simplex[i][k] = simplex[lo][k] + 0.5 * (simplex[i][k] - simplex[lo][k]);
                }
                fval[i] = score(simplex[i]);
              }
            }
          }
        }
        std::size_t lo = 0;
        for (std::size_t i = 1; i <= m; ++i) {
          if (fval[i] < fval[lo]) lo = i;
        }
        cur = simplex[lo];
        clamp_arcs(cur);
        if (closure_eval(config, pattern, cur).merit <= accept_tol) break;
        }
      return closure_eval(config, pattern, cur);
    };
    for (const std::vector<double>& cand_arcs : candidates) {
      const ClosureEval refined = refine(cand_arcs);
      if (refined.merit > accept_tol) continue;
      if (!refined.lengths.all_nonnegative()) continue;
      PathSolution sol = make_solution(config, pattern, refined.lengths);
      if (!best || sol.objective < best->objective) best = std::move(sol);
    }
  }
  return best;
}

}  // namespace cspath
