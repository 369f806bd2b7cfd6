#include "wave3d/analysis.hpp"

#include <algorithm>
#include <cmath>

#include "wave3d/errors.hpp"

namespace wave3d {

void HolderWindow::validate(const TorusGrid& grid) const {
  if (!(rho > 0.0 && rho < 1.0)) throw ConfigError("window: rho must lie in (0,1)");
  if (!(t0 > 0.0 && t0 < grid.T)) throw ConfigError("window: t0 must lie in (0,T)");
  if (!(K_half > 0.0)) throw ConfigError("window: K must be nonempty");
  // wraparound safety: K expanded by T - t0 stays inside the fundamental domain
  if (2.0 * K_half + 2.0 * (grid.T - t0) > grid.L)
    throw ConfigError("window: K expanded by T - t0 leaves the fundamental domain");
}

WindowGrid build_window(const Trajectory& traj, const HolderWindow& window) {
  window.validate(traj.grid);
  const TorusGrid& g = traj.grid;
  WindowGrid wg;
  for (std::size_t i = 0; i < traj.save_times.size(); ++i) {
    if (traj.save_times[i] >= window.t0 - 1e-12 * g.T) {
      wg.frame_indices.push_back(static_cast<int>(i));
      wg.times.push_back(traj.save_times[i]);
    }
  }
  if (wg.times.empty()) throw ConfigError("window: no saved frames inside [t0, T]");
  const double center = 0.5 * g.L;
  const double dx = g.dx();
  std::vector<int> pts;
  for (int a = 0; a < g.N; ++a)
    if (std::abs(a * dx - center) <= window.K_half + 1e-12) pts.push_back(a);
  if (pts.empty()) throw ConfigError("window: K contains no grid points");
  wg.axis_points = {pts, pts, pts};
  for (int a : pts)
    for (int b : pts)
      for (int c : pts) {
        wg.flat_points.push_back(g.index(a, b, c));
        wg.coords.push_back({a * dx, b * dx, c * dx});
      }
  return wg;
}

std::vector<std::vector<double>> window_samples(const Trajectory& traj,
                                                const WindowGrid& wg) {
  std::vector<std::vector<double>> out(wg.times.size());
  for (std::size_t ti = 0; ti < wg.times.size(); ++ti) {
    const auto& frame = traj.u[wg.frame_indices[ti]];
    out[ti].resize(wg.n_points());
    for (std::size_t pi = 0; pi < wg.n_points(); ++pi) out[ti][pi] = frame[wg.flat_points[pi]];
  }
  return out;
}

namespace {

std::vector<int> dyadic_offsets(int extent) {
  std::vector<int> offs{0};
  for (int d = 1; d < extent; d *= 2) {
    offs.push_back(d);
    offs.push_back(-d);
  }
  return offs;
}

}  // namespace

double holder_norm(const std::vector<std::vector<double>>& values, const WindowGrid& wg,
                   const TorusGrid& grid, double rho, std::size_t pair_cap) {
  if (!(rho > 0.0 && rho < 1.0)) throw ConfigError("holder_norm: rho must lie in (0,1)");
  const int nt = static_cast<int>(wg.times.size());
  const int na = static_cast<int>(wg.axis_points[0].size());
  const int nb = static_cast<int>(wg.axis_points[1].size());
  const int nc = static_cast<int>(wg.axis_points[2].size());
  const double dx = grid.dx();

  double sup_abs = 0.0;
  for (const auto& row : values)
    for (double v : row) sup_abs = std::max(sup_abs, std::abs(v));

  const auto t_offs = dyadic_offsets(nt);
  const auto a_offs = dyadic_offsets(na);
  const auto b_offs = dyadic_offsets(nb);
  const auto c_offs = dyadic_offsets(nc);

  // First pass: count admissible pairs to fix the deterministic stride.
  std::size_t total = 0;
  std::vector<std::array<int, 4>> combos;
  for (int dt : t_offs) {
    if (dt < 0) continue;  // time offsets oriented forward
    for (int da : a_offs)
      for (int db : b_offs)
        for (int dc : c_offs) {
          if (dt == 0 && da == 0 && db == 0 && dc == 0) continue;
          if (dt == 0) {
            // canonical orientation for pure-space pairs
            if (da < 0) continue;
            if (da == 0 && db < 0) continue;
            if (da == 0 && db == 0 && dc < 0) continue;
          }
          const std::size_t n_base =
              static_cast<std::size_t>(nt - dt) * (na - std::abs(da)) * (nb - std::abs(db)) *
              (nc - std::abs(dc));
          if (n_base == 0) continue;
          combos.push_back({dt, da, db, dc});
          total += n_base;
        }
  }
  if (combos.empty()) throw ConfigError("holder_norm: empty pair set");
  const std::size_t stride = total > pair_cap ? (total + pair_cap - 1) / pair_cap : 1;

  double sup_ratio = 0.0;
  std::size_t counter = 0;
  auto point_index = [&](int a, int b, int c) {
    return static_cast<std::size_t>((a * nb + b) * nc + c);
  };
  for (const auto& combo : combos) {
    const int dt = combo[0], da = combo[1], db = combo[2], dc = combo[3];
    const double sep_t = dt * (nt > 1 ? wg.times[1] - wg.times[0] : 0.0);
    const double sep_x =
        dx * std::sqrt(static_cast<double>(da) * da + static_cast<double>(db) * db +
                       static_cast<double>(dc) * dc);
    const double denom = std::pow(sep_t + sep_x, rho);
    const int a_lo = std::max(0, -da), a_hi = na - std::max(0, da);
    const int b_lo = std::max(0, -db), b_hi = nb - std::max(0, db);
    const int c_lo = std::max(0, -dc), c_hi = nc - std::max(0, dc);
    for (int t = 0; t + dt < nt; ++t) {
      const auto& row0 = values[t];
      const auto& row1 = values[t + dt];
      for (int a = a_lo; a < a_hi; ++a)
        for (int b = b_lo; b < b_hi; ++b)
          for (int c = c_lo; c < c_hi; ++c) {
            if (counter++ % stride) continue;
            const double d =
                std::abs(row1[point_index(a + da, b + db, c + dc)] - row0[point_index(a, b, c)]);
            if (d > sup_ratio * denom) sup_ratio = d / denom;
          }
    }
  }
  return sup_abs + sup_ratio;
}

double holder_norm_allpairs(const std::vector<std::vector<double>>& values,
                            const WindowGrid& wg, double rho) {
  const std::size_t nt = wg.times.size();
  const std::size_t np = wg.n_points();
  double sup_abs = 0.0;
  for (const auto& row : values)
    for (double v : row) sup_abs = std::max(sup_abs, std::abs(v));
  double sup_ratio = 0.0;
  for (std::size_t t1 = 0; t1 < nt; ++t1)
    for (std::size_t p1 = 0; p1 < np; ++p1)
      for (std::size_t t2 = t1; t2 < nt; ++t2)
        for (std::size_t p2 = (t2 == t1 ? p1 + 1 : 0); p2 < np; ++p2) {
          const double sept = std::abs(wg.times[t2] - wg.times[t1]);
          const auto &x1 = wg.coords[p1], &x2 = wg.coords[p2];
          const double sepx = std::sqrt((x2[0] - x1[0]) * (x2[0] - x1[0]) +
                                        (x2[1] - x1[1]) * (x2[1] - x1[1]) +
                                        (x2[2] - x1[2]) * (x2[2] - x1[2]));
          const double d = std::abs(values[t2][p2] - values[t1][p1]);
          sup_ratio = std::max(sup_ratio, d / std::pow(sept + sepx, rho));
        }
  return sup_abs + sup_ratio;
}

MomentReport lp_moment(const std::vector<double>& samples, double p) {
  if (samples.size() < 30)
    throw InsufficientDataError("lp_moment: need at least 30 replicas");
  const std::size_t n = samples.size();
  double sum = 0.0;
  std::vector<double> powd(n);
  for (std::size_t i = 0; i < n; ++i) {
    powd[i] = std::pow(std::abs(samples[i]), p);
    sum += powd[i];
  }
  const double mean = sum / static_cast<double>(n);
  double jack = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double leave_out = (sum - powd[i]) / static_cast<double>(n - 1);
    jack += (leave_out - mean) * (leave_out - mean);
  }
  MomentReport r;
  r.p = p;
  r.estimate = mean;
  r.stderr_jackknife = std::sqrt(jack * static_cast<double>(n - 1) / static_cast<double>(n));
  r.replicas = n;
  return r;
}

double ks_statistic(std::vector<double> a, std::vector<double> b) {
  if (a.empty() || b.empty()) throw InsufficientDataError("ks_statistic: empty sample");
  std::sort(a.begin(), a.end());
  std::sort(b.begin(), b.end());
  const double na = static_cast<double>(a.size()), nb = static_cast<double>(b.size());
  std::size_t i = 0, j = 0;
  double d = 0.0;
  while (i < a.size() && j < b.size()) {
    const double x = std::min(a[i], b[j]);
    while (i < a.size() && a[i] <= x) ++i;
    while (j < b.size() && b[j] <= x) ++j;
    d = std::max(d, std::abs(i / na - j / nb));
  }
  return d;
}

double ks_critical(std::size_t n, std::size_t m, double alpha) {
  const double c = std::sqrt(-0.5 * std::log(alpha / 2.0));
  return c * std::sqrt((static_cast<double>(n) + m) / (static_cast<double>(n) * m));
}

double fit_slope(const std::vector<double>& x, const std::vector<double>& y) {
  if (x.size() != y.size() || x.size() < 2) throw ParameterError("fit_slope: need >= 2 points");
  const double n = static_cast<double>(x.size());
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sx += x[i];
    sy += y[i];
    sxx += x[i] * x[i];
    sxy += x[i] * y[i];
  }
  return (n * sxy - sx * sy) / (n * sxx - sx * sx);
}

ScalingFit increment_scaling(const std::vector<const Trajectory*>& ensemble, double p,
                             IncrementMode mode, const std::vector<int>& band, double t_eval,
                             const HolderWindow& window, const std::vector<double>* weights) {
  if (ensemble.empty()) throw InsufficientDataError("increment_scaling: empty ensemble");
  for (int s : band)
    if (s <= 0) throw ConfigError("increment_scaling: separations must be positive");
  const TorusGrid& grid = ensemble.front()->grid;
  const WindowGrid wg = build_window(*ensemble.front(), window);
  const int na = static_cast<int>(wg.axis_points[0].size());

  ScalingFit fit;
  std::vector<double> lx, ly;
  for (int s : band) {
    double acc = 0.0, wsum = 0.0;
    for (std::size_t r = 0; r < ensemble.size(); ++r) {
      const Trajectory& traj = *ensemble[r];
      const double w = weights ? (*weights)[r] : 1.0;
      double local = 0.0;
      std::size_t cnt = 0;
      if (mode == IncrementMode::Space) {
        if (s >= grid.N) continue;
        const auto& frame = traj.frame_at_time(t_eval);
        // axis-aligned lags in grid units, all three axes pooled; pairs never
        // wrap around the torus
        for (int axis = 0; axis < 3; ++axis) {
          const int alim = axis == 0 ? grid.N - s : grid.N;
          const int blim = axis == 1 ? grid.N - s : grid.N;
          const int clim = axis == 2 ? grid.N - s : grid.N;
          for (int a = 0; a < alim; ++a)
            for (int b = 0; b < blim; ++b)
              for (int c = 0; c < clim; ++c) {
                const int aa = axis == 0 ? a + s : a;
                const int bb = axis == 1 ? b + s : b;
                const int cc = axis == 2 ? c + s : c;
                const double d = frame[grid.index(aa, bb, cc)] - frame[grid.index(a, b, c)];
                local += std::pow(std::abs(d), p);
                ++cnt;
              }
        }
      } else {
        const int nt = static_cast<int>(wg.times.size());
        if (s >= nt) continue;
        const auto vals = window_samples(traj, wg);
        for (int t = 0; t + s < nt; ++t)
          for (std::size_t pi = 0; pi < wg.n_points(); ++pi) {
            const double d = vals[t + s][pi] - vals[t][pi];
            local += std::pow(std::abs(d), p);
            ++cnt;
          }
      }
      if (cnt) {
        acc += w * local / static_cast<double>(cnt);
        wsum += w;
      }
    }
    if (wsum == 0.0) continue;
    const double sep =
        mode == IncrementMode::Space ? s * grid.dx() : s * (wg.times[1] - wg.times[0]);
    const double moment = acc / wsum;
    fit.rows.push_back({sep, moment});
    lx.push_back(std::log(sep));
    ly.push_back(std::log(moment));
  }
  (void)na;
  if (lx.size() < 2) throw InsufficientDataError("increment_scaling: not enough separations");
  fit.slope = fit_slope(lx, ly);
  fit.exponent = fit.slope / p;
  return fit;
}

std::vector<TranslationRow> translation_invariance_test(
    const std::vector<double>& base, const std::vector<std::vector<double>>& shifted,
    const std::vector<std::array<int, 3>>& shifts, double alpha) {
  if (base.size() < 1000)
    throw InsufficientDataError("translation_invariance_test: need >= 1000 replicas");
  if (shifted.size() != shifts.size())
    throw ParameterError("translation_invariance_test: shift/sample mismatch");
  std::vector<TranslationRow> rows;
  for (std::size_t si = 0; si < shifts.size(); ++si) {
    TranslationRow r;
    r.shift = shifts[si];
    r.ks = ks_statistic(base, shifted[si]);
    r.critical = ks_critical(base.size(), shifted[si].size(), alpha);
    r.pass = r.ks < r.critical;
    rows.push_back(r);
  }
  return rows;
}

ConvergenceReport make_convergence_report(const std::vector<int>& levels,
                                          const std::vector<std::vector<double>>& distances,
                                          const std::vector<std::vector<double>>& indicators,
                                          double p) {
  if (levels.size() != distances.size() || levels.size() != indicators.size())
    throw ParameterError("convergence report: shape mismatch");
  for (std::size_t i = 1; i < levels.size(); ++i)
    if (levels[i] <= levels[i - 1])
      throw ParameterError("convergence report: levels must be strictly increasing");
  ConvergenceReport rep;
  rep.levels = levels;
  rep.p = p;

  // lambda: median distance at the coarsest level
  std::vector<double> first = distances.front();
  std::sort(first.begin(), first.end());
  rep.lambda = first[first.size() / 2];

  std::vector<double> lx, ly;
  for (std::size_t li = 0; li < levels.size(); ++li) {
    const auto& d = distances[li];
    const auto& ind = indicators[li];
    double loc = 0.0, plain = 0.0, tail = 0.0;
    for (std::size_t r = 0; r < d.size(); ++r) {
      const double dp = std::pow(d[r], p);
      plain += dp;
      loc += dp * ind[r];
      tail += d[r] > rep.lambda ? 1.0 : 0.0;
    }
    const double n = static_cast<double>(d.size());
    rep.localized_moment.push_back(loc / n);
    rep.plain_moment.push_back(plain / n);
    rep.tail_probability.push_back(tail / n);
    lx.push_back(levels[li]);
    ly.push_back(std::log2(std::max(loc / n, 1e-300)));
  }
  rep.fitted_log2_slope = fit_slope(lx, ly);
  return rep;
}

}  // namespace wave3d
