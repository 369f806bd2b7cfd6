#include "wave3d/solver.hpp"

#include <algorithm>
#include <cmath>
#include <cstring>
#include <fstream>
#include <numbers>

#include "json.hpp"
#include "wave3d/errors.hpp"

namespace wave3d {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

bool is_pow2(int x) { return x > 0 && (x & (x - 1)) == 0; }

int int_log2(int x) {
  int l = 0;
  while ((1 << l) < x) ++l;
  return l;
}

// Per-mode propagator and source filters for one step width.
struct ModeTables {
  std::vector<double> omega, cos_th, s1, s2, wsin;

  ModeTables(const TorusGrid& grid, double tau) {
    const auto xi = grid.xi_abs_table();
    const std::size_t n = grid.size();
    omega.resize(n);
    cos_th.resize(n);
    s1.resize(n);
    s2.resize(n);
    wsin.resize(n);
    for (std::size_t f = 0; f < n; ++f) {
      const double w = kTwoPi * xi[f];
      omega[f] = w;
      if (w == 0.0) {
        cos_th[f] = 1.0;
        s1[f] = tau;
        s2[f] = 0.5 * tau * tau;
        wsin[f] = 0.0;
      } else {
        const double th = w * tau;
        cos_th[f] = std::cos(th);
        const double sh = std::sin(0.5 * th);
        s1[f] = std::sin(th) / w;
        s2[f] = 2.0 * sh * sh / (w * w);
        wsin[f] = w * std::sin(th);
      }
    }
  }
};

struct StepEngine {
  const TorusGrid& grid;
  const NoiseModel& model;
  const BasisIndex& basis;
  const Coefficients& coeffs;
  const DriveSpec& drive;
  std::uint64_t seed;
  Fft3D& fft;
  bool dealias;

  std::size_t n_dirs_noise = 0;
  std::size_t n_dirs_wz = 0;
  std::vector<std::vector<double>> leaves;  // per direction, per step
  ModeTables tables;
  std::vector<char> dealias_mask;

  // scratch
  std::vector<std::complex<double>> hat_buf;
  std::vector<double> field;
  std::vector<double> impulse_phys;
  std::vector<double> drift_phys;
  std::vector<double> inc;

  StepEngine(const TorusGrid& g, const NoiseModel& m, const BasisIndex& b,
             const Coefficients& c, const DriveSpec& d, std::uint64_t s, Fft3D& f,
             bool deal)
      : grid(g), model(m), basis(b), coeffs(c), drive(d), seed(s), fft(f), dealias(deal),
        tables(g, g.dt()) {
    drive.validate(basis.count());
    if (drive.stochastic && !coeffs.A.is_zero()) {
      if (!is_pow2(grid.steps))
        throw ConfigError("solve: stochastic drive requires a power-of-two step count");
      n_dirs_noise = drive.noise_truncation < 0
                         ? basis.count()
                         : std::min<std::size_t>(drive.noise_truncation, basis.count());
      const int step_level = int_log2(grid.steps);
      leaves.resize(n_dirs_noise);
      for (std::size_t j = 1; j <= n_dirs_noise; ++j)
        leaves[j - 1] = bridge_increments(seed, j, grid.T, step_level);
    }
    if (drive.wz_level && !coeffs.B.is_zero()) {
      if (grid.steps % (1 << *drive.wz_level) != 0)
        throw ConfigError("solve: dt must divide the dyadic cell width of wz_level");
      if (drive.tableau->level != *drive.wz_level)
        throw ConfigError("solve: tableau level must equal wz_level");
      n_dirs_wz = std::min<std::size_t>(
          std::min<int>(*drive.wz_level, drive.tableau->truncation), basis.count());
    }
    if (drive.shifted) {
      if (drive.tableau->level != drive.shift_level)
        throw ConfigError("solve: tableau level must equal the shift level");
      if (grid.steps % (1 << drive.shift_level) != 0)
        throw ConfigError("solve: dt must divide the dyadic cell width of the shift level");
    }
    if (dealias) {
      dealias_mask.resize(grid.size());
      const int cutoff = grid.N / 3;
      for (std::size_t f = 0; f < grid.size(); ++f) {
        const auto k = grid.signed_modes(f);
        dealias_mask[f] =
            (std::abs(k[0]) > cutoff || std::abs(k[1]) > cutoff || std::abs(k[2]) > cutoff) ? 0
                                                                                            : 1;
      }
    }
    hat_buf.resize(grid.size());
    field.resize(grid.size());
    impulse_phys.resize(grid.size());
    drift_phys.resize(grid.size());
  }

  bool chanA() const { return drive.stochastic && !coeffs.A.is_zero(); }
  bool chanB() const { return drive.wz_level.has_value() && !coeffs.B.is_zero(); }
  bool chanD() const { return !drive.control.empty() && !coeffs.D.is_zero(); }
  bool chanDrift() const { return !coeffs.b.is_zero(); }

  bool needs_u_phys() const {
    return (chanA() && !coeffs.A.is_constant()) || (chanB() && !coeffs.B.is_constant()) ||
           (chanD() && !coeffs.D.is_constant()) || (chanDrift() && !coeffs.b.is_constant());
  }

  // Physical increment field of one basis-resolved channel.
  void channel_field(std::span<const double> increments) {
    std::fill(hat_buf.begin(), hat_buf.end(), std::complex<double>{0.0, 0.0});
    accumulate_source_field(basis, increments, grid, hat_buf);
    fft.backward(hat_buf);
    const double inv_vol = 1.0 / grid.volume();
    for (std::size_t x = 0; x < grid.size(); ++x) field[x] = hat_buf[x].real() * inv_vol;
  }

  void add_product(const Coefficient& coef, const std::vector<double>* u_phys) {
    if (coef.is_constant()) {
      const double c = coef(0.0);
      for (std::size_t x = 0; x < grid.size(); ++x) impulse_phys[x] += c * field[x];
    } else {
      for (std::size_t x = 0; x < grid.size(); ++x)
        impulse_phys[x] += coef((*u_phys)[x]) * field[x];
    }
  }

  // Assemble spectral sources for the step starting at t_i = i dt. Returns the
  // impulse source in `simp_hat` and the drift rate in `drift_hat` (either may
  // stay empty when inactive).
  void sources(int i, const std::vector<double>* u_phys,
               std::vector<std::complex<double>>& simp_hat,
               std::vector<std::complex<double>>& drift_hat) {
    const double dt = grid.dt();
    const double t_i = i * dt;
    bool any_imp = false;
    std::fill(impulse_phys.begin(), impulse_phys.end(), 0.0);

    if (chanA()) {
      inc.assign(n_dirs_noise, 0.0);
      for (std::size_t j = 1; j <= n_dirs_noise; ++j) inc[j - 1] = leaves[j - 1][i];
      if (drive.shifted) {
        for (const auto& comp : drive.shift_control.components)
          if (comp.dir_j <= n_dirs_noise)
            inc[comp.dir_j - 1] += comp.integral(t_i, t_i + dt);
        const auto nw = std::min<std::size_t>(drive.shift_level, n_dirs_noise);
        for (std::size_t j = 1; j <= nw; ++j)
          inc[j - 1] -= regularized_derivative(*drive.tableau, j, t_i) * dt;
      }
      channel_field(inc);
      add_product(coeffs.A, u_phys);
      any_imp = true;
    }
    if (chanB()) {
      inc.assign(n_dirs_wz, 0.0);
      for (std::size_t j = 1; j <= n_dirs_wz; ++j)
        inc[j - 1] = regularized_derivative(*drive.tableau, j, t_i) * dt;
      channel_field(inc);
      add_product(coeffs.B, u_phys);
      any_imp = true;
    }
    if (chanD()) {
      const std::size_t nd = std::min(drive.control.max_dir(), basis.count());
      inc.assign(nd, 0.0);
      for (const auto& comp : drive.control.components)
        if (comp.dir_j <= nd) inc[comp.dir_j - 1] += comp.integral(t_i, t_i + dt);
      channel_field(inc);
      add_product(coeffs.D, u_phys);
      any_imp = true;
    }

    const double dV = grid.dV();
    if (any_imp) {
      simp_hat.resize(grid.size());
      for (std::size_t x = 0; x < grid.size(); ++x) simp_hat[x] = impulse_phys[x];
      fft.forward(simp_hat);
      for (auto& c : simp_hat) c *= dV;
      if (dealias)
        for (std::size_t f = 0; f < grid.size(); ++f)
          if (!dealias_mask[f]) simp_hat[f] = 0.0;
    } else {
      simp_hat.clear();
    }

    if (chanDrift()) {
      drift_hat.resize(grid.size());
      if (coeffs.b.is_constant()) {
        // spectrum of a constant field: mass on the zero mode only
        std::fill(drift_hat.begin(), drift_hat.end(), std::complex<double>{0.0, 0.0});
        drift_hat[0] = coeffs.b(0.0) * grid.volume();
      } else {
        for (std::size_t x = 0; x < grid.size(); ++x) drift_hat[x] = coeffs.b((*u_phys)[x]);
        fft.forward(drift_hat);
        for (auto& c : drift_hat) c *= dV;
        if (dealias)
          for (std::size_t f = 0; f < grid.size(); ++f)
            if (!dealias_mask[f]) drift_hat[f] = 0.0;
      }
    } else {
      drift_hat.clear();
    }
  }

  FieldState advance(const FieldState& state, int i,
                     std::vector<std::complex<double>>& simp_hat,
                     std::vector<std::complex<double>>& drift_hat) {
    std::vector<double> u_phys;
    const std::vector<double>* up = nullptr;
    if (needs_u_phys()) {
      u_phys = to_physical(state.u_hat, grid, fft);
      up = &u_phys;
    }
    sources(i, up, simp_hat, drift_hat);

    FieldState next;
    next.t = (i + 1) * grid.dt();
    next.u_hat.resize(grid.size());
    next.v_hat.resize(grid.size());
    const bool imp = !simp_hat.empty(), dri = !drift_hat.empty();
    for (std::size_t f = 0; f < grid.size(); ++f) {
      const double c = tables.cos_th[f], s1 = tables.s1[f], s2 = tables.s2[f],
                   ws = tables.wsin[f];
      std::complex<double> u = c * state.u_hat[f] + s1 * state.v_hat[f];
      std::complex<double> v = -ws * state.u_hat[f] + c * state.v_hat[f];
      if (imp) {
        u += s1 * simp_hat[f];
        v += c * simp_hat[f];
      }
      if (dri) {
        u += s2 * drift_hat[f];
        v += s1 * drift_hat[f];
      }
      next.u_hat[f] = u;
      next.v_hat[f] = v;
    }
    for (std::size_t f = 0; f < grid.size(); ++f)
      if (!std::isfinite(next.u_hat[f].real()) || !std::isfinite(next.u_hat[f].imag()) ||
          !std::isfinite(next.v_hat[f].real()) || !std::isfinite(next.v_hat[f].imag()))
        throw NumericalBlowupError(i, "solve: field not finite after step " + std::to_string(i));
    return next;
  }
};

}  // namespace

std::vector<double> to_physical(const std::vector<std::complex<double>>& hat,
                                const TorusGrid& grid, Fft3D& fft) {
  std::vector<std::complex<double>> tmp = hat;
  fft.backward(tmp);
  std::vector<double> out(grid.size());
  const double inv_vol = 1.0 / grid.volume();
  for (std::size_t x = 0; x < grid.size(); ++x) out[x] = tmp[x].real() * inv_vol;
  return out;
}

std::vector<std::complex<double>> to_spectral(const std::vector<double>& phys,
                                              const TorusGrid& grid, Fft3D& fft) {
  std::vector<std::complex<double>> out(grid.size());
  for (std::size_t x = 0; x < grid.size(); ++x) out[x] = phys[x];
  fft.forward(out);
  const double dV = grid.dV();
  for (auto& c : out) c *= dV;
  return out;
}

FieldState step(const FieldState& state, int step_index, const TorusGrid& grid,
                const NoiseModel& model, const BasisIndex& basis, const Coefficients& coeffs,
                const DriveSpec& drive, std::uint64_t seed, Fft3D& fft, bool dealias) {
  if (state.t + grid.dt() > grid.T + 1e-12 * grid.T)
    throw ParameterError("step: stepping beyond the horizon");
  StepEngine engine(grid, model, basis, coeffs, drive, seed, fft, dealias);
  std::vector<std::complex<double>> simp, drift;
  return engine.advance(state, step_index, simp, drift);
}

Trajectory solve(const TorusGrid& grid, const NoiseModel& model, const BasisIndex& basis,
                 const Coefficients& coeffs, const DriveSpec& drive, std::uint64_t seed,
                 const SolveOptions& options) {
  Fft3D fft(grid.N);
  StepEngine engine(grid, model, basis, coeffs, drive, seed, fft, options.dealias);

  std::vector<int> save = options.save_steps;
  if (save.empty()) {
    save.resize(grid.steps + 1);
    for (int i = 0; i <= grid.steps; ++i) save[i] = i;
  }
  std::sort(save.begin(), save.end());
  save.erase(std::unique(save.begin(), save.end()), save.end());
  if (save.front() != 0) save.insert(save.begin(), 0);
  if (save.front() < 0 || save.back() > grid.steps)
    throw ConfigError("solve: save step outside the time grid");
  std::vector<char> want_snap(grid.steps + 1, 0);
  for (int s : options.snapshot_steps) {
    if (s < 0 || s > grid.steps) throw ConfigError("solve: snapshot step outside the grid");
    want_snap[s] = 1;
  }

  Trajectory traj;
  traj.grid = grid;
  traj.beta = model.beta;
  traj.seed = seed;
  traj.drive_desc = drive.describe();
  traj.fingerprint = options.fingerprint;
  traj.save_steps = save;

  FieldState state;
  state.t = 0.0;
  state.u_hat.assign(grid.size(), {0.0, 0.0});
  state.v_hat.assign(grid.size(), {0.0, 0.0});

  auto record = [&](const FieldState& st, int idx) {
    if (std::binary_search(save.begin(), save.end(), idx)) {
      traj.save_times.push_back(st.t);
      traj.u.push_back(to_physical(st.u_hat, grid, fft));
      if (options.keep_v) traj.v.push_back(to_physical(st.v_hat, grid, fft));
    }
    if (want_snap[idx]) traj.snapshots.emplace(idx, st);
  };

  record(state, 0);
  std::vector<std::complex<double>> simp, drift;
  for (int i = 0; i < grid.steps; ++i) {
    state = engine.advance(state, i, simp, drift);
    record(state, i + 1);
  }
  return traj;
}

double dyadic_lag(double t, int level, double T) {
  if (level < 1) throw ParameterError("dyadic_lag: level must be >= 1");
  if (t < 0.0 || t > T * (1.0 + 1e-12)) throw ParameterError("dyadic_lag: t outside [0,T]");
  const double cw = T * std::exp2(-level);
  long long k = static_cast<long long>(std::floor(t / cw + 1e-12));
  const long long kmax = (1ll << level) - 1;
  if (k > kmax) k = kmax;
  if (k < 1) return 0.0;
  return std::max((k - 1) * cw, 0.0);
}

FieldState free_propagate(const FieldState& state, double tau, const TorusGrid& grid) {
  if (tau < 0.0) throw ParameterError("free_propagate: tau must be >= 0");
  ModeTables tb(grid, tau);
  FieldState out;
  out.t = state.t + tau;
  out.u_hat.resize(grid.size());
  out.v_hat.resize(grid.size());
  for (std::size_t f = 0; f < grid.size(); ++f) {
    out.u_hat[f] = tb.cos_th[f] * state.u_hat[f] + tb.s1[f] * state.v_hat[f];
    out.v_hat[f] = -tb.wsin[f] * state.u_hat[f] + tb.cos_th[f] * state.v_hat[f];
  }
  return out;
}

std::vector<double> lagged_snapshot(const Trajectory& traj, double t, int level,
                                    const TorusGrid& grid, Fft3D& fft) {
  const double tn = dyadic_lag(t, level, grid.T);
  const double dt = grid.dt();
  const int idx = static_cast<int>(std::llround(tn / dt));
  if (std::abs(idx * dt - tn) > 1e-9 * grid.T)
    throw ConfigError("lagged_snapshot: lag time is not on the step grid");
  auto it = traj.snapshots.find(idx);
  if (it == traj.snapshots.end())
    throw ConfigError("lagged_snapshot: no stored state at the lag time");
  const FieldState prop = free_propagate(it->second, t - tn, grid);
  return to_physical(prop.u_hat, grid, fft);
}

PicardResult picard_reference(const TorusGrid& grid, const NoiseModel& model,
                              const BasisIndex& basis, const Coefficients& coeffs,
                              const DriveSpec& drive, std::uint64_t seed, int iterations,
                              const SolveOptions& options) {
  if (grid.N > 8 || grid.steps > 16)
    throw ParameterError("picard_reference: restricted to N <= 8 and steps <= 16");
  if (iterations < 1) throw ParameterError("picard_reference: iterations must be >= 1");

  Fft3D fft(grid.N);
  StepEngine engine(grid, model, basis, coeffs, drive, seed, fft, options.dealias);
  const int S = grid.steps;
  const double dt = grid.dt();
  const std::size_t n = grid.size();
  const auto xi = grid.xi_abs_table();

  std::vector<std::vector<double>> Z(S + 1, std::vector<double>(n, 0.0));
  std::vector<std::vector<std::complex<double>>> simp(S), drif(S);
  std::vector<double> distances;

  int grow_streak = 0;
  for (int it = 0; it < iterations; ++it) {
    for (int i = 0; i < S; ++i) engine.sources(i, &Z[i], simp[i], drif[i]);
    std::vector<std::vector<double>> Znext(S + 1, std::vector<double>(n, 0.0));
    std::vector<std::complex<double>> acc(n);
    for (int m = 1; m <= S; ++m) {
      std::fill(acc.begin(), acc.end(), std::complex<double>{0.0, 0.0});
      const double tm = m * dt;
      for (int i = 0; i < m; ++i) {
        const double si = i * dt;
        const bool has_imp = !simp[i].empty(), has_dri = !drif[i].empty();
        if (!has_imp && !has_dri) continue;
        for (std::size_t f = 0; f < n; ++f) {
          const double w = kTwoPi * xi[f];
          double fu_imp, fu_dri;
          if (w == 0.0) {
            fu_imp = tm - si;
            fu_dri = dt * (tm - si) - 0.5 * dt * dt;
          } else {
            fu_imp = std::sin(w * (tm - si)) / w;
            fu_dri = (std::cos(w * (tm - si - dt)) - std::cos(w * (tm - si))) / (w * w);
          }
          if (has_imp) acc[f] += fu_imp * simp[i][f];
          if (has_dri) acc[f] += fu_dri * drif[i][f];
        }
      }
      Znext[m] = to_physical(acc, grid, fft);
    }
    double dist = 0.0, scale = 0.0;
    for (int m = 0; m <= S; ++m)
      for (std::size_t x = 0; x < n; ++x) {
        dist = std::max(dist, std::abs(Znext[m][x] - Z[m][x]));
        scale = std::max(scale, std::abs(Znext[m][x]));
      }
    if (!distances.empty() && dist > distances.back() && dist > 1e-12 * std::max(scale, 1.0)) {
      if (++grow_streak >= 3)
        throw DiagnosticError("picard_reference: iterate distances grew 3 times in a row");
    } else {
      grow_streak = 0;
    }
    distances.push_back(dist);
    Z = std::move(Znext);
    if (dist <= 1e-14 * std::max(scale, 1.0)) break;
  }

  // Assemble the trajectory from the final iterate (velocities by the cosine
  // filters of the same Duhamel sums).
  PicardResult res;
  res.iterate_distances = distances;
  Trajectory traj;
  traj.grid = grid;
  traj.beta = model.beta;
  traj.seed = seed;
  traj.drive_desc = drive.describe() + " picard";
  traj.fingerprint = options.fingerprint;
  for (int m = 0; m <= S; ++m) {
    traj.save_steps.push_back(m);
    traj.save_times.push_back(m * dt);
    traj.u.push_back(Z[m]);
  }
  res.trajectory = std::move(traj);
  return res;
}

int Trajectory::frame_of_step(int step) const {
  auto it = std::lower_bound(save_steps.begin(), save_steps.end(), step);
  if (it == save_steps.end() || *it != step) return -1;
  return static_cast<int>(it - save_steps.begin());
}

const std::vector<double>& Trajectory::frame_at_time(double t) const {
  for (std::size_t i = 0; i < save_times.size(); ++i)
    if (std::abs(save_times[i] - t) <= 1e-12 * std::max(1.0, grid.T)) return u[i];
  throw ConfigError("trajectory: no frame stored at the requested time");
}

namespace {
constexpr std::uint64_t kTrajMagic = 0x57334454524a3031ull;  // "W3DTRJ01"

void put_u64_le(std::ofstream& os, std::uint64_t v) {
  unsigned char b[8];
  for (int i = 0; i < 8; ++i) b[i] = static_cast<unsigned char>(v >> (8 * i));
  os.write(reinterpret_cast<const char*>(b), 8);
}

std::uint64_t get_u64_le(std::ifstream& is) {
  unsigned char b[8];
  is.read(reinterpret_cast<char*>(b), 8);
  std::uint64_t v = 0;
  for (int i = 0; i < 8; ++i) v |= static_cast<std::uint64_t>(b[i]) << (8 * i);
  return v;
}

void put_f64_block(std::ofstream& os, const std::vector<double>& v) {
  for (double x : v) {
    std::uint64_t b;
    std::memcpy(&b, &x, 8);
    put_u64_le(os, b);
  }
}

void get_f64_block(std::ifstream& is, std::vector<double>& v) {
  for (double& x : v) {
    const std::uint64_t b = get_u64_le(is);
    std::memcpy(&x, &b, 8);
  }
}
}  // namespace

void Trajectory::save(const std::string& path) const {
  nlohmann::json head;
  head["L"] = grid.L;
  head["N"] = grid.N;
  head["T"] = grid.T;
  head["steps"] = grid.steps;
  head["beta"] = beta;
  head["seed"] = seed;
  head["drive"] = drive_desc;
  head["fingerprint"] = fingerprint;
  head["save_steps"] = save_steps;
  head["has_v"] = !v.empty();
  std::vector<int> snap_keys;
  for (const auto& [k, _] : snapshots) snap_keys.push_back(k);
  head["snapshot_steps"] = snap_keys;
  const std::string hs = head.dump();

  std::ofstream os(path, std::ios::binary);
  if (!os) throw IoError("trajectory save: cannot open " + path);
  put_u64_le(os, kTrajMagic);
  put_u64_le(os, hs.size());
  os.write(hs.data(), static_cast<std::streamsize>(hs.size()));
  for (std::size_t i = 0; i < u.size(); ++i) {
    put_f64_block(os, u[i]);
    if (!v.empty()) put_f64_block(os, v[i]);
  }
  std::vector<double> tmp(grid.size());
  for (const auto& [k, st] : snapshots) {
    auto dump_c = [&](const std::vector<std::complex<double>>& h) {
      for (std::size_t f = 0; f < h.size(); ++f) tmp[f] = h[f].real();
      put_f64_block(os, tmp);
      for (std::size_t f = 0; f < h.size(); ++f) tmp[f] = h[f].imag();
      put_f64_block(os, tmp);
    };
    dump_c(st.u_hat);
    dump_c(st.v_hat);
  }
  if (!os) throw IoError("trajectory save: write failed for " + path);
  os.close();

  std::ofstream sidecar(path + ".json");
  sidecar << head.dump(2) << "\n";
}

Trajectory Trajectory::load(const std::string& path) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw IoError("trajectory load: cannot open " + path);
  if (get_u64_le(is) != kTrajMagic) throw IoError("trajectory load: bad magic in " + path);
  const std::uint64_t hlen = get_u64_le(is);
  if (hlen > (1u << 20)) throw IoError("trajectory load: oversized header in " + path);
  std::string hs(hlen, '\0');
  is.read(hs.data(), static_cast<std::streamsize>(hlen));
  const auto head = nlohmann::json::parse(hs);

  Trajectory t;
  t.grid = TorusGrid(head.at("L").get<double>(), head.at("N").get<int>(),
                     head.at("T").get<double>(), head.at("steps").get<int>());
  t.beta = head.at("beta").get<double>();
  t.seed = head.at("seed").get<std::uint64_t>();
  t.drive_desc = head.at("drive").get<std::string>();
  t.fingerprint = head.at("fingerprint").get<std::string>();
  t.save_steps = head.at("save_steps").get<std::vector<int>>();
  const bool has_v = head.at("has_v").get<bool>();
  const auto snap_keys = head.at("snapshot_steps").get<std::vector<int>>();

  const double dt = t.grid.dt();
  for (int s : t.save_steps) {
    t.save_times.push_back(s * dt);
    t.u.emplace_back(t.grid.size());
    get_f64_block(is, t.u.back());
    if (has_v) {
      t.v.emplace_back(t.grid.size());
      get_f64_block(is, t.v.back());
    }
  }
  std::vector<double> re(t.grid.size()), im(t.grid.size());
  for (int k : snap_keys) {
    FieldState st;
    st.t = k * dt;
    auto read_c = [&](std::vector<std::complex<double>>& h) {
      h.resize(t.grid.size());
      get_f64_block(is, re);
      get_f64_block(is, im);
      for (std::size_t f = 0; f < h.size(); ++f) h[f] = {re[f], im[f]};
    };
    read_c(st.u_hat);
    read_c(st.v_hat);
    t.snapshots.emplace(k, std::move(st));
  }
  if (!is) throw IoError("trajectory load: truncated payload in " + path);
  return t;
}

}  // namespace wave3d
