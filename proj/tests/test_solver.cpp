#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <cmath>
#include <complex>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <numbers>

#include "doctest.h"
#include "wave3d/analysis.hpp"
#include "wave3d/errors.hpp"
#include "wave3d/green.hpp"
#include "wave3d/solver.hpp"

using namespace wave3d;

namespace {

struct Setup {
  TorusGrid grid;
  NoiseModel model;
  BasisIndex basis;

  Setup(double L, int N, double T, int steps, double beta)
      : grid(L, N, T, steps), model(grid, beta), basis(grid, model) {}
};

Coefficients coeffs(Coefficient A, Coefficient B, Coefficient D, Coefficient b) {
  return Coefficients{A, B, D, b};
}

bool frames_equal(const Trajectory& a, const Trajectory& b) {
  if (a.u.size() != b.u.size()) return false;
  for (std::size_t i = 0; i < a.u.size(); ++i)
    if (std::memcmp(a.u[i].data(), b.u[i].data(), a.u[i].size() * sizeof(double)) != 0)
      return false;
  return true;
}

}  // namespace

TEST_CASE("null dynamics stays null") {
  Setup s(2.0, 8, 1.0, 16, 1.0);
  const auto traj = solve(s.grid, s.model, s.basis,
                          coeffs(Coefficient::zero(), Coefficient::zero(),
                                 Coefficient::zero(), Coefficient::zero()),
                          DriveSpec{}, 1, SolveOptions{});
  for (const auto& frame : traj.u)
    for (double v : frame) CHECK(v == 0.0);
  CHECK(traj.save_times.front() == 0.0);
}

TEST_CASE("constant drift reproduces the exact zero-mode response") {
  // b = 1, everything else off: u(t) = t^2/2 uniformly in space
  Setup s(2.0, 8, 1.0, 16, 1.0);
  const auto traj = solve(s.grid, s.model, s.basis,
                          coeffs(Coefficient::zero(), Coefficient::zero(),
                                 Coefficient::zero(), Coefficient::constant(1.0)),
                          DriveSpec{}, 1, SolveOptions{});
  for (std::size_t i = 0; i < traj.save_times.size(); ++i) {
    const double t = traj.save_times[i];
    for (double v : traj.u[i]) CHECK(v == doctest::Approx(0.5 * t * t).epsilon(1e-12));
  }
}

TEST_CASE("one-step noise variance matches the filtered mass") {
  // A = 1, one step from zero: per-mode variance (sin(w dt)/w)^2 mu_k L^6 dt
  Setup s(1.0, 8, 0.5, 1, 1.0);
  Fft3D fft(s.grid.N);
  const Coefficients cf = coeffs(Coefficient::constant(1.0), Coefficient::zero(),
                                 Coefficient::zero(), Coefficient::zero());
  DriveSpec drive;
  drive.stochastic = true;
  const int R = 100000;
  const std::vector<std::array<int, 3>> modes = {
      {0, 0, 1}, {1, 0, 0}, {1, 1, 0}, {0, 2, 1}, {2, 0, 0}};
  std::vector<double> acc(modes.size(), 0.0);
  FieldState zero;
  zero.t = 0.0;
  zero.u_hat.assign(s.grid.size(), {0.0, 0.0});
  zero.v_hat.assign(s.grid.size(), {0.0, 0.0});
  for (int r = 0; r < R; ++r) {
    const auto next =
        step(zero, 0, s.grid, s.model, s.basis, cf, drive, rng::seed_stream(2024, r), fft);
    for (std::size_t mi = 0; mi < modes.size(); ++mi) {
      const auto& k = modes[mi];
      const auto v = next.u_hat[s.grid.index(s.grid.wrap_mode(k[0]), s.grid.wrap_mode(k[1]),
                                             s.grid.wrap_mode(k[2]))];
      acc[mi] += std::norm(v);
    }
  }
  const double dt = s.grid.dt();
  for (std::size_t mi = 0; mi < modes.size(); ++mi) {
    const auto& k = modes[mi];
    const double mu = spectral_weight(k, s.grid, 1.0);
    const double w = 2.0 * std::numbers::pi * s.grid.xi_abs(k);
    const double f1 = std::sin(w * dt) / w;
    const double target = f1 * f1 * mu * std::pow(s.grid.volume(), 2.0) * dt;
    const double est = acc[mi] / R;
    // relative 3 sigma for a chi^2-type estimate
    CHECK(std::abs(est - target) / target < 3.0 * std::sqrt(2.0 / R) + 0.01);
  }
}

TEST_CASE("ito isometry at desk scale") {
  // sigma = 1, b = 0: E u(t,x)^2 = int_0^t |FG|^2 mass, by the scheme's own
  // right-endpoint quadrature
  Setup s(4.0, 8, 1.0, 32, 1.0);
  const Coefficients cf = coeffs(Coefficient::constant(1.0), Coefficient::zero(),
                                 Coefficient::zero(), Coefficient::zero());
  DriveSpec drive;
  drive.stochastic = true;
  const int R = 400;
  const std::vector<double> times{0.25, 0.5, 1.0};
  std::vector<std::vector<double>> stats(times.size(), std::vector<double>(R));
  for (int r = 0; r < R; ++r) {
    SolveOptions opt;
    opt.keep_v = false;
    const auto traj =
        solve(s.grid, s.model, s.basis, cf, drive, rng::seed_stream(77, r), opt);
    for (std::size_t ti = 0; ti < times.size(); ++ti) {
      const auto& frame = traj.frame_at_time(times[ti]);
      double m2 = 0.0;
      for (double v : frame) m2 += v * v;
      stats[ti][r] = m2 / static_cast<double>(frame.size());
    }
  }
  for (std::size_t ti = 0; ti < times.size(); ++ti) {
    double mean = 0.0, var = 0.0;
    for (double v : stats[ti]) mean += v;
    mean /= R;
    for (double v : stats[ti]) var += (v - mean) * (v - mean);
    var /= (R - 1.0);
    const int m = static_cast<int>(std::llround(times[ti] / s.grid.dt()));
    double oracle = 0.0;
    for (int j = 1; j <= m; ++j)
      oracle += green_hnorm_sq(j * s.grid.dt(), s.model, s.grid) * s.grid.dt();
    CHECK(std::abs(mean - oracle) < 3.0 * std::sqrt(var / R));
  }
}

TEST_CASE("same seed gives bitwise identical trajectories") {
  Setup s(4.0, 8, 1.0, 16, 1.0);
  const Coefficients cf = coeffs(Coefficient::tanh(2.0), Coefficient::zero(),
                                 Coefficient::zero(), Coefficient::constant(0.5));
  DriveSpec drive;
  drive.stochastic = true;
  const auto a = solve(s.grid, s.model, s.basis, cf, drive, 555, SolveOptions{});
  const auto b = solve(s.grid, s.model, s.basis, cf, drive, 555, SolveOptions{});
  CHECK(frames_equal(a, b));
  const auto c = solve(s.grid, s.model, s.basis, cf, drive, 556, SolveOptions{});
  CHECK_FALSE(frames_equal(a, c));
}

TEST_CASE("fields stay real through the spectral pipeline") {
  Setup s(4.0, 8, 1.0, 16, 1.0);
  Fft3D fft(s.grid.N);
  const Coefficients cf = coeffs(Coefficient::tanh(1.0), Coefficient::zero(),
                                 Coefficient::zero(), Coefficient::constant(1.0));
  DriveSpec drive;
  drive.stochastic = true;
  SolveOptions opt;
  opt.snapshot_steps = {16};
  const auto traj = solve(s.grid, s.model, s.basis, cf, drive, 9001, opt);
  const auto& st = traj.snapshots.at(16);
  auto tmp = st.u_hat;
  fft.backward(tmp);
  double scale = 0.0, imag = 0.0;
  for (const auto& v : tmp) {
    scale = std::max(scale, std::abs(v.real()));
    imag = std::max(imag, std::abs(v.imag()));
  }
  CHECK(imag < 1e-10 * std::max(scale, 1.0));
  // physical and spectral representations round-trip
  const auto phys = to_physical(st.u_hat, s.grid, fft);
  const auto back = to_spectral(phys, s.grid, fft);
  double worst = 0.0;
  for (std::size_t f = 0; f < back.size(); ++f)
    worst = std::max(worst, std::abs(back[f] - st.u_hat[f]));
  CHECK(worst < 1e-10 * std::max(scale, 1.0));
}

TEST_CASE("control drive is linear in h when D is constant") {
  Setup s(4.0, 8, 1.0, 16, 1.0);
  const Coefficients cf = coeffs(Coefficient::zero(), Coefficient::zero(),
                                 Coefficient::constant(1.0), Coefficient::constant(0.3));
  auto solve_h = [&](const Control& h) {
    DriveSpec d;
    d.control = h;
    return solve(s.grid, s.model, s.basis, cf, d, 0, SolveOptions{});
  };
  Control h1, h2, h12;
  h1.components.push_back({1, ControlComponent::Kind::Constant, 0.8, 0.0});
  h2.components.push_back({4, ControlComponent::Kind::Sine, 1.3, 2.0});
  h12.components = h1.components;
  h12.components.push_back(h2.components[0]);
  const auto t1 = solve_h(h1), t2 = solve_h(h2), t12 = solve_h(h12), t0 = solve_h(Control{});
  double worst = 0.0;
  for (std::size_t i = 0; i < t1.u.size(); ++i)
    for (std::size_t x = 0; x < t1.u[i].size(); ++x)
      worst = std::max(worst, std::abs(t12.u[i][x] - (t1.u[i][x] + t2.u[i][x] - t0.u[i][x])));
  CHECK(worst < 1e-10);
}

TEST_CASE("skeleton with zero control and zero drift vanishes") {
  Setup s(4.0, 8, 1.0, 16, 1.0);
  const Coefficients cf = coeffs(Coefficient::zero(), Coefficient::zero(),
                                 Coefficient::tanh(1.0), Coefficient::zero());
  DriveSpec d;  // empty control
  const auto traj = solve(s.grid, s.model, s.basis, cf, d, 0, SolveOptions{});
  for (const auto& frame : traj.u)
    for (double v : frame) CHECK(v == 0.0);
}

TEST_CASE("dyadic lag closed forms") {
  const double T = 1.0;
  CHECK(dyadic_lag(T, 2, T) == doctest::Approx(0.5 * T).epsilon(1e-14));
  CHECK(dyadic_lag(0.3 * T, 2, T) == 0.0);
  CHECK(dyadic_lag(0.1 * 0.25 * T, 2, T) == 0.0);  // t below the first cell
  CHECK(dyadic_lag(0.625, 3, T) == doctest::Approx(0.5).epsilon(1e-14));
  CHECK_THROWS_AS(dyadic_lag(1.5, 2, T), ParameterError);
  CHECK_THROWS_AS(dyadic_lag(0.5, 0, T), ParameterError);
}

TEST_CASE("lagged snapshot equals free propagation after sources stop") {
  // control pulse switches off at T/4; later states evolve freely
  Setup s(4.0, 8, 1.0, 32, 1.0);
  Fft3D fft(s.grid.N);
  const Coefficients cf = coeffs(Coefficient::zero(), Coefficient::zero(),
                                 Coefficient::constant(1.0), Coefficient::zero());
  DriveSpec d;
  d.control.components.push_back({1, ControlComponent::Kind::Pulse, 2.0, 0.25});
  SolveOptions opt;
  for (int i = 0; i <= 32; ++i) opt.snapshot_steps.push_back(i);
  const auto traj = solve(s.grid, s.model, s.basis, cf, d, 0, opt);

  // n = 2: t_n(T) = T/2 >= pulse end, so the lagged field equals the real one
  const auto lag = lagged_snapshot(traj, 1.0, 2, s.grid, fft);
  const auto& direct = traj.frame_at_time(1.0);
  double worst = 0.0, scale = 0.0;
  for (std::size_t x = 0; x < lag.size(); ++x) {
    worst = std::max(worst, std::abs(lag[x] - direct[x]));
    scale = std::max(scale, std::abs(direct[x]));
  }
  CHECK(scale > 0.0);
  CHECK(worst < 1e-12 * scale);

  // t below the first dyadic cell lags back to the null initial state
  const auto zero_lag = lagged_snapshot(traj, 0.03125, 3, s.grid, fft);
  for (double v : zero_lag) CHECK(v == 0.0);

  // missing snapshot is a configuration error
  Trajectory bare = traj;
  bare.snapshots.clear();
  CHECK_THROWS_AS(lagged_snapshot(bare, 1.0, 2, s.grid, fft), ConfigError);
}

TEST_CASE("girsanov shift: identity on a null tableau, route equivalence") {
  Setup s(4.0, 8, 1.0, 32, 1.0);
  const int n = 3;
  auto tableau = std::make_shared<BrownianTableau>(BrownianTableau::sample(n, 8, 1.0, 4242));

  // shifted solve (A channel with transformed increments)
  Control h;
  h.components.push_back({2, ControlComponent::Kind::Constant, 0.7, 0.0});
  const Coefficients cf_shift = coeffs(Coefficient::tanh(2.0), Coefficient::zero(),
                                       Coefficient::zero(), Coefficient::constant(0.2));
  DriveSpec base;
  base.stochastic = true;
  base.tableau = tableau;
  const auto shifted =
      solve(s.grid, s.model, s.basis, cf_shift, girsanov_shift(base, h, n), 4242,
            SolveOptions{});

  // direct route: sigma dM - sigma w^n + sigma h with the same path
  const Coefficients cf_direct =
      coeffs(Coefficient::tanh(2.0), Coefficient::tanh(2.0).negated(), Coefficient::tanh(2.0),
             Coefficient::constant(0.2));
  DriveSpec direct;
  direct.stochastic = true;
  direct.wz_level = n;
  direct.tableau = tableau;
  direct.control = h;
  const auto two = solve(s.grid, s.model, s.basis, cf_direct, direct, 4242, SolveOptions{});

  double worst = 0.0;
  for (std::size_t i = 0; i < shifted.u.size(); ++i)
    for (std::size_t x = 0; x < shifted.u[i].size(); ++x)
      worst = std::max(worst, std::abs(shifted.u[i][x] - two.u[i][x]));
  CHECK(worst < 1e-10);

  // null tableau and h = 0: the shift is the identity on the drive
  auto null_tab = std::make_shared<BrownianTableau>(*tableau);
  for (auto& row : null_tab->increments)
    for (double& v : row) v = 0.0;
  DriveSpec plain;
  plain.stochastic = true;
  const auto unshifted = solve(s.grid, s.model, s.basis, cf_shift, plain, 4242, SolveOptions{});
  DriveSpec base0;
  base0.stochastic = true;
  base0.tableau = null_tab;
  const auto shifted0 =
      solve(s.grid, s.model, s.basis, cf_shift, girsanov_shift(base0, Control{}, n), 4242,
            SolveOptions{});
  CHECK(frames_equal(unshifted, shifted0));

  CHECK_THROWS_AS(girsanov_shift(DriveSpec{}, h, n), ConfigError);
}

TEST_CASE("wz drive with zero B coefficient reproduces the limit process") {
  Setup s(4.0, 8, 1.0, 32, 1.0);
  auto tableau = std::make_shared<BrownianTableau>(BrownianTableau::sample(3, 8, 1.0, 31));
  const Coefficients cf = coeffs(Coefficient::tanh(2.0), Coefficient::zero(),
                                 Coefficient::zero(), Coefficient::constant(0.25));
  DriveSpec with_wz;
  with_wz.stochastic = true;
  with_wz.wz_level = 3;
  with_wz.tableau = tableau;
  DriveSpec plain;
  plain.stochastic = true;
  const auto a = solve(s.grid, s.model, s.basis, cf, with_wz, 8, SolveOptions{});
  const auto b = solve(s.grid, s.model, s.basis, cf, plain, 8, SolveOptions{});
  CHECK(frames_equal(a, b));
}

TEST_CASE("numerical blowup names the offending step") {
  Setup s(2.0, 8, 1.0, 16, 1.0);
  const Coefficients cf = coeffs(Coefficient::zero(), Coefficient::zero(),
                                 Coefficient::zero(), Coefficient::affine(0.0, 1e160));
  // the drift alone inflates u quadratically past the double range
  bool thrown = false;
  try {
    Coefficients explode = cf;
    explode.b = Coefficient::affine(1e160, 1e160);
    solve(s.grid, s.model, s.basis, explode, DriveSpec{}, 0, SolveOptions{});
  } catch (const NumericalBlowupError& e) {
    thrown = true;
    CHECK(e.step() >= 0);
    CHECK(e.step() < 16);
  }
  CHECK(thrown);
}

TEST_CASE("picard iteration: trivial fixed point and geometric contraction") {
  Setup s(2.0, 8, 0.5, 16, 1.0);
  DriveSpec drive;
  drive.stochastic = true;

  // zero coefficients: one iteration, zero field
  const auto zero = picard_reference(s.grid, s.model, s.basis,
                                     coeffs(Coefficient::zero(), Coefficient::zero(),
                                            Coefficient::zero(), Coefficient::zero()),
                                     drive, 3, 6, SolveOptions{});
  CHECK(zero.iterate_distances.size() == 1);
  CHECK(zero.iterate_distances[0] == 0.0);

  // state-dependent sigma, small horizon: distances decay geometrically
  const auto lin = picard_reference(s.grid, s.model, s.basis,
                                    coeffs(Coefficient::affine(0.5, 1.0), Coefficient::zero(),
                                           Coefficient::zero(), Coefficient::constant(1.0)),
                                    drive, 3, 10, SolveOptions{});
  REQUIRE(lin.iterate_distances.size() >= 4);
  for (std::size_t i = 2; i + 1 < lin.iterate_distances.size(); ++i)
    if (lin.iterate_distances[i] > 1e-13)
      CHECK(lin.iterate_distances[i + 1] < lin.iterate_distances[i]);

  // agreement with the step solver on the nonlinear instance
  const Coefficients cf = coeffs(Coefficient::tanh(1.0), Coefficient::zero(),
                                 Coefficient::zero(), Coefficient::constant(1.0));
  const auto pic = picard_reference(s.grid, s.model, s.basis, cf, drive, 5, 12, SolveOptions{});
  const auto direct = solve(s.grid, s.model, s.basis, cf, drive, 5, SolveOptions{});
  double num = 0.0, den = 0.0;
  const auto& a = pic.trajectory.u.back();
  const auto& b = direct.u.back();
  for (std::size_t x = 0; x < a.size(); ++x) {
    num += (a[x] - b[x]) * (a[x] - b[x]);
    den += b[x] * b[x];
  }
  CHECK(std::sqrt(num / den) < 5e-2);

  CHECK_THROWS_AS(picard_reference(Setup(2.0, 16, 1.0, 16, 1.0).grid, s.model, s.basis,
                                   cf, drive, 1, 4, SolveOptions{}),
                  ParameterError);
}

TEST_CASE("stationarity of the solution law across grid shifts") {
  Setup s(4.0, 8, 1.0, 16, 1.0);
  const Coefficients cf = coeffs(Coefficient::constant(1.0), Coefficient::zero(),
                                 Coefficient::zero(), Coefficient::zero());
  DriveSpec drive;
  drive.stochastic = true;
  const int R = 2000;
  const std::size_t x0 = s.grid.index(2, 2, 2);
  const std::vector<std::array<int, 3>> shifts{{3, 0, 0}, {0, 3, 0}, {1, 1, 1}};
  std::vector<double> base(R);
  std::vector<std::vector<double>> shifted(shifts.size(), std::vector<double>(R));
  for (int r = 0; r < R; ++r) {
    SolveOptions opt;
    opt.save_steps = {0, 16};
    opt.keep_v = false;
    const auto traj =
        solve(s.grid, s.model, s.basis, cf, drive, rng::seed_stream(31337, r), opt);
    const auto& frame = traj.u.back();
    base[r] = frame[x0];
    for (std::size_t si = 0; si < shifts.size(); ++si)
      shifted[si][r] = frame[s.grid.index((2 + shifts[si][0]) % 8, (2 + shifts[si][1]) % 8,
                                          (2 + shifts[si][2]) % 8)];
  }
  for (std::size_t si = 0; si < shifts.size(); ++si)
    CHECK(ks_statistic(base, shifted[si]) < ks_critical(R, R, 0.01));
}

TEST_CASE("trajectory container round trip is bit exact") {
  Setup s(4.0, 8, 1.0, 16, 1.0);
  const Coefficients cf = coeffs(Coefficient::tanh(2.0), Coefficient::zero(),
                                 Coefficient::zero(), Coefficient::constant(0.5));
  DriveSpec drive;
  drive.stochastic = true;
  SolveOptions opt;
  opt.snapshot_steps = {0, 8, 16};
  opt.fingerprint = "deadbeef";
  const auto traj = solve(s.grid, s.model, s.basis, cf, drive, 246, opt);

  namespace fs = std::filesystem;
  const std::string p1 = (fs::temp_directory_path() / "w3d_traj1.bin").string();
  const std::string p2 = (fs::temp_directory_path() / "w3d_traj2.bin").string();
  traj.save(p1);
  const auto back = Trajectory::load(p1);
  back.save(p2);

  std::ifstream f1(p1, std::ios::binary), f2(p2, std::ios::binary);
  std::string s1((std::istreambuf_iterator<char>(f1)), std::istreambuf_iterator<char>());
  std::string s2((std::istreambuf_iterator<char>(f2)), std::istreambuf_iterator<char>());
  CHECK(s1 == s2);
  CHECK(!s1.empty());

  CHECK(back.fingerprint == "deadbeef");
  CHECK(back.seed == traj.seed);
  REQUIRE(back.u.size() == traj.u.size());
  for (std::size_t i = 0; i < traj.u.size(); ++i)
    CHECK(std::memcmp(back.u[i].data(), traj.u[i].data(),
                      traj.u[i].size() * sizeof(double)) == 0);
  REQUIRE(back.snapshots.size() == 3);
  for (const auto& [k, st] : traj.snapshots) {
    const auto& bst = back.snapshots.at(k);
    CHECK(std::memcmp(bst.u_hat.data(), st.u_hat.data(),
                      st.u_hat.size() * sizeof(std::complex<double>)) == 0);
  }
  CHECK(fs::exists(p1 + ".json"));

  std::ofstream bad(p1, std::ios::binary);
  bad << "garbage";
  bad.close();
  CHECK_THROWS_AS(Trajectory::load(p1), IoError);
  fs::remove(p1);
  fs::remove(p1 + ".json");
  fs::remove(p2);
  fs::remove(p2 + ".json");
}

TEST_CASE("drive validation errors") {
  Setup s(2.0, 8, 1.0, 16, 1.0);
  const Coefficients cf = coeffs(Coefficient::zero(), Coefficient::tanh(1.0),
                                 Coefficient::zero(), Coefficient::zero());
  DriveSpec d;
  d.wz_level = 3;  // no tableau attached
  CHECK_THROWS_AS(solve(s.grid, s.model, s.basis, cf, d, 0, SolveOptions{}), ConfigError);

  d.tableau = std::make_shared<BrownianTableau>(BrownianTableau::sample(2, 4, 1.0, 1));
  CHECK_THROWS_AS(solve(s.grid, s.model, s.basis, cf, d, 0, SolveOptions{}), ConfigError);
}
