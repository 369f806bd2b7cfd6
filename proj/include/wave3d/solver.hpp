#ifndef WAVE3D_SOLVER_HPP
#define WAVE3D_SOLVER_HPP

#include <complex>
#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "wave3d/coefficients.hpp"
#include "wave3d/drive.hpp"
#include "wave3d/fft.hpp"
#include "wave3d/grid.hpp"
#include "wave3d/noise.hpp"

namespace wave3d {

// Displacement/velocity pair in spectral form (continuum convention
// phi_hat(k) = dV * DFT(phi)(k)); physical fields are recovered on demand.
struct FieldState {
  double t = 0.0;
  std::vector<std::complex<double>> u_hat;
  std::vector<std::complex<double>> v_hat;
};

std::vector<double> to_physical(const std::vector<std::complex<double>>& hat,
                                const TorusGrid& grid, Fft3D& fft);
std::vector<std::complex<double>> to_spectral(const std::vector<double>& phys,
                                              const TorusGrid& grid, Fft3D& fft);

struct Trajectory {
  TorusGrid grid;
  double beta = 0.0;
  std::uint64_t seed = 0;
  std::string drive_desc;
  std::string fingerprint;
  std::vector<int> save_steps;
  std::vector<double> save_times;
  std::vector<std::vector<double>> u;  // physical frames, one per save step
  std::vector<std::vector<double>> v;  // empty when velocities are not kept
  std::map<int, FieldState> snapshots;  // spectral states by step index

  int frame_of_step(int step) const;  // -1 if absent
  const std::vector<double>& frame_at_time(double t) const;

  // Self-describing binary container plus JSON sidecar (<path>.json).
  void save(const std::string& path) const;
  static Trajectory load(const std::string& path);
};

struct SolveOptions {
  std::vector<int> save_steps;      // defaults to every step
  std::vector<int> snapshot_steps;  // spectral states to retain
  bool keep_v = true;
  bool dealias = false;
  std::string fingerprint;
};

// Advance one step of the mild equation with the trigonometric integrator.
// Basis-resolved sources (stochastic, regularized driver, control) enter as
// left-endpoint impulses filtered through sin(w dt)/w and cos(w dt); the drift
// enters as a constant-rate source over the step.
FieldState step(const FieldState& state, int step_index, const TorusGrid& grid,
                const NoiseModel& model, const BasisIndex& basis, const Coefficients& coeffs,
                const DriveSpec& drive, std::uint64_t seed, Fft3D& fft,
                bool dealias = false);

Trajectory solve(const TorusGrid& grid, const NoiseModel& model, const BasisIndex& basis,
                 const Coefficients& coeffs, const DriveSpec& drive, std::uint64_t seed,
                 const SolveOptions& options = {});

// t_n = max(underline_t_n - 2^{-n} T, 0), underline_t_n the largest k 2^{-n} T
// <= t with 1 <= k <= 2^n - 1; zero when no such k exists.
double dyadic_lag(double t, int level, double T);

// Source-free evolution of a state over a time offset tau >= 0.
FieldState free_propagate(const FieldState& state, double tau, const TorusGrid& grid);

// Field at time t with every source switched off after t_n = dyadic_lag(t, n, T):
// the stored state at t_n propagated freely to t. Physical displacement.
std::vector<double> lagged_snapshot(const Trajectory& traj, double t, int level,
                                    const TorusGrid& grid, Fft3D& fft);

struct PicardResult {
  Trajectory trajectory;
  std::vector<double> iterate_distances;  // sup |Z^{k+1} - Z^k| per iteration
};

// Fixed-point iteration of the mild equation on the step grid, evaluating the
// Duhamel sums directly with the same per-step sources and the same noise
// realization as the step integrator. Restricted to small instances.
PicardResult picard_reference(const TorusGrid& grid, const NoiseModel& model,
                              const BasisIndex& basis, const Coefficients& coeffs,
                              const DriveSpec& drive, std::uint64_t seed, int iterations,
                              const SolveOptions& options = {});

}  // namespace wave3d

#endif
