#ifndef WAVE3D_ANALYSIS_HPP
#define WAVE3D_ANALYSIS_HPP

#include <array>
#include <cstddef>
#include <optional>
#include <vector>

#include "wave3d/grid.hpp"
#include "wave3d/solver.hpp"

namespace wave3d {

// Restriction data for the Holder norm: exponent, time cut, and the compact
// box K = [-K_half, K_half]^3 centered in the fundamental domain.
struct HolderWindow {
  double rho = 0.35;
  double t0 = 0.5;
  double K_half = 0.5;
  std::size_t pair_cap = 1000000;

  void validate(const TorusGrid& grid) const;
};

// Samples of one scalar field over the window: times x box points.
struct WindowGrid {
  std::vector<int> frame_indices;   // into Trajectory save arrays
  std::vector<double> times;
  std::array<std::vector<int>, 3> axis_points;  // grid indices per axis
  std::vector<std::size_t> flat_points;         // row-major over the box
  std::vector<std::array<double, 3>> coords;

  std::size_t n_points() const { return flat_points.size(); }
};

WindowGrid build_window(const Trajectory& traj, const HolderWindow& window);

// Extract window samples of the trajectory's displacement frames
// (values[time][point]).
std::vector<std::vector<double>> window_samples(const Trajectory& traj,
                                                const WindowGrid& wg);

// sup |g| + sup |g(p) - g(q)| / (|dt| + |dx|)^rho over the dyadic-offset pair
// policy, capped with deterministic subsampling.
double holder_norm(const std::vector<std::vector<double>>& values, const WindowGrid& wg,
                   const TorusGrid& grid, double rho, std::size_t pair_cap = 1000000);

// Exhaustive all-pairs variant (test oracle; quadratic cost).
double holder_norm_allpairs(const std::vector<std::vector<double>>& values,
                            const WindowGrid& wg, double rho);

struct MomentReport {
  double p = 2.0;
  double estimate = 0.0;
  double stderr_jackknife = 0.0;
  std::size_t replicas = 0;
};

// Sample mean of |x|^p with jackknife standard error; needs >= 30 replicas.
MomentReport lp_moment(const std::vector<double>& samples, double p);

// Two-sample Kolmogorov-Smirnov statistic sup |F1 - F2|.
double ks_statistic(std::vector<double> a, std::vector<double> b);
// Asymptotic critical value at significance `alpha` (e.g. 0.01).
double ks_critical(std::size_t n, std::size_t m, double alpha);

struct ScalingRow {
  double separation = 0.0;
  double moment = 0.0;  // E |increment|^p
};

struct ScalingFit {
  std::vector<ScalingRow> rows;
  double slope = 0.0;     // d log E / d log separation
  double exponent = 0.0;  // slope / p
};

enum class IncrementMode { Space, Time };

// Pooled increment moments over an ensemble of trajectories, regressed on
// log separation. Space mode: axis-aligned lags (in grid units) of the frame
// at time t_eval. Time mode: lags (in save steps) at every box point.
// `weights` (optional, one per replica) realize localization indicators.
ScalingFit increment_scaling(const std::vector<const Trajectory*>& ensemble, double p,
                             IncrementMode mode, const std::vector<int>& band,
                             double t_eval, const HolderWindow& window,
                             const std::vector<double>* weights = nullptr);

// Least-squares slope of y against x.
double fit_slope(const std::vector<double>& x, const std::vector<double>& y);

struct TranslationRow {
  std::array<int, 3> shift{};
  double ks = 0.0;
  double critical = 0.0;
  bool pass = false;
};

// Two-sample KS comparison of {X(t,x)} and {X(t,x+z)} replica sets per shift,
// against the critical value at significance `alpha`. Needs >= 1000 replicas.
std::vector<TranslationRow> translation_invariance_test(
    const std::vector<double>& base, const std::vector<std::vector<double>>& shifted,
    const std::vector<std::array<int, 3>>& shifts, double alpha = 0.01);

struct ConvergenceReport {
  std::vector<int> levels;
  std::vector<double> localized_moment;    // E [ dist^p 1_{L_n} ]
  std::vector<double> plain_moment;        // E [ dist^p ]
  std::vector<double> tail_probability;    // P ( dist > lambda )
  double lambda = 0.0;
  double p = 1.0;
  double fitted_log2_slope = 0.0;
};

ConvergenceReport make_convergence_report(const std::vector<int>& levels,
                                          const std::vector<std::vector<double>>& distances,
                                          const std::vector<std::vector<double>>& indicators,
                                          double p);

}  // namespace wave3d

#endif
