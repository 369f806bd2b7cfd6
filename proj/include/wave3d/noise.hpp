#ifndef WAVE3D_NOISE_HPP
#define WAVE3D_NOISE_HPP

#include <array>
#include <complex>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "wave3d/grid.hpp"
#include "wave3d/rng.hpp"

namespace wave3d {

// Riesz covariance kernel |x|^{-beta}.
double riesz_covariance(const std::array<double, 3>& x, double beta);

// Per-mode spectral mass mu_k = |xi_k|^{-(3-beta)} / L^3, with mu_0 = 0.
double spectral_weight(const std::array<int, 3>& k, const TorusGrid& grid, double beta);

// Normalization constant c(beta) in F[|x|^{-beta}](xi) = c(beta) |xi|^{-(3-beta)}
// (transform convention exp(-2*pi*i*x.xi)). The kernel whose transform is
// exactly |xi|^{-(3-beta)} is |x|^{-beta} / c(beta).
double riesz_transform_constant(double beta);

// Spatial correlation model: beta exponent plus the per-mode weight table.
struct NoiseModel {
  double beta = 1.0;
  std::vector<double> mu;  // per flat mode, mu[0 mode] = 0

  NoiseModel() = default;
  NoiseModel(const TorusGrid& grid, double beta);
};

// Weighted spectral inner product sum_k mu_k a_k conj(b_k). Coefficient arrays
// use the continuum convention phi_hat(k) = dV * DFT(phi)(k).
std::complex<double> hinner(std::span<const std::complex<double>> a,
                            std::span<const std::complex<double>> b,
                            const NoiseModel& model);

// H-norm squared of a real field given its spectral coefficients.
// Throws ValidationError if the coefficients are not Hermitian-symmetric.
double hnorm_sq(std::span<const std::complex<double>> coeffs, const NoiseModel& model,
                const TorusGrid& grid);

// Discretized covariance kernel K_d(r) = sum_k mu_k cos(2 pi xi_k . r).
double discretized_kernel(const std::array<double, 3>& r, const NoiseModel& model,
                          const TorusGrid& grid);

// One real noise direction: a Fourier mode pair plus the component selector.
// Directions are ordered by ascending |k|, ties lexicographic on (k1,k2,k3),
// real (cosine) before imaginary (sine); index j is 1-based.
struct BasisDirection {
  std::array<int, 3> k{};   // canonical representative of {k,-k}
  std::size_t mode = 0;     // flat index of k
  std::size_t mirror = 0;   // flat index of -k
  bool imag_part = false;   // false: cosine component, true: sine component
  bool self_conjugate = false;
  double norm = 0.0;        // normalization of the H-orthonormal element
  double source_scale = 0.0;  // amplitude mapping W-increments to field coefficients
};

// Deterministic enumeration of all noise directions on a grid.
class BasisIndex {
public:
  BasisIndex(const TorusGrid& grid, const NoiseModel& model);

  std::size_t count() const { return dirs_.size(); }
  const BasisDirection& dir(std::size_t j) const;  // 1-based j
  const std::vector<BasisDirection>& all() const { return dirs_; }

  // Physical-space samples of the H-orthonormal basis element e_j.
  std::vector<double> element_field(std::size_t j, const TorusGrid& grid) const;

private:
  std::vector<BasisDirection> dirs_;
};

// Brownian increments over one dyadic level, generated by seeded bridge
// refinement: cell values at level n+1 sum in pairs to the level-n values,
// for every level, from a single master seed.
struct BrownianTableau {
  int level = 0;        // dyadic depth n; 2^n cells per direction
  int truncation = 0;   // J, number of directions stored
  double T = 1.0;
  std::uint64_t seed = 0;
  std::vector<std::vector<double>> increments;  // [j-1][cell]

  static BrownianTableau sample(int level, int truncation, double T, std::uint64_t seed);

  double cell(std::size_t j, std::size_t i) const;  // 1-based j

  void dump(const std::string& path) const;
  static BrownianTableau load(const std::string& path);
};

// Bridge leaves for one direction at an arbitrary dyadic depth.
std::vector<double> bridge_increments(std::uint64_t seed, std::size_t dir_j, double T,
                                      int level);

// Piecewise-constant derivative of the regularized driver: zero on the first
// dyadic cell and for j > level; on cell i+1 it equals 2^n/T * W_j(cell i).
double regularized_derivative(const BrownianTableau& tableau, std::size_t j, double t);

// H-norm of the regularized driver at time t: sqrt(sum_{j<=n} wdot_j(t)^2).
double wn_hnorm(const BrownianTableau& tableau, double t);

struct LocalizationParams {
  double alpha = 1.5;
  LocalizationParams() = default;
  explicit LocalizationParams(double a);
};

// True iff every examined increment satisfies |W_j(cell i)| <= alpha sqrt(n) 2^{-n/2},
// over j <= n and cells i <= max(floor(2^n t / T - 1), 0).
bool localization_indicator(const BrownianTableau& tableau, double t,
                            const LocalizationParams& params);

// Accumulate per-direction increments into a Hermitian spectral array in the
// continuum convention (the "source field" whose covariance is mu-weighted).
// increments[j-1] holds the increment for direction j; directions beyond the
// span are ignored. The output array must be grid.size() long and zeroed by
// the caller if accumulation from scratch is intended.
void accumulate_source_field(const BasisIndex& basis, std::span<const double> increments,
                             const TorusGrid& grid,
                             std::vector<std::complex<double>>& spectral_out);

}  // namespace wave3d

#endif
