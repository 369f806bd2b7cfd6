#ifndef WAVE3D_GREEN_HPP
#define WAVE3D_GREEN_HPP

#include <array>
#include <functional>
#include <vector>

#include "wave3d/grid.hpp"
#include "wave3d/noise.hpp"

namespace wave3d {

// Fourier multiplier of the wave fundamental solution:
// sin(2 pi t |xi|) / (2 pi |xi|), continued by its limit t at |xi| = 0.
double green_fourier(double t, double xi_abs);

// sum_k mu_k green_fourier(t, |xi_k|)^2 over the grid modes.
double green_hnorm_sq(double t, const NoiseModel& model, const TorusGrid& grid);

// Radial evaluation of int mu(dxi) |FG(t)(xi)|^2 over the band [xi_lo, xi_hi]:
// (1/pi) int xi^{beta-3} sin^2(2 pi t xi) dxi ... with the full angular factor,
// integrated with half-period panels (composite Simpson) so oscillations are
// always resolved.
double green_hnorm_sq_radial(double t, double beta, double xi_lo, double xi_hi,
                             int points_per_halfperiod = 64);

// Surface quadrature on the unit sphere: product Gauss-Legendre in the polar
// cosine times a uniform azimuth rule. Weights sum to 4 pi.
struct SphereQuadrature {
  std::vector<std::array<double, 3>> dirs;
  std::vector<double> weights;

  static SphereQuadrature build(int n_polar = 16, int n_azimuth = 32);
  std::size_t size() const { return dirs.size(); }
};

// [G(t,.) * psi](x) = (1/(4 pi t)) sum_q w_q t^2 psi(x + t dir_q).
double sphere_convolve(double t, const std::array<double, 3>& x,
                       const std::function<double(const std::array<double, 3>&)>& psi,
                       const SphereQuadrature& quad);

// Nodes and weights of an n-point Gauss-Legendre rule on [-1,1].
void gauss_legendre(int n, std::vector<double>& nodes, std::vector<double>& weights);

}  // namespace wave3d

#endif
