#include "wave3d/green.hpp"

#include <cmath>
#include <numbers>

#include "wave3d/errors.hpp"

namespace wave3d {

namespace {
constexpr double kPi = std::numbers::pi;
constexpr double kTwoPi = 2.0 * std::numbers::pi;
}  // namespace

double green_fourier(double t, double xi_abs) {
  if (t < 0.0) throw ParameterError("green_fourier: t must be >= 0");
  if (xi_abs < 0.0) throw ParameterError("green_fourier: |xi| must be >= 0");
  const double w = kTwoPi * xi_abs;
  const double arg = w * t;
  if (arg < 1e-4) {
    // series of sin(wt)/w around 0, accurate to ~1e-20 here
    return t * (1.0 - arg * arg / 6.0 * (1.0 - arg * arg / 20.0));
  }
  return std::sin(arg) / w;
}

double green_hnorm_sq(double t, const NoiseModel& model, const TorusGrid& grid) {
  if (t < 0.0) throw ParameterError("green_hnorm_sq: t must be >= 0");
  if (model.mu.size() != grid.size())
    throw ParameterError("green_hnorm_sq: model/grid size mismatch");
  const auto xi = grid.xi_abs_table();
  double acc = 0.0;
  for (std::size_t f = 0; f < grid.size(); ++f) {
    if (model.mu[f] == 0.0) continue;
    const double g = green_fourier(t, xi[f]);
    acc += model.mu[f] * g * g;
  }
  return acc;
}

double green_hnorm_sq_radial(double t, double beta, double xi_lo, double xi_hi,
                             int points_per_halfperiod) {
  if (!(beta > 0.0 && beta < 2.0)) throw ParameterError("radial: beta out of range");
  if (!(xi_lo >= 0.0 && xi_hi > xi_lo)) throw ParameterError("radial: bad band");
  if (t < 0.0) throw ParameterError("radial: t must be >= 0");
  if (t == 0.0) return 0.0;
  // Integrand: 4 pi r^2 * r^{beta-3} * sin^2(2 pi t r) / (2 pi r)^2
  //          = (1/pi) r^{beta-3} sin^2(2 pi t r).
  auto f = [&](double r) {
    if (r == 0.0) return 0.0;
    const double s = std::sin(kTwoPi * t * r);
    return std::pow(r, beta - 3.0) * s * s / kPi;
  };
  const double halfperiod = 0.5 / (2.0 * t);  // zeros of sin^2(2 pi t r)
  const int m = points_per_halfperiod;        // even
  auto simpson = [&](double a, double b) {
    const double h = (b - a) / m;
    double sum = f(a) + f(b);
    for (int i = 1; i < m; ++i) sum += f(a + i * h) * (i % 2 ? 4.0 : 2.0);
    return sum * h / 3.0;
  };
  double acc = 0.0;
  // Graded panels through the infrared end; the integrand behaves like
  // r^{beta-1} there, which uniform panels resolve poorly.
  double a = std::min(halfperiod, xi_hi);
  {
    double hi = a;
    while (hi > 4.0 * xi_lo && hi > 1e-300) {
      const double lo = std::max(xi_lo, hi / 4.0);
      acc += simpson(lo, hi);
      hi = lo;
      if (lo <= xi_lo) break;
    }
    if (hi > xi_lo) acc += simpson(xi_lo, hi);
  }
  while (a < xi_hi) {
    const double b = std::min(xi_hi, a + halfperiod);
    acc += simpson(a, b);
    a = b;
  }
  return acc;
}

void gauss_legendre(int n, std::vector<double>& nodes, std::vector<double>& weights) {
  if (n < 1) throw ParameterError("gauss_legendre: n must be >= 1");
  nodes.assign(n, 0.0);
  weights.assign(n, 0.0);
  for (int i = 0; i < (n + 1) / 2; ++i) {
    // Newton iteration from the Chebyshev-like initial guess.
    double x = std::cos(kPi * (i + 0.75) / (n + 0.5));
    double pp = 0.0;
    for (int iter = 0; iter < 100; ++iter) {
      double p0 = 1.0, p1 = 0.0;
      for (int j = 0; j < n; ++j) {
        const double p2 = p1;
        p1 = p0;
        p0 = ((2.0 * j + 1.0) * x * p1 - j * p2) / (j + 1.0);
      }
      pp = n * (x * p0 - p1) / (x * x - 1.0);
      const double dx = p0 / pp;
      x -= dx;
      if (std::abs(dx) < 1e-15) break;
    }
    nodes[i] = -x;
    nodes[n - 1 - i] = x;
    const double w = 2.0 / ((1.0 - x * x) * pp * pp);
    weights[i] = w;
    weights[n - 1 - i] = w;
  }
}

SphereQuadrature SphereQuadrature::build(int n_polar, int n_azimuth) {
  if (n_polar < 1 || n_azimuth < 1)
    throw ParameterError("sphere quadrature: node counts must be >= 1");
  std::vector<double> cn, cw;
  gauss_legendre(n_polar, cn, cw);
  SphereQuadrature q;
  q.dirs.reserve(static_cast<std::size_t>(n_polar) * n_azimuth);
  q.weights.reserve(q.dirs.capacity());
  const double dphi = kTwoPi / n_azimuth;
  for (int i = 0; i < n_polar; ++i) {
    const double c = cn[i];
    const double s = std::sqrt(std::max(0.0, 1.0 - c * c));
    for (int j = 0; j < n_azimuth; ++j) {
      const double phi = (j + 0.5) * dphi;
      q.dirs.push_back({s * std::cos(phi), s * std::sin(phi), c});
      q.weights.push_back(cw[i] * dphi);
    }
  }
  return q;
}

double sphere_convolve(double t, const std::array<double, 3>& x,
                       const std::function<double(const std::array<double, 3>&)>& psi,
                       const SphereQuadrature& quad) {
  if (!(t > 0.0)) throw ParameterError("sphere_convolve: t must be positive");
  double acc = 0.0;
  for (std::size_t q = 0; q < quad.size(); ++q) {
    const auto& d = quad.dirs[q];
    acc += quad.weights[q] * psi({x[0] + t * d[0], x[1] + t * d[1], x[2] + t * d[2]});
  }
  return acc * t * t / (4.0 * kPi * t);
}

}  // namespace wave3d
