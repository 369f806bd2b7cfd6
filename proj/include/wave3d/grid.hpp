#ifndef WAVE3D_GRID_HPP
#define WAVE3D_GRID_HPP

#include <array>
#include <cmath>
#include <cstddef>
#include <vector>

#include "wave3d/errors.hpp"

namespace wave3d {

// Periodic box [0,L)^3 sampled with N points per axis, plus the time grid.
// Modes use the FFT layout m in [0,N)^3 with signed index k_i = m_i or m_i - N,
// so k_i runs over {-N/2, ..., N/2 - 1}. Wavenumbers are xi_k = k / L.
struct TorusGrid {
  double L = 1.0;
  int N = 8;
  double T = 1.0;
  int steps = 8;

  TorusGrid() = default;
  TorusGrid(double L_, int N_, double T_, int steps_) : L(L_), N(N_), T(T_), steps(steps_) {
    validate();
  }

  void validate() const {
    if (L <= 0.0) throw ParameterError("grid: L must be positive");
    if (N < 4 || (N % 2) != 0 || (N & (N - 1)) != 0)
      throw ParameterError("grid: N must be an even power of two, N >= 4");
    if (T <= 0.0) throw ParameterError("grid: T must be positive");
    if (steps < 1) throw ParameterError("grid: steps must be >= 1");
  }

  double dt() const { return T / steps; }
  double dx() const { return L / N; }
  double dV() const { return dx() * dx() * dx(); }
  double volume() const { return L * L * L; }
  std::size_t size() const { return static_cast<std::size_t>(N) * N * N; }

  std::size_t index(int m0, int m1, int m2) const {
    return (static_cast<std::size_t>(m0) * N + m1) * N + m2;
  }

  int signed_mode(int m) const { return m < N / 2 ? m : m - N; }
  int wrap_mode(int k) const { return k >= 0 ? k : k + N; }

  std::array<int, 3> signed_modes(std::size_t flat) const {
    const int m2 = static_cast<int>(flat % N);
    const int m1 = static_cast<int>((flat / N) % N);
    const int m0 = static_cast<int>(flat / (static_cast<std::size_t>(N) * N));
    return {signed_mode(m0), signed_mode(m1), signed_mode(m2)};
  }

  // Flat index of the conjugate mode -k.
  std::size_t mirror_index(std::size_t flat) const {
    const int m2 = static_cast<int>(flat % N);
    const int m1 = static_cast<int>((flat / N) % N);
    const int m0 = static_cast<int>(flat / (static_cast<std::size_t>(N) * N));
    return index((N - m0) % N, (N - m1) % N, (N - m2) % N);
  }

  double xi_abs(const std::array<int, 3>& k) const {
    const double a = k[0] / L, b = k[1] / L, c = k[2] / L;
    return std::sqrt(a * a + b * b + c * c);
  }

  // |xi| per flat mode index.
  std::vector<double> xi_abs_table() const {
    std::vector<double> out(size());
    for (std::size_t f = 0; f < size(); ++f) out[f] = xi_abs(signed_modes(f));
    return out;
  }
};

}  // namespace wave3d

#endif
