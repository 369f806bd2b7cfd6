#ifndef WAVE3D_DRIVE_HPP
#define WAVE3D_DRIVE_HPP

#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "wave3d/noise.hpp"

namespace wave3d {

// One component h_j(t) of a control path, attached to basis direction j.
struct ControlComponent {
  std::size_t dir_j = 1;  // 1-based basis index
  enum class Kind { Constant, Pulse, Sine } kind = Kind::Constant;
  double amplitude = 0.0;
  double param = 0.0;  // pulse: switch-off time; sine: frequency (cycles per unit time)

  double value(double t) const;
  double integral(double t0, double t1) const;  // exact
};

struct Control {
  std::vector<ControlComponent> components;

  bool empty() const { return components.empty(); }
  std::size_t max_dir() const;
  // sum_j int_0^T h_j(t)^2 dt, by fine quadrature (exact for constant/pulse).
  double ht_norm_sq(double T) const;
};

// Which forcing enters a run. The stochastic channel draws per-step increments
// for every basis direction from the seeded bridge; the regularized channel
// reads the attached tableau; the control channel integrates h exactly.
struct DriveSpec {
  bool stochastic = false;
  // Number of leading basis directions carried by the stochastic drive;
  // -1 means every direction on the grid.
  int noise_truncation = -1;
  std::optional<int> wz_level;
  std::shared_ptr<const BrownianTableau> tableau;
  Control control;
  // Shift of the driving path: increments become dW + h dt - wdot^n dt.
  bool shifted = false;
  Control shift_control;
  int shift_level = 0;

  std::string describe() const;
  void validate(std::size_t basis_count) const;
};

// Drive realizing the path transformation omega + h - w^n on top of `base`.
// Requires a tableau of at least `level` attached to `base`.
DriveSpec girsanov_shift(const DriveSpec& base, const Control& h, int level);

}  // namespace wave3d

#endif
