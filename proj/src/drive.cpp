#include "wave3d/drive.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

#include "wave3d/errors.hpp"

namespace wave3d {

namespace {
constexpr double kTwoPi = 2.0 * std::numbers::pi;
}

double ControlComponent::value(double t) const {
  switch (kind) {
    case Kind::Constant: return amplitude;
    case Kind::Pulse: return t < param ? amplitude : 0.0;
    case Kind::Sine: return amplitude * std::sin(kTwoPi * param * t);
  }
  return 0.0;
}

double ControlComponent::integral(double t0, double t1) const {
  switch (kind) {
    case Kind::Constant: return amplitude * (t1 - t0);
    case Kind::Pulse: {
      const double a = std::min(t0, param), b = std::min(t1, param);
      return amplitude * (b - a);
    }
    case Kind::Sine: {
      if (param == 0.0) return 0.0;
      const double w = kTwoPi * param;
      return amplitude * (std::cos(w * t0) - std::cos(w * t1)) / w;
    }
  }
  return 0.0;
}

std::size_t Control::max_dir() const {
  std::size_t m = 0;
  for (const auto& c : components) m = std::max(m, c.dir_j);
  return m;
}

double Control::ht_norm_sq(double T) const {
  double acc = 0.0;
  for (const auto& c : components) {
    const int M = 4096;
    const double h = T / M;
    double s = 0.0;
    for (int i = 0; i < M; ++i) {
      const double v = c.value((i + 0.5) * h);
      s += v * v;
    }
    acc += s * h;
  }
  return acc;
}

std::string DriveSpec::describe() const {
  std::ostringstream os;
  os << "stochastic=" << (stochastic ? 1 : 0);
  if (stochastic) os << "(J=" << noise_truncation << ")";
  if (wz_level) os << " wz_level=" << *wz_level;
  if (!control.empty()) os << " control[" << control.components.size() << "]";
  if (shifted) os << " shift(level=" << shift_level << ")";
  return os.str();
}

void DriveSpec::validate(std::size_t basis_count) const {
  if (wz_level) {
    if (!tableau) throw ConfigError("drive: wz_level set without an attached tableau");
    if (*wz_level < 1) throw ConfigError("drive: wz_level must be >= 1");
    if (tableau->level < *wz_level)
      throw ConfigError("drive: attached tableau is shallower than wz_level");
    if (tableau->truncation < std::min<int>(*wz_level, static_cast<int>(basis_count)))
      throw ConfigError("drive: tableau truncation below wz_level");
  }
  if (shifted) {
    if (!stochastic) throw ConfigError("drive: shift requires the stochastic channel");
    if (!tableau) throw ConfigError("drive: shift requires an attached tableau");
    if (tableau->level < shift_level)
      throw ConfigError("drive: attached tableau is shallower than the shift level");
    if (shift_control.max_dir() > basis_count)
      throw ConfigError("drive: shift control not representable on the basis truncation");
  }
  if (control.max_dir() > basis_count)
    throw ConfigError("drive: control not representable on the basis truncation");
  if (stochastic && noise_truncation == 0)
    throw ConfigError("drive: stochastic channel with zero directions");
}

DriveSpec girsanov_shift(const DriveSpec& base, const Control& h, int level) {
  if (!base.tableau) throw ConfigError("girsanov_shift: no tableau attached");
  if (base.tableau->level < level)
    throw ConfigError("girsanov_shift: tableau shallower than requested level");
  DriveSpec out = base;
  out.stochastic = true;
  out.shifted = true;
  out.shift_control = h;
  out.shift_level = level;
  return out;
}

}  // namespace wave3d
