#ifndef WAVE3D_COEFFICIENTS_HPP
#define WAVE3D_COEFFICIENTS_HPP

#include <string>

namespace wave3d {

// Globally Lipschitz scalar nonlinearity from a small named registry.
class Coefficient {
public:
  enum class Kind { Zero, Constant, Identity, Affine, Sine, Tanh };

  Coefficient() = default;

  static Coefficient zero() { return Coefficient(Kind::Zero, 0.0, 0.0); }
  static Coefficient constant(double c) { return Coefficient(Kind::Constant, 0.0, c); }
  static Coefficient identity() { return Coefficient(Kind::Identity, 1.0, 0.0); }
  static Coefficient affine(double a, double c) { return Coefficient(Kind::Affine, a, c); }
  static Coefficient sine(double scale) { return Coefficient(Kind::Sine, scale, 0.0); }
  static Coefficient tanh(double scale) { return Coefficient(Kind::Tanh, scale, 0.0); }

  // Parse "zero", "constant(0.5)", "identity", "affine(2,1)", "sine(1.5)",
  // "tanh(1)".
  static Coefficient parse(const std::string& text);

  double operator()(double x) const;
  double lipschitz() const;
  bool is_zero() const { return kind_ == Kind::Zero; }
  bool is_constant() const { return kind_ == Kind::Zero || kind_ == Kind::Constant; }
  Kind kind() const { return kind_; }
  std::string name() const;

  // Pointwise A(x) + B(x) stays in the registry for the closed pairs used by
  // the equation presets; throws otherwise.
  friend Coefficient operator+(const Coefficient& a, const Coefficient& b);
  Coefficient negated() const;

private:
  Coefficient(Kind k, double a, double c) : kind_(k), a_(a), c_(c) {}
  Kind kind_ = Kind::Zero;
  double a_ = 0.0;
  double c_ = 0.0;
};

struct Coefficients {
  Coefficient A;  // stochastic channel
  Coefficient B;  // regularized-driver channel
  Coefficient D;  // control channel
  Coefficient b;  // drift
};

}  // namespace wave3d

#endif
