#include "wave3d/coefficients.hpp"

#include <cmath>
#include <cstdio>
#include <cstdlib>

#include "wave3d/errors.hpp"

namespace wave3d {

double Coefficient::operator()(double x) const {
  switch (kind_) {
    case Kind::Zero: return 0.0;
    case Kind::Constant: return c_;
    case Kind::Identity: return x;
    case Kind::Affine: return a_ * x + c_;
    case Kind::Sine: return std::sin(a_ * x);
    case Kind::Tanh: return std::tanh(a_ * x);
  }
  return 0.0;
}

double Coefficient::lipschitz() const {
  switch (kind_) {
    case Kind::Zero:
    case Kind::Constant: return 0.0;
    case Kind::Identity: return 1.0;
    case Kind::Affine: return std::abs(a_);
    case Kind::Sine:
    case Kind::Tanh: return std::abs(a_);
  }
  return 0.0;
}

std::string Coefficient::name() const {
  char buf[64];
  switch (kind_) {
    case Kind::Zero: return "zero";
    case Kind::Identity: return "identity";
    case Kind::Constant:
      std::snprintf(buf, sizeof buf, "constant(%g)", c_);
      return buf;
    case Kind::Affine:
      std::snprintf(buf, sizeof buf, "affine(%g,%g)", a_, c_);
      return buf;
    case Kind::Sine:
      std::snprintf(buf, sizeof buf, "sine(%g)", a_);
      return buf;
    case Kind::Tanh:
      std::snprintf(buf, sizeof buf, "tanh(%g)", a_);
      return buf;
  }
  return "zero";
}

Coefficient Coefficient::parse(const std::string& text) {
  auto args = [&](int want, double* out) {
    const auto lp = text.find('(');
    const auto rp = text.rfind(')');
    if (lp == std::string::npos || rp == std::string::npos || rp < lp)
      throw ParameterError("coefficient: malformed arguments in '" + text + "'");
    std::string inner = text.substr(lp + 1, rp - lp - 1);
    int got = 0;
    const char* p = inner.c_str();
    char* end = nullptr;
    while (got < want) {
      out[got] = std::strtod(p, &end);
      if (end == p) throw ParameterError("coefficient: bad number in '" + text + "'");
      ++got;
      p = end;
      while (*p == ',' || *p == ' ') ++p;
    }
    return got;
  };
  if (text == "zero") return zero();
  if (text == "identity") return identity();
  double v[2];
  if (text.rfind("constant", 0) == 0) {
    args(1, v);
    return constant(v[0]);
  }
  if (text.rfind("affine", 0) == 0) {
    args(2, v);
    return affine(v[0], v[1]);
  }
  if (text.rfind("sine", 0) == 0) {
    args(1, v);
    return sine(v[0]);
  }
  if (text.rfind("tanh", 0) == 0) {
    args(1, v);
    return tanh(v[0]);
  }
  throw ParameterError("coefficient: unknown kind '" + text + "'");
}

Coefficient operator+(const Coefficient& a, const Coefficient& b) {
  using K = Coefficient::Kind;
  if (a.kind_ == K::Zero) return b;
  if (b.kind_ == K::Zero) return a;
  auto lin = [](const Coefficient& c, double* slope, double* off) {
    switch (c.kind_) {
      case K::Constant: *slope = 0.0; *off = c.c_; return true;
      case K::Identity: *slope = 1.0; *off = 0.0; return true;
      case K::Affine: *slope = c.a_; *off = c.c_; return true;
      default: return false;
    }
  };
  double sa, oa, sb, ob;
  if (lin(a, &sa, &oa) && lin(b, &sb, &ob)) {
    const double s = sa + sb, o = oa + ob;
    if (s == 0.0 && o == 0.0) return Coefficient::zero();
    if (s == 0.0) return Coefficient::constant(o);
    return Coefficient::affine(s, o);
  }
  // sigma + (-sigma) for the shifted-equation preset
  if (a.kind_ == b.kind_ && a.a_ == -b.a_ && a.c_ == -b.c_) return Coefficient::zero();
  throw ParameterError("coefficient: sum of '" + a.name() + "' and '" + b.name() +
                       "' is outside the registry");
}

Coefficient Coefficient::negated() const {
  switch (kind_) {
    case Kind::Zero: return zero();
    case Kind::Constant: return constant(-c_);
    case Kind::Identity: return affine(-1.0, 0.0);
    case Kind::Affine: return affine(-a_, -c_);
    case Kind::Sine: return sine(-a_);
    case Kind::Tanh: return tanh(-a_);
  }
  return zero();
}

}  // namespace wave3d
