#include "wave3d/noise.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <numbers>

#include "wave3d/errors.hpp"

namespace wave3d {

namespace {
constexpr double kTwoPi = 2.0 * std::numbers::pi;

void check_beta(double beta) {
  if (!(beta > 0.0 && beta < 2.0))
    throw ParameterError("beta must lie in the open interval (0,2)");
}
}  // namespace

double riesz_covariance(const std::array<double, 3>& x, double beta) {
  check_beta(beta);
  const double r2 = x[0] * x[0] + x[1] * x[1] + x[2] * x[2];
  if (r2 == 0.0) throw DomainError("riesz_covariance: kernel is singular at x = 0");
  return std::pow(r2, -0.5 * beta);
}

double spectral_weight(const std::array<int, 3>& k, const TorusGrid& grid, double beta) {
  check_beta(beta);
  const int h = grid.N / 2;
  for (int c : k)
    if (c < -h || c > h - 1) throw ParameterError("spectral_weight: mode outside grid range");
  if (k[0] == 0 && k[1] == 0 && k[2] == 0) return 0.0;
  const double xi = grid.xi_abs(k);
  return std::pow(xi, -(3.0 - beta)) / grid.volume();
}

double riesz_transform_constant(double beta) {
  check_beta(beta);
  // pi^{beta-3/2} Gamma((3-beta)/2) / Gamma(beta/2)
  return std::pow(std::numbers::pi, beta - 1.5) *
         std::exp(std::lgamma(0.5 * (3.0 - beta)) - std::lgamma(0.5 * beta));
}

NoiseModel::NoiseModel(const TorusGrid& grid, double beta_) : beta(beta_) {
  check_beta(beta_);
  mu.resize(grid.size());
  const double inv_vol = 1.0 / grid.volume();
  for (std::size_t f = 0; f < grid.size(); ++f) {
    const auto k = grid.signed_modes(f);
    if (k[0] == 0 && k[1] == 0 && k[2] == 0) {
      mu[f] = 0.0;
    } else {
      mu[f] = std::pow(grid.xi_abs(k), -(3.0 - beta_)) * inv_vol;
    }
  }
}

std::complex<double> hinner(std::span<const std::complex<double>> a,
                            std::span<const std::complex<double>> b,
                            const NoiseModel& model) {
  if (a.size() != model.mu.size() || b.size() != model.mu.size())
    throw ParameterError("hinner: coefficient array size mismatch");
  std::complex<double> acc{0.0, 0.0};
  for (std::size_t f = 0; f < a.size(); ++f) acc += model.mu[f] * a[f] * std::conj(b[f]);
  return acc;
}

double hnorm_sq(std::span<const std::complex<double>> coeffs, const NoiseModel& model,
                const TorusGrid& grid) {
  if (coeffs.size() != grid.size())
    throw ParameterError("hnorm_sq: coefficient array size mismatch");
  double scale = 0.0;
  for (const auto& c : coeffs) scale = std::max(scale, std::abs(c));
  const double tol = 1e-8 * std::max(scale, 1.0);
  double acc = 0.0;
  for (std::size_t f = 0; f < coeffs.size(); ++f) {
    const std::size_t m = grid.mirror_index(f);
    if (std::abs(coeffs[f] - std::conj(coeffs[m])) > tol)
      throw ValidationError("hnorm_sq: coefficients are not Hermitian-symmetric");
    acc += model.mu[f] * std::norm(coeffs[f]);
  }
  return acc;
}

double discretized_kernel(const std::array<double, 3>& r, const NoiseModel& model,
                          const TorusGrid& grid) {
  double acc = 0.0;
  for (std::size_t f = 0; f < grid.size(); ++f) {
    if (model.mu[f] == 0.0) continue;
    const auto k = grid.signed_modes(f);
    const double phase = kTwoPi * (k[0] * r[0] + k[1] * r[1] + k[2] * r[2]) / grid.L;
    acc += model.mu[f] * std::cos(phase);
  }
  return acc;
}

BasisIndex::BasisIndex(const TorusGrid& grid, const NoiseModel& model) {
  struct Rep {
    std::array<int, 3> k;
    double xi;
    bool self;
  };
  std::vector<Rep> reps;
  const int h = grid.N / 2;
  for (int a = -h; a < h; ++a)
    for (int b = -h; b < h; ++b)
      for (int c = -h; c < h; ++c) {
        if (a == 0 && b == 0 && c == 0) continue;
        const std::array<int, 3> k{a, b, c};
        // Mirror in signed coordinates; components at -N/2 map to themselves.
        const std::array<int, 3> mk{a == -h ? -h : -a, b == -h ? -h : -b,
                                    c == -h ? -h : -c};
        const bool self = (mk == k);
        if (!self && mk > k) continue;  // keep the lexicographically larger of the pair
        reps.push_back({k, grid.xi_abs(k), self});
      }
  std::sort(reps.begin(), reps.end(), [](const Rep& x, const Rep& y) {
    if (x.xi != y.xi) return x.xi < y.xi;
    return x.k < y.k;
  });

  const double vol2 = grid.volume() * grid.volume();
  dirs_.reserve(2 * reps.size());
  for (const auto& rep : reps) {
    const std::size_t mode =
        grid.index(grid.wrap_mode(rep.k[0]), grid.wrap_mode(rep.k[1]), grid.wrap_mode(rep.k[2]));
    const std::size_t mirror = grid.mirror_index(mode);
    const double mu = model.mu[mode];
    BasisDirection d;
    d.k = rep.k;
    d.mode = mode;
    d.mirror = mirror;
    d.self_conjugate = rep.self;
    if (rep.self) {
      d.imag_part = false;
      d.norm = 1.0 / std::sqrt(mu * vol2);
      d.source_scale = std::sqrt(mu * vol2);
      dirs_.push_back(d);
    } else {
      d.norm = std::sqrt(2.0 / (mu * vol2));
      d.source_scale = std::sqrt(mu * vol2 / 2.0);
      d.imag_part = false;
      dirs_.push_back(d);
      d.imag_part = true;
      dirs_.push_back(d);
    }
  }
}

const BasisDirection& BasisIndex::dir(std::size_t j) const {
  if (j < 1 || j > dirs_.size()) throw IndexError("basis index out of range");
  return dirs_[j - 1];
}

std::vector<double> BasisIndex::element_field(std::size_t j, const TorusGrid& grid) const {
  const BasisDirection& d = dir(j);
  std::vector<double> out(grid.size());
  const double dx = grid.dx();
  for (int a = 0; a < grid.N; ++a)
    for (int b = 0; b < grid.N; ++b)
      for (int c = 0; c < grid.N; ++c) {
        const double phase =
            kTwoPi * (d.k[0] * a * dx + d.k[1] * b * dx + d.k[2] * c * dx) / grid.L;
        out[grid.index(a, b, c)] = d.norm * (d.imag_part ? std::sin(phase) : std::cos(phase));
      }
  return out;
}

std::vector<double> bridge_increments(std::uint64_t seed, std::size_t dir_j, double T,
                                      int level) {
  if (level < 0) throw ParameterError("bridge_increments: level must be >= 0");
  // Root increment over [0,T], then split cell values level by level; the two
  // children of a cell always sum to it exactly.
  std::vector<double> cur{std::sqrt(T) * rng::keyed_normal(seed, rng::kTagBridge, dir_j, 0, 0, 0)};
  for (int m = 0; m < level; ++m) {
    std::vector<double> next(cur.size() * 2);
    const double sd = std::sqrt(T * std::ldexp(1.0, -(m + 2)));
    for (std::size_t i = 0; i < cur.size(); ++i) {
      const double g =
          sd * rng::keyed_normal(seed, rng::kTagBridge, dir_j, static_cast<std::uint64_t>(m) + 1,
                                 i, 1);
      next[2 * i] = 0.5 * cur[i] + g;
      next[2 * i + 1] = 0.5 * cur[i] - g;
    }
    cur = std::move(next);
  }
  return cur;
}

BrownianTableau BrownianTableau::sample(int level, int truncation, double T,
                                        std::uint64_t seed) {
  if (level < 1) throw ParameterError("tableau: level must be >= 1");
  if (truncation < 1) throw ParameterError("tableau: truncation must be >= 1");
  if (T <= 0.0) throw ParameterError("tableau: T must be positive");
  BrownianTableau t;
  t.level = level;
  t.truncation = truncation;
  t.T = T;
  t.seed = seed;
  t.increments.resize(truncation);
  for (int j = 1; j <= truncation; ++j)
    t.increments[j - 1] = bridge_increments(seed, static_cast<std::size_t>(j), T, level);
  return t;
}

double BrownianTableau::cell(std::size_t j, std::size_t i) const {
  if (j < 1 || j > increments.size()) throw IndexError("tableau: direction out of range");
  if (i >= increments[j - 1].size()) throw IndexError("tableau: cell out of range");
  return increments[j - 1][i];
}

namespace {
constexpr std::uint64_t kTableauMagic = 0x5733445441423031ull;  // "W3DTAB01"

void put_u64(std::ofstream& os, std::uint64_t v) {
  unsigned char b[8];
  for (int i = 0; i < 8; ++i) b[i] = static_cast<unsigned char>(v >> (8 * i));
  os.write(reinterpret_cast<const char*>(b), 8);
}

std::uint64_t get_u64(std::ifstream& is) {
  unsigned char b[8];
  is.read(reinterpret_cast<char*>(b), 8);
  std::uint64_t v = 0;
  for (int i = 0; i < 8; ++i) v |= static_cast<std::uint64_t>(b[i]) << (8 * i);
  return v;
}

std::uint64_t f64_bits(double x) {
  std::uint64_t v;
  std::memcpy(&v, &x, 8);
  return v;
}

double bits_f64(std::uint64_t v) {
  double x;
  std::memcpy(&x, &v, 8);
  return x;
}
}  // namespace

void BrownianTableau::dump(const std::string& path) const {
  std::ofstream os(path, std::ios::binary);
  if (!os) throw IoError("tableau dump: cannot open " + path);
  put_u64(os, kTableauMagic);
  put_u64(os, static_cast<std::uint64_t>(level));
  put_u64(os, static_cast<std::uint64_t>(truncation));
  put_u64(os, f64_bits(T));
  for (const auto& row : increments)
    for (double v : row) put_u64(os, f64_bits(v));
  if (!os) throw IoError("tableau dump: write failed for " + path);
}

BrownianTableau BrownianTableau::load(const std::string& path) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw IoError("tableau load: cannot open " + path);
  if (get_u64(is) != kTableauMagic) throw IoError("tableau load: bad magic in " + path);
  BrownianTableau t;
  t.level = static_cast<int>(get_u64(is));
  t.truncation = static_cast<int>(get_u64(is));
  t.T = bits_f64(get_u64(is));
  if (t.level < 1 || t.level > 40 || t.truncation < 1)
    throw IoError("tableau load: corrupt header in " + path);
  const std::size_t cells = std::size_t{1} << t.level;
  t.increments.assign(t.truncation, std::vector<double>(cells));
  for (auto& row : t.increments)
    for (double& v : row) v = bits_f64(get_u64(is));
  if (!is) throw IoError("tableau load: truncated payload in " + path);
  return t;
}

double regularized_derivative(const BrownianTableau& tableau, std::size_t j, double t) {
  if (j < 1) throw IndexError("regularized_derivative: direction index is 1-based");
  if (t < 0.0 || t > tableau.T)
    throw ParameterError("regularized_derivative: t outside [0,T]");
  if (j > static_cast<std::size_t>(tableau.level)) return 0.0;
  if (j > tableau.increments.size())
    throw IndexError("regularized_derivative: direction beyond tableau truncation");
  const double cell_width = tableau.T * std::ldexp(1.0, -tableau.level);
  auto c = static_cast<long long>(std::floor(t / cell_width));
  const long long cells = 1ll << tableau.level;
  if (c >= cells) c = cells - 1;  // t == T belongs to the last cell
  if (c == 0) return 0.0;
  return (1.0 / cell_width) * tableau.cell(j, static_cast<std::size_t>(c - 1));
}

double wn_hnorm(const BrownianTableau& tableau, double t) {
  double acc = 0.0;
  const auto jmax = std::min<std::size_t>(tableau.level, tableau.increments.size());
  for (std::size_t j = 1; j <= jmax; ++j) {
    const double w = regularized_derivative(tableau, j, t);
    acc += w * w;
  }
  return std::sqrt(acc);
}

LocalizationParams::LocalizationParams(double a) : alpha(a) {
  if (!(a > std::sqrt(2.0 * std::log(2.0))))
    throw ParameterError("localization: alpha must exceed sqrt(2 ln 2)");
}

bool localization_indicator(const BrownianTableau& tableau, double t,
                            const LocalizationParams& params) {
  if (t < 0.0 || t > tableau.T) throw ParameterError("localization: t outside [0,T]");
  const int n = tableau.level;
  if (static_cast<std::size_t>(n) > tableau.increments.size())
    throw ParameterError("localization: tableau truncation below its level");
  const double threshold =
      params.alpha * std::sqrt(static_cast<double>(n)) * std::exp2(-0.5 * n);
  const long long cells = 1ll << n;
  long long imax = static_cast<long long>(std::floor(std::ldexp(t / tableau.T, n) - 1.0));
  if (imax < 0) imax = 0;
  if (imax > cells - 1) imax = cells - 1;
  for (int j = 1; j <= n; ++j)
    for (long long i = 0; i <= imax; ++i)
      if (std::abs(tableau.cell(j, static_cast<std::size_t>(i))) > threshold) return false;
  return true;
}

void accumulate_source_field(const BasisIndex& basis, std::span<const double> increments,
                             const TorusGrid& grid,
                             std::vector<std::complex<double>>& spectral_out) {
  if (spectral_out.size() != grid.size())
    throw ParameterError("accumulate_source_field: output size mismatch");
  const std::size_t n = std::min(increments.size(), basis.count());
  for (std::size_t j = 1; j <= n; ++j) {
    const double w = increments[j - 1];
    if (w == 0.0) continue;
    const BasisDirection& d = basis.dir(j);
    if (d.self_conjugate) {
      spectral_out[d.mode] += d.source_scale * w;
    } else if (d.imag_part) {
      spectral_out[d.mode] += std::complex<double>(0.0, -d.source_scale * w);
      spectral_out[d.mirror] += std::complex<double>(0.0, d.source_scale * w);
    } else {
      spectral_out[d.mode] += d.source_scale * w;
      spectral_out[d.mirror] += d.source_scale * w;
    }
  }
}

}  // namespace wave3d
