#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <cmath>
#include <complex>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <numbers>

#include "doctest.h"
#include "wave3d/errors.hpp"
#include "wave3d/fft.hpp"
#include "wave3d/grid.hpp"
#include "wave3d/noise.hpp"
#include "wave3d/rng.hpp"
#include "wave3d/solver.hpp"

using namespace wave3d;

TEST_CASE("riesz covariance closed forms") {
  CHECK(riesz_covariance({1, 0, 0}, 1.0) == doctest::Approx(1.0).epsilon(1e-14));
  CHECK(riesz_covariance({0, 0, 4}, 0.5) == doctest::Approx(0.5).epsilon(1e-14));
  CHECK(riesz_covariance({3, 4, 0}, 1.0) == doctest::Approx(0.2).epsilon(1e-14));
  CHECK_THROWS_AS(riesz_covariance({0, 0, 0}, 1.0), DomainError);
  CHECK_THROWS_AS(riesz_covariance({1, 0, 0}, 2.5), ParameterError);
  CHECK_THROWS_AS(riesz_covariance({1, 0, 0}, 0.0), ParameterError);
}

TEST_CASE("spectral weight closed forms") {
  TorusGrid g(1.0, 8, 1.0, 8);
  CHECK(spectral_weight({0, 0, 0}, g, 1.0) == 0.0);
  CHECK(spectral_weight({1, 0, 0}, g, 1.0) == doctest::Approx(1.0).epsilon(1e-14));
  CHECK(spectral_weight({2, 0, 0}, g, 1.0) == doctest::Approx(0.25).epsilon(1e-14));
  CHECK_THROWS_AS(spectral_weight({5, 0, 0}, g, 1.0), ParameterError);
  NoiseModel m(g, 1.0);
  for (std::size_t f = 0; f < g.size(); ++f)
    CHECK(m.mu[f] == doctest::Approx(spectral_weight(g.signed_modes(f), g, 1.0)));
}

TEST_CASE("riesz transform constant") {
  // beta = 1 in three dimensions gives 1/pi
  CHECK(riesz_transform_constant(1.0) ==
        doctest::Approx(1.0 / std::numbers::pi).epsilon(1e-12));
}

TEST_CASE("hnorm_sq basics") {
  TorusGrid g(1.0, 8, 1.0, 8);
  NoiseModel m(g, 1.0);
  std::vector<std::complex<double>> c(g.size(), {0.0, 0.0});
  CHECK(hnorm_sq(c, m, g) == 0.0);

  const std::size_t mode = g.index(1, 0, 0);
  const double a = 0.7;
  c[mode] = a;
  c[g.mirror_index(mode)] = a;
  const double mu = spectral_weight({1, 0, 0}, g, 1.0);
  CHECK(hnorm_sq(c, m, g) == doctest::Approx(2.0 * mu * a * a).epsilon(1e-13));

  c[mode] = {0.3, 0.4};  // break the symmetry
  CHECK_THROWS_AS(hnorm_sq(c, m, g), ValidationError);
}

TEST_CASE("basis orthonormality and parseval") {
  TorusGrid g(1.0, 8, 1.0, 8);
  NoiseModel m(g, 1.2);
  BasisIndex basis(g, m);
  Fft3D fft(g.N);
  const std::size_t nd = 40;
  std::vector<std::vector<std::complex<double>>> hats(nd);
  for (std::size_t j = 1; j <= nd; ++j)
    hats[j - 1] = to_spectral(basis.element_field(j, g), g, fft);
  double worst = 0.0;
  for (std::size_t i = 0; i < nd; ++i)
    for (std::size_t j = i; j < nd; ++j)
      worst = std::max(worst, std::abs(hinner(hats[i], hats[j], m).real() -
                                       (i == j ? 1.0 : 0.0)));
  CHECK(worst < 1e-10);

  std::vector<std::complex<double>> hat(g.size(), {0.0, 0.0});
  for (std::size_t j = 1; j <= nd; ++j) {
    const double cj = rng::keyed_normal(42, 1, j, 0, 0, 0);
    for (std::size_t f = 0; f < g.size(); ++f) hat[f] += cj * hats[j - 1][f];
  }
  const double total = hnorm_sq(hat, m, g);
  double sum = 0.0;
  for (std::size_t j = 1; j <= nd; ++j) {
    const double ip = hinner(hat, hats[j - 1], m).real();
    sum += ip * ip;
  }
  CHECK(std::abs(sum - total) / total < 1e-8);
}

TEST_CASE("basis ordering convention") {
  TorusGrid g(1.0, 8, 1.0, 8);
  NoiseModel m(g, 1.0);
  BasisIndex basis(g, m);
  // |k| ascending, lexicographic ties, cosine before sine
  CHECK(basis.dir(1).k == std::array<int, 3>{0, 0, 1});
  CHECK_FALSE(basis.dir(1).imag_part);
  CHECK(basis.dir(2).k == std::array<int, 3>{0, 0, 1});
  CHECK(basis.dir(2).imag_part);
  CHECK(basis.dir(3).k == std::array<int, 3>{0, 1, 0});
  CHECK(basis.dir(5).k == std::array<int, 3>{1, 0, 0});
  CHECK(basis.dir(7).k == std::array<int, 3>{0, 1, -1});
  CHECK_THROWS_AS(basis.dir(0), IndexError);
  CHECK_THROWS_AS(basis.dir(basis.count() + 1), IndexError);
  // every nonzero grid mode is represented
  CHECK(basis.count() == g.size() - 1);
}

TEST_CASE("source field matches scaled basis elements") {
  TorusGrid g(1.0, 8, 1.0, 8);
  NoiseModel m(g, 0.8);
  BasisIndex basis(g, m);
  Fft3D fft(g.N);
  for (std::size_t j : {std::size_t{1}, std::size_t{2}, std::size_t{9}, std::size_t{33}}) {
    std::vector<double> inc(j, 0.0);
    inc[j - 1] = 1.0;
    std::vector<std::complex<double>> hat(g.size(), {0.0, 0.0});
    accumulate_source_field(basis, inc, g, hat);
    const auto field = to_physical(hat, g, fft);
    const auto ej = basis.element_field(j, g);
    const double scale = m.mu[basis.dir(j).mode] * g.volume();
    double worst = 0.0;
    for (std::size_t x = 0; x < g.size(); ++x)
      worst = std::max(worst, std::abs(field[x] - scale * ej[x]));
    CHECK(worst < 1e-12);
  }
}

TEST_CASE("tableau determinism, variance, refinement") {
  const auto a = BrownianTableau::sample(4, 6, 1.0, 999);
  const auto b = BrownianTableau::sample(4, 6, 1.0, 999);
  for (int j = 1; j <= 6; ++j)
    for (int i = 0; i < 16; ++i) CHECK(a.cell(j, i) == b.cell(j, i));

  // per-cell variance T 2^-n over 1e5 cells
  const int level = 3, per = 8, n_tab = 12500;
  double sum = 0.0, sum2 = 0.0;
  for (int t = 0; t < n_tab; ++t) {
    const auto tab = BrownianTableau::sample(level, 1, 1.0, rng::seed_stream(7, t));
    for (int i = 0; i < per; ++i) {
      sum += tab.cell(1, i);
      sum2 += tab.cell(1, i) * tab.cell(1, i);
    }
  }
  const double n = static_cast<double>(n_tab) * per;
  const double var = sum2 / n - (sum / n) * (sum / n);
  const double target = 0.125;
  const double se = target * std::sqrt(2.0 / n);
  CHECK(std::abs(var - target) < 3.0 * se);

  // level n+1 sums pairwise to level n
  for (int t = 0; t < 32; ++t) {
    const auto coarse = BrownianTableau::sample(4, 3, 1.0, rng::seed_stream(5, t));
    const auto fine = BrownianTableau::sample(5, 3, 1.0, rng::seed_stream(5, t));
    for (int j = 1; j <= 3; ++j)
      for (int i = 0; i < 16; ++i)
        CHECK(std::abs(fine.cell(j, 2 * i) + fine.cell(j, 2 * i + 1) - coarse.cell(j, i)) <
              1e-12);
  }
}

TEST_CASE("regularized derivative definition") {
  const int n = 4;
  const double T = 1.0;
  const auto tab = BrownianTableau::sample(n, n + 2, T, 321);
  const double cw = T / 16.0;
  // zero on the first dyadic cell
  CHECK(regularized_derivative(tab, 1, 0.1 * cw) == 0.0);
  // zero beyond the level truncation
  CHECK(regularized_derivative(tab, n + 1, 0.7) == 0.0);
  // on cell i+1 the value is 2^n/T times the previous increment
  for (int i = 0; i + 1 < 16; ++i) {
    const double t = (i + 1.5) * cw;
    CHECK(regularized_derivative(tab, 2, t) ==
          doctest::Approx((16.0 / T) * tab.cell(2, i)).epsilon(1e-14));
  }
  CHECK_THROWS_AS(regularized_derivative(tab, 0, 0.5), IndexError);
  CHECK_THROWS_AS(regularized_derivative(tab, 1, 1.5), ParameterError);

  // plateau integral over cell i+1 telescopes back to the increment
  const int steps_per_cell = 8;
  const double dt = cw / steps_per_cell;
  for (int i = 0; i + 1 < 16; ++i) {
    double acc = 0.0;
    for (int s = 0; s < steps_per_cell; ++s)
      acc += regularized_derivative(tab, 1, (i + 1) * cw + s * dt) * dt;
    CHECK(acc == doctest::Approx(tab.cell(1, i)).epsilon(1e-12));
  }
}

TEST_CASE("wn_hnorm values and localized bound") {
  const int n = 3;
  auto tab = BrownianTableau::sample(n, n, 1.0, 11);
  for (auto& row : tab.increments)
    for (double& v : row) v = 0.0;
  tab.increments[0][0] = 0.4;  // W_1(cell 0)
  const double cw = 1.0 / 8.0;
  CHECK(wn_hnorm(tab, 0.5 * cw) == 0.0);
  CHECK(wn_hnorm(tab, 1.5 * cw) == doctest::Approx(8.0 * 0.4).epsilon(1e-14));

  const LocalizationParams lp(1.5);
  for (int nlev : {3, 5, 7}) {
    const double bound = 1.5 * std::pow(nlev, 1.5) * std::exp2(0.5 * nlev);
    for (int r = 0; r < 100; ++r) {
      const auto t2 = BrownianTableau::sample(nlev, nlev, 1.0, rng::seed_stream(13, r));
      for (int i = 0; i <= 8; ++i) {
        const double t = i / 8.0;
        if (localization_indicator(t2, t, lp)) CHECK(wn_hnorm(t2, t) <= bound);
      }
    }
  }
}

TEST_CASE("localization indicator") {
  const int n = 4;
  auto tab = BrownianTableau::sample(n, n, 1.0, 77);
  for (auto& row : tab.increments)
    for (double& v : row) v = 0.0;
  const LocalizationParams lp(1.5);
  CHECK(localization_indicator(tab, 1.0, lp));

  const double thr = 1.5 * std::sqrt(4.0) * std::exp2(-2.0);
  tab.increments[2][5] = 10.0 * thr;
  CHECK_FALSE(localization_indicator(tab, 1.0, lp));
  // the offending cell is examined only once t reaches it
  CHECK(localization_indicator(tab, 4.0 / 16.0, lp));

  CHECK_THROWS_AS(LocalizationParams(1.0), ParameterError);

  // monotone: failure at t implies failure at all later times
  for (int r = 0; r < 50; ++r) {
    const auto t2 = BrownianTableau::sample(5, 5, 1.0, rng::seed_stream(99, r));
    bool seen_false = false;
    for (int i = 0; i <= 32; ++i) {
      const bool ok = localization_indicator(t2, i / 32.0, lp);
      if (seen_false) CHECK_FALSE(ok);
      if (!ok) seen_false = true;
    }
  }

  // P(L_n(T)) grows toward 1 between n = 3 and n = 8, and tracks the
  // independent-cell product formula
  auto empirical = [&](int nlev, int reps) {
    int hits = 0;
    for (int r = 0; r < reps; ++r)
      hits += localization_indicator(
          BrownianTableau::sample(nlev, nlev, 1.0, rng::seed_stream(1234, r)), 1.0, lp);
    return static_cast<double>(hits) / reps;
  };
  auto analytic = [](int nlev) {
    const double pc = std::erfc(1.5 * std::sqrt(static_cast<double>(nlev)) / std::sqrt(2.0));
    return std::pow(1.0 - pc, nlev * std::exp2(nlev));
  };
  const double p3 = empirical(3, 4000), p8 = empirical(8, 4000);
  CHECK(p8 > p3 + 0.05);
  CHECK(std::abs(p3 - analytic(3)) <
        3.0 * std::sqrt(analytic(3) * (1 - analytic(3)) / 4000));
  CHECK(std::abs(p8 - analytic(8)) <
        3.0 * std::sqrt(analytic(8) * (1 - analytic(8)) / 4000));
}

TEST_CASE("tableau file round trip") {
  const auto tab = BrownianTableau::sample(5, 4, 0.75, 31415);
  const std::string path = (std::filesystem::temp_directory_path() / "w3d_tab.bin").string();
  tab.dump(path);
  const auto back = BrownianTableau::load(path);
  CHECK(back.level == tab.level);
  CHECK(back.truncation == tab.truncation);
  CHECK(back.T == tab.T);
  for (int j = 1; j <= 4; ++j)
    for (int i = 0; i < 32; ++i) CHECK(back.cell(j, i) == tab.cell(j, i));

  std::ofstream bad(path, std::ios::binary);
  bad << "not a tableau";
  bad.close();
  CHECK_THROWS_AS(BrownianTableau::load(path), IoError);
  std::filesystem::remove(path);
}

TEST_CASE("discretized kernel is even and peaks at zero lag") {
  TorusGrid g(2.0, 8, 1.0, 8);
  NoiseModel m(g, 1.0);
  const double k0 = discretized_kernel({0, 0, 0}, m, g);
  CHECK(k0 > 0.0);
  const double kp = discretized_kernel({0.25, 0.5, 0.0}, m, g);
  const double km = discretized_kernel({-0.25, -0.5, 0.0}, m, g);
  CHECK(kp == doctest::Approx(km).epsilon(1e-12));
  CHECK(kp < k0);
}
