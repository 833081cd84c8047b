#include <cmath>
#include <numbers>
#include <random>

#include <doctest.h>

#include "tamedheat/fft.hpp"
#include "tamedheat/heat.hpp"
#include "tamedheat/quadrature.hpp"
#include "tamedheat/regression.hpp"

using namespace tamedheat;

namespace {
constexpr double kPi = std::numbers::pi;
}

TEST_CASE("dft round trip and direct fallback") {
  std::mt19937_64 rng(5);
  std::normal_distribution<double> normal;
  for (const int n : {8, 12}) {  // 12 exercises the O(N^2) path
    ArrayXcd input(n);
    for (int i = 0; i < n; ++i) input[i] = {normal(rng), normal(rng)};
    const ArrayXcd back = idft(dft(input));
    for (int i = 0; i < n; ++i) {
      CHECK(std::abs(back[i] - input[i]) < 1e-12);
    }
  }
}

TEST_CASE("heat kernel conserves mass and is symmetric") {
  for (const double t : {2e-4, 1e-2, 0.5}) {
    const double mass = integrate_or_throw(
        [&](double y) { return heat_kernel(t, 0.3, y, 1e-12); }, 0.0, 1.0, 1e-9);
    CHECK(mass == doctest::Approx(1.0).epsilon(1e-8));
  }
  CHECK(heat_kernel(0.02, 0.1, 0.7) == doctest::Approx(heat_kernel(0.02, 0.7, 0.1)));
  // depends on x - y only
  CHECK(heat_kernel(0.02, 0.15, 0.35) == doctest::Approx(heat_kernel(0.02, 0.55, 0.75)));
  CHECK_THROWS_AS(heat_kernel(0.0, 0.0, 0.0), std::domain_error);
}

TEST_CASE("heat kernel flattens for large t") {
  const double t = 10.0;
  const double bound = 2.0 * std::exp(-4.0 * kPi * kPi * t);
  for (const double d : {0.0, 0.21, 0.5}) {
    CHECK(std::abs(heat_kernel(t, d, 0.0) - 1.0) <= bound * 1.01 + 1e-15);
  }
}

TEST_CASE("kernel forms agree across the switch at t = 1e-3") {
  for (const double d : {0.0, 0.1, 0.43}) {
    CHECK(heat_kernel(0.999e-3, d, 0.0) ==
          doctest::Approx(heat_kernel(1.001e-3, d, 0.0)).epsilon(2e-2));
    // same t, both representations via tiny perturbation around the cut
    CHECK(heat_kernel(1e-3 - 1e-12, d, 0.0) ==
          doctest::Approx(heat_kernel(1e-3 + 1e-12, d, 0.0)).epsilon(1e-8));
  }
}

TEST_CASE("semigroup_apply eigenfunctions and contraction") {
  const int m = 64;
  Eigen::ArrayXd ones = Eigen::ArrayXd::Ones(m);
  CHECK((semigroup_apply(0.3, ones) - 1.0).abs().maxCoeff() < 1e-12);

  Eigen::ArrayXd cosx(m);
  for (int j = 0; j < m; ++j) cosx[j] = std::cos(2.0 * kPi * j / m);
  const double t = 0.05;
  const Eigen::ArrayXd evolved = semigroup_apply(t, cosx);
  const double mult = std::exp(-4.0 * kPi * kPi * t);
  CHECK((evolved - mult * cosx).abs().maxCoeff() < 1e-12);

  CHECK((semigroup_apply(0.0, cosx) - cosx).abs().maxCoeff() == 0.0);

  std::mt19937_64 rng(2);
  std::normal_distribution<double> normal;
  Eigen::ArrayXd f(m);
  for (int j = 0; j < m; ++j) f[j] = normal(rng);
  CHECK(semigroup_apply(0.17, f).abs().maxCoeff() <= f.abs().maxCoeff() + 1e-12);

  // callable form at an off-grid point
  const double val = semigroup_apply(t, [](double x) { return std::cos(2.0 * kPi * x); },
                                     0.237);
  CHECK(val == doctest::Approx(mult * std::cos(2.0 * kPi * 0.237)).epsilon(1e-10));
}

TEST_CASE("discrete spectrum values") {
  const GridConfig g1 = make_grid(1, {1, 4});
  const SpectrumTable t1 = discrete_spectrum(g1);
  CHECK(t1.multipliers[0] == 1.0);
  CHECK(t1.eigenvalues[0] == 0.0);
  CHECK(t1.eigenvalues[1] == doctest::Approx(-16.0).epsilon(1e-14));
  CHECK(t1.multipliers[1] == doctest::Approx(0.0).epsilon(1e-14));

  for (const char* c : {"1/10", "1/4", "49/100"}) {
    const GridConfig g = make_grid(8, parse_rational(c));
    const SpectrumTable table = discrete_spectrum(g);
    CHECK(table.multipliers.minCoeff() > -1.0);
    CHECK(table.multipliers.maxCoeff() == 1.0);
    // symmetric spectrum
    for (int j = 1; j < g.num_space(); ++j) {
      CHECK(table.multipliers[j] ==
            doctest::Approx(table.multipliers[g.num_space() - j]).epsilon(1e-14));
    }
  }
}

TEST_CASE("discrete semigroup: delta row, alternating mode, spectral = stencil") {
  const GridConfig g = make_grid(4, {1, 4});
  const int m = g.num_space();
  const double c = g.c().value();

  Eigen::ArrayXd delta = Eigen::ArrayXd::Zero(m);
  delta[3] = 1.0;
  const Eigen::ArrayXd one_step = discrete_semigroup_apply(g, 1, delta);
  for (int j = 0; j < m; ++j) {
    double expected = 0.0;
    if (j == 3) expected = 1.0 - 2.0 * c;
    if (j == 2 || j == 4) expected = c;
    CHECK(one_step[j] == doctest::Approx(expected).epsilon(1e-12));
  }

  Eigen::ArrayXd alt(m);
  for (int j = 0; j < m; ++j) alt[j] = (j % 2 == 0) ? 1.0 : -1.0;
  const Eigen::ArrayXd after = discrete_semigroup_apply(g, 9, alt);
  const double factor = ipow(1.0 - 4.0 * c, 9);
  CHECK((after - factor * alt).abs().maxCoeff() < 1e-12);

  CHECK((discrete_semigroup_apply(g, 0, alt) == alt).all());

  std::mt19937_64 rng(11);
  std::normal_distribution<double> normal;
  for (const int n : {4, 16, 64}) {
    const GridConfig grid = make_grid(n, {1, 4});
    for (const int steps : {1, 7, 64}) {
      Eigen::ArrayXd f(grid.num_space());
      for (int j = 0; j < grid.num_space(); ++j) f[j] = normal(rng);
      Eigen::ArrayXd by_stencil = f;
      for (int s = 0; s < steps; ++s) by_stencil = stencil_apply(grid, by_stencil);
      const Eigen::ArrayXd by_spectrum = discrete_semigroup_apply(grid, steps, f);
      const double scale = by_stencil.abs().maxCoeff() + 1.0;
      CHECK((by_spectrum - by_stencil).abs().maxCoeff() / scale < 1e-10);
    }
  }
}

TEST_CASE("CFL stability: iterates never grow in sup norm") {
  std::mt19937_64 rng(3);
  std::normal_distribution<double> normal;
  const GridConfig g = make_grid(16, {1, 4});
  for (int trial = 0; trial < 10; ++trial) {
    Eigen::ArrayXd f(g.num_space());
    for (int j = 0; j < g.num_space(); ++j) f[j] = normal(rng);
    const double sup0 = f.abs().maxCoeff();
    for (const int steps : {1, 10, 100}) {
      CHECK(discrete_semigroup_apply(g, steps, f).abs().maxCoeff() <= sup0 + 1e-12);
    }
  }
}

TEST_CASE("variance_Q: monotone, sqrt scaling, quadrature oracle at t=1") {
  CHECK_THROWS_AS(variance_Q(0.0), std::domain_error);

  double prev = 0.0;
  for (const double t : {1e-6, 1e-4, 1e-2, 0.1, 0.5, 1.0}) {
    const double q = variance_Q(t);
    CHECK(q > prev);
    prev = q;
  }
  CHECK(variance_Q(1e-12) < 1e-5);  // Q -> 0 as t -> 0

  // slope of log Q vs log t on [1e-6, 1e-3] is 1/2 (Brownian-like regime)
  std::vector<double> lt, lq;
  for (int i = 0; i <= 12; ++i) {
    const double t = 1e-6 * std::pow(1000.0, i / 12.0);
    lt.push_back(std::log(t));
    lq.push_back(std::log(variance_Q(t)));
  }
  CHECK(fit_line(lt, lq).slope == doctest::Approx(0.5).epsilon(0.04));

  // oracle: direct quadrature of int_0^1 sum_k exp(-8 pi^2 k^2 r) dr with the
  // r^{-1/2} endpoint handled by r = s^2 and the Poisson-summed form of the
  // theta function at small r
  const auto theta = [](double r) {
    if (r < 0.05) {
      double images = 1.0;
      for (int m = 1; m <= 3; ++m) {
        images += 2.0 * std::exp(-m * m / (8.0 * r));
      }
      return images / std::sqrt(8.0 * kPi * r);
    }
    double sum = 1.0;
    for (int k = 1;; ++k) {
      const double term = 2.0 * std::exp(-8.0 * kPi * kPi * k * k * r);
      sum += term;
      if (term < 1e-16 * sum) break;
    }
    return sum;
  };
  const auto integrand = [&](double s) {
    if (s == 0.0) return 2.0 / std::sqrt(8.0 * kPi);
    return 2.0 * s * theta(s * s);
  };
  const double oracle = integrate_or_throw(integrand, 0.0, 1.0, 1e-12);
  CHECK(variance_Q(1.0) == doctest::Approx(oracle).epsilon(1e-10));
}

TEST_CASE("variance_Qn: sub-step identity and one-step value") {
  const GridConfig g = make_grid(4, {1, 4});  // h = 1/256
  const double h = g.h();
  CHECK_THROWS_AS(variance_Qn(g, 0.0), std::domain_error);

  for (const double t : {h / 10.0, h / 3.0, 0.9 * h}) {
    CHECK(variance_Qn(g, t) == doctest::Approx(2.0 * g.n() * t).epsilon(1e-14));
  }
  // Q^n(h) = 2nh = 1/32: one-step variance of O^n_h = h xi_n(x, 0)
  CHECK(variance_Qn(g, h) == doctest::Approx(1.0 / 32.0).epsilon(1e-14));

  // piecewise linear interpolation between grid times
  const double t1 = 5.0 * h, t2 = 6.0 * h, mid = 5.5 * h;
  CHECK(variance_Qn(g, mid) ==
        doctest::Approx(0.5 * (variance_Qn(g, t1) + variance_Qn(g, t2))).epsilon(1e-12));

  // sqrt(t) envelope with a modest constant (both sides)
  for (const double t : {h, 4 * h, 64 * h, 0.25, 1.0}) {
    const double qn = variance_Qn(g, t);
    CHECK(qn <= 3.0 * std::sqrt(t));
    CHECK(qn >= std::sqrt(t) / 3.0);
  }
}

TEST_CASE("variance gap shrinks with n") {
  const double t = 0.25;
  double prev = 1e9;
  std::vector<double> ln, lg;
  for (const int n : {4, 8, 16, 32, 64}) {
    const GridConfig g = make_grid(n, {1, 4});
    const double gap = variance_gap(g, t);
    CHECK(gap < prev);
    prev = gap;
    ln.push_back(std::log(static_cast<double>(n)));
    lg.push_back(std::log(gap));
  }
  CHECK(fit_line(ln, lg).slope <= -0.8);

  // below the first grid time the gap is |2nt - Q(t)| exactly
  const GridConfig g = make_grid(4, {1, 4});
  const double sub = 0.5 * g.h();
  CHECK(variance_gap(g, sub) ==
        doctest::Approx(std::abs(2.0 * g.n() * sub - variance_Q(sub))).epsilon(1e-14));

  CHECK_THROWS_AS(variance_gap(g, 0.25, 2.5), std::domain_error);
}
