#include <cmath>
#include <limits>
#include <numbers>

#include <doctest.h>

#include "tamedheat/drift.hpp"
#include "tamedheat/errors.hpp"
#include "tamedheat/quadrature.hpp"
#include "tamedheat/regression.hpp"

using namespace tamedheat;

namespace {
constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kTwoPi = 2.0 * std::numbers::pi;
}  // namespace

TEST_CASE("regularity metadata is validated") {
  CHECK_THROWS_AS(Drift::power_singular(-1.2), ConfigError);
  CHECK_THROWS_AS(Drift::power_singular(0.1), ConfigError);
  CHECK_THROWS_AS(Drift::parse("sin").with_regularity(0.5, kInf), ConfigError);
  CHECK_THROWS_AS(Drift::parse("dirac").with_regularity(0.0, 0.5), ConfigError);
  CHECK_NOTHROW(Drift::parse("dirac").with_regularity(-0.25, 4.0 / 3.0));

  CHECK(Drift::parse("dirac").gamma() == 0.0);
  CHECK(Drift::parse("dirac").p() == 1.0);
  CHECK(Drift::parse("power:-0.5").gamma() == -0.5);
  CHECK(Drift::parse("sign").p() == kInf);
  CHECK(Drift::parse("dirac").default_regime() == Regime::Limit);
  CHECK(Drift::parse("power:-0.5").default_regime() == Regime::SubCritical);
  CHECK(Drift::parse("sin").default_regime() == Regime::Bounded);
  CHECK_THROWS_AS(Drift::parse("nope"), ConfigError);

  const Drift atoms = Drift::parse("dirac:0.25:1.5,0.75:-0.5");
  REQUIRE(atoms.atoms().size() == 2);
  CHECK(atoms.atoms()[0].location == 0.25);
  CHECK(atoms.atoms()[1].weight == -0.5);
  CHECK_THROWS_AS(Drift::parse("dirac:0.25"), ConfigError);
}

TEST_CASE("mollifying a constant returns the constant") {
  const Drift b = Drift::parse("const:3");
  for (const std::int64_t k : {1, 7, 100}) {
    const MollifiedDrift bk = mollify(b, k);
    for (const double x : {-2.0, 0.0, 0.31, 5.0}) {
      CHECK(bk(x) == doctest::Approx(3.0).epsilon(1e-10));
    }
    CHECK(bk.sup_norm() == doctest::Approx(3.0).epsilon(1e-9));
    CHECK(bk.lip_norm() == doctest::Approx(0.0).epsilon(1e-7));
  }
  CHECK_THROWS_AS(mollify(b, 0), ConfigError);
}

TEST_CASE("mollified Dirac: Gaussian peak and slope closed forms") {
  const Drift b = Drift::parse("dirac");
  for (const std::int64_t k : {4, 64, 1024}) {
    const MollifiedDrift bk = mollify(b, k);
    const double kd = static_cast<double>(k);
    CHECK(bk(0.0) == doctest::Approx(std::sqrt(kd / kTwoPi)).epsilon(1e-14));
    CHECK(bk.sup_norm() == doctest::Approx(std::sqrt(kd / kTwoPi)).epsilon(1e-14));
    CHECK(bk.lip_norm() ==
          doctest::Approx(kd * std::exp(-0.5) / std::sqrt(kTwoPi)).epsilon(1e-14));
  }
  // sampled norms agree with the closed forms within 1%
  const MollifiedDrift bk = mollify(b, 16);
  const DriftNorms sampled = drift_norms(bk, 10000, {{-2.0, 2.0}});
  CHECK(sampled.sup_norm == doctest::Approx(bk.sup_norm()).epsilon(0.01));
}

TEST_CASE("mollified sine matches its Fourier multiplier") {
  const Drift b = Drift::parse("sin");
  for (const std::int64_t k : {2, 16, 256}) {
    const MollifiedDrift bk = mollify(b, k);
    const double mult = std::exp(-2.0 * std::numbers::pi * std::numbers::pi /
                                 static_cast<double>(k));
    for (const double x : {0.0, 0.13, 0.25, 0.77}) {
      CHECK(bk(x) == doctest::Approx(mult * std::sin(kTwoPi * x)).epsilon(1e-8));
    }
  }
}

TEST_CASE("power-singular mollification against a midpoint-rule oracle") {
  const Drift b = Drift::parse("power:-0.5");
  for (const std::int64_t k : {4, 16}) {
    const double t = 1.0 / static_cast<double>(k);
    for (const double x : {0.0, 0.1, 0.5, 1.2}) {
      // independent route: uniform midpoint rule on the substituted integral
      // int_0^1 2 g_t(x - s^2) ds
      const long N = 400000;
      double oracle = 0.0;
      for (long i = 0; i < N; ++i) {
        const double s = (i + 0.5) / static_cast<double>(N);
        const double d = x - s * s;
        oracle += 2.0 * std::exp(-d * d / (2.0 * t)) / std::sqrt(kTwoPi * t);
      }
      oracle /= static_cast<double>(N);
      CHECK(mollify(b, k)(x) == doctest::Approx(oracle).epsilon(1e-7));
    }
  }
}

TEST_CASE("mollification is linear over atoms and scalars") {
  const Drift two_atoms = Drift::signed_measure({{0.2, 1.5}, {0.7, -0.5}});
  const Drift a1 = Drift::signed_measure({{0.2, 1.5}});
  const Drift a2 = Drift::signed_measure({{0.7, -0.5}});
  const MollifiedDrift mk = mollify(two_atoms, 32);
  const MollifiedDrift m1 = mollify(a1, 32);
  const MollifiedDrift m2 = mollify(a2, 32);
  for (double x = -0.5; x <= 1.5; x += 0.1) {
    CHECK(mk(x) == doctest::Approx(m1(x) + m2(x)).epsilon(1e-13));
  }

  const MollifiedDrift c2 = mollify(Drift::parse("const:2"), 9);
  const MollifiedDrift c1 = mollify(Drift::parse("const:1"), 9);
  for (const double x : {-1.0, 0.4}) {
    CHECK(c2(x) == doctest::Approx(2.0 * c1(x)).epsilon(1e-9));
  }
}

TEST_CASE("mollification commutes with shifts") {
  const double a = 0.37;
  const Drift at_zero = Drift::parse("dirac");
  const Drift at_a = Drift::signed_measure({{a, 1.0}});
  const MollifiedDrift m0 = mollify(at_zero, 25);
  const MollifiedDrift ma = mollify(at_a, 25);
  for (double x = -1.0; x <= 2.0; x += 0.2) {
    CHECK(ma(x) == m0(x - a));  // exact: same closed form
  }

  const Drift step = Drift::parse("sign");
  const Drift shifted = Drift::bounded_measurable(
      "sign-shifted", [a](double x) { return x - a > 0.0 ? 1.0 : -1.0; }, 1.0, {a});
  const MollifiedDrift s0 = mollify(step, 25);
  const MollifiedDrift sa = mollify(shifted, 25);
  for (double x = -1.0; x <= 1.0; x += 0.25) {
    CHECK(sa(x + a) == doctest::Approx(s0(x)).epsilon(1e-8));
  }
}

TEST_CASE("Dirac norm scalings over a geometric ladder of k") {
  std::vector<double> logk, logsup, loglip;
  const Drift b = Drift::parse("dirac");
  for (const std::int64_t k : {4, 16, 64, 256, 1024, 4096}) {
    const MollifiedDrift bk = mollify(b, k);
    logk.push_back(std::log(static_cast<double>(k)));
    logsup.push_back(std::log(bk.sup_norm()));
    loglip.push_back(std::log(bk.lip_norm()));
  }
  CHECK(fit_line(logk, logsup).slope == doctest::Approx(0.5).epsilon(0.04));
  CHECK(fit_line(logk, loglip).slope == doctest::Approx(1.0).epsilon(0.02));
}

TEST_CASE("select_k per regime") {
  CHECK(select_k(16, 0.0, kInf, Regime::Bounded) == 16);
  CHECK(select_k(64, -0.5, kInf, Regime::SubCritical) == 16);  // 64^(2/3)
  CHECK(select_k(16, 0.0, 1.0, Regime::Limit) == 4);
  CHECK(select_k(1, 0.0, 1.0, Regime::Limit) == 1);
  CHECK(select_k(2, -0.9, kInf, Regime::SubCritical) >= 1);

  CHECK_THROWS_AS(select_k(16, 0.0, 1.0, Regime::Bounded), ConfigError);
  CHECK_THROWS_AS(select_k(16, 0.0, kInf, Regime::Limit), ConfigError);
  CHECK_THROWS_AS(select_k(16, 0.0, 1.0, Regime::SubCritical), ConfigError);
}

TEST_CASE("theoretical_rate per regime") {
  CHECK(theoretical_rate(0.0, kInf, Regime::Bounded) == 0.5);
  CHECK(*theoretical_rate(-0.5, kInf, Regime::SubCritical) ==
        doctest::Approx(1.0 / 3.0).epsilon(1e-15));
  CHECK(!theoretical_rate(0.0, 1.0, Regime::Limit).has_value());
  CHECK_THROWS_AS(theoretical_rate(0.0, kInf, Regime::Limit), ConfigError);
}

TEST_CASE("taming hypothesis diagnostics") {
  const Drift dirac = Drift::parse("dirac");
  const double eps = 0.05;

  SUBCASE("dirac with k_n = floor(sqrt(n)) stays bounded") {
    std::vector<std::pair<MollifiedDrift, int>> ladder;
    for (const int n : {4, 16, 64, 256, 1024}) {
      ladder.emplace_back(mollify(dirac, select_k(n, 0.0, 1.0, Regime::Limit)), n);
    }
    const TamingReport report = check_taming_hypothesis(ladder, eps);
    CHECK(report.sup_status == "bounded");
    CHECK(report.max_sup_product < 1.0);
  }

  SUBCASE("dirac with k_n = n has a borderline C1 product") {
    std::vector<std::pair<MollifiedDrift, int>> ladder;
    for (const int n : {4, 16, 64, 256, 1024}) {
      ladder.emplace_back(mollify(dirac, n), n);
    }
    const TamingReport report = check_taming_hypothesis(ladder, eps);
    CHECK(report.lip_status == "borderline");
  }

  SUBCASE("smooth drift at fixed k shrinks to zero") {
    std::vector<std::pair<MollifiedDrift, int>> ladder;
    for (const int n : {4, 16, 64, 256}) {
      ladder.emplace_back(mollify(Drift::parse("sin"), 8), n);
    }
    const TamingReport report = check_taming_hypothesis(ladder, eps);
    CHECK(report.sup_status == "bounded");
    CHECK(report.lip_status == "bounded");
  }

  CHECK_THROWS_AS(check_taming_hypothesis({}, eps), ConfigError);
}

TEST_CASE("adaptive quadrature reports nonconvergence") {
  const auto nasty = [](double x) { return std::sin(200.0 / (std::abs(x) + 1e-3)); };
  const QuadratureResult res = adaptive_simpson(nasty, -1.0, 1.0, 1e-14, 3);
  CHECK(!res.converged);
  CHECK(res.residual > 0.0);
  CHECK_THROWS_AS(integrate_or_throw(nasty, -1.0, 1.0, 1e-14, 3), QuadratureError);
}
