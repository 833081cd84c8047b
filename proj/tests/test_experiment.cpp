#include <cmath>
#include <random>

#include <doctest.h>

#include "tamedheat/coupling.hpp"
#include "tamedheat/errors.hpp"
#include "tamedheat/experiment.hpp"
#include "tamedheat/rng.hpp"

using namespace tamedheat;

namespace {

ExperimentConfig small_config() {
  ExperimentConfig cfg;
  cfg.name = "small";
  cfg.drift_spec = "sin";
  cfg.m = 2;
  cfg.levels = {4, 8};
  cfg.n_ref = 32;
  cfg.c = {1, 4};
  cfg.replicas = 8;
  cfg.master_seed = 2024;
  cfg.psi0 = Psi0::Sin;
  cfg.comparison_times = 4;
  cfg.epsilon = 0.05;
  return cfg;
}

ErrorReport synthetic_report(const std::vector<int>& ns,
                             const std::vector<double>& errors) {
  ErrorReport report;
  for (std::size_t i = 0; i < ns.size(); ++i) {
    LevelResult row;
    row.n = ns[i];
    row.error = errors[i];
    report.levels.push_back(row);
  }
  return report;
}

}  // namespace

TEST_CASE("config validation") {
  ExperimentConfig cfg = small_config();
  CHECK_NOTHROW(cfg.validate());

  cfg.levels = {};
  CHECK_THROWS_AS(cfg.validate(), ConfigError);
  cfg = small_config();
  cfg.levels = {8, 4};
  CHECK_THROWS_AS(cfg.validate(), ConfigError);
  cfg = small_config();
  cfg.levels = {4, 12};
  CHECK_THROWS_AS(cfg.validate(), ConfigError);
  cfg = small_config();
  cfg.n_ref = 8;
  CHECK_THROWS_AS(cfg.validate(), ConfigError);
  cfg = small_config();
  cfg.replicas = 1;
  CHECK_THROWS_AS(cfg.validate(), ConfigError);
  cfg = small_config();
  cfg.m = 1;
  CHECK_THROWS_AS(cfg.validate(), ConfigError);
  cfg = small_config();
  cfg.epsilon = 0.7;
  CHECK_THROWS_AS(cfg.validate(), ConfigError);
  cfg = small_config();
  cfg.regime_override = Regime::Limit;  // sin has p = inf
  CHECK_THROWS_AS(cfg.validate(), ConfigError);
}

TEST_CASE("fit_rate on synthetic power laws") {
  SUBCASE("exact law recovers the exponent to rounding") {
    std::vector<double> errors;
    const std::vector<int> ns = {8, 16, 32, 64};
    for (const int n : ns) errors.push_back(3.7 * std::pow(n, -0.5));
    const RateFit fit = fit_rate(synthetic_report(ns, errors));
    CHECK(fit.rate == doctest::Approx(0.5).epsilon(1e-12));
    CHECK(fit.halfwidth < 1e-10);
    CHECK(!fit.dropped_coarsest);
  }

  SUBCASE("noisy n^(-1/3) stays in band") {
    std::mt19937_64 rng(7);
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    const std::vector<int> ns = {8, 16, 32, 64, 128};
    std::vector<double> errors;
    for (const int n : ns) {
      errors.push_back(std::pow(n, -1.0 / 3.0) * (1.0 + 0.05 * u(rng)));
    }
    const RateFit fit = fit_rate(synthetic_report(ns, errors));
    CHECK(fit.rate > 0.28);
    CHECK(fit.rate < 0.38);
  }

  SUBCASE("refusals") {
    CHECK_THROWS_AS(fit_rate(synthetic_report({8, 16}, {0.5, 0.3})), ConfigError);
    CHECK_THROWS_AS(fit_rate(synthetic_report({8, 16, 32}, {0.5, 0.0, 0.1})),
                    ConfigError);
  }

  SUBCASE("outlier coarsest level is dropped and flagged") {
    const std::vector<int> ns = {8, 16, 32, 64, 128};
    std::vector<double> errors;
    for (const int n : ns) errors.push_back(std::pow(n, -0.5));
    errors[0] *= 40.0;
    const RateFit fit = fit_rate(synthetic_report(ns, errors));
    CHECK(fit.dropped_coarsest);
    CHECK(fit.rate == doctest::Approx(0.5).epsilon(1e-9));
  }
}

TEST_CASE("zero-drift campaign equals the OU discretization gap") {
  ExperimentConfig cfg = small_config();
  cfg.drift_spec = "zero";
  cfg.psi0 = Psi0::Zero;
  cfg.levels = {8};
  cfg.replicas = 6;
  const ErrorReport report = strong_error(cfg, 1);

  const GridConfig fine = make_grid(cfg.n_ref, cfg.c);
  const GridConfig coarse = make_grid(8, cfg.c);
  const auto times = standard_comparison_times(coarse, cfg.comparison_times);
  const double gap =
      ou_discretization_gap(fine, coarse, cfg.master_seed, times, cfg.replicas, 1);
  CHECK(report.levels[0].error == doctest::Approx(gap).epsilon(1e-12));
}

TEST_CASE("small smooth campaign: sane report, determinism, threading") {
  const ExperimentConfig cfg = small_config();
  const ErrorReport a = strong_error(cfg, 1);
  REQUIRE(a.levels.size() == 2);
  CHECK(a.k_ref == 32);  // bounded regime: k = n
  CHECK(a.levels[0].k == 4);
  CHECK(a.levels[1].k == 8);
  CHECK(a.levels[0].error > 0.0);
  CHECK(a.levels[1].error > 0.0);
  CHECK(a.levels[1].error < a.levels[0].error);
  CHECK(a.levels[0].std_error > 0.0);
  CHECK(a.levels[0].interp_error < 1e-8);
  CHECK(a.theoretical_rate == 0.5);
  CHECK(!a.fit.has_value());  // only 2 levels

  // identical bytes for identical seeds, regardless of worker count
  const ErrorReport b = strong_error(cfg, 2);
  CHECK(report_json(a) == report_json(b));
  CHECK(report_csv(a) == report_csv(b));

  ExperimentConfig other = cfg;
  other.master_seed = 999;
  CHECK(report_json(strong_error(other, 2)) != report_json(a));
}

TEST_CASE("replica exchangeability and estimator monotonicity") {
  ExperimentConfig cfg = small_config();
  cfg.levels = {4};
  std::vector<std::uint64_t> seeds;
  for (int r = 0; r < 6; ++r) {
    seeds.push_back(replica_seed(cfg.master_seed, static_cast<std::uint64_t>(r)));
  }
  const auto diffs = run_campaign_diffs(cfg, seeds, 2);
  REQUIRE(diffs.size() == 1);
  const auto& reps = diffs[0];

  std::vector<Eigen::ArrayXXd> permuted = {reps[3], reps[0], reps[5],
                                           reps[1], reps[4], reps[2]};
  CHECK(sup_moment_error(reps, 2.0) ==
        doctest::Approx(sup_moment_error(permuted, 2.0)).epsilon(1e-12));

  // sup over a superset of points dominates the subset
  std::vector<Eigen::ArrayXXd> head;
  for (const auto& m : reps) {
    head.push_back(m.block(0, 0, m.rows(), 3));
  }
  CHECK(sup_moment_error(head, 2.0) <= sup_moment_error(reps, 2.0));

  // power-mean inequality per point: L2 <= L4
  for (Eigen::Index r = 0; r < reps[0].rows(); ++r) {
    for (Eigen::Index c = 0; c < reps[0].cols(); ++c) {
      double m2 = 0.0, m4 = 0.0;
      for (const auto& mrep : reps) {
        m2 += std::pow(mrep(r, c), 2.0);
        m4 += std::pow(mrep(r, c), 4.0);
      }
      m2 /= static_cast<double>(reps.size());
      m4 /= static_cast<double>(reps.size());
      CHECK(std::sqrt(m2) <= std::pow(m4, 0.25) * (1.0 + 1e-12));
    }
  }
}

TEST_CASE("error decomposition slopes for the Dirac ladder") {
  // synthetic measured errors on a real drift ladder: only the component
  // columns are under test
  ExperimentConfig cfg;
  cfg.name = "dirac-ladder";
  cfg.drift_spec = "dirac";
  cfg.levels = {4, 16, 64, 256};
  cfg.n_ref = 512;
  cfg.replicas = 2;
  cfg.epsilon = 0.05;

  ErrorReport report;
  report.config = cfg;
  for (const int n : cfg.levels) {
    LevelResult row;
    row.n = n;
    row.k = select_k(n, 0.0, 1.0, Regime::Limit);
    const MollifiedDrift bk = mollify(Drift::parse("dirac"), row.k);
    row.sup_norm = bk.sup_norm();
    row.lip_norm = bk.lip_norm();
    row.error = std::pow(n, -0.25);
    report.levels.push_back(row);
  }
  const Decomposition d = error_decomposition(cfg, report);
  REQUIRE(d.rows.size() == 4);
  // stability component scales like k_n^{-1/2} = n^{-1/4}
  CHECK(d.stability_slope == doctest::Approx(-0.25).epsilon(0.45));
  CHECK(d.ou_slope < -0.15);
  CHECK(d.lip_slope < 0.0);
  CHECK(d.measured_slope == doctest::Approx(-0.25).epsilon(1e-9));
  for (const auto& row : d.rows) {
    CHECK(row.stability > 0.0);
    CHECK(row.ou_component > 0.0);
    CHECK(row.lip_component > 0.0);
  }
}
