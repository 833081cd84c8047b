#include "tamedheat/experiment.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "tamedheat/besov.hpp"
#include "tamedheat/coupling.hpp"
#include "tamedheat/errors.hpp"
#include "tamedheat/parallel.hpp"
#include "tamedheat/regression.hpp"
#include "tamedheat/rng.hpp"

namespace tamedheat {

std::string regime_name(Regime regime) {
  switch (regime) {
    case Regime::SubCritical: return "sub-critical";
    case Regime::Limit: return "limit";
    case Regime::Bounded: return "bounded";
  }
  return "?";
}

Regime parse_regime(const std::string& name) {
  if (name == "sub-critical" || name == "subcritical") return Regime::SubCritical;
  if (name == "limit") return Regime::Limit;
  if (name == "bounded") return Regime::Bounded;
  throw ConfigError("unknown regime '" + name + "'");
}

Drift ExperimentConfig::drift() const {
  Drift b = Drift::parse(drift_spec);
  if (gamma_override || p_override) {
    b = b.with_regularity(gamma_override.value_or(b.gamma()),
                          p_override.value_or(b.p()));
  }
  return b;
}

Regime ExperimentConfig::regime() const {
  if (regime_override) return *regime_override;
  return drift().default_regime();
}

void ExperimentConfig::validate() const {
  if (levels.empty()) throw ConfigError("experiment needs at least one level");
  for (std::size_t i = 1; i < levels.size(); ++i) {
    if (levels[i] <= levels[i - 1]) throw ConfigError("levels must be ascending");
  }
  if (n_ref <= levels.back()) {
    throw ConfigError("reference resolution must exceed the finest level");
  }
  const GridConfig ref = make_grid(n_ref, c);
  for (const int n : levels) {
    const auto j = nesting_factor(make_grid(n, c), ref);
    if (!j || *j < 1) {
      throw ConfigError("level n=" + std::to_string(n) +
                        " does not divide n_ref by a power of 2");
    }
  }
  if (replicas < 2) throw ConfigError("need at least 2 replicas");
  if (m < 2) throw ConfigError("moment m must be >= 2");
  if (comparison_times < 1) throw ConfigError("need at least one comparison time");
  if (!(epsilon > 0.0 && epsilon < 0.5)) throw ConfigError("epsilon must lie in (0,1/2)");
  // fails early on an inconsistent (gamma, p, regime) triple
  select_k(levels.front(), drift().gamma(), drift().p(), regime());
}

namespace {

struct PreparedCampaign {
  GridConfig ref;
  std::vector<GridConfig> level_grids;
  std::int64_t k_ref = 0;
  std::vector<std::int64_t> level_k;
  std::vector<TabulatedDrift> tables;  // levels..., then reference last
  std::vector<double> times;
  std::vector<double> points;
};

// crude solution-range pilot at the coarsest level, used to place the
// drift interpolation tables
std::pair<double, double> pilot_range(const GridConfig& grid, const TabulatedDrift& drift,
                                      Psi0 psi0, std::uint64_t master_seed) {
  double lo = -1.0, hi = 1.0;
  for (int r = 0; r < 2; ++r) {
    Eigen::ArrayXd u = psi0_samples(psi0, grid);
    Eigen::ArrayXd next(grid.num_space());
    Eigen::ArrayXd row(grid.num_space());
    const NoiseRowGenerator gen(grid, pilot_seed(master_seed, static_cast<std::uint64_t>(r)));
    lo = std::min(lo, u.minCoeff());
    hi = std::max(hi, u.maxCoeff());
    for (std::int64_t i = 0; i < grid.num_time(); ++i) {
      gen.fill_row(i, row);
      const double check = advance_field(u, next, grid.c().value(), grid.h(), &drift,
                                         row.data(), grid.num_space());
      if (!(check < 1e14)) {
        throw DivergenceError("pilot run diverged at n=" + std::to_string(grid.n()),
                              grid.n(), i + 1);
      }
      std::swap(u, next);
      lo = std::min(lo, u.minCoeff());
      hi = std::max(hi, u.maxCoeff());
    }
  }
  return {lo, hi};
}

PreparedCampaign prepare(const ExperimentConfig& cfg) {
  cfg.validate();
  const Drift b = cfg.drift();
  const Regime reg = cfg.regime();

  PreparedCampaign prep;
  prep.ref = make_grid(cfg.n_ref, cfg.c);
  for (const int n : cfg.levels) prep.level_grids.push_back(make_grid(n, cfg.c));
  prep.k_ref = select_k(cfg.n_ref, b.gamma(), b.p(), reg);
  std::int64_t k_min = prep.k_ref;
  for (const int n : cfg.levels) {
    prep.level_k.push_back(select_k(n, b.gamma(), b.p(), reg));
    k_min = std::min(k_min, prep.level_k.back());
  }

  // pilot at the coarsest level with a provisional table, then final tables
  // over the observed solution range
  const TabulatedDrift provisional(mollify(b, prep.level_k.front()), -8.0, 8.0);
  auto [lo, hi] = pilot_range(prep.level_grids.front(), provisional, cfg.psi0,
                              cfg.master_seed);
  const double pad = 1.0 + 8.0 * std::sqrt(1.0 / static_cast<double>(k_min));
  lo = std::min(lo - pad, -4.0);
  hi = std::max(hi + pad, 4.0);
  for (const std::int64_t k : prep.level_k) {
    prep.tables.emplace_back(mollify(b, k), lo, hi);
  }
  prep.tables.emplace_back(mollify(b, prep.k_ref), lo, hi);

  const GridConfig& coarsest = prep.level_grids.front();
  prep.times = standard_comparison_times(coarsest, cfg.comparison_times);
  for (int j = 0; j < coarsest.num_space(); ++j) {
    prep.points.push_back(coarsest.space_point(j));
  }
  return prep;
}

std::vector<std::vector<Eigen::ArrayXXd>> run_diffs(const PreparedCampaign& prep,
                                                    const ExperimentConfig& cfg,
                                                    const std::vector<std::uint64_t>& seeds,
                                                    int threads) {
  CoupledSpec<TabulatedDrift> spec;
  spec.ref = prep.ref;
  spec.ref_drift = &prep.tables.back();
  spec.levels = prep.level_grids;
  for (std::size_t l = 0; l < prep.level_grids.size(); ++l) {
    spec.level_drifts.push_back(&prep.tables[l]);
    spec.level_points.push_back(prep.points);
  }
  const Psi0 psi0 = cfg.psi0;
  spec.psi0 = [psi0](double x) { return psi0_eval(psi0, x); };
  spec.times = prep.times;
  const CoupledRunner<TabulatedDrift> runner(std::move(spec));

  std::vector<std::vector<Eigen::ArrayXXd>> per_replica(seeds.size());
  parallel_for(static_cast<std::int64_t>(seeds.size()), threads, [&](std::int64_t r) {
    per_replica[static_cast<std::size_t>(r)] = runner.run(seeds[static_cast<std::size_t>(r)]);
  });

  // reshape to [level][replica]
  std::vector<std::vector<Eigen::ArrayXXd>> by_level(prep.level_grids.size());
  for (std::size_t l = 0; l < by_level.size(); ++l) {
    by_level[l].reserve(seeds.size());
    for (const auto& rep : per_replica) by_level[l].push_back(rep[l]);
  }
  return by_level;
}

double batched_std_error(const std::vector<Eigen::ArrayXXd>& reps, double m) {
  const int R = static_cast<int>(reps.size());
  const int B = R >= 20 ? 10 : std::min(R, 10);
  if (B < 2) return 0.0;
  std::vector<double> estimates;
  for (int b = 0; b < B; ++b) {
    const int begin = static_cast<int>(static_cast<std::int64_t>(R) * b / B);
    const int end = static_cast<int>(static_cast<std::int64_t>(R) * (b + 1) / B);
    const std::vector<Eigen::ArrayXXd> batch(reps.begin() + begin, reps.begin() + end);
    estimates.push_back(sup_moment_error(batch, m));
  }
  double mean = 0.0;
  for (const double e : estimates) mean += e;
  mean /= static_cast<double>(B);
  double var = 0.0;
  for (const double e : estimates) var += (e - mean) * (e - mean);
  var /= static_cast<double>(B - 1);
  return std::sqrt(var / static_cast<double>(B));
}

}  // namespace

std::vector<std::vector<Eigen::ArrayXXd>> run_campaign_diffs(
    const ExperimentConfig& config, const std::vector<std::uint64_t>& seeds,
    int threads) {
  const PreparedCampaign prep = prepare(config);
  return run_diffs(prep, config, seeds, threads);
}

ErrorReport strong_error(const ExperimentConfig& config, int threads) {
  const PreparedCampaign prep = prepare(config);
  std::vector<std::uint64_t> seeds;
  for (int r = 0; r < config.replicas; ++r) {
    seeds.push_back(replica_seed(config.master_seed, static_cast<std::uint64_t>(r)));
  }
  const auto by_level = run_diffs(prep, config, seeds, threads);

  ErrorReport report;
  report.config = config;
  report.k_ref = prep.k_ref;
  const Drift b = config.drift();
  report.theoretical_rate = theoretical_rate(b.gamma(), b.p(), config.regime());
  const double md = static_cast<double>(config.m);
  for (std::size_t l = 0; l < prep.level_grids.size(); ++l) {
    LevelResult row;
    row.n = prep.level_grids[l].n();
    row.k = prep.level_k[l];
    row.error = sup_moment_error(by_level[l], md);
    row.std_error = batched_std_error(by_level[l], md);
    const MollifiedDrift& bk = prep.tables[l].mollified();
    row.sup_norm = bk.sup_norm();
    row.lip_norm = bk.lip_norm();
    row.h2_sup_product =
        bk.sup_norm() * std::pow(static_cast<double>(row.n), -0.5 + config.epsilon);
    row.h2_lip_product = (bk.sup_norm() + bk.lip_norm()) / static_cast<double>(row.n);
    row.steps = prep.level_grids[l].num_time();
    row.interp_error = prep.tables[l].probe_max_error();
    report.levels.push_back(row);
  }
  if (report.levels.size() >= 3) {
    bool positive = true;
    for (const auto& row : report.levels) positive = positive && row.error > 0.0;
    if (positive) report.fit = fit_rate(report);
  }
  return report;
}

RateFit fit_rate(const ErrorReport& report) {
  std::vector<double> x, y;
  for (const auto& row : report.levels) {
    if (!(row.error > 0.0)) {
      throw ConfigError("rate fit refused: nonpositive error at n=" +
                        std::to_string(row.n));
    }
    x.push_back(std::log(static_cast<double>(row.n)));
    y.push_back(std::log(row.error));
  }
  if (x.size() < 3) throw ConfigError("rate fit needs at least 3 levels");
  LineFit fit = fit_line(x, y);
  RateFit out;
  out.dropped_coarsest = false;
  // drop the coarsest point when it is a clear outlier against the line
  // through the remaining levels
  if (x.size() >= 4) {
    const LineFit sub = fit_line({x.begin() + 1, x.end()}, {y.begin() + 1, y.end()});
    double rest = 0.0;
    for (const double r : sub.residuals) rest = std::max(rest, std::abs(r));
    const double res0 = std::abs(y[0] - (sub.intercept + sub.slope * x[0]));
    if (res0 > 3.0 * std::max(rest, 0.05)) {
      fit = sub;
      out.dropped_coarsest = true;
    }
  }
  out.rate = -fit.slope;
  out.halfwidth = student_t_quantile_95(static_cast<int>(x.size()) -
                                        (out.dropped_coarsest ? 3 : 2)) *
                  fit.slope_stderr;
  return out;
}

Decomposition error_decomposition(const ExperimentConfig& config,
                                  const ErrorReport& report) {
  const Drift b = config.drift();
  const Eigen::ArrayXd t_grid = default_t_grid();
  Decomposition d;
  std::vector<double> logn, ls, lo, ll, lm;
  bool all_positive = true;
  for (const auto& row : report.levels) {
    DecompositionRow r;
    r.n = row.n;
    r.k = row.k;
    r.stability = thermic_norm(mollification_gap(b, row.k), b.gamma() - 1.0, b.p(), t_grid);
    const double n = static_cast<double>(row.n);
    r.ou_component = (1.0 + row.sup_norm) * std::pow(n, -0.5 + config.epsilon);
    r.lip_component = (1.0 + row.sup_norm) * row.lip_norm * std::pow(n, -1.0 + config.epsilon);
    r.measured = row.error;
    d.rows.push_back(r);
    logn.push_back(std::log(n));
    all_positive = all_positive && r.stability > 0.0 && r.ou_component > 0.0 &&
                   r.lip_component > 0.0 && r.measured > 0.0;
    if (all_positive) {
      ls.push_back(std::log(r.stability));
      lo.push_back(std::log(r.ou_component));
      ll.push_back(std::log(r.lip_component));
      lm.push_back(std::log(r.measured));
    }
  }
  if (all_positive && logn.size() >= 2) {
    d.stability_slope = fit_line(logn, ls).slope;
    d.ou_slope = fit_line(logn, lo).slope;
    d.lip_slope = fit_line(logn, ll).slope;
    d.measured_slope = fit_line(logn, lm).slope;
  } else {
    d.stability_slope = d.ou_slope = d.lip_slope = d.measured_slope =
        std::numeric_limits<double>::quiet_NaN();
  }
  return d;
}

}  // namespace tamedheat
