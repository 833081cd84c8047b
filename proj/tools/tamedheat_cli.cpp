// Command-line driver: trajectory simulation, strong-error convergence
// campaigns, and analytic diagnostics. All randomness flows from --seed;
// outputs embed the resolved configuration and are byte-stable across reruns.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <limits>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "tamedheat/besov.hpp"
#include "tamedheat/campaign.hpp"
#include "tamedheat/coupling.hpp"
#include "tamedheat/errors.hpp"
#include "tamedheat/experiment.hpp"
#include "tamedheat/heat.hpp"
#include "tamedheat/regression.hpp"
#include "tamedheat/rng.hpp"
#include "tamedheat/scheme.hpp"

namespace {

using namespace tamedheat;

constexpr int kExitOk = 0;
constexpr int kExitPartial = 1;
constexpr int kExitConfig = 2;
constexpr int kExitDivergence = 3;

std::string fmt(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

void write_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ConfigError("cannot open '" + path + "' for writing");
  out << content;
  if (!out) throw ConfigError("short write to '" + path + "'");
}

std::vector<double> parse_double_list(const std::string& text) {
  std::vector<double> out;
  std::stringstream ss(text);
  std::string tok;
  while (std::getline(ss, tok, ',')) out.push_back(std::stod(tok));
  return out;
}

std::vector<int> parse_int_list(const std::string& text) {
  std::vector<int> out;
  std::stringstream ss(text);
  std::string tok;
  while (std::getline(ss, tok, ',')) out.push_back(std::stoi(tok));
  return out;
}

std::vector<std::int64_t> parse_i64_list(const std::string& text) {
  std::vector<std::int64_t> out;
  std::stringstream ss(text);
  std::string tok;
  while (std::getline(ss, tok, ',')) out.push_back(std::stoll(tok));
  return out;
}

// ---------------------------------------------------------------- simulate

struct SimulateArgs {
  int n = 8;
  std::string c = "1/4";
  std::string drift = "zero";
  std::int64_t k = 0;
  bool auto_k = false;
  std::uint64_t seed = 0;
  std::string record = "1.0";
  std::string psi0 = "zero";
  std::string out;
  std::string binary_out;
};

int cmd_simulate(const SimulateArgs& args) {
  GridConfig grid = [&] {
    try {
      return make_grid(args.n, parse_rational(args.c));
    } catch (const ConfigError& e) {
      throw ConfigError(std::string("--n/--c: ") + e.what());
    }
  }();
  const Drift b = [&] {
    try {
      return Drift::parse(args.drift);
    } catch (const ConfigError& e) {
      throw ConfigError(std::string("--drift: ") + e.what());
    }
  }();
  std::int64_t k = args.k;
  if (args.auto_k) {
    k = select_k(grid.n(), b.gamma(), b.p(), b.default_regime());
  } else if (k < 1) {
    throw ConfigError("--k: taming parameter must be >= 1 (or pass --auto-k)");
  }
  const Psi0 psi0 = [&] {
    try {
      return parse_psi0(args.psi0);
    } catch (const ConfigError& e) {
      throw ConfigError(std::string("--psi0: ") + e.what());
    }
  }();

  std::vector<std::int64_t> record;
  for (const double t : parse_double_list(args.record)) {
    if (t < 0.0 || t > 1.0) throw ConfigError("--record: times must lie in [0,1]");
    record.push_back(time_index_of(grid, t));
  }

  const Trajectory traj = simulate(grid, b, k, args.seed,
                                   [psi0](double x) { return psi0_eval(psi0, x); }, record);
  if (!args.binary_out.empty()) write_trajectory(traj, args.binary_out);

  std::ostringstream csv;
  csv << "# n = " << grid.n() << "\n";
  csv << "# c = " << grid.c().str() << "\n";
  csv << "# drift = " << args.drift << "\n";
  csv << "# k = " << k << "\n";
  csv << "# seed = " << args.seed << "\n";
  csv << "# psi0 = " << args.psi0 << "\n";
  csv << "replica,time,x,value\n";
  for (const auto& [idx, values] : traj.snapshots) {
    for (int j = 0; j < grid.num_space(); ++j) {
      csv << 0 << ',' << fmt(grid.time_point(idx)) << ',' << fmt(grid.space_point(j))
          << ',' << fmt(values[j]) << "\n";
    }
  }
  write_file(args.out, csv.str());
  return kExitOk;
}

// -------------------------------------------------------------- convergence

struct ConvergenceArgs {
  std::string config_path;
  std::string out_dir;
  int threads = 0;
  // inline single-experiment flags
  ExperimentConfig inline_cfg;
  std::string drift = "sin";
  std::string levels;
  std::string c = "1/4";
  std::string psi0 = "zero";
  std::string regime;
  double gamma = std::numeric_limits<double>::quiet_NaN();
  std::string p;
  bool inline_used = false;
};

std::string verdict_of(const ErrorReport& report) {
  if (!report.fit) return "no-fit";
  bool decreasing = true;
  for (std::size_t i = 1; i < report.levels.size(); ++i) {
    decreasing = decreasing && report.levels[i].error < report.levels[i - 1].error;
  }
  if (report.theoretical_rate) {
    const double target = *report.theoretical_rate;
    const double tol = std::max(2.0 * report.fit->halfwidth, 0.15);
    return std::abs(report.fit->rate - target) <= tol ? "consistent" : "off-target";
  }
  return decreasing && report.fit->rate > 0.05 ? "trend-positive" : "inconclusive";
}

int run_experiment(const ExperimentConfig& cfg, const std::string& out_dir, int threads) {
  namespace fs = std::filesystem;
  fs::create_directories(out_dir);
  const auto started = std::chrono::steady_clock::now();
  const ErrorReport report = strong_error(cfg, threads);
  const Decomposition decomp = error_decomposition(cfg, report);
  const double elapsed =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - started).count();

  const std::string base = (fs::path(out_dir) / cfg.name).string();
  write_file(base + ".json", report_json(report));
  write_file(base + ".csv", report_csv(report));
  write_file(base + "_decomposition.csv", decomposition_csv(report, decomp));

  std::ostringstream line;
  line << cfg.name << ": measured rate=";
  if (report.fit) {
    line << fmt(report.fit->rate) << " +/- " << fmt(report.fit->halfwidth);
  } else {
    line << "n/a";
  }
  line << ", theoretical=";
  if (report.theoretical_rate) {
    line << fmt(*report.theoretical_rate);
  } else {
    line << "unknown-positive";
  }
  line << ", verdict=" << verdict_of(report);
  std::cout << line.str() << "  [" << fmt(elapsed) << " s]" << std::endl;
  return kExitOk;
}

int cmd_convergence(const ConvergenceArgs& args) {
  CampaignFile campaign;
  if (!args.config_path.empty()) {
    campaign = load_campaign(args.config_path);
  } else {
    if (!args.inline_used) {
      throw ConfigError("--config: pass a campaign file or inline experiment flags");
    }
    ExperimentConfig cfg = args.inline_cfg;
    cfg.drift_spec = args.drift;
    cfg.levels = parse_int_list(args.levels);
    cfg.c = parse_rational(args.c);
    cfg.psi0 = parse_psi0(args.psi0);
    if (!args.regime.empty()) cfg.regime_override = parse_regime(args.regime);
    if (!std::isnan(args.gamma)) cfg.gamma_override = args.gamma;
    if (!args.p.empty()) {
      cfg.p_override = args.p == "inf" ? std::numeric_limits<double>::infinity()
                                       : std::stod(args.p);
    }
    cfg.validate();
    campaign.experiments.push_back(cfg);
  }
  std::string out_dir = args.out_dir.empty() ? campaign.output_dir : args.out_dir;
  if (const char* env = std::getenv("TAMEDHEAT_OUTPUT_DIR")) out_dir = env;
  const int threads = args.threads > 0 ? args.threads : campaign.parallelism;

  int failures = 0;
  bool diverged = false;
  for (const ExperimentConfig& cfg : campaign.experiments) {
    try {
      run_experiment(cfg, out_dir, threads);
    } catch (const DivergenceError& e) {
      ++failures;
      diverged = true;
      std::cerr << cfg.name << ": diverged: " << e.what() << std::endl;
    } catch (const std::exception& e) {
      ++failures;
      std::cerr << cfg.name << ": failed: " << e.what() << std::endl;
    }
  }
  if (failures == static_cast<int>(campaign.experiments.size()) && failures > 0) {
    return diverged ? kExitDivergence : kExitConfig;
  }
  return failures > 0 ? kExitPartial : kExitOk;
}

// -------------------------------------------------------------- diagnostics

struct DiagnosticsArgs {
  int n = 4;
  std::string c = "1/4";
  int fine = 128;
  std::string levels = "4,8,16,32";
  std::uint64_t seed = 0;
  int replicas = 200;
  int times = 16;
  int threads = 0;
  std::string drift = "dirac";
  std::string k_list = "4,16,64,256,1024,4096";
  double epsilon = 0.05;
  std::string regime;
  std::string out;
  std::string profile_out;
};

int cmd_diag_variances(const DiagnosticsArgs& args) {
  const GridConfig grid = make_grid(args.n, parse_rational(args.c));
  std::vector<double> ts;
  const double h = grid.h();
  for (const double frac : {0.125, 0.25, 0.5, 0.75}) ts.push_back(frac * h);
  for (int i = 0; i <= 40; ++i) {
    const double t = std::exp(std::log(1e-6) + (std::log(1.0) - std::log(1e-6)) * i / 40.0);
    ts.push_back(t);
  }
  std::sort(ts.begin(), ts.end());
  ts.erase(std::unique(ts.begin(), ts.end()), ts.end());

  std::ostringstream csv;
  csv << "# n = " << grid.n() << "\n# c = " << grid.c().str() << "\n";
  csv << "# h = " << fmt(h) << "\n";
  csv << "t,Q,Qn,gap\n";
  for (const double t : ts) {
    if (t <= 0.0 || t > 1.0) continue;
    const double q = variance_Q(t);
    const double qn = variance_Qn(grid, t);
    csv << fmt(t) << ',' << fmt(q) << ',' << fmt(qn) << ',' << fmt(std::abs(qn - q))
        << "\n";
  }
  write_file(args.out, csv.str());
  return kExitOk;
}

int cmd_diag_ou_gap(const DiagnosticsArgs& args) {
  const Rational c = parse_rational(args.c);
  const GridConfig fine = make_grid(args.fine, c);
  std::vector<GridConfig> levels;
  for (const int n : parse_int_list(args.levels)) levels.push_back(make_grid(n, c));
  const auto times = standard_comparison_times(levels.front(), args.times);
  const auto gaps = ou_discretization_gaps(fine, levels, args.seed, times, args.replicas,
                                           args.threads);
  std::vector<double> logn, logg;
  for (std::size_t l = 0; l < levels.size(); ++l) {
    if (gaps[l] > 0.0) {
      logn.push_back(std::log(static_cast<double>(levels[l].n())));
      logg.push_back(std::log(gaps[l]));
    }
  }
  std::ostringstream csv;
  csv << "# fine = " << fine.n() << "\n# c = " << c.str() << "\n";
  csv << "# seed = " << args.seed << "\n# replicas = " << args.replicas << "\n";
  if (logn.size() >= 2) {
    csv << "# fitted_slope = " << fmt(fit_line(logn, logg).slope) << "\n";
  }
  csv << "n,gap\n";
  for (std::size_t l = 0; l < levels.size(); ++l) {
    csv << levels[l].n() << ',' << fmt(gaps[l]) << "\n";
  }
  write_file(args.out, csv.str());
  return kExitOk;
}

int cmd_diag_mollify(const DiagnosticsArgs& args) {
  const Drift b = Drift::parse(args.drift);
  const auto report = verify_mollification_scalings(b, parse_i64_list(args.k_list));
  if (!args.profile_out.empty()) {
    // thermic profiles of the mollification gap at order gamma-1, one block
    // per k
    std::ostringstream prof;
    prof << "# drift = " << args.drift << "\n";
    prof << "# beta = " << fmt(b.gamma() - 1.0) << "\n";
    prof << "# p = " << (b.p() == std::numeric_limits<double>::infinity()
                             ? std::string("inf")
                             : fmt(b.p())) << "\n";
    prof << "k,t,lp_value\n";
    for (const std::int64_t k : report.k_list) {
      const ThermicProfile profile =
          thermic_profile(mollification_gap(b, k), b.gamma() - 1.0, b.p(), default_t_grid());
      for (Eigen::Index i = 0; i < profile.t_grid.size(); ++i) {
        prof << k << ',' << fmt(profile.t_grid[i]) << ',' << fmt(profile.lp_values[i])
             << "\n";
      }
    }
    write_file(args.profile_out, prof.str());
  }
  std::ostringstream csv;
  csv << "# drift = " << args.drift << "\n";
  csv << "# gap_slope = " << fmt(report.gap_slope) << " (theory "
      << fmt(report.gap_slope_theory) << ")\n";
  csv << "# sup_slope = " << fmt(report.sup_slope) << " (theory "
      << fmt(report.sup_slope_theory) << ")\n";
  csv << "# lip_slope = " << fmt(report.lip_slope) << " (theory "
      << fmt(report.lip_slope_theory) << ")\n";
  csv << "k,gap_norm,sup_norm,lip_norm\n";
  for (std::size_t i = 0; i < report.k_list.size(); ++i) {
    csv << report.k_list[i] << ',' << fmt(report.gap_norms[i]) << ','
        << fmt(report.sup_norms[i]) << ',' << fmt(report.lip_norms[i]) << "\n";
  }
  write_file(args.out, csv.str());
  return kExitOk;
}

int cmd_diag_taming(const DiagnosticsArgs& args) {
  const Drift b = Drift::parse(args.drift);
  const Regime regime =
      args.regime.empty() ? b.default_regime() : parse_regime(args.regime);
  std::vector<std::pair<MollifiedDrift, int>> ladder;
  for (const int n : parse_int_list(args.levels)) {
    ladder.emplace_back(mollify(b, select_k(n, b.gamma(), b.p(), regime)), n);
  }
  const TamingReport report = check_taming_hypothesis(ladder, args.epsilon);
  std::ostringstream csv;
  csv << "# drift = " << args.drift << "\n";
  csv << "# regime = " << regime_name(regime) << "\n";
  csv << "# epsilon = " << fmt(args.epsilon) << "\n";
  csv << "# sup_status = " << report.sup_status << "\n";
  csv << "# lip_status = " << report.lip_status << "\n";
  csv << "n,k,sup_product,lip_product\n";
  for (const TamingEntry& e : report.entries) {
    csv << e.n << ',' << e.k << ',' << fmt(e.sup_product) << ',' << fmt(e.lip_product)
        << "\n";
  }
  write_file(args.out, csv.str());
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"tamed Euler finite-difference scheme for the stochastic heat "
               "equation with rough drift on the torus"};
  app.require_subcommand(1);

  SimulateArgs sim;
  auto* simulate_cmd = app.add_subcommand("simulate", "run one trajectory, dump CSV");
  simulate_cmd->add_option("--n", sim.n, "half the number of spatial points")->required();
  simulate_cmd->add_option("--c", sim.c, "CFL ratio p/q (default 1/4)");
  simulate_cmd->add_option("--drift", sim.drift, "drift spec");
  simulate_cmd->add_option("--k", sim.k, "taming parameter");
  simulate_cmd->add_flag("--auto-k", sim.auto_k, "choose k from the drift regularity");
  simulate_cmd->add_option("--seed", sim.seed, "master seed");
  simulate_cmd->add_option("--record", sim.record, "comma list of times in [0,1]");
  simulate_cmd->add_option("--psi0", sim.psi0, "initial data preset");
  simulate_cmd->add_option("--out", sim.out, "output CSV path")->required();
  simulate_cmd->add_option("--binary-out", sim.binary_out, "optional binary snapshot dump");

  ConvergenceArgs conv;
  auto* conv_cmd = app.add_subcommand("convergence", "strong-error campaign");
  conv_cmd->add_option("--config", conv.config_path, "campaign file");
  conv_cmd->add_option("--out-dir", conv.out_dir, "output directory");
  conv_cmd->add_option("--threads", conv.threads, "worker cap (0 = cores)");
  auto mark = [&conv](const std::string&) { conv.inline_used = true; };
  conv_cmd->add_option("--name", conv.inline_cfg.name, "experiment name");
  conv_cmd->add_option("--drift", conv.drift, "drift spec")->each(mark);
  conv_cmd->add_option("--gamma", conv.gamma, "Besov regularity override")->each(mark);
  conv_cmd->add_option("--p", conv.p, "integrability index (number or inf)")->each(mark);
  conv_cmd->add_option("--regime", conv.regime, "sub-critical | limit | bounded")->each(mark);
  conv_cmd->add_option("--m", conv.inline_cfg.m, "moment order")->each(mark);
  conv_cmd->add_option("--levels", conv.levels, "comma list of n")->each(mark);
  conv_cmd->add_option("--n-ref", conv.inline_cfg.n_ref, "reference resolution")->each(mark);
  conv_cmd->add_option("--c", conv.c, "CFL ratio p/q")->each(mark);
  conv_cmd->add_option("--replicas", conv.inline_cfg.replicas, "Monte Carlo replicas")->each(mark);
  conv_cmd->add_option("--seed", conv.inline_cfg.master_seed, "master seed")->each(mark);
  conv_cmd->add_option("--psi0", conv.psi0, "initial data preset")->each(mark);
  conv_cmd->add_option("--times", conv.inline_cfg.comparison_times, "comparison times")->each(mark);
  conv_cmd->add_option("--epsilon", conv.inline_cfg.epsilon, "taming epsilon")->each(mark);

  DiagnosticsArgs diag;
  auto* diag_cmd = app.add_subcommand("diagnostics", "analytic diagnostic tables");
  diag_cmd->require_subcommand(1);
  auto* variances_cmd = diag_cmd->add_subcommand("variances", "Q, Qn and their gap");
  variances_cmd->add_option("--n", diag.n, "grid resolution");
  variances_cmd->add_option("--c", diag.c, "CFL ratio p/q");
  variances_cmd->add_option("--out", diag.out, "output CSV path")->required();
  auto* ou_cmd = diag_cmd->add_subcommand("ou-gap", "discrete OU coupling gap per level");
  ou_cmd->add_option("--fine", diag.fine, "fine reference resolution");
  ou_cmd->add_option("--levels", diag.levels, "comma list of n");
  ou_cmd->add_option("--c", diag.c, "CFL ratio p/q");
  ou_cmd->add_option("--seed", diag.seed, "master seed");
  ou_cmd->add_option("--replicas", diag.replicas, "Monte Carlo replicas");
  ou_cmd->add_option("--times", diag.times, "comparison times");
  ou_cmd->add_option("--threads", diag.threads, "worker cap (0 = cores)");
  ou_cmd->add_option("--out", diag.out, "output CSV path")->required();
  auto* mollify_cmd = diag_cmd->add_subcommand("mollify", "mollification scaling slopes");
  mollify_cmd->add_option("--drift", diag.drift, "drift spec");
  mollify_cmd->add_option("--k-list", diag.k_list, "comma list of k");
  mollify_cmd->add_option("--out", diag.out, "output CSV path")->required();
  mollify_cmd->add_option("--profile-out", diag.profile_out,
                          "optional thermic-profile CSV (k, t, lp_value)");
  auto* taming_cmd = diag_cmd->add_subcommand("taming", "uniform-taming products");
  taming_cmd->add_option("--drift", diag.drift, "drift spec");
  taming_cmd->add_option("--levels", diag.levels, "comma list of n");
  taming_cmd->add_option("--epsilon", diag.epsilon, "epsilon in the sup product");
  taming_cmd->add_option("--regime", diag.regime, "regime override");
  taming_cmd->add_option("--out", diag.out, "output CSV path")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitConfig;
  }

  try {
    if (simulate_cmd->parsed()) return cmd_simulate(sim);
    if (conv_cmd->parsed()) return cmd_convergence(conv);
    if (variances_cmd->parsed()) return cmd_diag_variances(diag);
    if (ou_cmd->parsed()) return cmd_diag_ou_gap(diag);
    if (mollify_cmd->parsed()) return cmd_diag_mollify(diag);
    if (taming_cmd->parsed()) return cmd_diag_taming(diag);
    std::cerr << "no subcommand selected" << std::endl;
    return kExitConfig;
  } catch (const DivergenceError& e) {
    std::cerr << "divergence: " << e.what() << std::endl;
    return kExitDivergence;
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << std::endl;
    return kExitConfig;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << std::endl;
    return kExitConfig;
  }
}
