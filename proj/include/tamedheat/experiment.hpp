#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <Eigen/Core>

#include "tamedheat/drift.hpp"
#include "tamedheat/grid.hpp"
#include "tamedheat/scheme.hpp"

namespace tamedheat {

std::string regime_name(Regime regime);
Regime parse_regime(const std::string& name);

/// One strong-error campaign: nested levels against a finer reference run of
/// the same scheme (self-convergence), all coupled through one noise
/// realization per replica.
struct ExperimentConfig {
  std::string name = "experiment";
  std::string drift_spec = "sin";
  std::optional<double> gamma_override;
  std::optional<double> p_override;  // infinity allowed
  std::optional<Regime> regime_override;
  int m = 2;
  std::vector<int> levels;     // ascending powers-of-two refinements
  int n_ref = 0;               // finest level, > max(levels)
  Rational c{1, 4};
  int replicas = 2;
  std::uint64_t master_seed = 0;
  Psi0 psi0 = Psi0::Zero;
  int comparison_times = 16;   // equispaced coarse grid times (plus final)
  double epsilon = 0.05;       // the eps in the taming diagnostics

  Drift drift() const;
  Regime regime() const;
  void validate() const;
};

struct LevelResult {
  int n = 0;
  std::int64_t k = 0;
  double error = 0.0;
  double std_error = 0.0;
  double sup_norm = 0.0;
  double lip_norm = 0.0;
  double h2_sup_product = 0.0;  // ||b^k||_inf n^(-1/2+eps)
  double h2_lip_product = 0.0;  // ||b^k||_C1 n^-1
  std::int64_t steps = 0;
  double interp_error = 0.0;  // measured drift-table probe error
};

struct RateFit {
  double rate = 0.0;       // -slope of log error vs log n
  double halfwidth = 0.0;  // 90% interval from the regression
  bool dropped_coarsest = false;
};

struct ErrorReport {
  int schema = 1;
  ExperimentConfig config;
  std::int64_t k_ref = 0;
  std::vector<LevelResult> levels;
  std::optional<RateFit> fit;                // present iff >= 3 levels
  std::optional<double> theoretical_rate;    // nullopt = unknown-positive
  double drift_table_budget = 1e-8;
};

/// Runs the whole campaign. Per replica: one fine realization drives the
/// reference scheme at n_ref (with its own k) and every level (with k_n);
/// |u_ref - u_n|^m is recorded at the shared comparison set, averaged over
/// replicas, raised to 1/m and sup'd. Standard errors come from >= 10
/// replica batches. threads <= 0 means all cores.
ErrorReport strong_error(const ExperimentConfig& config, int threads = 1);

/// Least-squares rate from the per-level errors (requires >= 3 positive
/// errors). Drops the coarsest level when its residual exceeds 3x the others
/// and at least 3 levels remain.
RateFit fit_rate(const ErrorReport& report);

struct DecompositionRow {
  int n = 0;
  std::int64_t k = 0;
  double stability = 0.0;      // thermic ||b - b^k|| at order gamma-1
  double ou_component = 0.0;   // (1+sup) n^(-1/2+eps)
  double lip_component = 0.0;  // (1+sup) lip n^(-1+eps)
  double measured = 0.0;
};

struct Decomposition {
  std::vector<DecompositionRow> rows;
  double stability_slope = 0.0;
  double ou_slope = 0.0;
  double lip_slope = 0.0;
  double measured_slope = 0.0;
};

/// Evaluates the three bound components next to the measured errors; the
/// constants are unknown, so only the log-log slopes are comparable.
Decomposition error_decomposition(const ExperimentConfig& config,
                                  const ErrorReport& report);

/// Campaign internals exposed for verification: per-replica comparison
/// matrices |u_ref - u_level| (outer index level, inner replica), driven by
/// explicit per-replica seeds.
std::vector<std::vector<Eigen::ArrayXXd>> run_campaign_diffs(
    const ExperimentConfig& config, const std::vector<std::uint64_t>& seeds,
    int threads);

// Serialization (schema 1). Outputs are byte-stable for a fixed master seed.
std::string report_json(const ErrorReport& report);
std::string report_csv(const ErrorReport& report);
std::string decomposition_csv(const ErrorReport& report, const Decomposition& d);

}  // namespace tamedheat
