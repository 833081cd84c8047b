#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace tamedheat {

enum class DriftKind { Smooth, BoundedMeasurable, PowerSingular, SignedMeasure };

/// Regularity regime of the pair (gamma, p): sub-critical when
/// 0 > gamma - 1/p > -1, limit when gamma - 1/p = -1 (finite measures),
/// bounded when gamma = 0, p = infinity.
enum class Regime { SubCritical, Limit, Bounded };

struct Atom {
  double location = 0.0;
  double weight = 1.0;
};

/// The reaction term b together with its Besov regularity metadata
/// (gamma, p). Constructors enforce the admissible range
/// 0 > gamma - 1/p >= -1 with gamma > -1, or the bounded case
/// gamma = 0, p = infinity.
class Drift {
public:
  static Drift smooth(std::string id, std::function<double(double)> f,
                      double lipschitz_bound);
  static Drift bounded_measurable(std::string id, std::function<double(double)> f,
                                  double sup_bound,
                                  std::vector<double> breakpoints = {});
  /// b(x) = x^exponent on (0,1), exponent in (-1,0); gamma = exponent, p = inf.
  static Drift power_singular(double exponent);
  /// Finite signed measure sum_i w_i * delta_{a_i}; gamma = 0, p = 1.
  static Drift signed_measure(std::vector<Atom> atoms);

  /// Builds a drift from its textual spec: zero | sin | sign | indicator |
  /// const:<v> | power:<g> | dirac[:<a>:<w>[,<a>:<w>...]]
  static Drift parse(const std::string& spec);

  /// Same drift with overridden (gamma, p) metadata (revalidated).
  Drift with_regularity(double gamma, double p) const;

  DriftKind kind() const { return kind_; }
  const std::string& id() const { return id_; }
  double gamma() const { return gamma_; }
  double p() const { return p_; }
  Regime default_regime() const;

  bool is_measure() const { return kind_ == DriftKind::SignedMeasure; }
  double eval(double x) const;  // function kinds only
  const std::vector<Atom>& atoms() const { return atoms_; }
  double exponent() const { return exponent_; }
  double sup_bound() const { return sup_bound_; }
  double lip_bound() const { return lip_bound_; }
  const std::vector<double>& breakpoints() const { return breakpoints_; }

  /// Hull of the effective support, used to center evaluation windows.
  std::pair<double, double> support_hull() const;

private:
  Drift() = default;
  void validate_regularity() const;

  DriftKind kind_ = DriftKind::Smooth;
  std::string id_;
  double gamma_ = 0.0;
  double p_ = 0.0;
  std::function<double(double)> f_;
  double sup_bound_ = 0.0;
  double lip_bound_ = 0.0;
  std::vector<double> breakpoints_;
  double exponent_ = 0.0;
  std::vector<Atom> atoms_;
  std::pair<double, double> hull_{0.0, 0.0};
};

/// (G_v b)(x): convolution of b with the centered Gaussian density of
/// variance v. Exact for signed measures; adaptive quadrature otherwise,
/// with the power singularity removed by the substitution s = y^(1+exponent).
/// v = 0 returns b(x) itself (function kinds only).
double smoothed_eval(const Drift& b, double variance, double x);

struct DriftNorms {
  double sup_norm = 0.0;
  double lip_norm = 0.0;
  int samples = 0;
  double window_lo = 0.0;
  double window_hi = 0.0;
};

/// The tamed drift b^k = G_{1/k} b with its computed norms.
class MollifiedDrift {
public:
  MollifiedDrift(Drift base, std::int64_t k);

  double operator()(double x) const { return smoothed_eval(base_, variance_, x); }

  const Drift& base() const { return base_; }
  std::int64_t k() const { return k_; }
  double variance() const { return variance_; }
  double sup_norm() const { return norms_.sup_norm; }
  double lip_norm() const { return norms_.lip_norm; }
  const DriftNorms& norms() const { return norms_; }

private:
  friend DriftNorms drift_norms(const MollifiedDrift&, int,
                                std::optional<std::pair<double, double>>);
  Drift base_;
  std::int64_t k_ = 1;
  double variance_ = 1.0;
  DriftNorms norms_;
};

/// b^k = G_{1/k} b; rejects k < 1. Norms are computed at a default sampling
/// resolution (see drift_norms).
MollifiedDrift mollify(const Drift& b, std::int64_t k);

/// Sup and Lipschitz norms over a dense sample of `window` (default: the
/// support hull padded by 8 sqrt(1/k)). Signed measures with a single atom
/// use the closed-form peak and slope maxima instead.
DriftNorms drift_norms(const MollifiedDrift& bk, int sample_count,
                       std::optional<std::pair<double, double>> window = std::nullopt);

/// Taming parameter for resolution n:
///   sub-critical  k_n = floor(n^(1/(1 - gamma + 1/p)))
///   limit         k_n = floor(sqrt(n))
///   bounded       k_n = n
/// clamped to at least 1. Throws ConfigError when (gamma, p) is inconsistent
/// with the regime.
std::int64_t select_k(int n, double gamma, double p, Regime regime);

/// Predicted strong convergence rate: 1/(2(1 - gamma + 1/p)) sub-critical,
/// 1/2 bounded, nullopt in the limit regime (positive but not explicit).
std::optional<double> theoretical_rate(double gamma, double p, Regime regime);

struct TamingEntry {
  int n = 0;
  std::int64_t k = 0;
  double sup_product = 0.0;  // ||b^k||_inf * n^(-1/2+eps)
  double lip_product = 0.0;  // ||b^k||_C1 * n^-1
};

struct TamingReport {
  double epsilon = 0.0;
  std::vector<TamingEntry> entries;
  double max_sup_product = 0.0;
  double max_lip_product = 0.0;
  // bounded | borderline | growing | divergent
  std::string sup_status;
  std::string lip_status;
};

/// Checks the uniform-taming products over a ladder of (b^k, n) pairs and
/// flags monotone growth beyond a factor 10 as divergent.
TamingReport check_taming_hypothesis(
    const std::vector<std::pair<MollifiedDrift, int>>& ladder, double epsilon);

}  // namespace tamedheat
