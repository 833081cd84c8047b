#pragma once

#include <cstdint>
#include <vector>

#include <Eigen/Core>

#include "tamedheat/drift.hpp"

namespace tamedheat {

/// Linear combination sum_i coeff_i * G_{presmooth_i} base_i, the algebra the
/// thermic estimator works on. Applying G_t just shifts every presmooth by t,
/// so measures stay exactly evaluable.
struct SmoothedTerm {
  double coeff = 1.0;
  Drift base;
  double presmooth = 0.0;
};
using DriftExpr = std::vector<SmoothedTerm>;

DriftExpr expr_of(const Drift& b);
DriftExpr expr_of(const MollifiedDrift& bk);
/// b - G_{1/k} b, the taming stability gap.
DriftExpr mollification_gap(const Drift& b, std::int64_t k);

double expr_eval(const DriftExpr& expr, double t, double x);

/// 40 geometric points in [1e-6, 1]; covers the scales 1/k for k <= 4096
/// with margin.
Eigen::ArrayXd default_t_grid();

struct ThermicProfile {
  Eigen::ArrayXd t_grid;
  Eigen::ArrayXd lp_values;  // ||G_t f||_{L^p} per t
  double beta = 0.0;
  double p = 0.0;
};

/// Heat-semigroup (thermic) surrogate of the B_p^beta norm for beta < 0:
/// max over the t grid of t^(-beta/2) ||G_t f||_{L^p}. Equivalent-norm
/// surrogate with an unquantified constant; use it for slopes, not absolute
/// comparisons.
double thermic_norm(const DriftExpr& f, double beta, double p,
                    const Eigen::ArrayXd& t_grid);
double thermic_norm(const Drift& f, double beta, double p, const Eigen::ArrayXd& t_grid);
double thermic_norm(const MollifiedDrift& f, double beta, double p,
                    const Eigen::ArrayXd& t_grid);

ThermicProfile thermic_profile(const DriftExpr& f, double beta, double p,
                               const Eigen::ArrayXd& t_grid);

struct ScalingReport {
  std::vector<std::int64_t> k_list;
  std::vector<double> gap_norms;  // thermic ||b - b^k|| at order gamma-1
  std::vector<double> sup_norms;
  std::vector<double> lip_norms;
  double gap_slope = 0.0, sup_slope = 0.0, lip_slope = 0.0;
  double gap_slope_theory = 0.0, sup_slope_theory = 0.0, lip_slope_theory = 0.0;
};

/// Fits the three mollification scalings against log k:
/// thermic gap ~ k^(-1/2), sup ~ k^(-(gamma-1/p)/2),
/// C^1 slope ~ k^(1/2 - (gamma-1/p)/2).
ScalingReport verify_mollification_scalings(const Drift& b,
                                            const std::vector<std::int64_t>& k_list);

}  // namespace tamedheat
