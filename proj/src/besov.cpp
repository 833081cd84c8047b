#include "tamedheat/besov.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <set>

#include "tamedheat/errors.hpp"
#include "tamedheat/quadrature.hpp"
#include "tamedheat/regression.hpp"

namespace tamedheat {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// feature locations of a base drift: atom positions, jump points, support ends
std::vector<double> feature_points(const Drift& b) {
  std::vector<double> pts;
  if (b.is_measure()) {
    for (const Atom& a : b.atoms()) pts.push_back(a.location);
  } else if (b.kind() == DriftKind::PowerSingular) {
    pts = {0.0, 1.0};
  } else {
    pts = b.breakpoints();
  }
  return pts;
}

// rough L^1 mass of a base drift, to scale quadrature tolerances
double l1_scale(const Drift& b) {
  switch (b.kind()) {
    case DriftKind::SignedMeasure: {
      double s = 0.0;
      for (const Atom& a : b.atoms()) s += std::abs(a.weight);
      return s;
    }
    case DriftKind::PowerSingular:
      return 1.0 / (1.0 + b.exponent());
    default: {
      const auto [lo, hi] = b.support_hull();
      return b.sup_bound() * (hi - lo + 1.0);
    }
  }
}

struct Window {
  double lo, hi;
};

Window expr_window(const DriftExpr& expr, double t_max) {
  double lo = kInf, hi = -kInf, vmax = 0.0;
  for (const SmoothedTerm& term : expr) {
    const auto [a, b] = term.base.support_hull();
    lo = std::min(lo, a);
    hi = std::max(hi, b);
    vmax = std::max(vmax, t_max + term.presmooth);
  }
  const double pad = 8.0 * std::sqrt(vmax);
  return {lo - pad, hi + pad};
}

double lp_norm(const DriftExpr& expr, double t, double p, const Window& w) {
  // special points seed both the sup sampling and the integration panels
  std::set<double> special;
  for (const SmoothedTerm& term : expr) {
    for (const double x : feature_points(term.base)) {
      if (x > w.lo && x < w.hi) special.insert(x);
    }
  }
  if (p == kInf) {
    double sup = 0.0;
    const int coarse = 2048;
    for (int i = 0; i <= coarse; ++i) {
      const double x = w.lo + (w.hi - w.lo) * i / coarse;
      sup = std::max(sup, std::abs(expr_eval(expr, t, x)));
    }
    // graded refinement around each feature at the scale of each term
    for (const double s : special) {
      for (const SmoothedTerm& term : expr) {
        const double scale = 8.0 * std::sqrt(t + term.presmooth);
        for (int i = -64; i <= 64; ++i) {
          const double x = s + scale * i / 64.0;
          if (x >= w.lo && x <= w.hi) {
            sup = std::max(sup, std::abs(expr_eval(expr, t, x)));
          }
        }
      }
    }
    return sup;
  }
  std::vector<double> cuts{w.lo, w.hi};
  cuts.insert(cuts.end(), special.begin(), special.end());
  std::sort(cuts.begin(), cuts.end());
  double scale = 0.0;
  for (const SmoothedTerm& term : expr) scale += std::abs(term.coeff) * l1_scale(term.base);
  const double tol = 1e-9 * std::max(1.0, std::pow(scale, p));
  double total = 0.0;
  for (std::size_t i = 0; i + 1 < cuts.size(); ++i) {
    total += integrate_or_throw(
        [&](double x) { return std::pow(std::abs(expr_eval(expr, t, x)), p); }, cuts[i],
        cuts[i + 1], tol / static_cast<double>(cuts.size()));
  }
  return std::pow(total, 1.0 / p);
}

}  // namespace

DriftExpr expr_of(const Drift& b) { return {SmoothedTerm{1.0, b, 0.0}}; }

DriftExpr expr_of(const MollifiedDrift& bk) {
  return {SmoothedTerm{1.0, bk.base(), bk.variance()}};
}

DriftExpr mollification_gap(const Drift& b, std::int64_t k) {
  if (k < 1) throw ConfigError("mollification gap needs k >= 1");
  return {SmoothedTerm{1.0, b, 0.0},
          SmoothedTerm{-1.0, b, 1.0 / static_cast<double>(k)}};
}

double expr_eval(const DriftExpr& expr, double t, double x) {
  double sum = 0.0;
  for (const SmoothedTerm& term : expr) {
    sum += term.coeff * smoothed_eval(term.base, t + term.presmooth, x);
  }
  return sum;
}

Eigen::ArrayXd default_t_grid() {
  const int count = 40;
  Eigen::ArrayXd grid(count);
  const double lo = std::log(1e-6);
  const double hi = std::log(1.0);
  for (int i = 0; i < count; ++i) {
    grid[i] = std::exp(lo + (hi - lo) * i / (count - 1));
  }
  grid[0] = 1e-6;
  grid[count - 1] = 1.0;  // guard endpoint roundoff
  return grid;
}

ThermicProfile thermic_profile(const DriftExpr& f, double beta, double p,
                               const Eigen::ArrayXd& t_grid) {
  if (!(beta < 0.0)) throw ConfigError("thermic estimator requires beta < 0");
  if (t_grid.size() == 0) throw ConfigError("thermic estimator needs a t grid");
  for (Eigen::Index i = 0; i < t_grid.size(); ++i) {
    if (!(t_grid[i] > 0.0 && t_grid[i] <= 1.0) ||
        (i > 0 && t_grid[i] <= t_grid[i - 1])) {
      throw ConfigError("t grid must be strictly increasing in (0,1]");
    }
  }
  if (f.empty()) throw ConfigError("thermic estimator needs a nonempty expression");
  ThermicProfile profile;
  profile.t_grid = t_grid;
  profile.beta = beta;
  profile.p = p;
  profile.lp_values.resize(t_grid.size());
  // normalize out the coefficient scale so the estimator is exactly
  // 1-homogeneous (identical quadrature path for f and alpha*f)
  double scale = 0.0;
  for (const SmoothedTerm& term : f) scale = std::max(scale, std::abs(term.coeff));
  if (scale == 0.0) {
    profile.lp_values.setZero();
    return profile;
  }
  DriftExpr unit = f;
  for (SmoothedTerm& term : unit) term.coeff /= scale;
  const Window w = expr_window(unit, t_grid[t_grid.size() - 1]);
  for (Eigen::Index i = 0; i < t_grid.size(); ++i) {
    profile.lp_values[i] = scale * lp_norm(unit, t_grid[i], p, w);
  }
  return profile;
}

double thermic_norm(const DriftExpr& f, double beta, double p,
                    const Eigen::ArrayXd& t_grid) {
  const ThermicProfile profile = thermic_profile(f, beta, p, t_grid);
  double best = 0.0;
  for (Eigen::Index i = 0; i < t_grid.size(); ++i) {
    best = std::max(best, std::pow(t_grid[i], -beta / 2.0) * profile.lp_values[i]);
  }
  return best;
}

double thermic_norm(const Drift& f, double beta, double p, const Eigen::ArrayXd& t_grid) {
  return thermic_norm(expr_of(f), beta, p, t_grid);
}

double thermic_norm(const MollifiedDrift& f, double beta, double p,
                    const Eigen::ArrayXd& t_grid) {
  return thermic_norm(expr_of(f), beta, p, t_grid);
}

ScalingReport verify_mollification_scalings(const Drift& b,
                                            const std::vector<std::int64_t>& k_list) {
  if (k_list.size() < 4) throw ConfigError("scaling fit needs at least 4 values of k");
  ScalingReport report;
  report.k_list = k_list;
  const double gap_index = b.gamma() - (b.p() == kInf ? 0.0 : 1.0 / b.p());
  report.gap_slope_theory = -0.5;
  report.sup_slope_theory = -0.5 * gap_index;
  report.lip_slope_theory = 0.5 - 0.5 * gap_index;
  const Eigen::ArrayXd t_grid = default_t_grid();
  std::vector<double> logk, lg, ls, ll;
  for (const std::int64_t k : k_list) {
    const MollifiedDrift bk = mollify(b, k);
    const double gap = thermic_norm(mollification_gap(b, k), b.gamma() - 1.0, b.p(), t_grid);
    report.gap_norms.push_back(gap);
    report.sup_norms.push_back(bk.sup_norm());
    report.lip_norms.push_back(bk.lip_norm());
    logk.push_back(std::log(static_cast<double>(k)));
    lg.push_back(std::log(gap));
    ls.push_back(std::log(bk.sup_norm()));
    ll.push_back(std::log(bk.lip_norm()));
  }
  report.gap_slope = fit_line(logk, lg).slope;
  report.sup_slope = fit_line(logk, ls).slope;
  report.lip_slope = fit_line(logk, ll).slope;
  return report;
}

}  // namespace tamedheat
