#pragma once

#include <vector>

namespace tamedheat {

struct LineFit {
  double slope = 0.0;
  double intercept = 0.0;
  double slope_stderr = 0.0;
  std::vector<double> residuals;
};

/// Ordinary least squares y = a + b x; requires >= 2 points (>= 3 for a
/// finite slope standard error).
LineFit fit_line(const std::vector<double>& x, const std::vector<double>& y);

/// Upper 0.95 quantile of Student's t with df degrees of freedom (two-sided
/// 90% intervals).
double student_t_quantile_95(int df);

}  // namespace tamedheat
