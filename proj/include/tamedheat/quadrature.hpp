#pragma once

#include <functional>

namespace tamedheat {

struct QuadratureResult {
  double value = 0.0;
  double residual = 0.0;  // worst unconverged panel estimate
  long evaluations = 0;
  bool converged = true;
};

/// Adaptive Simpson integration of f over [a, b] to absolute tolerance.
QuadratureResult adaptive_simpson(const std::function<double(double)>& f, double a,
                                  double b, double abs_tol, int max_depth = 48);

/// Same, but throws QuadratureError when the tolerance is not met.
double integrate_or_throw(const std::function<double(double)>& f, double a, double b,
                          double abs_tol, int max_depth = 48);

}  // namespace tamedheat
