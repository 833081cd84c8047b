#include "tamedheat/regression.hpp"

#include <cmath>

#include "tamedheat/errors.hpp"

namespace tamedheat {

LineFit fit_line(const std::vector<double>& x, const std::vector<double>& y) {
  const std::size_t n = x.size();
  if (n != y.size() || n < 2) throw ConfigError("fit_line needs >= 2 paired points");
  double mx = 0.0, my = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    mx += x[i];
    my += y[i];
  }
  mx /= static_cast<double>(n);
  my /= static_cast<double>(n);
  double sxx = 0.0, sxy = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    sxx += (x[i] - mx) * (x[i] - mx);
    sxy += (x[i] - mx) * (y[i] - my);
  }
  if (sxx == 0.0) throw ConfigError("fit_line: degenerate abscissae");
  LineFit fit;
  fit.slope = sxy / sxx;
  fit.intercept = my - fit.slope * mx;
  double rss = 0.0;
  fit.residuals.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    fit.residuals[i] = y[i] - (fit.intercept + fit.slope * x[i]);
    rss += fit.residuals[i] * fit.residuals[i];
  }
  fit.slope_stderr =
      n > 2 ? std::sqrt(rss / (static_cast<double>(n) - 2.0) / sxx) : 0.0;
  return fit;
}

double student_t_quantile_95(int df) {
  static const double table[] = {6.314, 2.920, 2.353, 2.132, 2.015, 1.943, 1.895,
                                 1.860, 1.833, 1.812, 1.796, 1.782, 1.771, 1.761,
                                 1.753, 1.746, 1.740, 1.734, 1.729, 1.725, 1.721,
                                 1.717, 1.714, 1.711, 1.708, 1.706, 1.703, 1.701,
                                 1.699, 1.697};
  if (df < 1) return 6.314;
  if (df <= 30) return table[df - 1];
  return 1.645;
}

}  // namespace tamedheat
