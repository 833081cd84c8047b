#include "tamedheat/quadrature.hpp"
#include <limits>

#include <cmath>

#include "tamedheat/errors.hpp"

namespace tamedheat {

namespace {

struct Worker {
  const std::function<double(double)>& f;
  double roundoff_floor = 0.0;  // deltas below double precision of the total
  long evals = 0;
  double worst = 0.0;
  bool converged = true;

  double eval(double x) {
    ++evals;
    return f(x);
  }

  // recursive Simpson with Richardson correction
  double recurse(double a, double m, double b, double fa, double fm, double fb,
                 double whole, double tol, int depth) {
    const double lm = 0.5 * (a + m);
    const double rm = 0.5 * (m + b);
    const double flm = eval(lm);
    const double frm = eval(rm);
    const double left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
    const double right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
    const double delta = left + right - whole;
    const double accept = std::max(15.0 * tol, roundoff_floor);
    if (std::abs(delta) <= accept || depth <= 0) {
      if (depth <= 0 && std::abs(delta) > accept) {
        converged = false;
        worst = std::max(worst, std::abs(delta) / 15.0);
      }
      return left + right + delta / 15.0;
    }
    return recurse(a, lm, m, fa, flm, fm, left, 0.5 * tol, depth - 1) +
           recurse(m, rm, b, fm, frm, fb, right, 0.5 * tol, depth - 1);
  }
};

}  // namespace

QuadratureResult adaptive_simpson(const std::function<double(double)>& f, double a,
                                  double b, double abs_tol, int max_depth) {
  QuadratureResult res;
  if (a == b) return res;
  Worker w{f};
  const double m = 0.5 * (a + b);
  const double fa = w.eval(a);
  const double fm = w.eval(m);
  const double fb = w.eval(b);
  const double whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
  const double scale = std::abs(b - a) / 6.0 *
                       (std::abs(fa) + 4.0 * std::abs(fm) + std::abs(fb));
  w.roundoff_floor = 16.0 * std::numeric_limits<double>::epsilon() *
                     std::max(scale, std::abs(whole));
  res.value = w.recurse(a, m, b, fa, fm, fb, whole, abs_tol, max_depth);
  res.evaluations = w.evals;
  res.converged = w.converged;
  res.residual = w.worst;
  return res;
}

double integrate_or_throw(const std::function<double(double)>& f, double a, double b,
                          double abs_tol, int max_depth) {
  const QuadratureResult res = adaptive_simpson(f, a, b, abs_tol, max_depth);
  if (!res.converged) {
    throw QuadratureError("adaptive quadrature did not converge", res.residual);
  }
  return res.value;
}

}  // namespace tamedheat
