#include "tamedheat/grid.hpp"

#include <cmath>
#include <limits>
#include <numeric>

#include "tamedheat/errors.hpp"

namespace tamedheat {

namespace {

// floor with a relative guard: values a hair below an integer (from binary
// rounding of h or t) snap up to it.
std::int64_t guarded_floor(double y) {
  const double f = std::floor(y);
  const double eps = std::numeric_limits<double>::epsilon();
  if (y - f > 1.0 - 8.0 * eps * std::max(1.0, std::abs(y))) {
    return static_cast<std::int64_t>(f) + 1;
  }
  return static_cast<std::int64_t>(f);
}

}  // namespace

Rational parse_rational(const std::string& text) {
  const auto slash = text.find('/');
  auto parse_int = [&](const std::string& s) {
    try {
      std::size_t pos = 0;
      const std::int64_t v = std::stoll(s, &pos);
      if (pos != s.size()) throw ConfigError("malformed rational: '" + text + "'");
      return v;
    } catch (const ConfigError&) {
      throw;
    } catch (const std::exception&) {
      throw ConfigError("malformed rational: '" + text + "'");
    }
  };
  Rational r;
  if (slash != std::string::npos) {
    r.num = parse_int(text.substr(0, slash));
    r.den = parse_int(text.substr(slash + 1));
  } else if (text.find('.') != std::string::npos) {
    const auto dot = text.find('.');
    const std::string frac = text.substr(dot + 1);
    if (frac.empty() || frac.size() > 15) throw ConfigError("malformed rational: '" + text + "'");
    std::int64_t den = 1;
    for (std::size_t i = 0; i < frac.size(); ++i) den *= 10;
    r.num = parse_int(text.substr(0, dot)) * den + parse_int(frac);
    r.den = den;
  } else {
    r.num = parse_int(text);
    r.den = 1;
  }
  if (r.den <= 0) throw ConfigError("rational denominator must be positive: '" + text + "'");
  const std::int64_t g = std::gcd(r.num < 0 ? -r.num : r.num, r.den);
  if (g > 1) {
    r.num /= g;
    r.den /= g;
  }
  return r;
}

GridConfig::GridConfig(int n, Rational c, bool checked) : n_(n), c_(c) {
  if (n < 1) throw ConfigError("grid requires n >= 1, got n=" + std::to_string(n));
  if (checked && (c.num <= 0 || 2 * c.num >= c.den)) {
    throw ConfigError("CFL condition violated: need 0 < c < 1/2, got c=" + c.str());
  }
  h_ = c.value() / (4.0 * static_cast<double>(n) * static_cast<double>(n));
  // 1/h = 4*den*n^2 / num, floored exactly in integers.
  const std::int64_t four_qn2 = 4 * c.den * static_cast<std::int64_t>(n) * n;
  num_time_ = four_qn2 / c.num;
}

GridConfig make_grid(int n, Rational c) { return GridConfig(n, c, true); }
GridConfig make_grid_unchecked(int n, Rational c) { return GridConfig(n, c, false); }

Eigen::ArrayXd GridConfig::space_points() const {
  return Eigen::ArrayXd::LinSpaced(2 * n_, 0.0, (2.0 * n_ - 1.0) / (2.0 * n_));
}

std::int64_t time_index_of(const GridConfig& grid, double t) {
  if (!(t >= 0.0 && t <= 1.0)) {
    throw std::domain_error("time " + std::to_string(t) + " outside [0,1]");
  }
  // t/h = t * (4*den*n^2) / num; the integer factor is exact in double for
  // all practical n, so only one rounding happens before the guarded floor.
  const double four_qn2 =
      4.0 * static_cast<double>(grid.c().den) * grid.n() * static_cast<double>(grid.n());
  const double y = t * four_qn2 / static_cast<double>(grid.c().num);
  const std::int64_t i = guarded_floor(y);
  return std::min(i, grid.num_time());
}

double project_time(const GridConfig& grid, double t) {
  return static_cast<double>(time_index_of(grid, t)) * grid.h();
}

int space_index_of(const GridConfig& grid, double y) {
  double w = y - std::floor(y);
  if (w >= 1.0) w = 0.0;
  const std::int64_t j = guarded_floor(w * grid.num_space());
  return static_cast<int>(j % grid.num_space());
}

double project_space(const GridConfig& grid, double y) {
  return grid.space_point(space_index_of(grid, y));
}

std::optional<int> nesting_factor(const GridConfig& coarse, const GridConfig& fine) {
  if (!(coarse.c() == fine.c())) {
    throw ConfigError("nesting requires identical CFL ratio, got " + coarse.c().str() +
                      " vs " + fine.c().str());
  }
  if (fine.n() % coarse.n() != 0) return std::nullopt;
  int ratio = fine.n() / coarse.n();
  int j = 0;
  while (ratio > 1) {
    if (ratio % 2 != 0) return std::nullopt;
    ratio /= 2;
    ++j;
  }
  return j;
}

}  // namespace tamedheat
