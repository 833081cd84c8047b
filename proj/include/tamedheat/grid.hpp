#pragma once

#include <cstdint>
#include <optional>
#include <string>

#include <Eigen/Core>

namespace tamedheat {

/// Exact rational CFL ratio c = num/den. Keeping c rational makes the
/// time-step count and all grid projections exact integer arithmetic.
struct Rational {
  std::int64_t num = 1;
  std::int64_t den = 4;

  double value() const { return static_cast<double>(num) / static_cast<double>(den); }
  bool operator==(const Rational&) const = default;
  std::string str() const { return std::to_string(num) + "/" + std::to_string(den); }
};

/// Parses "p/q" or a plain integer/decimal (decimals are converted exactly,
/// e.g. "0.49" -> 49/100).
Rational parse_rational(const std::string& text);

/// The coupled space-time discretization of T x [0,1].
///
/// Spatial points are x_j = j/(2n), j = 0..2n-1; time points are t_i = i*h,
/// i = 0..floor(1/h), with h = c * (2n)^-2 and the CFL constraint c < 1/2.
/// Immutable after construction; safe to share across threads.
class GridConfig {
public:
  GridConfig() : GridConfig(1, Rational{1, 4}, true) {}

  int n() const { return n_; }
  Rational c() const { return c_; }
  double h() const { return h_; }
  int num_space() const { return 2 * n_; }
  std::int64_t num_time() const { return num_time_; }

  double space_point(int j) const { return static_cast<double>(j) / (2.0 * n_); }
  double time_point(std::int64_t i) const { return static_cast<double>(i) * h_; }

  Eigen::ArrayXd space_points() const;

  bool operator==(const GridConfig& other) const {
    return n_ == other.n_ && c_ == other.c_;
  }

private:
  friend GridConfig make_grid(int, Rational);
  friend GridConfig make_grid_unchecked(int, Rational);
  GridConfig(int n, Rational c, bool checked);

  int n_;
  Rational c_;
  double h_;
  std::int64_t num_time_;
};

/// Builds the grid, enforcing n >= 1 and 0 < c < 1/2 (throws ConfigError).
GridConfig make_grid(int n, Rational c);

/// Bypasses the CFL check. Only for stability experiments that deliberately
/// construct unstable grids.
GridConfig make_grid_unchecked(int n, Rational c);

/// Leftmost grid time <= t, i.e. h*floor(t/h). Throws std::domain_error
/// outside [0,1].
double project_time(const GridConfig& grid, double t);

/// Index form of project_time.
std::int64_t time_index_of(const GridConfig& grid, double t);

/// Leftmost spatial gridpoint of y interpreted modulo 1. Total on all of R.
double project_space(const GridConfig& grid, double y);

/// Index form of project_space.
int space_index_of(const GridConfig& grid, double y);

/// j >= 0 such that fine.n = 2^j * coarse.n, or nullopt when fine does not
/// refine coarse by a power of two. Throws ConfigError when the CFL ratios
/// differ (the grids would not be time-nested).
std::optional<int> nesting_factor(const GridConfig& coarse, const GridConfig& fine);

}  // namespace tamedheat
