#pragma once

#include <stdexcept>
#include <string>

namespace tamedheat {

/// Invalid configuration: bad grid parameters, regime/regularity mismatch,
/// non-nested grids, malformed campaign files.
class ConfigError : public std::runtime_error {
public:
  explicit ConfigError(const std::string& what) : std::runtime_error(what) {}
};

/// Adaptive quadrature failed to reach the requested tolerance.
class QuadratureError : public std::runtime_error {
public:
  QuadratureError(const std::string& what, double worst_residual)
      : std::runtime_error(what + " (worst residual " +
                           std::to_string(worst_residual) + ")"),
        residual(worst_residual) {}
  double residual;
};

/// The explicit scheme produced a non-finite or exploding value.
class DivergenceError : public std::runtime_error {
public:
  DivergenceError(const std::string& what, int grid_n, long step)
      : std::runtime_error(what), n(grid_n), step_index(step) {}
  int n;
  long step_index;
};

}  // namespace tamedheat
