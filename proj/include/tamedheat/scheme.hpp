#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Core>

#include "tamedheat/drift.hpp"
#include "tamedheat/grid.hpp"
#include "tamedheat/noise.hpp"

namespace tamedheat {

/// u at the spatial gridpoints at one grid time.
struct FieldState {
  GridConfig grid;
  std::int64_t time_index = 0;
  Eigen::ArrayXd values;  // length 2n
};

struct Trajectory {
  GridConfig grid;
  std::vector<std::pair<std::int64_t, Eigen::ArrayXd>> snapshots;  // sorted
  std::int64_t k = 0;
  std::string drift_id;
  std::uint64_t seed = 0;

  const Eigen::ArrayXd& at(std::int64_t time_index) const;
};

enum class Psi0 { Zero, Sin, Weierstrass };

Psi0 parse_psi0(const std::string& name);
std::string psi0_name(Psi0 preset);
double psi0_eval(Psi0 preset, double x);
Eigen::ArrayXd psi0_samples(Psi0 preset, const GridConfig& grid);

/// Mollified drift evaluated through a cubic-Hermite table over [lo, hi]
/// (exact quadrature fallback outside). Bounds the per-step cost of
/// quadrature-backed drifts; build once, read from any thread.
class TabulatedDrift {
public:
  TabulatedDrift(MollifiedDrift bk, double lo, double hi, int points = 1 << 14);

  double operator()(double x) const;

  const MollifiedDrift& mollified() const { return bk_; }
  double lo() const { return lo_; }
  double hi() const { return hi_; }
  /// Max |table - exact| over `probes` segment midpoints.
  double probe_max_error(int probes = 512) const;

private:
  MollifiedDrift bk_;
  double lo_, hi_, dx_;
  Eigen::ArrayXd values_;
  Eigen::ArrayXd slopes_;  // per-node derivative estimates, premultiplied by dx
};

/// One tamed explicit Euler step:
/// u <- u + h Delta_n u + h b^k(u) + h xi_n(., t), periodic wrap.
FieldState step(const FieldState& state, const MollifiedDrift& bk,
                const NoiseField& field);

/// Runs the scheme over the whole horizon, storing the requested snapshots.
/// The field may live on a strictly finer nested grid, in which case it is
/// coarsened first. Aborts with DivergenceError on the first exploding step.
Trajectory simulate(const GridConfig& grid, const Drift& b, std::int64_t k,
                    const NoiseField& field, const std::function<double(double)>& psi0,
                    const std::vector<std::int64_t>& record);

/// Streaming variant: the noise is generated on the fly from the seed.
Trajectory simulate(const GridConfig& grid, const Drift& b, std::int64_t k,
                    std::uint64_t seed, const std::function<double(double)>& psi0,
                    const std::vector<std::int64_t>& record);

/// Drift-free, zero-initial-data special case (the discrete OU process).
Trajectory simulate_ou_discrete(const GridConfig& grid, const NoiseField& field,
                                const std::vector<std::int64_t>& record);
Trajectory simulate_ou_discrete(const GridConfig& grid, std::uint64_t seed,
                                const std::vector<std::int64_t>& record);

/// Sup over shared gridpoints of the empirical L^2 distance between the
/// fine-level and coarse-level discrete OU processes driven by the same
/// coarsened noise realizations. record_times must be grid times of the
/// coarse level.
double ou_discretization_gap(const GridConfig& fine, const GridConfig& coarse,
                             std::uint64_t master_seed,
                             const std::vector<double>& record_times, int replicas,
                             int threads = 1);

/// Multi-level variant sharing one fine-noise sweep per replica.
std::vector<double> ou_discretization_gaps(const GridConfig& fine,
                                           const std::vector<GridConfig>& coarse_levels,
                                           std::uint64_t master_seed,
                                           const std::vector<double>& record_times,
                                           int replicas, int threads = 1);

// Binary snapshot dump mirroring the noise dump format: header int64 n,
// int64 c_num, int64 c_den, uint64 seed, int64 k, int64 snapshot count,
// then per snapshot an int64 time index followed by 2n little-endian
// doubles.
void write_trajectory(const Trajectory& traj, const std::string& path);
Trajectory read_trajectory(const std::string& path);

}  // namespace tamedheat
