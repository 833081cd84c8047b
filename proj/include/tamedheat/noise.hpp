#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>

#include <Eigen/Core>

#include "tamedheat/grid.hpp"

namespace tamedheat {

using IncrementMatrix =
    Eigen::Array<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

/// One realization of space-time white noise on T x [0,1], stored as the
/// Gaussian cell increments xi([x_j, x_j + (2n)^-1] x [t_i, t_i + h]).
/// Each increment ~ N(0, h/(2n)); disjoint cells are independent.
struct NoiseField {
  GridConfig grid;
  IncrementMatrix increments;  // (num_time rows) x (2n cols)
  std::uint64_t seed = 0;
};

/// Streaming access to the increments of one noise realization. Rows are a
/// pure function of (seed, i, j), so any sub-rectangle can be produced
/// independently and in any order.
class NoiseRowGenerator {
public:
  NoiseRowGenerator(const GridConfig& grid, std::uint64_t seed);

  /// Writes row i (all 2n cell increments at time index i) into out.
  void fill_row(std::int64_t i, Eigen::ArrayXd& out) const;

  double increment(std::int64_t i, int j) const;

  const GridConfig& grid() const { return grid_; }
  std::uint64_t seed() const { return seed_; }
  double sigma() const { return sigma_; }

private:
  GridConfig grid_;
  std::uint64_t seed_;
  double sigma_;  // sqrt(h / (2n)) — cell Lebesgue measure
};

/// Materializes a full realization. Memory is num_time x 2n doubles; for the
/// finest campaign grids use NoiseRowGenerator and stream by time-slab.
NoiseField sample_noise(const GridConfig& grid, std::uint64_t seed);

/// Sums the 2^j (space) x 4^j (time) fine increments tiling each coarse cell.
/// By additivity of the set function the result is the same white-noise
/// realization restricted to the coarse cells. Requires nesting_factor >= 1.
NoiseField coarsen_noise(const NoiseField& fine, const GridConfig& coarse_grid);

/// The scheme's discrete noise xi_n(x_j, t_i) = (2n) h^-1 * increment(i, j).
double discrete_noise(const NoiseField& field, std::int64_t i, int j);

/// Deterministic summation used by all coarsening paths: balanced pairwise
/// reduction, identical grouping regardless of caller.
double pairwise_sum(const double* values, std::size_t count);

/// Per-cell coarse increment assembled in the canonical order: for each fine
/// time row in the slab a pairwise sum over the 2^j-wide space block, then a
/// pairwise sum over the 4^j row partials. row_partials has 4^j entries.
double coarse_cell_from_row_partials(const double* row_partials, std::size_t rows);

// Binary regression dump: header int64 n, int64 c_num, int64 c_den,
// uint64 seed, then row-major 64-bit little-endian increments.
void write_noise(const NoiseField& field, const std::string& path);
NoiseField read_noise(const std::string& path);

}  // namespace tamedheat
