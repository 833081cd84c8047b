#pragma once

// Shared-noise coupling engine: one white-noise realization drives a fine
// reference scheme and any number of coarser nested schemes, streaming by
// time row so no field is ever materialized. Coarse increments are assembled
// from the fine ones in a fixed canonical order (per-row space-block pairwise
// sums, then a pairwise sum over the slab rows), identical to coarsen_noise.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <functional>
#include <vector>

#include <Eigen/Core>

#include "tamedheat/errors.hpp"
#include "tamedheat/grid.hpp"
#include "tamedheat/noise.hpp"

namespace tamedheat {

struct ZeroDrift {
  double operator()(double) const { return 0.0; }
};

/// One explicit step on raw arrays; returns sum |out| so the caller can
/// detect the first divergent step (NaN/Inf propagate into the checksum).
template <class F>
double advance_field(const Eigen::ArrayXd& u, Eigen::ArrayXd& out, double cfl, double h,
                     const F* drift, const double* increments, double noise_scale) {
  const Eigen::Index m = u.size();
  const double* uv = u.data();
  double* ov = out.data();
  double checksum = 0.0;
  if (m == 1) {
    double val = uv[0] + noise_scale * increments[0];
    if (drift) val += h * (*drift)(uv[0]);
    ov[0] = val;
    return std::abs(val);
  }
  if (drift) {
    for (Eigen::Index j = 0; j < m; ++j) {
      const double left = uv[j == 0 ? m - 1 : j - 1];
      const double right = uv[j == m - 1 ? 0 : j + 1];
      double val = uv[j] + cfl * (left + right - 2.0 * uv[j]) + noise_scale * increments[j];
      val += h * (*drift)(uv[j]);
      ov[j] = val;
      checksum += std::abs(val);
    }
  } else {
    ov[0] = uv[0] + cfl * (uv[m - 1] + uv[1] - 2.0 * uv[0]) + noise_scale * increments[0];
    checksum += std::abs(ov[0]);
    for (Eigen::Index j = 1; j < m - 1; ++j) {
      const double val =
          uv[j] + cfl * (uv[j - 1] + uv[j + 1] - 2.0 * uv[j]) + noise_scale * increments[j];
      ov[j] = val;
      checksum += std::abs(val);
    }
    ov[m - 1] =
        uv[m - 1] + cfl * (uv[m - 2] + uv[0] - 2.0 * uv[m - 1]) + noise_scale * increments[m - 1];
    checksum += std::abs(ov[m - 1]);
  }
  return checksum;
}

template <class F>
struct CoupledSpec {
  GridConfig ref;
  const F* ref_drift = nullptr;  // nullptr = zero drift
  std::vector<GridConfig> levels;
  std::vector<const F*> level_drifts;          // one per level, nullptr = zero
  std::function<double(double)> psi0;          // nullptr = zero initial data
  std::vector<double> times;                   // common grid times, ascending, > 0
  std::vector<std::vector<double>> level_points;  // per level: shared gridpoints
};

/// All comparison times as coarsest-level grid times: time_count equispaced
/// indices plus the final grid time.
inline std::vector<double> standard_comparison_times(const GridConfig& coarsest,
                                                     int time_count) {
  std::vector<double> times;
  const std::int64_t total = coarsest.num_time();
  for (int q = 1; q <= time_count; ++q) {
    times.push_back(coarsest.time_point(total * q / time_count));
  }
  if (times.empty() || times.back() != coarsest.time_point(total)) {
    times.push_back(coarsest.time_point(total));
  }
  std::sort(times.begin(), times.end());
  times.erase(std::unique(times.begin(), times.end()), times.end());
  return times;
}

template <class F>
class CoupledRunner {
public:
  explicit CoupledRunner(CoupledSpec<F> spec) : spec_(std::move(spec)) {
    const int n_levels = static_cast<int>(spec_.levels.size());
    if (static_cast<int>(spec_.level_drifts.size()) != n_levels ||
        static_cast<int>(spec_.level_points.size()) != n_levels) {
      throw ConfigError("coupled run: per-level arrays must match the level list");
    }
    for (const GridConfig& g : spec_.levels) {
      const auto j = nesting_factor(g, spec_.ref);
      if (!j) throw ConfigError("coupled run: level grids must nest the reference grid");
      space_ratio_.push_back(1 << *j);
      time_ratio_.push_back(static_cast<std::int64_t>(1) << (2 * *j));
    }
    // block sums cascade from the finest level downward; combining adjacent
    // power-of-two subtree sums reproduces the canonical pairwise tree
    for (int l = 0; l < n_levels; ++l) casc_order_.push_back(l);
    std::sort(casc_order_.begin(), casc_order_.end(),
              [&](int a, int b) { return spec_.levels[a].n() > spec_.levels[b].n(); });
    // map comparison times to exact indices on every grid
    for (const double t : spec_.times) {
      ref_time_idx_.push_back(exact_time_index(spec_.ref, t));
    }
    for (std::size_t c = 1; c < ref_time_idx_.size(); ++c) {
      if (ref_time_idx_[c] <= ref_time_idx_[c - 1]) {
        throw ConfigError("comparison times must be strictly increasing");
      }
    }
    for (int l = 0; l < n_levels; ++l) {
      for (const double t : spec_.times) {
        const std::int64_t i = exact_time_index(spec_.levels[l], t);
        if (i * time_ratio_[l] != exact_time_index(spec_.ref, t)) {
          throw ConfigError("comparison time is not a shared grid time");
        }
      }
      std::vector<int> ref_cols, lvl_cols;
      for (const double x : spec_.level_points[l]) {
        ref_cols.push_back(exact_space_index(spec_.ref, x));
        lvl_cols.push_back(exact_space_index(spec_.levels[l], x));
      }
      ref_cols_.push_back(std::move(ref_cols));
      lvl_cols_.push_back(std::move(lvl_cols));
    }
  }

  /// Runs one replica; element (c, p) of result[l] is
  /// |u_ref - u_level| at comparison time c, point p.
  std::vector<Eigen::ArrayXXd> run(std::uint64_t seed) const {
    const int n_levels = static_cast<int>(spec_.levels.size());
    const GridConfig& ref = spec_.ref;
    const double cfl = ref.c().value();

    Eigen::ArrayXd u_ref = initial(ref);
    Eigen::ArrayXd next_ref(ref.num_space());
    std::vector<Eigen::ArrayXd> u_lvl, next_lvl, inc_lvl;
    std::vector<IncrementMatrix> partials;
    for (int l = 0; l < n_levels; ++l) {
      u_lvl.push_back(initial(spec_.levels[l]));
      next_lvl.emplace_back(spec_.levels[l].num_space());
      inc_lvl.emplace_back(spec_.levels[l].num_space());
      partials.emplace_back(time_ratio_[l], spec_.levels[l].num_space());
    }

    std::vector<Eigen::ArrayXXd> diffs;
    for (int l = 0; l < n_levels; ++l) {
      diffs.emplace_back(Eigen::ArrayXXd::Zero(
          static_cast<Eigen::Index>(spec_.times.size()),
          static_cast<Eigen::Index>(spec_.level_points[l].size())));
    }

    NoiseRowGenerator gen(ref, seed);
    Eigen::ArrayXd row(ref.num_space());
    std::vector<double> column;
    std::size_t cursor = 0;
    const std::int64_t horizon =
        ref_time_idx_.empty() ? ref.num_time() : ref_time_idx_.back();

    for (std::int64_t i = 0; i < horizon; ++i) {
      gen.fill_row(i, row);
      const double check = advance_field(u_ref, next_ref, cfl, ref.h(), spec_.ref_drift,
                                         row.data(), ref.num_space());
      if (!(check < 1e14)) {
        throw DivergenceError("scheme diverged at reference level n=" +
                                  std::to_string(ref.n()) + ", step " +
                                  std::to_string(i + 1),
                              ref.n(), i + 1);
      }
      std::swap(u_ref, next_ref);

      const double* src = row.data();
      Eigen::Index src_count = ref.num_space();
      for (const int l : casc_order_) {
        const std::int64_t r = i % time_ratio_[l];
        const int cells = spec_.levels[l].num_space();
        const int ratio = static_cast<int>(src_count / cells);
        double* dst = &partials[l](r, 0);
        if (ratio == 1) {
          std::copy(src, src + cells, dst);
        } else {
          for (int cell = 0; cell < cells; ++cell) {
            dst[cell] = pairwise_sum(src + static_cast<std::ptrdiff_t>(cell) * ratio,
                                     static_cast<std::size_t>(ratio));
          }
        }
        src = dst;
        src_count = cells;
      }

      for (int l = 0; l < n_levels; ++l) {
        const std::int64_t tr = time_ratio_[l];
        const std::int64_t r = i % tr;
        const int cells = spec_.levels[l].num_space();
        if (r == tr - 1) {
          column.resize(static_cast<std::size_t>(tr));
          for (int cell = 0; cell < cells; ++cell) {
            for (std::int64_t rr = 0; rr < tr; ++rr) {
              column[static_cast<std::size_t>(rr)] = partials[l](rr, cell);
            }
            inc_lvl[l][cell] = coarse_cell_from_row_partials(column.data(), column.size());
          }
          const GridConfig& g = spec_.levels[l];
          const double lcheck =
              advance_field(u_lvl[l], next_lvl[l], cfl, g.h(), spec_.level_drifts[l],
                            inc_lvl[l].data(), g.num_space());
          if (!(lcheck < 1e14)) {
            throw DivergenceError("scheme diverged at level n=" + std::to_string(g.n()) +
                                      ", step " + std::to_string((i + 1) / tr),
                                  g.n(), (i + 1) / tr);
          }
          std::swap(u_lvl[l], next_lvl[l]);
        }
      }

      if (cursor < ref_time_idx_.size() && i + 1 == ref_time_idx_[cursor]) {
        for (int l = 0; l < n_levels; ++l) {
          for (std::size_t p = 0; p < ref_cols_[l].size(); ++p) {
            diffs[l](static_cast<Eigen::Index>(cursor), static_cast<Eigen::Index>(p)) =
                std::abs(u_ref[ref_cols_[l][p]] - u_lvl[l][lvl_cols_[l][p]]);
          }
        }
        ++cursor;
      }
    }
    return diffs;
  }

private:
  static std::int64_t exact_time_index(const GridConfig& grid, double t) {
    const std::int64_t i = time_index_of(grid, t);
    if (std::abs(static_cast<double>(i) * grid.h() - t) > 1e-12 * std::max(1.0, t)) {
      throw ConfigError("comparison time " + std::to_string(t) +
                        " is not a grid time of n=" + std::to_string(grid.n()));
    }
    return i;
  }

  static int exact_space_index(const GridConfig& grid, double x) {
    const int j = space_index_of(grid, x);
    if (std::abs(grid.space_point(j) - x) > 1e-12) {
      throw ConfigError("comparison point " + std::to_string(x) +
                        " is not a gridpoint of n=" + std::to_string(grid.n()));
    }
    return j;
  }

  Eigen::ArrayXd initial(const GridConfig& grid) const {
    Eigen::ArrayXd out = Eigen::ArrayXd::Zero(grid.num_space());
    if (spec_.psi0) {
      for (int j = 0; j < grid.num_space(); ++j) out[j] = spec_.psi0(grid.space_point(j));
    }
    return out;
  }

  CoupledSpec<F> spec_;
  std::vector<int> space_ratio_;
  std::vector<std::int64_t> time_ratio_;
  std::vector<int> casc_order_;
  std::vector<std::int64_t> ref_time_idx_;
  std::vector<std::vector<int>> ref_cols_;
  std::vector<std::vector<int>> lvl_cols_;
};

/// Deterministic reduction of per-replica comparison matrices into the
/// sup-L^m error: per entry, pairwise mean of |d|^m over replicas, then the
/// 1/m power, then the sup over entries.
double sup_moment_error(const std::vector<Eigen::ArrayXXd>& replica_diffs, double m);

}  // namespace tamedheat
