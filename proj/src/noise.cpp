#include "tamedheat/noise.hpp"

#include <bit>
#include <cmath>
#include <cstring>
#include <fstream>
#include <vector>

#include "tamedheat/errors.hpp"
#include "tamedheat/rng.hpp"

static_assert(std::endian::native == std::endian::little,
              "noise dump format is little-endian");

namespace tamedheat {

NoiseRowGenerator::NoiseRowGenerator(const GridConfig& grid, std::uint64_t seed)
    : grid_(grid), seed_(seed), sigma_(std::sqrt(grid.h() / grid.num_space())) {}

void NoiseRowGenerator::fill_row(std::int64_t i, Eigen::ArrayXd& out) const {
  const int m = grid_.num_space();
  out.resize(m);
  for (int j = 0; j < m; ++j) {
    out[j] = sigma_ * standard_normal(seed_, static_cast<std::uint64_t>(i),
                                      static_cast<std::uint64_t>(j));
  }
}

double NoiseRowGenerator::increment(std::int64_t i, int j) const {
  return sigma_ * standard_normal(seed_, static_cast<std::uint64_t>(i),
                                  static_cast<std::uint64_t>(j));
}

NoiseField sample_noise(const GridConfig& grid, std::uint64_t seed) {
  NoiseRowGenerator gen(grid, seed);
  NoiseField field{grid, IncrementMatrix(grid.num_time(), grid.num_space()), seed};
  Eigen::ArrayXd row;
  for (std::int64_t i = 0; i < grid.num_time(); ++i) {
    gen.fill_row(i, row);
    field.increments.row(i) = row.transpose();
  }
  return field;
}

double pairwise_sum(const double* values, std::size_t count) {
  switch (count) {
    case 1:
      return values[0];
    case 2:
      return values[0] + values[1];
    case 3:
      return values[0] + (values[1] + values[2]);
    case 4:
      return (values[0] + values[1]) + (values[2] + values[3]);
    default: {
      const std::size_t half = count / 2;
      return pairwise_sum(values, half) + pairwise_sum(values + half, count - half);
    }
  }
}

double coarse_cell_from_row_partials(const double* row_partials, std::size_t rows) {
  return pairwise_sum(row_partials, rows);
}

NoiseField coarsen_noise(const NoiseField& fine, const GridConfig& coarse_grid) {
  const auto j = nesting_factor(coarse_grid, fine.grid);
  if (!j || *j < 1) {
    throw ConfigError("coarsen_noise requires a strictly finer nested field");
  }
  const int space_ratio = 1 << *j;             // 2^j
  const std::int64_t time_ratio = 1 << (2 * *j);  // 4^j

  NoiseField coarse{coarse_grid,
                    IncrementMatrix(coarse_grid.num_time(), coarse_grid.num_space()),
                    fine.seed};
  std::vector<double> block(static_cast<std::size_t>(space_ratio));
  std::vector<double> partials(static_cast<std::size_t>(time_ratio));
  for (std::int64_t ci = 0; ci < coarse_grid.num_time(); ++ci) {
    for (int cj = 0; cj < coarse_grid.num_space(); ++cj) {
      for (std::int64_t r = 0; r < time_ratio; ++r) {
        const std::int64_t fi = ci * time_ratio + r;
        for (int s = 0; s < space_ratio; ++s) {
          block[static_cast<std::size_t>(s)] = fine.increments(fi, cj * space_ratio + s);
        }
        partials[static_cast<std::size_t>(r)] =
            pairwise_sum(block.data(), block.size());
      }
      coarse.increments(ci, cj) =
          coarse_cell_from_row_partials(partials.data(), partials.size());
    }
  }
  return coarse;
}

double discrete_noise(const NoiseField& field, std::int64_t i, int j) {
  if (i < 0 || i >= field.increments.rows() || j < 0 || j >= field.increments.cols()) {
    throw std::out_of_range("noise cell index out of range");
  }
  return field.grid.num_space() / field.grid.h() * field.increments(i, j);
}

void write_noise(const NoiseField& field, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ConfigError("cannot open '" + path + "' for writing");
  const std::int64_t header[3] = {field.grid.n(), field.grid.c().num, field.grid.c().den};
  out.write(reinterpret_cast<const char*>(header), sizeof(header));
  out.write(reinterpret_cast<const char*>(&field.seed), sizeof(field.seed));
  out.write(reinterpret_cast<const char*>(field.increments.data()),
            static_cast<std::streamsize>(sizeof(double) * field.increments.size()));
  if (!out) throw ConfigError("short write to '" + path + "'");
}

NoiseField read_noise(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError("cannot open '" + path + "'");
  std::int64_t header[3];
  std::uint64_t seed;
  in.read(reinterpret_cast<char*>(header), sizeof(header));
  in.read(reinterpret_cast<char*>(&seed), sizeof(seed));
  if (!in) throw ConfigError("truncated noise dump '" + path + "'");
  const GridConfig grid = make_grid(static_cast<int>(header[0]), Rational{header[1], header[2]});
  NoiseField field{grid, IncrementMatrix(grid.num_time(), grid.num_space()), seed};
  in.read(reinterpret_cast<char*>(field.increments.data()),
          static_cast<std::streamsize>(sizeof(double) * field.increments.size()));
  if (!in) throw ConfigError("truncated noise dump '" + path + "'");
  return field;
}

}  // namespace tamedheat
