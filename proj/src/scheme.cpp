#include "tamedheat/scheme.hpp"

#include <algorithm>
#include <fstream>
#include <cmath>
#include <numbers>

#include "tamedheat/coupling.hpp"
#include "tamedheat/errors.hpp"
#include "tamedheat/parallel.hpp"
#include "tamedheat/rng.hpp"

namespace tamedheat {

namespace {
constexpr double kTwoPi = 2.0 * std::numbers::pi;
}

const Eigen::ArrayXd& Trajectory::at(std::int64_t time_index) const {
  for (const auto& [idx, values] : snapshots) {
    if (idx == time_index) return values;
  }
  throw std::out_of_range("no snapshot at time index " + std::to_string(time_index));
}

Psi0 parse_psi0(const std::string& name) {
  if (name == "zero") return Psi0::Zero;
  if (name == "sin") return Psi0::Sin;
  if (name == "weierstrass") return Psi0::Weierstrass;
  throw ConfigError("unknown psi0 preset '" + name + "'");
}

std::string psi0_name(Psi0 preset) {
  switch (preset) {
    case Psi0::Zero: return "zero";
    case Psi0::Sin: return "sin";
    case Psi0::Weierstrass: return "weierstrass";
  }
  return "?";
}

double psi0_eval(Psi0 preset, double x) {
  switch (preset) {
    case Psi0::Zero:
      return 0.0;
    case Psi0::Sin:
      return std::sin(kTwoPi * x);
    case Psi0::Weierstrass: {
      // three dyadic terms with amplitude 4^(-q/2): Holder-1/2 texture
      double sum = 0.0;
      double amp = 1.0;
      double freq = 1.0;
      for (int q = 0; q < 3; ++q) {
        sum += amp * std::sin(kTwoPi * freq * x);
        amp *= 0.5;
        freq *= 4.0;
      }
      return sum;
    }
  }
  return 0.0;
}

Eigen::ArrayXd psi0_samples(Psi0 preset, const GridConfig& grid) {
  Eigen::ArrayXd out(grid.num_space());
  for (int j = 0; j < grid.num_space(); ++j) out[j] = psi0_eval(preset, grid.space_point(j));
  return out;
}

TabulatedDrift::TabulatedDrift(MollifiedDrift bk, double lo, double hi, int points)
    : bk_(std::move(bk)), lo_(lo), hi_(hi) {
  if (!(hi > lo) || points < 4) throw ConfigError("tabulated drift needs hi > lo, points >= 4");
  dx_ = (hi - lo) / (points - 1);
  values_.resize(points);
  for (int i = 0; i < points; ++i) values_[i] = bk_(lo + i * dx_);
  // nodal slopes, premultiplied by dx (central differences, one-sided ends)
  slopes_.resize(points);
  slopes_[0] = values_[1] - values_[0];
  slopes_[points - 1] = values_[points - 1] - values_[points - 2];
  for (int i = 1; i < points - 1; ++i) slopes_[i] = 0.5 * (values_[i + 1] - values_[i - 1]);
}

double TabulatedDrift::operator()(double x) const {
  if (x < lo_ || x > hi_) return bk_(x);
  double u = (x - lo_) / dx_;
  Eigen::Index i = static_cast<Eigen::Index>(u);
  if (i >= values_.size() - 1) i = values_.size() - 2;
  const double t = u - static_cast<double>(i);
  const double a = values_[i], b = values_[i + 1];
  const double da = slopes_[i], db = slopes_[i + 1];
  return a + t * (da + t * (3.0 * (b - a) - 2.0 * da - db + t * (2.0 * (a - b) + da + db)));
}

double TabulatedDrift::probe_max_error(int probes) const {
  double worst = 0.0;
  const double span = hi_ - lo_;
  for (int i = 0; i < probes; ++i) {
    const double x = lo_ + span * (i + 0.5) / probes;
    worst = std::max(worst, std::abs((*this)(x) - bk_(x)));
  }
  return worst;
}

FieldState step(const FieldState& state, const MollifiedDrift& bk,
                const NoiseField& field) {
  if (!(state.grid == field.grid)) {
    throw ConfigError("step: state and noise live on different grids");
  }
  if (state.time_index >= state.grid.num_time()) {
    throw ConfigError("step: horizon exhausted at index " +
                      std::to_string(state.time_index));
  }
  FieldState out{state.grid, state.time_index + 1,
                 Eigen::ArrayXd(state.grid.num_space())};
  const Eigen::ArrayXd row = field.increments.row(state.time_index).transpose();
  const double check =
      advance_field(state.values, out.values, state.grid.c().value(), state.grid.h(),
                    &bk, row.data(), state.grid.num_space());
  if (!(check < 1e14)) {
    throw DivergenceError("scheme diverged at n=" + std::to_string(state.grid.n()) +
                              ", step " + std::to_string(out.time_index),
                          state.grid.n(), out.time_index);
  }
  return out;
}

namespace {

template <class F>
Trajectory run_plain(const GridConfig& grid, const F* drift,
                     const std::function<double(double)>& psi0,
                     const NoiseRowGenerator* gen, const NoiseField* field,
                     const std::vector<std::int64_t>& record, std::int64_t k,
                     std::string drift_id, std::uint64_t seed) {
  std::vector<std::int64_t> wanted = record;
  std::sort(wanted.begin(), wanted.end());
  wanted.erase(std::unique(wanted.begin(), wanted.end()), wanted.end());
  if (!wanted.empty() && (wanted.front() < 0 || wanted.back() > grid.num_time())) {
    throw ConfigError("record indices outside the time horizon");
  }

  Trajectory traj{grid, {}, k, std::move(drift_id), seed};
  Eigen::ArrayXd u = Eigen::ArrayXd::Zero(grid.num_space());
  if (psi0) {
    for (int j = 0; j < grid.num_space(); ++j) u[j] = psi0(grid.space_point(j));
  }
  std::size_t cursor = 0;
  if (cursor < wanted.size() && wanted[cursor] == 0) {
    traj.snapshots.emplace_back(0, u);
    ++cursor;
  }
  const std::int64_t horizon = wanted.empty() ? grid.num_time() : wanted.back();
  Eigen::ArrayXd next(grid.num_space());
  Eigen::ArrayXd row(grid.num_space());
  for (std::int64_t i = 0; i < horizon; ++i) {
    if (gen) {
      gen->fill_row(i, row);
    } else {
      row = field->increments.row(i).transpose();
    }
    const double check = advance_field(u, next, grid.c().value(), grid.h(), drift,
                                       row.data(), grid.num_space());
    if (!(check < 1e14)) {
      throw DivergenceError("scheme diverged at n=" + std::to_string(grid.n()) +
                                ", step " + std::to_string(i + 1),
                            grid.n(), i + 1);
    }
    std::swap(u, next);
    if (cursor < wanted.size() && wanted[cursor] == i + 1) {
      traj.snapshots.emplace_back(i + 1, u);
      ++cursor;
    }
  }
  return traj;
}

NoiseField coarsen_if_needed(const GridConfig& grid, const NoiseField& field) {
  if (field.grid == grid) return field;
  return coarsen_noise(field, grid);
}

}  // namespace

Trajectory simulate(const GridConfig& grid, const Drift& b, std::int64_t k,
                    const NoiseField& field, const std::function<double(double)>& psi0,
                    const std::vector<std::int64_t>& record) {
  const NoiseField own = coarsen_if_needed(grid, field);
  const MollifiedDrift bk = mollify(b, k);
  if (b.is_measure()) {
    return run_plain(grid, &bk, psi0, nullptr, &own, record, k, b.id(), field.seed);
  }
  const TabulatedDrift table(bk, -8.0, 8.0);
  return run_plain(grid, &table, psi0, nullptr, &own, record, k, b.id(), field.seed);
}

Trajectory simulate(const GridConfig& grid, const Drift& b, std::int64_t k,
                    std::uint64_t seed, const std::function<double(double)>& psi0,
                    const std::vector<std::int64_t>& record) {
  const NoiseRowGenerator gen(grid, seed);
  const MollifiedDrift bk = mollify(b, k);
  if (b.is_measure()) {
    return run_plain(grid, &bk, psi0, &gen, nullptr, record, k, b.id(), seed);
  }
  const TabulatedDrift table(bk, -8.0, 8.0);
  return run_plain(grid, &table, psi0, &gen, nullptr, record, k, b.id(), seed);
}

Trajectory simulate_ou_discrete(const GridConfig& grid, const NoiseField& field,
                                const std::vector<std::int64_t>& record) {
  const NoiseField own = coarsen_if_needed(grid, field);
  return run_plain<ZeroDrift>(grid, nullptr, nullptr, nullptr, &own, record, 0, "zero",
                              field.seed);
}

Trajectory simulate_ou_discrete(const GridConfig& grid, std::uint64_t seed,
                                const std::vector<std::int64_t>& record) {
  const NoiseRowGenerator gen(grid, seed);
  return run_plain<ZeroDrift>(grid, nullptr, nullptr, &gen, nullptr, record, 0, "zero",
                              seed);
}

double sup_moment_error(const std::vector<Eigen::ArrayXXd>& replica_diffs, double m) {
  if (replica_diffs.empty()) throw ConfigError("no replicas to reduce");
  const Eigen::Index rows = replica_diffs.front().rows();
  const Eigen::Index cols = replica_diffs.front().cols();
  const std::size_t R = replica_diffs.size();
  std::vector<double> powers(R);
  double sup = 0.0;
  for (Eigen::Index r = 0; r < rows; ++r) {
    for (Eigen::Index c = 0; c < cols; ++c) {
      for (std::size_t i = 0; i < R; ++i) {
        powers[i] = std::pow(replica_diffs[i](r, c), m);
      }
      const double mean = pairwise_sum(powers.data(), R) / static_cast<double>(R);
      sup = std::max(sup, std::pow(mean, 1.0 / m));
    }
  }
  return sup;
}

std::vector<double> ou_discretization_gaps(const GridConfig& fine,
                                           const std::vector<GridConfig>& coarse_levels,
                                           std::uint64_t master_seed,
                                           const std::vector<double>& record_times,
                                           int replicas, int threads) {
  CoupledSpec<ZeroDrift> spec;
  spec.ref = fine;
  spec.ref_drift = nullptr;
  spec.levels = coarse_levels;
  spec.level_drifts.assign(coarse_levels.size(), nullptr);
  for (const GridConfig& g : coarse_levels) {
    std::vector<double> points;
    for (int j = 0; j < g.num_space(); ++j) points.push_back(g.space_point(j));
    spec.level_points.push_back(std::move(points));
  }
  spec.times = record_times;
  const CoupledRunner<ZeroDrift> runner(std::move(spec));

  std::vector<std::vector<Eigen::ArrayXXd>> all(static_cast<std::size_t>(replicas));
  parallel_for(replicas, threads, [&](std::int64_t r) {
    all[static_cast<std::size_t>(r)] =
        runner.run(replica_seed(master_seed, static_cast<std::uint64_t>(r)));
  });

  std::vector<double> gaps;
  for (std::size_t l = 0; l < coarse_levels.size(); ++l) {
    std::vector<Eigen::ArrayXXd> per_level;
    per_level.reserve(all.size());
    for (const auto& rep : all) per_level.push_back(rep[l]);
    gaps.push_back(sup_moment_error(per_level, 2.0));
  }
  return gaps;
}

double ou_discretization_gap(const GridConfig& fine, const GridConfig& coarse,
                             std::uint64_t master_seed,
                             const std::vector<double>& record_times, int replicas,
                             int threads) {
  return ou_discretization_gaps(fine, {coarse}, master_seed, record_times, replicas,
                                threads)[0];
}

void write_trajectory(const Trajectory& traj, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ConfigError("cannot open '" + path + "' for writing");
  const std::int64_t header[3] = {traj.grid.n(), traj.grid.c().num, traj.grid.c().den};
  out.write(reinterpret_cast<const char*>(header), sizeof(header));
  out.write(reinterpret_cast<const char*>(&traj.seed), sizeof(traj.seed));
  const std::int64_t k = traj.k;
  const std::int64_t count = static_cast<std::int64_t>(traj.snapshots.size());
  out.write(reinterpret_cast<const char*>(&k), sizeof(k));
  out.write(reinterpret_cast<const char*>(&count), sizeof(count));
  for (const auto& [idx, values] : traj.snapshots) {
    out.write(reinterpret_cast<const char*>(&idx), sizeof(idx));
    out.write(reinterpret_cast<const char*>(values.data()),
              static_cast<std::streamsize>(sizeof(double) * values.size()));
  }
  if (!out) throw ConfigError("short write to '" + path + "'");
}

Trajectory read_trajectory(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError("cannot open '" + path + "'");
  std::int64_t header[3];
  std::uint64_t seed;
  std::int64_t k, count;
  in.read(reinterpret_cast<char*>(header), sizeof(header));
  in.read(reinterpret_cast<char*>(&seed), sizeof(seed));
  in.read(reinterpret_cast<char*>(&k), sizeof(k));
  in.read(reinterpret_cast<char*>(&count), sizeof(count));
  if (!in || count < 0) throw ConfigError("truncated trajectory dump '" + path + "'");
  const GridConfig grid =
      make_grid(static_cast<int>(header[0]), Rational{header[1], header[2]});
  Trajectory traj{grid, {}, k, "", seed};
  for (std::int64_t s = 0; s < count; ++s) {
    std::int64_t idx;
    Eigen::ArrayXd values(grid.num_space());
    in.read(reinterpret_cast<char*>(&idx), sizeof(idx));
    in.read(reinterpret_cast<char*>(values.data()),
            static_cast<std::streamsize>(sizeof(double) * values.size()));
    if (!in) throw ConfigError("truncated trajectory dump '" + path + "'");
    traj.snapshots.emplace_back(idx, std::move(values));
  }
  return traj;
}

}  // namespace tamedheat
