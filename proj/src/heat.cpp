#include "tamedheat/heat.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

#include "tamedheat/errors.hpp"
#include "tamedheat/fft.hpp"

namespace tamedheat {

namespace {
constexpr double kPi = std::numbers::pi;
constexpr double kFourPi2 = 4.0 * kPi * kPi;
}  // namespace

SpectrumTable discrete_spectrum(const GridConfig& grid) {
  const int m = grid.num_space();
  SpectrumTable table;
  table.n = grid.n();
  table.c = grid.c().value();
  table.multipliers.resize(m);
  table.eigenvalues.resize(m);
  const double m2 = static_cast<double>(m) * m;
  for (int j = 0; j < m; ++j) {
    const double s = std::sin(kPi * j / m);
    table.eigenvalues[j] = -4.0 * m2 * s * s;
    table.multipliers[j] = 1.0 - 4.0 * table.c * s * s;
  }
  return table;
}

double heat_kernel(double t, double x, double y, double tol) {
  if (!(t > 0.0)) throw std::domain_error("heat_kernel requires t > 0");
  if (!(tol > 0.0)) throw std::domain_error("heat_kernel requires tol > 0");
  double d = x - y;
  d -= std::round(d);  // wrap to [-1/2, 1/2]
  if (t < 1e-3) {
    // Gaussian-image form (variance 2t); with wrapped d three images suffice
    // far beyond any practical tol.
    const double norm = 1.0 / std::sqrt(4.0 * kPi * t);
    double sum = 0.0;
    for (int m = -3; m <= 3; ++m) {
      const double z = d + m;
      sum += std::exp(-z * z / (4.0 * t));
    }
    return norm * sum;
  }
  double sum = 1.0;
  for (int k = 1;; ++k) {
    const double damp = std::exp(-kFourPi2 * k * k * t);
    sum += 2.0 * damp * std::cos(2.0 * kPi * k * d);
    // ratio between consecutive terms is below exp(-4 pi^2 (2k+1) t)
    const double ratio = std::exp(-kFourPi2 * (2.0 * k + 1.0) * t);
    if (2.0 * damp * ratio / (1.0 - ratio) < tol) break;
  }
  return sum;
}

Eigen::ArrayXd semigroup_apply(double t, const Eigen::ArrayXd& samples) {
  if (t < 0.0) throw std::domain_error("semigroup_apply requires t >= 0");
  if (t == 0.0) return samples;
  const Eigen::Index m = samples.size();
  ArrayXcd spec = dft(samples.cast<std::complex<double>>());
  for (Eigen::Index k = 0; k < m; ++k) {
    const double freq = static_cast<double>(k <= m / 2 ? k : k - m);
    spec[k] *= std::exp(-kFourPi2 * freq * freq * t);
  }
  return idft(spec).real();
}

double semigroup_apply(double t, const std::function<double(double)>& f, double x,
                       int resolution) {
  Eigen::ArrayXd samples(resolution);
  for (int j = 0; j < resolution; ++j) {
    samples[j] = f(static_cast<double>(j) / resolution);
  }
  ArrayXcd spec = dft(samples.cast<std::complex<double>>());
  spec /= static_cast<double>(resolution);
  std::complex<double> acc(0.0, 0.0);
  for (int k = 0; k < resolution; ++k) {
    const double freq = static_cast<double>(k <= resolution / 2 ? k : k - resolution);
    const double arg = 2.0 * kPi * freq * x;
    acc += spec[k] * std::exp(-kFourPi2 * freq * freq * t) *
           std::complex<double>(std::cos(arg), std::sin(arg));
  }
  return acc.real();
}

Eigen::ArrayXd discrete_laplacian(const GridConfig& grid, const Eigen::ArrayXd& f) {
  const Eigen::Index m = f.size();
  Eigen::ArrayXd out(m);
  const double scale = static_cast<double>(grid.num_space()) * grid.num_space();
  for (Eigen::Index j = 0; j < m; ++j) {
    const Eigen::Index left = j == 0 ? m - 1 : j - 1;
    const Eigen::Index right = j == m - 1 ? 0 : j + 1;
    out[j] = scale * (f[right] - 2.0 * f[j] + f[left]);
  }
  return out;
}

Eigen::ArrayXd stencil_apply(const GridConfig& grid, const Eigen::ArrayXd& f) {
  return f + grid.h() * discrete_laplacian(grid, f);
}

Eigen::ArrayXd discrete_semigroup_apply(const GridConfig& grid, std::int64_t steps,
                                        const Eigen::ArrayXd& f) {
  if (steps == 0) return f;
  const SpectrumTable table = discrete_spectrum(grid);
  ArrayXcd spec = dft(f.cast<std::complex<double>>());
  for (Eigen::Index j = 0; j < spec.size(); ++j) {
    spec[j] *= ipow(table.multipliers[j], steps);
  }
  return idft(spec).real();
}

double variance_Q(double t) {
  if (!(t > 0.0)) throw std::domain_error("variance_Q requires t > 0");
  // All modes with 8 pi^2 k^2 t >= 40 contribute below 1e-17; the remaining
  // pure 1/(4 pi^2 k^2) tail is trigamma(K+1)/(4 pi^2).
  const long K = std::max<long>(50, static_cast<long>(std::ceil(0.7125 / std::sqrt(t))));
  double sum = t;
  for (long k = 1; k <= K; ++k) {
    const double kk = static_cast<double>(k) * k;
    sum += (1.0 - std::exp(-8.0 * kPi * kPi * kk * t)) / (kFourPi2 * kk);
  }
  const double x = static_cast<double>(K) + 1.0;
  const double x2 = x * x;
  const double trigamma_tail =
      1.0 / x + 1.0 / (2.0 * x2) + 1.0 / (6.0 * x2 * x) - 1.0 / (30.0 * x2 * x2 * x) +
      1.0 / (42.0 * x2 * x2 * x2 * x);
  return sum + trigamma_tail / kFourPi2;
}

double variance_Qn(const GridConfig& grid, double t) {
  if (!(t > 0.0)) throw std::domain_error("variance_Qn requires t > 0");
  if (t > 1.0) throw std::domain_error("variance_Qn requires t <= 1");
  const SpectrumTable table = discrete_spectrum(grid);
  const std::int64_t M = time_index_of(grid, t);
  const double rem = t - static_cast<double>(M) * grid.h();
  // The L^2(T) norm of the kernel at grid time ih is q_i = sum_l m_l^{2i};
  // Q^n(t) integrates the piecewise-constant i -> q_i in time.
  double full = static_cast<double>(M);  // mode 0 contributes M steps of 1
  double partial = 1.0;                  // mode 0 at time Mh
  for (Eigen::Index l = 1; l < table.multipliers.size(); ++l) {
    const double m = table.multipliers[l];
    const double m2M = ipow(m, 2 * M);
    const double denom = 1.0 - m * m;
    full += denom == 0.0 ? static_cast<double>(M) : (1.0 - m2M) / denom;
    partial += m2M;
  }
  return grid.h() * full + rem * partial;
}

double variance_gap(const GridConfig& grid, double t, double alpha) {
  if (!(alpha >= 0.0 && alpha < 2.0)) {
    throw std::domain_error("variance_gap probes alpha in [0,2)");
  }
  return std::abs(variance_Qn(grid, t) - variance_Q(t));
}

}  // namespace tamedheat
