#include "tamedheat/drift.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>

#include "tamedheat/errors.hpp"
#include "tamedheat/quadrature.hpp"

namespace tamedheat {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kTwoPi = 2.0 * std::numbers::pi;

double gauss_density(double variance, double x) {
  return std::exp(-x * x / (2.0 * variance)) / std::sqrt(kTwoPi * variance);
}

// C^1-norm slope maximum of w * g_v: |w| e^{-1/2} / (sqrt(2 pi) v).
double gauss_slope_max(double variance, double w) {
  return std::abs(w) * std::exp(-0.5) / (std::sqrt(kTwoPi) * variance);
}

double parse_number(const std::string& s) {
  try {
    std::size_t pos = 0;
    const double v = std::stod(s, &pos);
    if (pos != s.size()) throw ConfigError("malformed number '" + s + "'");
    return v;
  } catch (const ConfigError&) {
    throw;
  } catch (const std::exception&) {
    throw ConfigError("malformed number '" + s + "'");
  }
}

std::vector<double> split_tokens(const std::string& s, char sep) {
  std::vector<double> out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, sep)) out.push_back(parse_number(item));
  return out;
}

}  // namespace

void Drift::validate_regularity() const {
  const double gap = gamma_ - (p_ == kInf ? 0.0 : 1.0 / p_);
  const bool bounded_case = gamma_ == 0.0 && p_ == kInf;
  const bool h1 = gap < 0.0 && gap >= -1.0 - 1e-12 && gamma_ > -1.0;
  if (!(bounded_case || h1)) {
    throw ConfigError("inadmissible regularity: need 0 > gamma - 1/p >= -1 with "
                      "gamma > -1, or gamma = 0 with p = inf; got gamma=" +
                      std::to_string(gamma_) + ", p=" + std::to_string(p_));
  }
  if (p_ < 1.0) throw ConfigError("integrability index p must be >= 1");
}

Drift Drift::smooth(std::string id, std::function<double(double)> f,
                    double lipschitz_bound) {
  Drift d;
  d.kind_ = DriftKind::Smooth;
  d.id_ = std::move(id);
  d.f_ = std::move(f);
  d.lip_bound_ = lipschitz_bound;
  d.gamma_ = 0.0;
  d.p_ = kInf;
  d.hull_ = {0.0, 1.0};
  d.sup_bound_ = 0.0;
  for (int i = 0; i <= 16; ++i) {
    d.sup_bound_ = std::max(d.sup_bound_, std::abs(d.f_(i / 16.0)));
  }
  d.validate_regularity();
  return d;
}

Drift Drift::bounded_measurable(std::string id, std::function<double(double)> f,
                                double sup_bound, std::vector<double> breakpoints) {
  Drift d;
  d.kind_ = DriftKind::BoundedMeasurable;
  d.id_ = std::move(id);
  d.f_ = std::move(f);
  d.sup_bound_ = sup_bound;
  d.breakpoints_ = std::move(breakpoints);
  d.gamma_ = 0.0;
  d.p_ = kInf;
  d.hull_ = {-1.0, 1.0};
  d.validate_regularity();
  return d;
}

Drift Drift::power_singular(double exponent) {
  if (!(exponent > -1.0 && exponent < 0.0)) {
    throw ConfigError("power-singular exponent must lie in (-1,0), got " +
                      std::to_string(exponent));
  }
  Drift d;
  d.kind_ = DriftKind::PowerSingular;
  d.id_ = "power:" + std::to_string(exponent);
  d.exponent_ = exponent;
  d.gamma_ = exponent;
  d.p_ = kInf;
  d.hull_ = {-0.5, 1.5};
  d.validate_regularity();
  return d;
}

Drift Drift::signed_measure(std::vector<Atom> atoms) {
  if (atoms.empty()) throw ConfigError("signed measure needs at least one atom");
  Drift d;
  d.kind_ = DriftKind::SignedMeasure;
  d.atoms_ = std::move(atoms);
  d.gamma_ = 0.0;
  d.p_ = 1.0;
  double lo = d.atoms_.front().location, hi = lo;
  std::string id = "dirac";
  for (const Atom& a : d.atoms_) {
    lo = std::min(lo, a.location);
    hi = std::max(hi, a.location);
  }
  d.hull_ = {lo, hi};
  d.id_ = id;
  d.validate_regularity();
  return d;
}

Drift Drift::parse(const std::string& spec) {
  const auto colon = spec.find(':');
  const std::string head = spec.substr(0, colon);
  const std::string rest = colon == std::string::npos ? "" : spec.substr(colon + 1);
  if (head == "zero") {
    return smooth("zero", [](double) { return 0.0; }, 0.0);
  }
  if (head == "sin") {
    return smooth("sin", [](double x) { return std::sin(kTwoPi * x); }, kTwoPi);
  }
  if (head == "sign") {
    return bounded_measurable(
        "sign", [](double x) { return x > 0.0 ? 1.0 : -1.0; }, 1.0, {0.0});
  }
  if (head == "indicator") {
    return bounded_measurable(
        "indicator", [](double x) { return x > 0.0 && x < 1.0 ? 1.0 : 0.0; }, 1.0,
        {0.0, 1.0});
  }
  if (head == "const") {
    const double v = parse_number(rest);
    Drift d = smooth("const:" + rest, [v](double) { return v; }, 0.0);
    return d;
  }
  if (head == "power") {
    return power_singular(parse_number(rest));
  }
  if (head == "dirac") {
    std::vector<Atom> atoms;
    if (rest.empty()) {
      atoms.push_back({0.0, 1.0});
    } else {
      std::stringstream ss(rest);
      std::string tok;
      while (std::getline(ss, tok, ',')) {
        const auto parts = split_tokens(tok, ':');
        if (parts.size() != 2) throw ConfigError("atom must be <loc>:<weight>, got '" + tok + "'");
        atoms.push_back({parts[0], parts[1]});
      }
    }
    return signed_measure(std::move(atoms));
  }
  throw ConfigError("unknown drift spec '" + spec + "'");
}

Drift Drift::with_regularity(double gamma, double p) const {
  Drift d = *this;
  d.gamma_ = gamma;
  d.p_ = p;
  d.validate_regularity();
  return d;
}

Regime Drift::default_regime() const {
  const double gap = gamma_ - (p_ == kInf ? 0.0 : 1.0 / p_);
  if (gamma_ == 0.0 && p_ == kInf) return Regime::Bounded;
  if (std::abs(gap + 1.0) < 1e-12 && p_ != kInf) return Regime::Limit;
  return Regime::SubCritical;
}

double Drift::eval(double x) const {
  if (kind_ == DriftKind::SignedMeasure) {
    throw ConfigError("a signed measure has no pointwise values; mollify first");
  }
  if (kind_ == DriftKind::PowerSingular) {
    return x > 0.0 && x < 1.0 ? std::pow(x, exponent_) : 0.0;
  }
  return f_(x);
}

std::pair<double, double> Drift::support_hull() const { return hull_; }

double smoothed_eval(const Drift& b, double variance, double x) {
  if (variance < 0.0) throw std::domain_error("smoothing variance must be >= 0");
  if (variance == 0.0) return b.eval(x);
  const double v = variance;
  switch (b.kind()) {
    case DriftKind::SignedMeasure: {
      double sum = 0.0;
      for (const Atom& a : b.atoms()) sum += a.weight * gauss_density(v, x - a.location);
      return sum;
    }
    case DriftKind::PowerSingular: {
      // int_0^1 g_v(x-y) y^e dy = 1/(1+e) int_0^1 g_v(x - s^(1/(1+e))) ds,
      // which has no singularity left in s.
      const double e = b.exponent();
      const double q = 1.0 / (1.0 + e);
      const double radius = 8.0 * std::sqrt(v);
      if (x - radius > 1.0 + radius || x + radius < -radius) {
        // window far from (0,1): still integrate, it converges instantly
      }
      const auto integrand = [&](double s) {
        return gauss_density(v, x - std::pow(s, q)) * q;
      };
      const double scale = 1.0 + std::pow(v, 0.5 * e);
      const double tol = 1e-10 * scale;
      // panel boundaries at the s-images of the Gaussian core
      std::vector<double> cuts{0.0, 1.0};
      for (const double y : {x - radius, x - 0.5 * radius, x, x + 0.5 * radius, x + radius}) {
        if (y > 0.0 && y < 1.0) cuts.push_back(std::pow(y, 1.0 + e));
      }
      std::sort(cuts.begin(), cuts.end());
      double sum = 0.0;
      double worst = 0.0;
      bool ok = true;
      for (std::size_t i = 0; i + 1 < cuts.size(); ++i) {
        const auto r = adaptive_simpson(integrand, cuts[i], cuts[i + 1],
                                        tol / static_cast<double>(cuts.size()));
        sum += r.value;
        ok = ok && r.converged;
        worst = std::max(worst, r.residual);
      }
      if (!ok) throw QuadratureError("mollification of power drift did not converge", worst);
      return sum;
    }
    case DriftKind::Smooth:
    case DriftKind::BoundedMeasurable: {
      const double radius = 8.0 * std::sqrt(v);
      const double lo = x - radius, hi = x + radius;
      std::vector<double> cuts{lo, hi};
      for (const double bp : b.breakpoints()) {
        if (bp > lo && bp < hi) cuts.push_back(bp);
      }
      std::sort(cuts.begin(), cuts.end());
      const double scale = 1.0 + (b.kind() == DriftKind::Smooth
                                      ? std::abs(b.eval(x)) + b.sup_bound()
                                      : b.sup_bound());
      const double tol = 1e-10 * scale;
      double sum = 0.0;
      double worst = 0.0;
      bool ok = true;
      for (std::size_t i = 0; i + 1 < cuts.size(); ++i) {
        const double pa = cuts[i], pb = cuts[i + 1];
        // panels are cut at jump points of b; endpoint samples must take the
        // one-sided limit belonging to this panel
        const auto integrand = [&](double y) {
          if (y == pa) y = std::nextafter(pa, pb);
          if (y == pb) y = std::nextafter(pb, pa);
          return gauss_density(v, x - y) * b.eval(y);
        };
        const auto r =
            adaptive_simpson(integrand, pa, pb, tol / static_cast<double>(cuts.size()));
        sum += r.value;
        ok = ok && r.converged;
        worst = std::max(worst, r.residual);
      }
      if (!ok) throw QuadratureError("mollification quadrature did not converge", worst);
      return sum;
    }
  }
  throw std::logic_error("unreachable drift kind");
}

MollifiedDrift::MollifiedDrift(Drift base, std::int64_t k)
    : base_(std::move(base)), k_(k), variance_(1.0 / static_cast<double>(k)) {
  if (k < 1) throw ConfigError("taming parameter k must be >= 1, got " + std::to_string(k));
  norms_ = drift_norms(*this, 1 << 14);
}

MollifiedDrift mollify(const Drift& b, std::int64_t k) { return MollifiedDrift(b, k); }

DriftNorms drift_norms(const MollifiedDrift& bk, int sample_count,
                       std::optional<std::pair<double, double>> window) {
  if (sample_count < 2) throw ConfigError("drift_norms needs sample_count >= 2");
  const double v = bk.variance();
  const double margin = 8.0 * std::sqrt(v);
  auto [lo, hi] = window.value_or(std::pair<double, double>{
      bk.base().support_hull().first - margin, bk.base().support_hull().second + margin});
  DriftNorms out;
  out.samples = sample_count;
  out.window_lo = lo;
  out.window_hi = hi;

  const Drift& base = bk.base();
  if (base.is_measure() && base.atoms().size() == 1) {
    const double w = std::abs(base.atoms().front().weight);
    out.sup_norm = w * gauss_density(v, 0.0);
    out.lip_norm = gauss_slope_max(v, w);
    return out;
  }
  // constants mollify to themselves; avoid a degenerate window
  if (hi <= lo) {
    hi = lo + 1.0;
  }
  const double dx = (hi - lo) / (sample_count - 1);
  double sup = 0.0;
  double lip = 0.0;
  double prev = bk(lo);
  sup = std::abs(prev);
  for (int i = 1; i < sample_count; ++i) {
    const double cur = bk(lo + i * dx);
    sup = std::max(sup, std::abs(cur));
    lip = std::max(lip, std::abs(cur - prev) / dx);
    prev = cur;
  }
  if (base.is_measure()) {
    double bound = 0.0;  // sum |w_i| g_v(0) dominates any peak
    for (const Atom& a : base.atoms()) bound += std::abs(a.weight);
    sup = std::min(sup, bound * gauss_density(v, 0.0));
  }
  out.sup_norm = sup;
  out.lip_norm = lip;
  return out;
}

std::int64_t select_k(int n, double gamma, double p, Regime regime) {
  if (n < 1) throw ConfigError("select_k requires n >= 1");
  const double gap = gamma - (p == kInf ? 0.0 : 1.0 / p);
  switch (regime) {
    case Regime::SubCritical: {
      if (!(gap < 0.0 && gap > -1.0 + 1e-12)) {
        throw ConfigError("sub-critical regime requires 0 > gamma - 1/p > -1");
      }
      const double expo = 1.0 / (1.0 - gap);
      const std::int64_t k =
          static_cast<std::int64_t>(std::floor(std::pow(static_cast<double>(n), expo) *
                                               (1.0 + 1e-12)));
      return std::max<std::int64_t>(1, k);
    }
    case Regime::Limit: {
      if (!(std::abs(gap + 1.0) <= 1e-12 && p != kInf)) {
        throw ConfigError("limit regime requires gamma - 1/p = -1 with p < inf");
      }
      const std::int64_t k = static_cast<std::int64_t>(
          std::floor(std::sqrt(static_cast<double>(n)) * (1.0 + 1e-12)));
      return std::max<std::int64_t>(1, k);
    }
    case Regime::Bounded: {
      if (!(gamma == 0.0 && p == kInf)) {
        throw ConfigError("bounded regime requires gamma = 0, p = inf");
      }
      return n;
    }
  }
  throw std::logic_error("unreachable regime");
}

std::optional<double> theoretical_rate(double gamma, double p, Regime regime) {
  const double gap = gamma - (p == kInf ? 0.0 : 1.0 / p);
  switch (regime) {
    case Regime::SubCritical:
      if (!(gap < 0.0 && gap > -1.0 + 1e-12)) {
        throw ConfigError("sub-critical regime requires 0 > gamma - 1/p > -1");
      }
      return 1.0 / (2.0 * (1.0 - gap));
    case Regime::Limit:
      if (!(std::abs(gap + 1.0) <= 1e-12 && p != kInf)) {
        throw ConfigError("limit regime requires gamma - 1/p = -1 with p < inf");
      }
      return std::nullopt;  // positive but not explicit
    case Regime::Bounded:
      if (!(gamma == 0.0 && p == kInf)) {
        throw ConfigError("bounded regime requires gamma = 0, p = inf");
      }
      return 0.5;
  }
  throw std::logic_error("unreachable regime");
}

namespace {

std::string trend_status(const std::vector<double>& series, const std::vector<int>& ns) {
  if (series.size() < 2) return "bounded";
  bool monotone_up = true;
  for (std::size_t i = 1; i < series.size(); ++i) {
    if (series[i] < series[i - 1]) monotone_up = false;
  }
  const double first = series.front();
  const double last = series.back();
  if (monotone_up && first > 0.0 && last / first > 10.0) return "divergent";
  // asymptote from the tail log-slope: the late levels dominate when the
  // product tends to a constant
  const double prev = series[series.size() - 2];
  if (last == 0.0) return "bounded";
  if (prev == 0.0) return "growing";
  const double rate = std::log(last / prev) /
                      std::log(static_cast<double>(ns.back()) /
                               static_cast<double>(ns[ns.size() - 2]));
  if (rate <= -0.1) return "bounded";
  if (rate < 0.1) return "borderline";
  return "growing";
}

}  // namespace

TamingReport check_taming_hypothesis(
    const std::vector<std::pair<MollifiedDrift, int>>& ladder, double epsilon) {
  if (ladder.empty()) throw ConfigError("taming check needs a nonempty ladder");
  TamingReport report;
  report.epsilon = epsilon;
  std::vector<double> sups, lips;
  std::vector<int> ns;
  for (const auto& [bk, n] : ladder) {
    TamingEntry e;
    e.n = n;
    e.k = bk.k();
    const double c1 = bk.sup_norm() + bk.lip_norm();  // ||.||_C1 = sup + slope
    e.sup_product = bk.sup_norm() * std::pow(static_cast<double>(n), -0.5 + epsilon);
    e.lip_product = c1 / static_cast<double>(n);
    report.max_sup_product = std::max(report.max_sup_product, e.sup_product);
    report.max_lip_product = std::max(report.max_lip_product, e.lip_product);
    sups.push_back(e.sup_product);
    lips.push_back(e.lip_product);
    ns.push_back(n);
    report.entries.push_back(e);
  }
  report.sup_status = trend_status(sups, ns);
  report.lip_status = trend_status(lips, ns);
  return report;
}

}  // namespace tamedheat
