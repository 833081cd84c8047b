#include <cmath>
#include <cstdio>
#include <limits>
#include <sstream>

#include <json.hpp>

#include "tamedheat/experiment.hpp"

namespace tamedheat {

namespace {

using ordered_json = nlohmann::ordered_json;

std::string fmt(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

std::string p_text(double p) {
  return p == std::numeric_limits<double>::infinity() ? "inf" : fmt(p);
}

ordered_json config_json(const ExperimentConfig& cfg) {
  const Drift b = cfg.drift();
  ordered_json j;
  j["drift"] = cfg.drift_spec;
  j["gamma"] = b.gamma();
  j["p"] = p_text(b.p());
  j["regime"] = regime_name(cfg.regime());
  j["m"] = cfg.m;
  j["levels"] = cfg.levels;
  j["n_ref"] = cfg.n_ref;
  j["c"] = cfg.c.str();
  j["replicas"] = cfg.replicas;
  j["seed"] = cfg.master_seed;
  j["psi0"] = psi0_name(cfg.psi0);
  j["comparison_times"] = cfg.comparison_times;
  j["epsilon"] = cfg.epsilon;
  return j;
}

void metadata_block(std::ostringstream& out, const ExperimentConfig& cfg) {
  const Drift b = cfg.drift();
  out << "# schema = 1\n";
  out << "# experiment = " << cfg.name << "\n";
  out << "# drift = " << cfg.drift_spec << "\n";
  out << "# gamma = " << fmt(b.gamma()) << "\n";
  out << "# p = " << p_text(b.p()) << "\n";
  out << "# regime = " << regime_name(cfg.regime()) << "\n";
  out << "# m = " << cfg.m << "\n";
  out << "# n_ref = " << cfg.n_ref << "\n";
  out << "# c = " << cfg.c.str() << "\n";
  out << "# replicas = " << cfg.replicas << "\n";
  out << "# seed = " << cfg.master_seed << "\n";
  out << "# psi0 = " << psi0_name(cfg.psi0) << "\n";
  out << "# comparison_times = " << cfg.comparison_times << "\n";
  out << "# epsilon = " << fmt(cfg.epsilon) << "\n";
}

}  // namespace

std::string report_json(const ErrorReport& report) {
  ordered_json j;
  j["schema"] = report.schema;
  j["experiment"] = report.config.name;
  j["config"] = config_json(report.config);
  j["k_ref"] = report.k_ref;
  j["levels"] = ordered_json::array();
  for (const LevelResult& row : report.levels) {
    ordered_json r;
    r["n"] = row.n;
    r["k"] = row.k;
    r["error"] = row.error;
    r["std_error"] = row.std_error;
    r["sup_norm"] = row.sup_norm;
    r["lip_norm"] = row.lip_norm;
    r["h2_sup_product"] = row.h2_sup_product;
    r["h2_lip_product"] = row.h2_lip_product;
    r["steps"] = row.steps;
    r["interp_error"] = row.interp_error;
    j["levels"].push_back(r);
  }
  if (report.fit) {
    j["fit"] = {{"rate", report.fit->rate},
                {"halfwidth", report.fit->halfwidth},
                {"dropped_coarsest", report.fit->dropped_coarsest}};
  } else {
    j["fit"] = nullptr;
  }
  if (report.theoretical_rate) {
    j["theoretical_rate"] = *report.theoretical_rate;
  } else {
    j["theoretical_rate"] = "unknown-positive";
  }
  j["drift_table_budget"] = report.drift_table_budget;
  return j.dump(2) + "\n";
}

std::string report_csv(const ErrorReport& report) {
  std::ostringstream out;
  metadata_block(out, report.config);
  out << "# k_ref = " << report.k_ref << "\n";
  if (report.theoretical_rate) {
    out << "# theoretical_rate = " << fmt(*report.theoretical_rate) << "\n";
  } else {
    out << "# theoretical_rate = unknown-positive\n";
  }
  if (report.fit) {
    out << "# fitted_rate = " << fmt(report.fit->rate) << "\n";
    out << "# fitted_halfwidth = " << fmt(report.fit->halfwidth) << "\n";
    out << "# dropped_coarsest = " << (report.fit->dropped_coarsest ? "true" : "false")
        << "\n";
  }
  out << "n,k,error,std_error,sup_norm,lip_norm,h2_sup_product,h2_lip_product,steps,"
         "interp_error\n";
  for (const LevelResult& row : report.levels) {
    out << row.n << ',' << row.k << ',' << fmt(row.error) << ',' << fmt(row.std_error)
        << ',' << fmt(row.sup_norm) << ',' << fmt(row.lip_norm) << ','
        << fmt(row.h2_sup_product) << ',' << fmt(row.h2_lip_product) << ',' << row.steps
        << ',' << fmt(row.interp_error) << "\n";
  }
  return out.str();
}

std::string decomposition_csv(const ErrorReport& report, const Decomposition& d) {
  std::ostringstream out;
  metadata_block(out, report.config);
  auto slope = [&](double v) { return std::isnan(v) ? std::string("nan") : fmt(v); };
  out << "# stability_slope = " << slope(d.stability_slope) << "\n";
  out << "# ou_slope = " << slope(d.ou_slope) << "\n";
  out << "# lip_slope = " << slope(d.lip_slope) << "\n";
  out << "# measured_slope = " << slope(d.measured_slope) << "\n";
  out << "n,k,stability,ou_component,lip_component,measured\n";
  for (const DecompositionRow& r : d.rows) {
    out << r.n << ',' << r.k << ',' << fmt(r.stability) << ',' << fmt(r.ou_component)
        << ',' << fmt(r.lip_component) << ',' << fmt(r.measured) << "\n";
  }
  return out.str();
}

}  // namespace tamedheat
