#include "tamedheat/campaign.hpp"

#include <fstream>
#include <limits>
#include <set>
#include <sstream>

#include "tamedheat/errors.hpp"

namespace tamedheat {

namespace {

std::string trim(const std::string& s) {
  const auto begin = s.find_first_not_of(" \t\r");
  if (begin == std::string::npos) return "";
  const auto end = s.find_last_not_of(" \t\r");
  return s.substr(begin, end - begin + 1);
}

std::vector<int> parse_int_list(const std::string& text) {
  std::vector<int> out;
  std::stringstream ss(text);
  std::string tok;
  while (std::getline(ss, tok, ',')) {
    out.push_back(std::stoi(trim(tok)));
  }
  return out;
}

void apply_key(ExperimentConfig& cfg, const std::string& key, const std::string& value) {
  if (key == "drift") {
    cfg.drift_spec = value;
  } else if (key == "gamma") {
    cfg.gamma_override = std::stod(value);
  } else if (key == "p") {
    cfg.p_override =
        value == "inf" ? std::numeric_limits<double>::infinity() : std::stod(value);
  } else if (key == "regime") {
    cfg.regime_override = parse_regime(value);
  } else if (key == "m") {
    cfg.m = std::stoi(value);
  } else if (key == "levels") {
    cfg.levels = parse_int_list(value);
  } else if (key == "n_ref") {
    cfg.n_ref = std::stoi(value);
  } else if (key == "c") {
    cfg.c = parse_rational(value);
  } else if (key == "replicas") {
    cfg.replicas = std::stoi(value);
  } else if (key == "seed") {
    cfg.master_seed = std::stoull(value);
  } else if (key == "psi0") {
    cfg.psi0 = parse_psi0(value);
  } else if (key == "comparison_times") {
    cfg.comparison_times = std::stoi(value);
  } else if (key == "epsilon") {
    cfg.epsilon = std::stod(value);
  } else {
    throw ConfigError("unknown experiment key '" + key + "'");
  }
}

}  // namespace

CampaignFile parse_campaign(std::istream& in) {
  CampaignFile campaign;
  ExperimentConfig* current = nullptr;
  std::set<std::string> names;
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const std::string text = trim(line);
    if (text.empty() || text[0] == '#') continue;
    if (text.front() == '[') {
      if (text.back() != ']') {
        throw ConfigError("line " + std::to_string(lineno) + ": unterminated section");
      }
      const std::string name = trim(text.substr(1, text.size() - 2));
      if (name.empty()) throw ConfigError("line " + std::to_string(lineno) + ": empty name");
      if (!names.insert(name).second) {
        throw ConfigError("duplicate experiment name '" + name + "'");
      }
      campaign.experiments.emplace_back();
      current = &campaign.experiments.back();
      current->name = name;
      continue;
    }
    const auto eq = text.find('=');
    if (eq == std::string::npos) {
      throw ConfigError("line " + std::to_string(lineno) + ": expected key = value");
    }
    const std::string key = trim(text.substr(0, eq));
    const std::string value = trim(text.substr(eq + 1));
    try {
      if (current == nullptr) {
        if (key == "output_dir") {
          campaign.output_dir = value;
        } else if (key == "threads") {
          campaign.parallelism = std::stoi(value);
        } else if (key == "verbosity") {
          campaign.verbosity = std::stoi(value);
        } else {
          throw ConfigError("unknown campaign key '" + key + "'");
        }
      } else {
        apply_key(*current, key, value);
      }
    } catch (const ConfigError&) {
      throw;
    } catch (const std::exception& e) {
      throw ConfigError("line " + std::to_string(lineno) + ": bad value for '" + key +
                        "': " + e.what());
    }
  }
  if (campaign.experiments.empty()) {
    throw ConfigError("campaign file defines no experiments");
  }
  for (const ExperimentConfig& cfg : campaign.experiments) cfg.validate();
  return campaign;
}

CampaignFile load_campaign(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open campaign file '" + path + "'");
  return parse_campaign(in);
}

}  // namespace tamedheat
