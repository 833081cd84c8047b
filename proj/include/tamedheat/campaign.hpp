#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "tamedheat/experiment.hpp"

namespace tamedheat {

/// A declarative list of experiments: flat key = value lines, one
/// [section] per experiment, campaign-wide keys before the first section.
struct CampaignFile {
  std::vector<ExperimentConfig> experiments;
  std::string output_dir = ".";
  int parallelism = 0;  // 0 = all cores
  int verbosity = 1;
};

CampaignFile parse_campaign(std::istream& in);
CampaignFile load_campaign(const std::string& path);

}  // namespace tamedheat
