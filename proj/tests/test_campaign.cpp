#include <sstream>

#include <doctest.h>

#include "tamedheat/campaign.hpp"
#include "tamedheat/errors.hpp"

using namespace tamedheat;

namespace {

const char* kSample = R"(
# strong-rate ladder at desk scale
output_dir = out
threads = 2

[smooth]
drift = sin
m = 2
levels = 8,16,32
n_ref = 64
c = 1/4
replicas = 10
seed = 42
psi0 = sin

[measure]
drift = dirac
regime = limit
levels = 4,8
n_ref = 32
replicas = 4
seed = 7
epsilon = 0.1
)";

}  // namespace

TEST_CASE("campaign parsing happy path") {
  std::istringstream in(kSample);
  const CampaignFile campaign = parse_campaign(in);
  CHECK(campaign.output_dir == "out");
  CHECK(campaign.parallelism == 2);
  REQUIRE(campaign.experiments.size() == 2);

  const ExperimentConfig& smooth = campaign.experiments[0];
  CHECK(smooth.name == "smooth");
  CHECK(smooth.drift_spec == "sin");
  CHECK(smooth.levels == std::vector<int>{8, 16, 32});
  CHECK(smooth.n_ref == 64);
  CHECK(smooth.c == Rational{1, 4});
  CHECK(smooth.replicas == 10);
  CHECK(smooth.master_seed == 42);
  CHECK(smooth.psi0 == Psi0::Sin);
  CHECK(smooth.regime() == Regime::Bounded);

  const ExperimentConfig& measure = campaign.experiments[1];
  CHECK(measure.name == "measure");
  CHECK(measure.regime() == Regime::Limit);
  CHECK(measure.epsilon == 0.1);
  CHECK(measure.psi0 == Psi0::Zero);  // default
}

TEST_CASE("campaign parsing rejects malformed input") {
  auto parse = [](const std::string& text) {
    std::istringstream in(text);
    return parse_campaign(in);
  };
  CHECK_THROWS_AS(parse(""), ConfigError);
  CHECK_THROWS_AS(parse("[a]\nlevels = 4\nn_ref = 8\n[a]\nlevels = 4\nn_ref = 8\n"),
                  ConfigError);  // duplicate name
  CHECK_THROWS_AS(parse("[a]\nnot_a_key = 1\n"), ConfigError);
  CHECK_THROWS_AS(parse("stray = 1\n[a]\n"), ConfigError);  // unknown campaign key
  CHECK_THROWS_AS(parse("[a]\nlevels = 4,8\nn_ref = 8\nreplicas = 2\n"),
                  ConfigError);  // n_ref too small
  CHECK_THROWS_AS(parse("[a]\nlevels\n"), ConfigError);
  CHECK_THROWS_AS(parse("[a]\nm = x\n"), ConfigError);
  CHECK_THROWS_AS(parse("[unterminated\nlevels = 4\n"), ConfigError);
  CHECK_THROWS_AS(parse("[a]\nc = 1/2\nlevels = 4\nn_ref = 16\n"), ConfigError);
}
