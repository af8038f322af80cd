#include "manifest.hpp"

#ifndef MOLLIFIED_VERSION
#define MOLLIFIED_VERSION "unknown"
#endif

namespace mollified::cli {

std::string tool_version() { return MOLLIFIED_VERSION; }

nlohmann::ordered_json RunManifest::to_json() const {
  nlohmann::ordered_json cfg;
  cfg["smoothing"] = config.smoothing == lfunction::Smoothing::unit ? "unit" : "gaussian";
  cfg["sigma0"] = config.sigma0;
  cfg["height"] = config.height;
  cfg["step"] = config.step;
  cfg["cutoff_multiplier"] = config.cutoff_multiplier;
  cfg["target_accuracy"] = config.target_accuracy;
  cfg["hash"] = config.hash();

  nlohmann::ordered_json j;
  j["command"] = command;
  j["parameters"] = parameters;
  j["version"] = version;
  j["afe_config"] = cfg;
  j["wall_seconds"] = wall_seconds;
  j["jobs"] = jobs;
  return j;
}

}  // namespace mollified::cli
