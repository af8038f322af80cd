#pragma once

#include <string>

#include "json.hpp"
#include "mollified/lfunction.hpp"

namespace mollified::cli {

/// What produced a report: enough to re-run it and get the same numbers at
/// the same worker count.
struct RunManifest {
  std::string command;
  nlohmann::ordered_json parameters = nlohmann::ordered_json::object();
  std::string version;
  lfunction::AFEConfig config;
  double wall_seconds = 0.0;
  unsigned jobs = 1;

  nlohmann::ordered_json to_json() const;
};

/// Version string baked in at build time.
std::string tool_version();

}  // namespace mollified::cli
