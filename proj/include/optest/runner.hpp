#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "optest/config.hpp"

namespace optest {

struct RunManifest {
  std::string scenario;
  std::string mode;
  std::string version;
  bool has_seed = false;
  std::uint64_t seed = 0;
  std::vector<std::string> artifacts;  // filenames inside the output directory
  double duration_ms = 0.0;
};

// Runs one scenario end to end: dispatches to the library, writes the
// per-scenario CSV/JSON artifacts plus manifest.json into the output
// directory, and returns the manifest. Data artifacts are byte-identical
// across runs with the same config and seed. An uncertified manipulation
// run still writes its diagnostics, then surfaces as NonConvergence.
RunManifest run_scenario(const ScenarioConfig& config, const std::string& config_text,
                         bool quiet);

}  // namespace optest
