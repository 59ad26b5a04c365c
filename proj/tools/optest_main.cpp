#include <fstream>
#include <iostream>
#include <sstream>
#include <string>

#include <CLI11.hpp>

#include "optest/runner.hpp"
#include "optest/version.hpp"

namespace {

// Exit codes, one per library error family (see README).
enum ExitCode {
  kOk = 0,
  kConfigInvalid = 2,
  kNullEvent = 3,
  kEnumerationTooLarge = 4,
  kAtomDetected = 5,
  kNonConvergence = 6,
  kRegionDeeperThanHorizon = 7,
  kUndecidedMembership = 8,
  kIoError = 9,
  kInternal = 10,
};

struct CommonOptions {
  std::string config_path;
  std::string out_dir;
  std::string mode;
  std::uint64_t seed = 0;
  bool seed_set = false;
  bool quiet = false;
};

int run(const std::string& scenario, const CommonOptions& options) {
  using namespace optest;
  try {
    std::ifstream in(options.config_path, std::ios::binary);
    if (!in) {
      std::cerr << "error: cannot read config " << options.config_path << "\n";
      return kIoError;
    }
    std::stringstream buffer;
    buffer << in.rdbuf();
    std::string text = buffer.str();

    ScenarioConfig config = parse_config(text);
    if (scenario_name(config.scenario) != scenario)
      throw ConfigInvalid("config declares scenario \"" + scenario_name(config.scenario) +
                          "\" but the subcommand is \"" + scenario + "\"");
    if (!options.out_dir.empty()) config.out_dir = options.out_dir;
    if (options.seed_set) {
      config.has_seed = true;
      config.seed = options.seed;
    }
    if (!options.mode.empty()) {
      if (options.mode == "rational") {
        config.mode = NumberMode::rational;
      } else if (options.mode == "float") {
        config.mode = NumberMode::floating;
      } else {
        throw ConfigInvalid("--mode must be rational or float");
      }
    }
    // overrides go through full validation again
    config = parse_config(serialize_config(config));

    RunManifest manifest = run_scenario(config, text, options.quiet);
    if (!options.quiet) {
      std::cout << "wrote " << manifest.artifacts.size() + 1 << " artifacts to "
                << config.out_dir << " in " << manifest.duration_ms << " ms\n";
    }
    return kOk;
  } catch (const ConfigInvalid& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return kConfigInvalid;
  } catch (const ConditioningOnNullEvent& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kNullEvent;
  } catch (const EnumerationTooLarge& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kEnumerationTooLarge;
  } catch (const AtomDetected& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kAtomDetected;
  } catch (const NonConvergence& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kNonConvergence;
  } catch (const RegionDeeperThanHorizon& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kRegionDeeperThanHorizon;
  } catch (const UndecidedMembership& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kUndecidedMembership;
  } catch (const std::ios_base::failure& e) {
    std::cerr << "io error: " << e.what() << "\n";
    return kIoError;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kInternal;
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Batch runner for opinion merging and expert-test experiments"};
  app.set_version_flag("--version", optest::kVersion);
  app.require_subcommand(1);

  static const char* kScenarios[] = {"merge", "example1", "bdtest",
                                     "partition", "manipulate", "game"};
  static const char* kDescriptions[] = {
      "lookahead total-variation merging curve between two opinions",
      "exact non-merging gap of the built-in surrogate construction",
      "cylinder test: type-I control plus the non-manipulability witness",
      "split the path space into cylinders of probability at most epsilon",
      "search for a manipulating strategy against the tail-rejection test",
      "solve a two-player zero-sum matrix game"};

  CommonOptions options;
  std::string chosen;
  for (std::size_t i = 0; i < 6; ++i) {
    CLI::App* sub = app.add_subcommand(kScenarios[i], kDescriptions[i]);
    sub->add_option("--config", options.config_path, "scenario config file")
        ->required()
        ->check(CLI::ExistingFile);
    sub->add_option("--out", options.out_dir, "output directory (overrides config)");
    auto* seed = sub->add_option("--seed", options.seed, "random seed (overrides config)");
    sub->add_option("--mode", options.mode, "number mode: rational | float (overrides config)");
    sub->add_flag("--quiet", options.quiet, "suppress progress output");
    sub->callback([&, i, seed] {
      chosen = kScenarios[i];
      options.seed_set = seed->count() > 0;
    });
  }

  CLI11_PARSE(app, argc, argv);
  return run(chosen, options);
}
