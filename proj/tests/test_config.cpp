#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "optest/config.hpp"
#include "optest/runner.hpp"

using namespace optest;
namespace fs = std::filesystem;

namespace {

std::string slurp(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  REQUIRE(in.good());
  std::stringstream buffer;
  buffer << in.rdbuf();
  return buffer.str();
}

fs::path data_dir() { return fs::path(TEST_DATA_DIR); }

std::string minimal_merge() {
  return R"(scenario = merge
[opinion.P]
kind = iid
probs = 1/2, 1/2
[opinion.Q]
kind = iid
probs = 0.3, 0.7
[merge]
p = P
q = Q
)";
}

}  // namespace

TEST_CASE("minimal merge config gets the documented defaults") {
  ScenarioConfig config = parse_config(minimal_merge());
  const auto& p = std::get<MergeParams>(config.params);
  CHECK(p.lookahead == 4);
  CHECK(p.threshold == "0.1");
  CHECK(p.t_max == 50);
  CHECK(p.method == "exact");
  CHECK(config.mode == NumberMode::floating);
  CHECK(config.alphabet == 2);
  CHECK(!config.has_seed);
}

TEST_CASE("config validation names the offending field") {
  auto expect_error = [](const std::string& text, const std::string& needle) {
    try {
      parse_config(text);
      FAIL_CHECK("expected ConfigInvalid for: " << needle);
    } catch (const ConfigInvalid& e) {
      CHECK(std::string(e.what()).find(needle) != std::string::npos);
    }
  };

  SUBCASE("negative epsilon") {
    expect_error(
        "scenario = partition\n[opinion.P]\nkind = iid\nprobs = 1/2, 1/2\n"
        "[partition]\nopinion = P\nepsilon = -0.1\n",
        "partition.epsilon");
  }
  SUBCASE("monte carlo without a seed") {
    expect_error(minimal_merge() + "method = montecarlo\nn_paths = 100\n", "seed");
  }
  SUBCASE("unknown key") {
    expect_error(minimal_merge() + "lookahed = 3\n", "lookahed");
  }
  SUBCASE("unknown section") {
    expect_error(minimal_merge() + "[plotting]\nstyle = fancy\n", "plotting");
  }
  SUBCASE("unknown opinion reference") {
    expect_error(
        "scenario = partition\n[opinion.P]\nkind = iid\nprobs = 1/2, 1/2\n"
        "[partition]\nopinion = R\nepsilon = 0.1\n",
        "\"R\"");
  }
  SUBCASE("mixture cycle") {
    expect_error(
        "scenario = partition\n"
        "[opinion.A]\nkind = mixture\ncomponents = B\nweights = 1\n"
        "[opinion.B]\nkind = mixture\ncomponents = A\nweights = 1\n"
        "[partition]\nopinion = A\nepsilon = 0.1\n",
        "cycle");
  }
  SUBCASE("rational mode rejected for solver scenarios") {
    expect_error("scenario = manipulate\nmode = rational\n[manipulate]\nhorizon = 2\n"
                 "epsilon = 0.2\ndelta = 0.1\n",
                 "float");
  }
  SUBCASE("delta beyond 1 - epsilon") {
    expect_error("scenario = manipulate\n[manipulate]\nhorizon = 2\n"
                 "epsilon = 0.2\ndelta = 0.9\n",
                 "manipulate.delta");
  }
  SUBCASE("probabilities that do not normalize are caught at parse time") {
    expect_error(
        "scenario = partition\n[opinion.P]\nkind = iid\nprobs = 1/2, 1/3\n"
        "[partition]\nopinion = P\nepsilon = 0.1\n",
        "opinion \"P\"");
  }
  SUBCASE("table row outside the alphabet") {
    expect_error(
        "scenario = partition\n[opinion.T]\nkind = table\ndepth = 2\n"
        "root = 1/2, 1/2\nrow.2 = 1/2, 1/2\n"
        "[partition]\nopinion = T\nepsilon = 0.5\n",
        "row.2");
  }
}

TEST_CASE("round trip: parse(serialize(config)) == config") {
  for (const char* name :
       {"merge_minimal.ini", "merge_montecarlo.ini", "example1.ini", "bdtest.ini",
        "partition.ini", "manipulate_small.ini", "manipulate_d8.ini", "game_pennies.ini"}) {
    ScenarioConfig config = parse_config(slurp(data_dir() / name));
    ScenarioConfig reparsed = parse_config(serialize_config(config));
    CHECK(reparsed == config);
  }
}

TEST_CASE("scalar literals parse in both modes") {
  CHECK(parse_scalar<Rational>("7/10") == Rational(7, 10));
  CHECK(parse_scalar<Rational>("0.7") == Rational(7, 10));
  CHECK(parse_scalar<Rational>("1e-3") == Rational(1, 1000));
  CHECK(parse_scalar<Rational>("2.5e2") == Rational(250));
  CHECK(parse_scalar<Rational>("-0.5") == Rational(-1, 2));
  CHECK(parse_scalar<double>("7/10") == doctest::Approx(0.7));
  CHECK(parse_scalar<double>("1e-6") == doctest::Approx(1e-6));
  CHECK_THROWS_AS(parse_scalar<Rational>("abc"), std::invalid_argument);
  CHECK_THROWS_AS(parse_scalar<Rational>("1/0"), std::invalid_argument);
  CHECK_THROWS_AS(parse_scalar<double>("0.5x"), std::invalid_argument);
  CHECK_THROWS_AS(parse_scalar<Rational>("1e"), std::invalid_argument);
}

TEST_CASE("reference paths: parsing and eventual periodicity") {
  ReferencePath plain = ReferencePath::parse("01");
  CHECK(plain.prefix(5).str() == "01010");
  ReferencePath preambled = ReferencePath::parse("110:01");
  CHECK(preambled.prefix(7).str() == "1100101");
  CHECK(preambled.at(2) == 0);
  CHECK_THROWS_AS(ReferencePath::parse(""), std::invalid_argument);
  CHECK_THROWS_AS(History::parse("01x"), std::invalid_argument);
}

TEST_CASE("opinions build under both number modes") {
  ScenarioConfig config = parse_config(slurp(data_dir() / "bdtest.ini"));
  auto mix_r = build_opinion<Rational>(config.opinions, "MIX", 2);
  CHECK(mix_r.cylinder_prob(History::parse("1")) == Rational(1, 2));
  auto markov_d = build_opinion<double>(config.opinions, "M", 2);
  CHECK(markov_d.cylinder_prob(History::parse("01")) == doctest::Approx(0.15));
}

TEST_CASE("runner: example1 artifacts carry the exact one-half gap") {
  ScenarioConfig config = parse_config(slurp(data_dir() / "example1.ini"));
  config.out_dir = (fs::temp_directory_path() / "optest_example1").string();
  fs::remove_all(config.out_dir);
  RunManifest manifest = run_scenario(config, "echo", true);
  CHECK(manifest.scenario == "example1");
  CHECK(manifest.artifacts.size() == 2);

  Json j = Json::parse(slurp(fs::path(config.out_dir) / "example1.json"));
  CHECK(j["all_gaps_one_half"] == true);
  CHECK(j["all_identities_hold"] == true);
  REQUIRE(j["rows"].size() == 17);
  for (const auto& row : j["rows"]) CHECK(row["gap"] == "1/2");
  CHECK(fs::exists(fs::path(config.out_dir) / "manifest.json"));
}

TEST_CASE("runner: identical config and seed give byte-identical artifacts") {
  ScenarioConfig config = parse_config(slurp(data_dir() / "merge_montecarlo.ini"));
  auto dir1 = fs::temp_directory_path() / "optest_det1";
  auto dir2 = fs::temp_directory_path() / "optest_det2";
  fs::remove_all(dir1);
  fs::remove_all(dir2);
  config.out_dir = dir1.string();
  run_scenario(config, "echo", true);
  config.out_dir = dir2.string();
  run_scenario(config, "echo", true);
  for (const char* name : {"merge_curve.csv", "merge_curve.json", "abs_continuity.json"}) {
    CHECK(slurp(dir1 / name) == slurp(dir2 / name));
  }
}

TEST_CASE("runner: bdtest reports control and a zero-pass witness") {
  ScenarioConfig config = parse_config(slurp(data_dir() / "bdtest.ini"));
  config.out_dir = (fs::temp_directory_path() / "optest_bdtest").string();
  fs::remove_all(config.out_dir);
  run_scenario(config, "echo", true);
  Json j = Json::parse(slurp(fs::path(config.out_dir) / "bdtest.json"));
  CHECK(j["witness_pass_prob"] == "0");
  for (const auto& row : j["opinions"]) CHECK(row["controlled"] == true);
}

TEST_CASE("runner: partition artifacts") {
  ScenarioConfig config = parse_config(slurp(data_dir() / "partition.ini"));
  config.out_dir = (fs::temp_directory_path() / "optest_partition").string();
  fs::remove_all(config.out_dir);
  run_scenario(config, "echo", true);
  Json j = Json::parse(slurp(fs::path(config.out_dir) / "partition.json"));
  CHECK(j["cells"].size() == j["cell_count"]);
  Rational total(0);
  for (const auto& cell : j["cells"]) {
    total += parse_scalar<Rational>(cell["prob"].get<std::string>());
  }
  CHECK(total == Rational(1));
}

TEST_CASE("runner: game scenario solves the matrix from file") {
  ScenarioConfig config = parse_config(slurp(data_dir() / "game_pennies.ini"));
  std::get<GameParams>(config.params).matrix_file =
      (data_dir() / "matching_pennies.txt").string();
  config.out_dir = (fs::temp_directory_path() / "optest_game").string();
  fs::remove_all(config.out_dir);
  run_scenario(config, "echo", true);
  Json j = Json::parse(slurp(fs::path(config.out_dir) / "solution.json"));
  CHECK(j["value"].get<double>() == doctest::Approx(0.5).epsilon(1e-9));
}

TEST_CASE("runner: manipulate writes a certified report") {
  ScenarioConfig config = parse_config(slurp(data_dir() / "manipulate_small.ini"));
  config.out_dir = (fs::temp_directory_path() / "optest_manip").string();
  fs::remove_all(config.out_dir);
  run_scenario(config, "echo", true);
  Json j = Json::parse(slurp(fs::path(config.out_dir) / "manipulation.json"));
  CHECK(j["certified"] == true);
  CHECK(j["min_pass_probability"].get<double>() >= 0.70);
  std::string csv = slurp(fs::path(config.out_dir) / "pass_probs.csv");
  CHECK(csv.rfind("history,pass_prob\n", 0) == 0);
}

TEST_CASE("manipulate seed menu parses, validates, and round-trips") {
  std::string text = R"(scenario = manipulate
[opinion.A]
kind = iid
probs = 0.3, 0.7
[manipulate]
horizon = 3
epsilon = 0.25
delta = 0.05
seed_menu = A
)";
  ScenarioConfig config = parse_config(text);
  CHECK(std::get<ManipulateParams>(config.params).seed_menu ==
        std::vector<std::string>{"A"});
  CHECK(parse_config(serialize_config(config)) == config);
  try {
    parse_config(R"(scenario = manipulate
[manipulate]
horizon = 2
epsilon = 0.2
delta = 0.1
seed_menu = ghost
)");
    FAIL_CHECK("expected ConfigInvalid");
  } catch (const ConfigInvalid& e) {
    CHECK(std::string(e.what()).find("ghost") != std::string::npos);
  }
}

TEST_CASE("table and halving opinions parse and build") {
  std::string text = R"(scenario = partition
mode = rational
[opinion.T]
kind = table
depth = 2
root = 1/2, 1/2
row.0 = 1, 0
row.1 = 1/3, 2/3
tail = 1/2, 1/2
[opinion.H]
kind = halving
cutoff = 3
[partition]
opinion = T
epsilon = 1/4
)";
  ScenarioConfig config = parse_config(text);
  CHECK(parse_config(serialize_config(config)) == config);
  auto table = build_opinion<Rational>(config.opinions, "T", 2);
  CHECK(table.cylinder_prob(History::parse("11")) == Rational(1, 3));
  auto halving = build_opinion<Rational>(config.opinions, "H", 2);
  CHECK(halving.cylinder_prob(History::parse("00")) == Rational(1, 8));
  CHECK(halving.next_distribution(History::parse("000"))[0] == Rational(1));  // past cutoff
}
