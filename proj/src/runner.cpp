#include "optest/runner.hpp"

#include <chrono>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include "optest/serialize.hpp"
#include "optest/version.hpp"

namespace optest {

namespace fs = std::filesystem;

namespace {

void write_file(const fs::path& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  out << content;
  if (!out) throw std::runtime_error("failed writing " + path.string());
}

std::string dump(const Json& j) { return j.dump(2) + "\n"; }

struct ArtifactWriter {
  fs::path dir;
  std::vector<std::string> names;

  void add(const std::string& name, const std::string& content) {
    write_file(dir / name, content);
    names.push_back(name);
  }
};

template <ProbScalar S>
S scenario_scalar(const std::string& text) {
  return parse_scalar<S>(text);
}

template <ProbScalar S>
void run_merge(const ScenarioConfig& config, ArtifactWriter& out, bool quiet) {
  const auto& p = std::get<MergeParams>(config.params);
  Opinion<S> P = build_opinion<S>(config.opinions, p.p, config.alphabet);
  Opinion<S> Q = build_opinion<S>(config.opinions, p.q, config.alphabet);
  CurveMethod method =
      p.method == "exact" ? CurveMethod::exact_enumeration : CurveMethod::monte_carlo;
  MergingCurve<S> curve = merging_curve<S>(P, Q, p.t_max, p.lookahead,
                                           scenario_scalar<S>(p.threshold), method, p.n_paths,
                                           config.seed);
  out.add("merge_curve.csv", curve_csv(curve));
  Json j = to_json(curve);
  j["p"] = P.describe();
  j["q"] = Q.describe();
  out.add("merge_curve.json", dump(j));
  if (p.abs_continuity_depth > 0) {
    auto report = abs_continuity_report<S>(P, Q, p.abs_continuity_depth);
    out.add("abs_continuity.json", dump(to_json(report)));
  }
  if (!quiet) {
    const auto& last = curve.rows.back();
    std::cout << "merge: t_max=" << p.t_max << " L=" << curve.lookahead
              << " final exceedance=" << scalar_str(last.exceedance)
              << " final mean=" << scalar_str(last.mean) << "\n";
  }
}

template <ProbScalar S>
void run_example1(const ScenarioConfig& config, ArtifactWriter& out, bool quiet) {
  const auto& p = std::get<Example1Params>(config.params);
  auto surrogate = make_nonmerging_surrogate<S>(p.n, p.k);
  ReferencePath reference = ReferencePath::parse(p.reference);
  int t_max = p.t_max < 0 ? p.n : p.t_max;

  Json rows = Json::array();
  std::string csv = "t,reference,gap,surrogate_prob,reference_prob,identity_holds\n";
  bool all_half = true, all_identities = true;
  for (int t = 0; t <= t_max; ++t) {
    History h = reference.prefix(static_cast<std::size_t>(t));
    S gap = nonmerging_gap<S>(surrogate, h);
    S mix_prob = surrogate.opinion.cylinder_prob(h);
    S ref_prob = surrogate.reference.cylinder_prob(h);
    bool identity = mix_prob == ref_prob;
    bool half = gap == ratio<S>(1, 2);
    all_half = all_half && half;
    all_identities = all_identities && identity;
    rows.push_back(Json{{"t", t},
                        {"reference", h.str()},
                        {"gap", json_scalar(gap)},
                        {"surrogate_prob", json_scalar(mix_prob)},
                        {"reference_prob", json_scalar(ref_prob)},
                        {"identity_holds", identity}});
    csv += std::to_string(t) + "," + h.str() + "," + scalar_str(gap) + "," +
           scalar_str(mix_prob) + "," + scalar_str(ref_prob) + "," +
           (identity ? "true" : "false") + "\n";
  }
  Json j{{"n", p.n},
         {"k", p.k},
         {"reference", p.reference},
         {"all_gaps_one_half", all_half},
         {"all_identities_hold", all_identities},
         {"rows", rows}};
  out.add("example1.json", dump(j));
  out.add("example1.csv", csv);
  if (!quiet) {
    std::cout << "example1: N=" << p.n << " K=" << p.k << " gaps==1/2: "
              << (all_half ? "yes" : "NO") << " identities: "
              << (all_identities ? "yes" : "NO") << "\n";
  }
}

template <ProbScalar S>
void run_bdtest(const ScenarioConfig& config, ArtifactWriter& out, bool quiet) {
  const auto& p = std::get<BdtestParams>(config.params);
  ReferencePath reference = ReferencePath::parse(p.reference);
  S epsilon = scenario_scalar<S>(p.epsilon);
  Test<S> test = make_cylinder_test<S>(reference, epsilon, p.max_depth);

  Strategy<S> uniform;
  Json rows = Json::array();
  std::string csv = "opinion,rejection_depth,type1_error,controlled\n";
  for (const auto& name : p.opinions) {
    Opinion<S> opinion = build_opinion<S>(config.opinions, name, config.alphabet);
    RejectionRegion region = test.rule(opinion);
    S err = region_prob(opinion, region);
    const History& cyl = region.cylinders().front();
    rows.push_back(Json{{"opinion", name},
                        {"rejection_cylinder", cyl.str()},
                        {"rejection_depth", cyl.length()},
                        {"type1_error", json_scalar(err)},
                        {"controlled", err < epsilon}});
    csv += name + "," + std::to_string(cyl.length()) + "," + scalar_str(err) + "," +
           (err < epsilon ? "true" : "false") + "\n";
    uniform.support.push_back(opinion);
    uniform.weights.push_back(ratio<S>(1, static_cast<long long>(p.opinions.size())));
  }
  History witness = nonmanipulability_witness(test, uniform, reference);
  S witness_pass = pass_prob(uniform, test, witness);
  Json j{{"test", test.label},
         {"epsilon", json_scalar(epsilon)},
         {"reference", p.reference},
         {"opinions", rows},
         {"witness_cylinder", witness.str()},
         {"witness_depth", witness.length()},
         {"witness_pass_prob", json_scalar(witness_pass)}};
  out.add("bdtest.json", dump(j));
  out.add("bdtest.csv", csv);
  if (!quiet) {
    std::cout << "bdtest: " << p.opinions.size() << " opinions controlled at "
              << scalar_str(epsilon) << "; uniform strategy refuted on cylinder "
              << witness.str() << " (pass prob " << scalar_str(witness_pass) << ")\n";
  }
}

template <ProbScalar S>
void run_partition(const ScenarioConfig& config, ArtifactWriter& out, bool quiet) {
  const auto& p = std::get<PartitionParams>(config.params);
  Opinion<S> opinion = build_opinion<S>(config.opinions, p.opinion, config.alphabet);
  auto partition = cylinder_partition<S>(opinion, scenario_scalar<S>(p.epsilon), p.max_depth);
  out.add("partition.json", dump(to_json(partition)));
  std::string csv = "cell,prob\n";
  for (std::size_t i = 0; i < partition.cells.size(); ++i)
    csv += partition.cells[i].str() + "," + scalar_str(partition.probs[i]) + "\n";
  out.add("partition.csv", csv);
  if (!quiet) {
    std::cout << "partition: " << partition.cells.size() << " cells, each at most "
              << scalar_str(partition.epsilon) << "\n"
              << partition_tree_text(partition);
  }
}

void run_manipulate(const ScenarioConfig& config, ArtifactWriter& out, bool quiet,
                    bool& certified) {
  const auto& p = std::get<ManipulateParams>(config.params);
  double epsilon = parse_scalar<double>(p.epsilon);
  Test<double> test = make_tail_rejection_test<double>(p.horizon, epsilon);
  std::vector<Opinion<double>> seed_menu;
  for (const auto& name : p.seed_menu)
    seed_menu.push_back(build_opinion<double>(config.opinions, name, config.alphabet));
  ManipulationReport report = double_oracle_manipulate(
      test, p.horizon, epsilon, parse_scalar<double>(p.delta), p.max_iters,
      parse_scalar<double>(p.tol), config.alphabet, std::move(seed_menu));
  out.add("manipulation.json", dump(to_json(report)));
  out.add("pass_probs.csv", pass_prob_csv(report, config.alphabet));
  certified = report.certified;
  if (!quiet) {
    std::cout << "manipulate: " << (report.certified ? "certified" : "NOT certified")
              << " value=" << report.achieved_value
              << " min_pass=" << report.min_pass_probability
              << " iterations=" << report.iterations
              << " support=" << report.strategy.support.size() << "\n";
  }
}

void run_game(const ScenarioConfig& config, ArtifactWriter& out, bool quiet) {
  const auto& p = std::get<GameParams>(config.params);
  std::ifstream in(p.matrix_file, std::ios::binary);
  if (!in) throw ConfigInvalid("field \"game.matrix_file\": cannot read " + p.matrix_file);
  std::stringstream buffer;
  buffer << in.rdbuf();
  MatrixGame game = parse_matrix_text(buffer.str());
  GameMethod method =
      p.method == "mw" ? GameMethod::multiplicative_weights : GameMethod::linear_program;
  GameSolution sol = solve_matrix_game(game, parse_scalar<double>(p.tol), method);
  Json j = to_json(sol);
  j["matrix"] = to_json(game);
  out.add("solution.json", dump(j));
  out.add("game.txt", matrix_text(game));
  if (!quiet) {
    std::cout << "game: value=" << sol.value << " gap=" << sol.duality_gap << "\n";
  }
}

}  // namespace

RunManifest run_scenario(const ScenarioConfig& config, const std::string& config_text,
                         bool quiet) {
  auto start = std::chrono::steady_clock::now();
  ArtifactWriter out;
  out.dir = config.out_dir;
  fs::create_directories(out.dir);

  bool certified = true;
  bool rational = config.mode == NumberMode::rational;
  switch (config.scenario) {
    case ScenarioKind::merge:
      rational ? run_merge<Rational>(config, out, quiet) : run_merge<double>(config, out, quiet);
      break;
    case ScenarioKind::example1:
      rational ? run_example1<Rational>(config, out, quiet)
               : run_example1<double>(config, out, quiet);
      break;
    case ScenarioKind::bdtest:
      rational ? run_bdtest<Rational>(config, out, quiet)
               : run_bdtest<double>(config, out, quiet);
      break;
    case ScenarioKind::partition:
      rational ? run_partition<Rational>(config, out, quiet)
               : run_partition<double>(config, out, quiet);
      break;
    case ScenarioKind::manipulate:
      run_manipulate(config, out, quiet, certified);
      break;
    case ScenarioKind::game:
      run_game(config, out, quiet);
      break;
  }

  RunManifest manifest;
  manifest.scenario = scenario_name(config.scenario);
  manifest.mode = mode_name(config.mode);
  manifest.version = kVersion;
  manifest.has_seed = config.has_seed;
  manifest.seed = config.seed;
  manifest.artifacts = out.names;
  manifest.duration_ms = std::chrono::duration<double, std::milli>(
                             std::chrono::steady_clock::now() - start)
                             .count();

  Json j{{"version", manifest.version},
         {"scenario", manifest.scenario},
         {"mode", manifest.mode},
         {"artifacts", manifest.artifacts},
         {"duration_ms", manifest.duration_ms},
         {"config", config_text}};
  if (manifest.has_seed) j["seed"] = manifest.seed;
  // written last and atomically: its presence marks a completed run
  fs::path tmp = out.dir / "manifest.json.tmp";
  write_file(tmp, dump(j));
  fs::rename(tmp, out.dir / "manifest.json");

  if (!certified)
    throw NonConvergence(
        "manipulation report is not certified; diagnostics in manipulation.json");
  return manifest;
}

}  // namespace optest
