#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "optest/errors.hpp"
#include "optest/opinion.hpp"

namespace optest {

enum class ScenarioKind { merge, example1, bdtest, partition, manipulate, game };
enum class NumberMode { rational, floating };

std::string scenario_name(ScenarioKind kind);
ScenarioKind scenario_from_name(const std::string& name);
std::string mode_name(NumberMode mode);

// Opinion description as written in a scenario config; numeric values stay
// in their source text form ("1/3", "0.25") and are parsed under the run's
// number mode when the opinion is built.
struct OpinionSpec {
  std::string name;
  std::string kind;   // iid | time_iid | markov | mixture | table | halving
  std::string label;  // defaults to the name

  std::vector<std::string> probs;                        // iid
  std::vector<std::vector<std::string>> periods;         // time_iid, periods 1..T
  std::vector<std::string> tail;                         // time_iid/table; empty = uniform
  std::vector<std::string> initial;                      // markov
  std::vector<std::vector<std::string>> rows;            // markov, one per symbol
  std::vector<std::string> components;                   // mixture member names
  std::vector<std::string> weights;                      // mixture
  int depth = 0;                                         // table
  std::vector<std::pair<std::string, std::vector<std::string>>> table_rows;  // history -> dist
  int cutoff = -1;                                       // halving; -1 = none

  bool operator==(const OpinionSpec&) const = default;
};

struct MergeParams {
  std::string p, q;
  int t_max = 50;
  int lookahead = 4;
  std::string threshold = "0.1";
  std::string method = "exact";  // exact | montecarlo
  int n_paths = 0;
  int abs_continuity_depth = 0;  // 0 = skip the report
  bool operator==(const MergeParams&) const = default;
};

struct Example1Params {
  int n = 16;
  int k = 8;
  int t_max = -1;  // -1 = n
  std::string reference = "0";
  bool operator==(const Example1Params&) const = default;
};

struct BdtestParams {
  std::string epsilon = "0.05";
  std::string reference = "0";
  int max_depth = 4096;
  std::vector<std::string> opinions;
  bool operator==(const BdtestParams&) const = default;
};

struct PartitionParams {
  std::string opinion;
  std::string epsilon;
  int max_depth = 64;
  bool operator==(const PartitionParams&) const = default;
};

struct ManipulateParams {
  int horizon = 0;
  std::string epsilon;
  std::string delta;
  int max_iters = 300;
  std::string tol = "1e-6";
  std::vector<std::string> seed_menu;  // empty = uniform-distribution opinion
  bool operator==(const ManipulateParams&) const = default;
};

struct GameParams {
  std::string matrix_file;
  std::string tol = "1e-9";
  std::string method = "lp";  // lp | mw
  bool operator==(const GameParams&) const = default;
};

struct ScenarioConfig {
  ScenarioKind scenario = ScenarioKind::merge;
  NumberMode mode = NumberMode::rational;
  bool has_seed = false;
  std::uint64_t seed = 0;
  std::string out_dir = "out";
  int alphabet = 2;
  std::vector<OpinionSpec> opinions;
  std::variant<MergeParams, Example1Params, BdtestParams, PartitionParams, ManipulateParams,
               GameParams>
      params;

  bool operator==(const ScenarioConfig&) const = default;
};

// Parses and fully validates a scenario document: key = value lines with
// [section] headers and # comments. Unknown keys or sections are errors;
// every reported problem names the offending field. No computation starts
// before validation finishes.
ScenarioConfig parse_config(const std::string& text);

// Canonical text form; parse_config(serialize_config(c)) == c.
std::string serialize_config(const ScenarioConfig& config);

// Instantiates a named opinion from the config's spec list under scalar S.
// Mixture components resolve by name; reference cycles were rejected at
// parse time.
template <ProbScalar S>
Opinion<S> build_opinion(const std::vector<OpinionSpec>& specs, const std::string& name,
                         int alphabet_size);

namespace detail {

template <ProbScalar S>
std::vector<S> parse_vector(const std::vector<std::string>& texts) {
  std::vector<S> out;
  out.reserve(texts.size());
  for (const auto& t : texts) out.push_back(parse_scalar<S>(t));
  return out;
}

}  // namespace detail

template <ProbScalar S>
Opinion<S> build_opinion(const std::vector<OpinionSpec>& specs, const std::string& name,
                         int alphabet_size) {
  const OpinionSpec* spec = nullptr;
  for (const auto& s : specs)
    if (s.name == name) spec = &s;
  if (!spec) throw ConfigInvalid("opinion \"" + name + "\" is not defined");
  const std::string label = spec->label.empty() ? spec->name : spec->label;

  if (spec->kind == "iid") {
    return Opinion<S>::iid(detail::parse_vector<S>(spec->probs), label);
  }
  if (spec->kind == "time_iid") {
    std::vector<std::vector<S>> periods;
    for (const auto& p : spec->periods) periods.push_back(detail::parse_vector<S>(p));
    std::vector<S> tail = spec->tail.empty()
                              ? std::vector<S>(alphabet_size, ratio<S>(1, alphabet_size))
                              : detail::parse_vector<S>(spec->tail);
    return Opinion<S>::time_inhomogeneous(std::move(periods), std::move(tail), label);
  }
  if (spec->kind == "markov") {
    std::vector<std::vector<S>> rows;
    for (const auto& r : spec->rows) rows.push_back(detail::parse_vector<S>(r));
    return Opinion<S>::markov(detail::parse_vector<S>(spec->initial), std::move(rows), label);
  }
  if (spec->kind == "mixture") {
    std::vector<Opinion<S>> components;
    for (const auto& c : spec->components)
      components.push_back(build_opinion<S>(specs, c, alphabet_size));
    return Opinion<S>::bayes_mixture(detail::parse_vector<S>(spec->weights),
                                     std::move(components), label);
  }
  if (spec->kind == "table") {
    std::map<History, std::vector<S>> rows;
    for (const auto& [hist, dist] : spec->table_rows)
      rows[History::parse(hist)] = detail::parse_vector<S>(dist);
    std::vector<S> tail = spec->tail.empty()
                              ? std::vector<S>(alphabet_size, ratio<S>(1, alphabet_size))
                              : detail::parse_vector<S>(spec->tail);
    return Opinion<S>::table_from_rows(spec->depth, rows, alphabet_size, std::move(tail), label);
  }
  if (spec->kind == "halving") {
    auto kernel = std::make_shared<detail::HalvingKernel<S>>(spec->cutoff, 0);
    return Opinion<S>(kernel, label);
  }
  throw ConfigInvalid("opinion \"" + name + "\" has unknown kind \"" + spec->kind + "\"");
}

}  // namespace optest
