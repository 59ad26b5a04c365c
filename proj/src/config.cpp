#include "optest/config.hpp"

#include <algorithm>
#include <cctype>
#include <set>
#include <sstream>

namespace optest {

namespace {

std::string trim(const std::string& s) {
  std::size_t b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return "";
  std::size_t e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

std::vector<std::string> split_list(const std::string& value) {
  std::vector<std::string> out;
  std::string item;
  std::istringstream in(value);
  while (std::getline(in, item, ',')) {
    item = trim(item);
    if (item.empty()) throw ConfigInvalid("empty entry in list \"" + value + "\"");
    out.push_back(item);
  }
  return out;
}

// Raw parsed document: per section, key -> value, with consumption tracking
// so unknown keys can be reported by name.
struct Document {
  struct Section {
    std::map<std::string, std::string> values;
    std::set<std::string> consumed;
  };
  std::map<std::string, Section> sections;  // "" is the top level
  std::vector<std::string> section_order;

  static Document scan(const std::string& text) {
    Document doc;
    doc.sections[""];
    doc.section_order.push_back("");
    std::istringstream in(text);
    std::string line;
    std::string current;
    int line_no = 0;
    while (std::getline(in, line)) {
      ++line_no;
      auto hash = line.find('#');
      if (hash != std::string::npos) line.erase(hash);
      line = trim(line);
      if (line.empty()) continue;
      if (line.front() == '[') {
        if (line.back() != ']')
          throw ConfigInvalid("line " + std::to_string(line_no) + ": unterminated section header");
        current = trim(line.substr(1, line.size() - 2));
        if (current.empty())
          throw ConfigInvalid("line " + std::to_string(line_no) + ": empty section name");
        if (doc.sections.count(current))
          throw ConfigInvalid("duplicate section [" + current + "]");
        doc.sections[current];
        doc.section_order.push_back(current);
        continue;
      }
      auto eq = line.find('=');
      if (eq == std::string::npos)
        throw ConfigInvalid("line " + std::to_string(line_no) + ": expected key = value");
      std::string key = trim(line.substr(0, eq));
      std::string value = trim(line.substr(eq + 1));
      if (key.empty())
        throw ConfigInvalid("line " + std::to_string(line_no) + ": empty key");
      if (value.empty())
        throw ConfigInvalid("line " + std::to_string(line_no) + ": empty value for \"" + key +
                            "\"");
      auto& section = doc.sections[current];
      if (section.values.count(key))
        throw ConfigInvalid("duplicate key \"" + qualify(current, key) + "\"");
      section.values[key] = value;
    }
    return doc;
  }

  static std::string qualify(const std::string& section, const std::string& key) {
    return section.empty() ? key : section + "." + key;
  }

  bool has(const std::string& section, const std::string& key) const {
    auto it = sections.find(section);
    return it != sections.end() && it->second.values.count(key);
  }

  std::string take(const std::string& section, const std::string& key) {
    auto& s = sections.at(section);
    auto it = s.values.find(key);
    if (it == s.values.end())
      throw ConfigInvalid("missing required field \"" + qualify(section, key) + "\"");
    s.consumed.insert(key);
    return it->second;
  }

  std::string take_or(const std::string& section, const std::string& key,
                      const std::string& fallback) {
    if (!has(section, key)) return fallback;
    return take(section, key);
  }

  void finish_section(const std::string& section) {
    auto it = sections.find(section);
    if (it == sections.end()) return;
    for (const auto& [key, value] : it->second.values) {
      if (!it->second.consumed.count(key))
        throw ConfigInvalid("unknown field \"" + qualify(section, key) + "\"");
    }
  }
};

int parse_int(const std::string& text, const std::string& field) {
  try {
    std::size_t pos = 0;
    int v = std::stoi(text, &pos);
    if (pos != text.size()) throw std::invalid_argument(text);
    return v;
  } catch (const std::exception&) {
    throw ConfigInvalid("field \"" + field + "\" must be an integer, got \"" + text + "\"");
  }
}

std::uint64_t parse_u64(const std::string& text, const std::string& field) {
  try {
    std::size_t pos = 0;
    unsigned long long v = std::stoull(text, &pos);
    if (pos != text.size()) throw std::invalid_argument(text);
    return static_cast<std::uint64_t>(v);
  } catch (const std::exception&) {
    throw ConfigInvalid("field \"" + field + "\" must be a nonnegative integer, got \"" + text +
                        "\"");
  }
}

// Validates a scalar's text under both number modes and returns it as
// written; optionally require it to lie in (lo, hi] style ranges.
std::string check_scalar(const std::string& text, const std::string& field) {
  try {
    (void)parse_scalar<Rational>(text);
    (void)parse_scalar<double>(text);
  } catch (const std::exception&) {
    throw ConfigInvalid("field \"" + field + "\" is not a number: \"" + text + "\"");
  }
  return text;
}

std::string check_probability(const std::string& text, const std::string& field,
                              bool allow_zero, bool allow_one) {
  check_scalar(text, field);
  Rational v = parse_scalar<Rational>(text);
  if (v < 0 || (v == 0 && !allow_zero))
    throw ConfigInvalid("field \"" + field + "\" must be positive, got \"" + text + "\"");
  if (v > 1 || (v == 1 && !allow_one))
    throw ConfigInvalid("field \"" + field + "\" must be below one, got \"" + text + "\"");
  return text;
}

std::vector<std::string> check_scalar_list(const std::string& value, const std::string& field) {
  auto items = split_list(value);
  for (const auto& item : items) check_scalar(item, field);
  return items;
}

OpinionSpec parse_opinion_section(Document& doc, const std::string& section, int alphabet) {
  OpinionSpec spec;
  spec.name = section.substr(std::string("opinion.").size());
  if (spec.name.empty()) throw ConfigInvalid("empty opinion name in [" + section + "]");
  spec.kind = doc.take(section, "kind");
  spec.label = doc.take_or(section, "label", "");

  auto field = [&](const std::string& key) { return Document::qualify(section, key); };
  if (spec.kind == "iid") {
    spec.probs = check_scalar_list(doc.take(section, "probs"), field("probs"));
    if (static_cast<int>(spec.probs.size()) != alphabet)
      throw ConfigInvalid("field \"" + field("probs") + "\" must list one probability per symbol");
  } else if (spec.kind == "time_iid") {
    for (int k = 1; doc.has(section, "period." + std::to_string(k)); ++k) {
      spec.periods.push_back(check_scalar_list(doc.take(section, "period." + std::to_string(k)),
                                               field("period." + std::to_string(k))));
    }
    if (spec.periods.empty())
      throw ConfigInvalid("time_iid opinion [" + section + "] needs period.1, period.2, ...");
    if (doc.has(section, "tail"))
      spec.tail = check_scalar_list(doc.take(section, "tail"), field("tail"));
  } else if (spec.kind == "markov") {
    spec.initial = check_scalar_list(doc.take(section, "initial"), field("initial"));
    for (int s = 0; s < alphabet; ++s) {
      spec.rows.push_back(check_scalar_list(doc.take(section, "row." + std::to_string(s)),
                                            field("row." + std::to_string(s))));
    }
  } else if (spec.kind == "mixture") {
    spec.components = split_list(doc.take(section, "components"));
    spec.weights = check_scalar_list(doc.take(section, "weights"), field("weights"));
    if (spec.components.size() != spec.weights.size())
      throw ConfigInvalid("[" + section + "]: components and weights must have equal length");
  } else if (spec.kind == "table") {
    spec.depth = parse_int(doc.take(section, "depth"), field("depth"));
    if (spec.depth < 1) throw ConfigInvalid("field \"" + field("depth") + "\" must be >= 1");
    if (doc.has(section, "tail"))
      spec.tail = check_scalar_list(doc.take(section, "tail"), field("tail"));
    // root row plus any row.<history> rows
    spec.table_rows.emplace_back("", check_scalar_list(doc.take(section, "root"), field("root")));
    std::vector<std::string> row_keys;
    for (const auto& [key, value] : doc.sections.at(section).values) {
      if (key.rfind("row.", 0) == 0) row_keys.push_back(key);
    }
    std::sort(row_keys.begin(), row_keys.end());
    for (const auto& key : row_keys) {
      std::string hist = key.substr(4);
      try {
        History h = History::parse(hist);
        for (int a : h)
          if (a >= alphabet) throw std::invalid_argument("symbol outside alphabet");
        if (static_cast<int>(h.length()) >= spec.depth)
          throw std::invalid_argument("row history at or beyond the table depth");
      } catch (const std::exception& e) {
        throw ConfigInvalid("field \"" + field(key) + "\": " + e.what());
      }
      spec.table_rows.emplace_back(hist, check_scalar_list(doc.take(section, key), field(key)));
    }
  } else if (spec.kind == "halving") {
    if (alphabet != 2)
      throw ConfigInvalid("[" + section + "]: halving opinions need a binary alphabet");
    if (doc.has(section, "cutoff")) {
      spec.cutoff = parse_int(doc.take(section, "cutoff"), field("cutoff"));
      if (spec.cutoff < 1) throw ConfigInvalid("field \"" + field("cutoff") + "\" must be >= 1");
    }
  } else {
    throw ConfigInvalid("[" + section + "]: unknown opinion kind \"" + spec.kind + "\"");
  }
  doc.finish_section(section);
  return spec;
}

void check_opinion_references(const std::vector<OpinionSpec>& specs) {
  // every mixture component resolves, and no reference cycles
  enum class State { unvisited, visiting, done };
  std::map<std::string, State> state;
  auto find = [&](const std::string& name) -> const OpinionSpec* {
    for (const auto& s : specs)
      if (s.name == name) return &s;
    return nullptr;
  };
  auto visit = [&](auto&& self, const OpinionSpec& spec) -> void {
    state[spec.name] = State::visiting;
    if (spec.kind == "mixture") {
      for (const auto& c : spec.components) {
        const OpinionSpec* child = find(c);
        if (!child)
          throw ConfigInvalid("mixture \"" + spec.name + "\" references unknown opinion \"" + c +
                              "\"");
        if (state[c] == State::visiting)
          throw ConfigInvalid("mixture \"" + spec.name + "\" participates in a reference cycle");
        if (state[c] == State::unvisited) self(self, *child);
      }
    }
    state[spec.name] = State::done;
  };
  for (const auto& s : specs) {
    if (state[s.name] == State::unvisited) visit(visit, s);
  }
}

const std::string& require_opinion(const std::vector<OpinionSpec>& specs, const std::string& name,
                                   const std::string& field) {
  for (const auto& s : specs)
    if (s.name == name) return name;
  throw ConfigInvalid("field \"" + field + "\" references undefined opinion \"" + name + "\"");
}

void check_reference_pattern(const std::string& text, const std::string& field, int alphabet) {
  try {
    ReferencePath path = ReferencePath::parse(text);
    if (path.max_symbol() >= alphabet)
      throw std::invalid_argument("symbol outside alphabet");
  } catch (const std::exception& e) {
    throw ConfigInvalid("field \"" + field + "\" is not a valid reference pattern: " + e.what());
  }
}

}  // namespace

std::string scenario_name(ScenarioKind kind) {
  switch (kind) {
    case ScenarioKind::merge: return "merge";
    case ScenarioKind::example1: return "example1";
    case ScenarioKind::bdtest: return "bdtest";
    case ScenarioKind::partition: return "partition";
    case ScenarioKind::manipulate: return "manipulate";
    case ScenarioKind::game: return "game";
  }
  return "unknown";
}

ScenarioKind scenario_from_name(const std::string& name) {
  if (name == "merge") return ScenarioKind::merge;
  if (name == "example1") return ScenarioKind::example1;
  if (name == "bdtest") return ScenarioKind::bdtest;
  if (name == "partition") return ScenarioKind::partition;
  if (name == "manipulate") return ScenarioKind::manipulate;
  if (name == "game") return ScenarioKind::game;
  throw ConfigInvalid("unknown scenario \"" + name + "\"");
}

std::string mode_name(NumberMode mode) {
  return mode == NumberMode::rational ? "rational" : "float";
}

ScenarioConfig parse_config(const std::string& text) {
  Document doc = Document::scan(text);
  ScenarioConfig config;

  config.scenario = scenario_from_name(doc.take("", "scenario"));
  std::string scenario = scenario_name(config.scenario);

  // Exact scenarios default to rational arithmetic; solver-backed ones run
  // in float.
  bool float_only =
      config.scenario == ScenarioKind::manipulate || config.scenario == ScenarioKind::game;
  std::string default_mode =
      (float_only || config.scenario == ScenarioKind::merge) ? "float" : "rational";
  std::string mode = doc.take_or("", "mode", default_mode);
  if (mode == "rational") {
    config.mode = NumberMode::rational;
  } else if (mode == "float") {
    config.mode = NumberMode::floating;
  } else {
    throw ConfigInvalid("field \"mode\" must be rational or float, got \"" + mode + "\"");
  }
  if (float_only && config.mode == NumberMode::rational)
    throw ConfigInvalid("scenario \"" + scenario + "\" runs in float mode only");

  if (doc.has("", "seed")) {
    config.has_seed = true;
    config.seed = parse_u64(doc.take("", "seed"), "seed");
  }
  config.out_dir = doc.take_or("", "out", "out");
  config.alphabet = parse_int(doc.take_or("", "alphabet", "2"), "alphabet");
  if (config.alphabet < 2 || config.alphabet > 10)
    throw ConfigInvalid("field \"alphabet\" must lie in 2..10");
  doc.finish_section("");

  for (const auto& section : doc.section_order) {
    if (section.rfind("opinion.", 0) == 0)
      config.opinions.push_back(parse_opinion_section(doc, section, config.alphabet));
  }
  check_opinion_references(config.opinions);
  // instantiate each opinion once under the declared mode, so a distribution
  // that fails to normalize (or a table missing a reachable row) is reported
  // here rather than mid-run
  for (const auto& spec : config.opinions) {
    try {
      if (config.mode == NumberMode::rational) {
        (void)build_opinion<Rational>(config.opinions, spec.name, config.alphabet);
      } else {
        (void)build_opinion<double>(config.opinions, spec.name, config.alphabet);
      }
    } catch (const ConfigInvalid&) {
      throw;
    } catch (const std::exception& e) {
      throw ConfigInvalid("opinion \"" + spec.name + "\": " + e.what());
    }
  }

  for (const auto& section : doc.section_order) {
    if (!section.empty() && section.rfind("opinion.", 0) != 0 && section != scenario)
      throw ConfigInvalid("unknown section [" + section + "]");
  }
  if (!doc.sections.count(scenario)) doc.sections[scenario];  // all-defaults section

  auto field = [&](const std::string& key) { return Document::qualify(scenario, key); };
  switch (config.scenario) {
    case ScenarioKind::merge: {
      MergeParams p;
      p.p = require_opinion(config.opinions, doc.take(scenario, "p"), field("p"));
      p.q = require_opinion(config.opinions, doc.take(scenario, "q"), field("q"));
      p.t_max = parse_int(doc.take_or(scenario, "t_max", "50"), field("t_max"));
      if (p.t_max < 0) throw ConfigInvalid("field \"" + field("t_max") + "\" must be >= 0");
      p.lookahead = parse_int(doc.take_or(scenario, "lookahead", "4"), field("lookahead"));
      if (p.lookahead < 1)
        throw ConfigInvalid("field \"" + field("lookahead") + "\" must be >= 1");
      p.threshold =
          check_probability(doc.take_or(scenario, "threshold", "0.1"), field("threshold"),
                            /*allow_zero=*/true, /*allow_one=*/true);
      p.method = doc.take_or(scenario, "method", "exact");
      if (p.method != "exact" && p.method != "montecarlo")
        throw ConfigInvalid("field \"" + field("method") + "\" must be exact or montecarlo");
      if (p.method == "montecarlo") {
        p.n_paths = parse_int(doc.take(scenario, "n_paths"), field("n_paths"));
        if (p.n_paths < 1)
          throw ConfigInvalid("field \"" + field("n_paths") + "\" must be >= 1");
        if (!config.has_seed)
          throw ConfigInvalid("field \"seed\" is required for monte-carlo runs");
      }
      if (doc.has(scenario, "abs_continuity_depth")) {
        p.abs_continuity_depth =
            parse_int(doc.take(scenario, "abs_continuity_depth"), field("abs_continuity_depth"));
        if (p.abs_continuity_depth < 1)
          throw ConfigInvalid("field \"" + field("abs_continuity_depth") + "\" must be >= 1");
      }
      config.params = p;
      break;
    }
    case ScenarioKind::example1: {
      Example1Params p;
      p.n = parse_int(doc.take_or(scenario, "n", "16"), field("n"));
      p.k = parse_int(doc.take_or(scenario, "k", "8"), field("k"));
      if (p.n < 1) throw ConfigInvalid("field \"" + field("n") + "\" must be >= 1");
      if (p.k < 1) throw ConfigInvalid("field \"" + field("k") + "\" must be >= 1");
      p.t_max = parse_int(doc.take_or(scenario, "t_max", std::to_string(p.n)), field("t_max"));
      if (p.t_max < 0 || p.t_max > p.n)
        throw ConfigInvalid("field \"" + field("t_max") + "\" must lie in 0..n");
      p.reference = doc.take_or(scenario, "reference", "0");
      check_reference_pattern(p.reference, field("reference"), 2);
      if (config.alphabet != 2)
        throw ConfigInvalid("scenario \"example1\" needs a binary alphabet");
      config.params = p;
      break;
    }
    case ScenarioKind::bdtest: {
      BdtestParams p;
      p.epsilon = check_probability(doc.take_or(scenario, "epsilon", "0.05"), field("epsilon"),
                                    /*allow_zero=*/false, /*allow_one=*/true);
      p.reference = doc.take_or(scenario, "reference", "0");
      check_reference_pattern(p.reference, field("reference"), config.alphabet);
      p.max_depth = parse_int(doc.take_or(scenario, "max_depth", "4096"), field("max_depth"));
      if (p.max_depth < 1)
        throw ConfigInvalid("field \"" + field("max_depth") + "\" must be >= 1");
      for (const auto& name : split_list(doc.take(scenario, "opinions")))
        p.opinions.push_back(require_opinion(config.opinions, name, field("opinions")));
      config.params = p;
      break;
    }
    case ScenarioKind::partition: {
      PartitionParams p;
      p.opinion =
          require_opinion(config.opinions, doc.take(scenario, "opinion"), field("opinion"));
      p.epsilon = check_probability(doc.take(scenario, "epsilon"), field("epsilon"),
                                    /*allow_zero=*/false, /*allow_one=*/true);
      p.max_depth = parse_int(doc.take_or(scenario, "max_depth", "64"), field("max_depth"));
      if (p.max_depth < 1)
        throw ConfigInvalid("field \"" + field("max_depth") + "\" must be >= 1");
      config.params = p;
      break;
    }
    case ScenarioKind::manipulate: {
      ManipulateParams p;
      p.horizon = parse_int(doc.take(scenario, "horizon"), field("horizon"));
      if (p.horizon < 1) throw ConfigInvalid("field \"" + field("horizon") + "\" must be >= 1");
      p.epsilon = check_probability(doc.take(scenario, "epsilon"), field("epsilon"),
                                    /*allow_zero=*/false, /*allow_one=*/false);
      p.delta = check_probability(doc.take(scenario, "delta"), field("delta"),
                                  /*allow_zero=*/false, /*allow_one=*/true);
      {
        Rational eps = parse_scalar<Rational>(p.epsilon);
        Rational del = parse_scalar<Rational>(p.delta);
        if (del > Rational(1) - eps)
          throw ConfigInvalid("field \"" + field("delta") + "\" must lie in (0, 1 - epsilon]");
      }
      p.max_iters = parse_int(doc.take_or(scenario, "max_iters", "300"), field("max_iters"));
      if (p.max_iters < 1)
        throw ConfigInvalid("field \"" + field("max_iters") + "\" must be >= 1");
      p.tol = check_scalar(doc.take_or(scenario, "tol", "1e-6"), field("tol"));
      if (parse_scalar<double>(p.tol) <= 0)
        throw ConfigInvalid("field \"" + field("tol") + "\" must be positive");
      if (doc.has(scenario, "seed_menu")) {
        for (const auto& name : split_list(doc.take(scenario, "seed_menu")))
          p.seed_menu.push_back(require_opinion(config.opinions, name, field("seed_menu")));
      }
      config.params = p;
      break;
    }
    case ScenarioKind::game: {
      GameParams p;
      p.matrix_file = doc.take(scenario, "matrix_file");
      p.tol = check_scalar(doc.take_or(scenario, "tol", "1e-9"), field("tol"));
      if (parse_scalar<double>(p.tol) <= 0)
        throw ConfigInvalid("field \"" + field("tol") + "\" must be positive");
      p.method = doc.take_or(scenario, "method", "lp");
      if (p.method != "lp" && p.method != "mw")
        throw ConfigInvalid("field \"" + field("method") + "\" must be lp or mw");
      config.params = p;
      break;
    }
  }
  doc.finish_section(scenario);
  return config;
}

namespace {

std::string join(const std::vector<std::string>& items) {
  std::string out;
  for (std::size_t i = 0; i < items.size(); ++i) {
    if (i) out += ", ";
    out += items[i];
  }
  return out;
}

}  // namespace

std::string serialize_config(const ScenarioConfig& config) {
  std::string out;
  out += "scenario = " + scenario_name(config.scenario) + "\n";
  out += "mode = " + mode_name(config.mode) + "\n";
  if (config.has_seed) out += "seed = " + std::to_string(config.seed) + "\n";
  out += "out = " + config.out_dir + "\n";
  out += "alphabet = " + std::to_string(config.alphabet) + "\n";

  for (const auto& spec : config.opinions) {
    out += "\n[opinion." + spec.name + "]\n";
    out += "kind = " + spec.kind + "\n";
    if (!spec.label.empty()) out += "label = " + spec.label + "\n";
    if (spec.kind == "iid") out += "probs = " + join(spec.probs) + "\n";
    if (spec.kind == "time_iid") {
      for (std::size_t k = 0; k < spec.periods.size(); ++k)
        out += "period." + std::to_string(k + 1) + " = " + join(spec.periods[k]) + "\n";
      if (!spec.tail.empty()) out += "tail = " + join(spec.tail) + "\n";
    }
    if (spec.kind == "markov") {
      out += "initial = " + join(spec.initial) + "\n";
      for (std::size_t s = 0; s < spec.rows.size(); ++s)
        out += "row." + std::to_string(s) + " = " + join(spec.rows[s]) + "\n";
    }
    if (spec.kind == "mixture") {
      out += "components = " + join(spec.components) + "\n";
      out += "weights = " + join(spec.weights) + "\n";
    }
    if (spec.kind == "table") {
      out += "depth = " + std::to_string(spec.depth) + "\n";
      for (const auto& [hist, dist] : spec.table_rows) {
        out += (hist.empty() ? std::string("root") : "row." + hist) + " = " + join(dist) + "\n";
      }
      if (!spec.tail.empty()) out += "tail = " + join(spec.tail) + "\n";
    }
    if (spec.kind == "halving" && spec.cutoff >= 0)
      out += "cutoff = " + std::to_string(spec.cutoff) + "\n";
  }

  std::string scenario = scenario_name(config.scenario);
  out += "\n[" + scenario + "]\n";
  switch (config.scenario) {
    case ScenarioKind::merge: {
      const auto& p = std::get<MergeParams>(config.params);
      out += "p = " + p.p + "\nq = " + p.q + "\n";
      out += "t_max = " + std::to_string(p.t_max) + "\n";
      out += "lookahead = " + std::to_string(p.lookahead) + "\n";
      out += "threshold = " + p.threshold + "\n";
      out += "method = " + p.method + "\n";
      if (p.method == "montecarlo") out += "n_paths = " + std::to_string(p.n_paths) + "\n";
      if (p.abs_continuity_depth > 0)
        out += "abs_continuity_depth = " + std::to_string(p.abs_continuity_depth) + "\n";
      break;
    }
    case ScenarioKind::example1: {
      const auto& p = std::get<Example1Params>(config.params);
      out += "n = " + std::to_string(p.n) + "\n";
      out += "k = " + std::to_string(p.k) + "\n";
      out += "t_max = " + std::to_string(p.t_max) + "\n";
      out += "reference = " + p.reference + "\n";
      break;
    }
    case ScenarioKind::bdtest: {
      const auto& p = std::get<BdtestParams>(config.params);
      out += "epsilon = " + p.epsilon + "\n";
      out += "reference = " + p.reference + "\n";
      out += "max_depth = " + std::to_string(p.max_depth) + "\n";
      out += "opinions = " + join(p.opinions) + "\n";
      break;
    }
    case ScenarioKind::partition: {
      const auto& p = std::get<PartitionParams>(config.params);
      out += "opinion = " + p.opinion + "\n";
      out += "epsilon = " + p.epsilon + "\n";
      out += "max_depth = " + std::to_string(p.max_depth) + "\n";
      break;
    }
    case ScenarioKind::manipulate: {
      const auto& p = std::get<ManipulateParams>(config.params);
      out += "horizon = " + std::to_string(p.horizon) + "\n";
      out += "epsilon = " + p.epsilon + "\n";
      out += "delta = " + p.delta + "\n";
      out += "max_iters = " + std::to_string(p.max_iters) + "\n";
      out += "tol = " + p.tol + "\n";
      if (!p.seed_menu.empty()) out += "seed_menu = " + join(p.seed_menu) + "\n";
      break;
    }
    case ScenarioKind::game: {
      const auto& p = std::get<GameParams>(config.params);
      out += "matrix_file = " + p.matrix_file + "\n";
      out += "tol = " + p.tol + "\n";
      out += "method = " + p.method + "\n";
      break;
    }
  }
  return out;
}

}  // namespace optest
