#pragma once

#include <string>

#include <json.hpp>

#include "optest/manipulation.hpp"
#include "optest/merging.hpp"
#include "optest/nonmerging.hpp"
#include "optest/testing.hpp"

namespace optest {

// JSON and CSV emitters. Key order is fixed and numbers print in shortest
// round-trip form, so identical inputs serialize byte-identically.

inline Json to_json(const History& h) { return Json(h.str()); }

inline Json to_json(const RejectionRegion& region) {
  Json cyls = Json::array();
  for (const auto& h : region.cylinders()) cyls.push_back(h.str());
  return Json{{"cylinders", cyls}, {"full_cover", region.covers_everything()}};
}

template <ProbScalar S>
Json to_json(const CylinderPartition<S>& partition) {
  Json cells = Json::array();
  for (std::size_t i = 0; i < partition.cells.size(); ++i) {
    cells.push_back(Json{{"cell", partition.cells[i].str()},
                         {"prob", json_scalar(partition.probs[i])}});
  }
  return Json{{"epsilon", json_scalar(partition.epsilon)},
              {"cell_count", partition.cells.size()},
              {"cells", cells}};
}

// Cells drawn as an indented tree, one line per cell.
template <ProbScalar S>
std::string partition_tree_text(const CylinderPartition<S>& partition) {
  std::string out;
  for (std::size_t i = 0; i < partition.cells.size(); ++i) {
    const History& h = partition.cells[i];
    out.append(2 * h.length(), ' ');
    out += h.empty() ? "(root)" : h.str();
    out += "  " + scalar_str(partition.probs[i]) + "\n";
  }
  return out;
}

template <ProbScalar S>
Json to_json(const MergingCurve<S>& curve) {
  Json rows = Json::array();
  for (std::size_t t = 0; t < curve.rows.size(); ++t) {
    rows.push_back(Json{{"t", t},
                        {"mean", json_scalar(curve.rows[t].mean)},
                        {"max", json_scalar(curve.rows[t].max)},
                        {"exceedance", json_scalar(curve.rows[t].exceedance)}});
  }
  Json j{{"lookahead", curve.lookahead},
         {"threshold", json_scalar(curve.threshold)},
         {"method", curve.method == CurveMethod::exact_enumeration ? "exact" : "montecarlo"}};
  if (curve.method == CurveMethod::monte_carlo) {
    j["n_paths"] = curve.n_paths;
    j["seed"] = curve.seed;
  }
  j["rows"] = rows;
  return j;
}

template <ProbScalar S>
std::string curve_csv(const MergingCurve<S>& curve) {
  std::string out = "t,mean,max,exceedance\n";
  for (std::size_t t = 0; t < curve.rows.size(); ++t) {
    out += std::to_string(t) + "," + scalar_str(curve.rows[t].mean) + "," +
           scalar_str(curve.rows[t].max) + "," + scalar_str(curve.rows[t].exceedance) + "\n";
  }
  return out;
}

template <ProbScalar S>
Json to_json(const AbsContinuityReport<S>& report) {
  Json violations = Json::array();
  for (const auto& h : report.violations) violations.push_back(h.str());
  return Json{{"horizon", report.horizon},
              {"max_ratio", report.ratio_infinite ? Json("infinite")
                                                  : json_scalar(report.max_ratio)},
              {"p_mass_on_q_support", json_scalar(report.p_mass_on_q_support)},
              {"violations", violations}};
}

inline Json to_json(const MatrixGame& game) {
  Json payoffs = Json::array();
  for (const auto& row : game.payoffs) payoffs.push_back(row);
  Json j{{"rows", game.rows()}, {"cols", game.cols()}, {"payoffs", payoffs}};
  if (!game.row_labels.empty()) j["row_labels"] = game.row_labels;
  if (!game.col_labels.empty()) j["col_labels"] = game.col_labels;
  return j;
}

inline Json to_json(const GameSolution& sol) {
  return Json{{"value", sol.value},
              {"row_strategy", sol.row_strategy},
              {"col_strategy", sol.col_strategy},
              {"duality_gap", sol.duality_gap},
              {"iterations", sol.iterations}};
}

template <ProbScalar S>
Json to_json(const Strategy<S>& strategy) {
  Json support = Json::array();
  for (std::size_t i = 0; i < strategy.support.size(); ++i) {
    support.push_back(Json{{"weight", json_scalar(strategy.weights[i])},
                           {"opinion", strategy.support[i].describe()}});
  }
  return Json{{"support", support}};
}

inline Json to_json(const ManipulationReport& report) {
  Json trace = Json::array();
  for (const auto& it : report.trace) {
    trace.push_back(Json{{"game_value", it.game_value},
                         {"guarantee", it.guarantee},
                         {"best_response_payoff", it.best_response_payoff}});
  }
  return Json{{"horizon", report.horizon},
              {"test", report.test_label},
              {"epsilon", report.epsilon},
              {"delta", report.delta},
              {"achieved_value", report.achieved_value},
              {"min_pass_probability", report.min_pass_probability},
              {"iterations", report.iterations},
              {"certified", report.certified},
              {"strategy", to_json(report.strategy)},
              {"trace", trace}};
}

inline std::string pass_prob_csv(const ManipulationReport& report, int alphabet_size) {
  std::vector<History> histories = all_histories(alphabet_size, report.horizon);
  std::string out = "history,pass_prob\n";
  for (std::size_t i = 0; i < histories.size(); ++i)
    out += histories[i].str() + "," + scalar_str(report.per_path_pass[i]) + "\n";
  return out;
}

}  // namespace optest
