#include "optest/manipulation.hpp"

#include <algorithm>
#include <cmath>

namespace optest {

namespace {

// 0/1 pass column of one menu opinion over the depth-d histories.
std::vector<double> pass_column(const Test<double>& test, const Opinion<double>& opinion,
                                const std::vector<History>& histories, int horizon) {
  RejectionRegion region = test.rule(opinion);
  if (region.max_depth() > static_cast<std::size_t>(horizon))
    throw RegionDeeperThanHorizon("rejection region for \"" + opinion.label() +
                                  "\" is deeper than the game horizon");
  std::vector<double> col(histories.size());
  for (std::size_t i = 0; i < histories.size(); ++i)
    col[i] = region.membership(histories[i]) == RejectionRegion::Membership::out ? 1.0 : 0.0;
  return col;
}

MatrixGame assemble(const std::vector<std::vector<double>>& columns,
                    const std::vector<std::string>& col_labels, std::size_t rows) {
  MatrixGame game;
  game.payoffs.assign(rows, std::vector<double>(columns.size(), 0.0));
  for (std::size_t j = 0; j < columns.size(); ++j)
    for (std::size_t i = 0; i < rows; ++i) game.payoffs[i][j] = columns[j][i];
  game.col_labels = col_labels;
  return game;
}

std::vector<double> clean_distribution(std::vector<double> v) {
  double total = 0.0;
  for (double& x : v) {
    if (x < 0.0) x = 0.0;
    total += x;
  }
  for (double& x : v) x /= total;
  return v;
}

}  // namespace

ManipulationReport double_oracle_manipulate(const Test<double>& test, int horizon, double epsilon,
                                            double delta, int max_iters, double tol,
                                            int alphabet_size,
                                            std::vector<Opinion<double>> seed_menu) {
  if (!(epsilon > 0.0) || !(epsilon < 1.0))
    throw std::invalid_argument("epsilon must lie in (0, 1)");
  if (!(delta > 0.0) || delta > 1.0 - epsilon)
    throw std::invalid_argument("delta must lie in (0, 1 - epsilon]");
  if (max_iters < 1) throw std::invalid_argument("max_iters must be >= 1");

  const int m = alphabet_size;
  std::vector<History> histories = all_histories(m, horizon);
  const std::size_t n_rows = histories.size();
  const double target = 1.0 - epsilon - delta;
  // Stopping needs a hair above the target so the certification scan cannot
  // fail on float dust when the restricted value lands exactly on it.
  const double stop_at = target + 1e-9;

  std::vector<Opinion<double>> menu;
  std::vector<std::vector<double>> columns;
  std::vector<std::string> col_labels;
  auto add_column = [&](Opinion<double> opinion) {
    columns.push_back(pass_column(test, opinion, histories, horizon));
    col_labels.push_back(opinion.label());
    menu.push_back(std::move(opinion));
  };
  if (seed_menu.empty()) {
    add_column(nature_to_opinion<double>(std::vector<double>(n_rows, 1.0 / double(n_rows)),
                                         horizon, m, "menu_0"));
  } else {
    for (auto& opinion : seed_menu) add_column(std::move(opinion));
  }

  ManipulationReport report;
  report.horizon = horizon;
  report.test_label = test.label;
  report.epsilon = epsilon;
  report.delta = delta;

  GameSolution sol;
  double guarantee = 0.0;
  int iter = 0;
  while (iter < max_iters) {
    ++iter;
    MatrixGame game = assemble(columns, col_labels, n_rows);
    sol = solve_matrix_game(game, tol);
    std::vector<double> pass_profile(n_rows, 0.0);
    guarantee = 1.0;
    for (std::size_t i = 0; i < n_rows; ++i) {
      double v = 0.0;
      for (std::size_t j = 0; j < columns.size(); ++j) v += columns[j][i] * sol.col_strategy[j];
      pass_profile[i] = v;
      guarantee = std::min(guarantee, v);
    }

    ManipulationIteration stat;
    stat.game_value = sol.value;
    stat.guarantee = guarantee;
    stat.best_response_payoff = 0.0;
    if (guarantee >= stop_at) {
      report.trace.push_back(stat);
      break;
    }

    // Expert's best response to Nature's mixture: report it. The reply's
    // pass probability against the mixture it answers is 1 minus that
    // mixture's own rejected mass, at least 1 - eps by type-I control.
    std::vector<double> mu = clean_distribution(sol.row_strategy);

    // The LP returns a vertex optimum concentrated on few histories, so the
    // reply to it covers little new ground per round. A second reply to a
    // near-optimal Nature mixture graded by the expert's current weakness
    // (heavy where the solved mixture passes rarely, light where it passes
    // often) rejects currently strong cells and covers every weak one,
    // which moves the restricted value in large strides.
    std::vector<double> graded(n_rows);
    double graded_total = 0.0;
    for (std::size_t i = 0; i < n_rows; ++i) {
      double w = 1.05 - pass_profile[i];
      w = w > 0.0 ? w : 0.0;
      graded[i] = w * w * w * w;
      graded_total += graded[i];
    }
    for (double& w : graded) w /= graded_total;

    bool added = false;
    auto try_add = [&](const std::vector<double>& mixture, bool record_payoff) {
      Opinion<double> candidate = nature_to_opinion<double>(
          mixture, horizon, m, "menu_" + std::to_string(menu.size()));
      std::vector<double> col = pass_column(test, candidate, histories, horizon);
      if (record_payoff) {
        double payoff = 0.0;
        for (std::size_t i = 0; i < n_rows; ++i) payoff += mixture[i] * col[i];
        stat.best_response_payoff = payoff;
      }
      for (const auto& existing : columns)
        if (existing == col) return;
      columns.push_back(std::move(col));
      col_labels.push_back(candidate.label());
      menu.push_back(std::move(candidate));
      added = true;
    };
    try_add(mu, true);
    try_add(graded, false);
    report.trace.push_back(stat);
    if (!added) break;  // no new column can move the restricted value
  }

  // Final strategy: the solved column mixture with negligible weights
  // dropped.
  std::vector<double> weights = clean_distribution(sol.col_strategy);
  Strategy<double> strategy;
  for (std::size_t j = 0; j < menu.size(); ++j) {
    if (weights[j] > 1e-12) {
      strategy.support.push_back(menu[j]);
      strategy.weights.push_back(weights[j]);
    }
  }
  double total = 0.0;
  for (double w : strategy.weights) total += w;
  for (double& w : strategy.weights) w /= total;

  // Certification scan, independent of the solver and the cached columns.
  report.per_path_pass.reserve(n_rows);
  double min_pass = 1.0;
  for (const auto& h : histories) {
    double v = pass_prob(strategy, test, h);
    report.per_path_pass.push_back(v);
    min_pass = std::min(min_pass, v);
  }
  report.achieved_value = sol.value;
  report.min_pass_probability = min_pass;
  report.strategy = std::move(strategy);
  report.iterations = iter;
  report.certified = min_pass >= target;
  return report;
}

}  // namespace optest
