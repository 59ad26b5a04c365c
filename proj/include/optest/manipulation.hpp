#pragma once

#include <string>
#include <utility>
#include <vector>

#include "optest/game.hpp"
#include "optest/testing.hpp"

namespace optest {

// Finite-support randomization over opinions.
template <ProbScalar S>
struct Strategy {
  std::vector<Opinion<S>> support;
  std::vector<S> weights;  // positive, sum to 1
};

template <ProbScalar S>
void validate_strategy(const Strategy<S>& strategy) {
  if (strategy.support.empty() || strategy.support.size() != strategy.weights.size())
    throw std::invalid_argument("strategy needs matching support and weights");
  for (std::size_t i = 0; i < strategy.support.size(); ++i)
    for (std::size_t j = i + 1; j < strategy.support.size(); ++j)
      if (strategy.support[i].label() == strategy.support[j].label())
        throw std::invalid_argument("strategy support labels must be distinct");
  S total = S(0);
  for (const auto& w : strategy.weights) {
    if (w <= S(0)) throw std::invalid_argument("strategy weights must be positive");
    total += w;
  }
  if constexpr (std::same_as<S, Rational>) {
    if (total != S(1)) throw std::invalid_argument("strategy weights must sum to 1");
  } else {
    if (std::fabs(total - 1.0) > 1e-9)
      throw std::invalid_argument("strategy weights must sum to 1");
  }
}

// Probability that a draw from the strategy passes the test on every path
// through the given history: the total weight of support opinions whose
// rejection region does not contain it. The history must be long enough to
// decide membership for each support region.
template <ProbScalar S>
S pass_prob(const Strategy<S>& strategy, const Test<S>& test, const History& history) {
  validate_strategy(strategy);
  S total = S(0);
  for (std::size_t i = 0; i < strategy.support.size(); ++i) {
    RejectionRegion region = test.rule(strategy.support[i]);
    switch (region.membership(history)) {
      case RejectionRegion::Membership::out:
        total += strategy.weights[i];
        break;
      case RejectionRegion::Membership::in:
        break;
      case RejectionRegion::Membership::undecided:
        throw UndecidedMembership("history \"" + history.str() +
                                  "\" is shorter than the rejection region of \"" +
                                  strategy.support[i].label() + "\"");
    }
  }
  return total;
}

// For a cylinder test, the witness cylinder refuting the strategy: the
// deepest of the support opinions' rejection cylinders along the reference
// path. Every support opinion is rejected on every path through it, so the
// strategy's pass probability there is exactly zero.
template <ProbScalar S>
History nonmanipulability_witness(const Test<S>& test, const Strategy<S>& strategy,
                                  const ReferencePath& reference) {
  validate_strategy(strategy);
  std::size_t deepest = 0;
  for (const auto& opinion : strategy.support) {
    RejectionRegion region = test.rule(opinion);
    if (region.cylinders().size() != 1)
      throw std::invalid_argument("witness needs a test whose regions are single cylinders");
    const History& cyl = region.cylinders().front();
    if (cyl != reference.prefix(cyl.length()))
      throw std::invalid_argument("witness needs rejection cylinders on the reference path");
    deepest = std::max(deepest, cyl.length());
  }
  History witness = reference.prefix(deepest);
  if (pass_prob(strategy, test, witness) != S(0))
    throw std::logic_error("witness cylinder has nonzero pass probability");
  return witness;
}

// Payoff matrix of the finite-horizon Nature-vs-expert game: rows are the
// depth-d histories (Nature's point masses), columns the menu opinions, and
// an entry is 1 when the history escapes that opinion's rejection region.
template <ProbScalar S>
MatrixGame build_game(const Test<S>& test, int horizon, const std::vector<Opinion<S>>& menu) {
  if (menu.empty()) throw std::invalid_argument("menu must be nonempty");
  int m = menu.front().alphabet_size();
  std::vector<History> histories = all_histories(m, horizon);
  MatrixGame game;
  game.payoffs.assign(histories.size(), std::vector<double>(menu.size(), 0.0));
  game.row_labels.reserve(histories.size());
  for (const auto& h : histories) game.row_labels.push_back(h.str());
  for (std::size_t j = 0; j < menu.size(); ++j) {
    game.col_labels.push_back(menu[j].label());
    RejectionRegion region = test.rule(menu[j]);
    if (region.max_depth() > static_cast<std::size_t>(horizon))
      throw RegionDeeperThanHorizon("rejection region for \"" + menu[j].label() +
                                    "\" is deeper than the game horizon");
    for (std::size_t i = 0; i < histories.size(); ++i) {
      game.payoffs[i][j] =
          region.membership(histories[i]) == RejectionRegion::Membership::out ? 1.0 : 0.0;
    }
  }
  return game;
}

// Lifts a distribution over depth-d histories (lexicographic order) to a
// reportable opinion: a table kernel whose depth-d cylinder distribution
// equals the input exactly, with a uniform tail.
template <ProbScalar S>
Opinion<S> nature_to_opinion(const std::vector<S>& mass_by_history, int horizon,
                             int alphabet_size, std::string label = {}) {
  std::vector<S> tail(alphabet_size, ratio<S>(1, alphabet_size));
  return Opinion<S>(detail::TableKernel<S>::from_leaf_masses(mass_by_history, horizon,
                                                             alphabet_size, std::move(tail)),
                    std::move(label));
}

struct ManipulationIteration {
  double game_value = 0.0;            // restricted game value
  double guarantee = 0.0;             // expert security level of the solved mixture
  double best_response_payoff = 0.0;  // added column's payoff against Nature's optimum
};

// Outcome of a manipulation search at a finite horizon. `certified` means
// the returned strategy passes with probability at least 1-eps-delta on
// every depth-d history, re-checked by a direct scan.
struct ManipulationReport {
  int horizon = 0;
  std::string test_label;
  double epsilon = 0.0;
  double delta = 0.0;
  double achieved_value = 0.0;
  double min_pass_probability = 0.0;
  Strategy<double> strategy;
  std::vector<double> per_path_pass;  // all depth-d histories, lexicographic
  int iterations = 0;
  bool certified = false;
  std::vector<ManipulationIteration> trace;
};

// Double-oracle column generation on the Nature-vs-expert game: solve the
// restricted game, let the expert answer Nature's optimal mixture by
// reporting it (type-I control makes that answer worth at least 1-eps), and
// stop once the expert's guarantee reaches 1-eps-delta. Returns an
// uncertified report with diagnostics when the iteration budget runs out.
// The initial menu defaults to the single uniform-distribution opinion; any
// seed menu whose rejection regions fit the horizon is admissible.
ManipulationReport double_oracle_manipulate(const Test<double>& test, int horizon, double epsilon,
                                            double delta, int max_iters, double tol,
                                            int alphabet_size = 2,
                                            std::vector<Opinion<double>> seed_menu = {});

}  // namespace optest
