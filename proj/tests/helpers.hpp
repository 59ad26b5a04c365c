#pragma once

#include <cstdint>
#include <vector>

#include "optest/numeric.hpp"
#include "optest/opinion.hpp"

namespace optest::test {

// The standard kernel corpus used by property tests: Bernoulli(p) for
// p = 0.1..0.9, one two-state Markov kernel, and the half/half Bayes
// mixture of Bernoulli(1/3) and Bernoulli(2/3).
template <ProbScalar S>
std::vector<Opinion<S>> standard_corpus() {
  std::vector<Opinion<S>> corpus;
  for (int tenths = 1; tenths <= 9; ++tenths) {
    corpus.push_back(
        Opinion<S>::bernoulli(ratio<S>(tenths, 10), "bern" + std::to_string(tenths)));
  }
  corpus.push_back(Opinion<S>::markov({ratio<S>(1, 2), ratio<S>(1, 2)},
                                      {{ratio<S>(7, 10), ratio<S>(3, 10)},
                                       {ratio<S>(3, 10), ratio<S>(7, 10)}},
                                      "markov"));
  corpus.push_back(Opinion<S>::bayes_mixture(
      {ratio<S>(1, 2), ratio<S>(1, 2)},
      {Opinion<S>::bernoulli(ratio<S>(1, 3)), Opinion<S>::bernoulli(ratio<S>(2, 3))}, "mix"));
  return corpus;
}

// Independent oracle: cylinder probability of a mixture of IID kernels,
// computed directly from the product formula (no Opinion machinery).
template <ProbScalar S>
S iid_mixture_cylinder(const std::vector<S>& weights,
                       const std::vector<std::vector<S>>& component_probs, const History& h) {
  S total = S(0);
  for (std::size_t i = 0; i < weights.size(); ++i) {
    S prod = weights[i];
    for (int a : h) prod *= component_probs[i][a];
    total += prod;
  }
  return total;
}

// Deterministic pseudo-random histories for property tests.
inline History random_history(SplitMix64& rng, int alphabet_size, int length) {
  History h;
  for (int i = 0; i < length; ++i)
    h.push_back(static_cast<int>(rng.next() % static_cast<std::uint64_t>(alphabet_size)));
  return h;
}

}  // namespace optest::test
