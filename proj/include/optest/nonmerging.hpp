#pragma once

#include <string>
#include <vector>

#include "optest/opinion.hpp"

namespace optest {

// Binary opinion with independent coordinates and Prob(X_k = 0) = 2^-k for
// every period k. It puts probability one on the tail event "symbol 1
// appears infinitely often" (the per-period chances of a 1 sum to infinity).
template <ProbScalar S>
Opinion<S> halving_opinion(std::string label = "P_inf") {
  return Opinion<S>(std::make_shared<detail::HalvingKernel<S>>(-1, 0), std::move(label));
}

// Same through period n, then symbol 0 becomes certain; puts probability
// zero on "symbol 1 infinitely often".
template <ProbScalar S>
Opinion<S> halving_opinion_truncated(int n, std::string label = {}) {
  if (n < 1) throw std::invalid_argument("truncation period must be >= 1");
  if (label.empty()) label = "P_" + std::to_string(n);
  return Opinion<S>(std::make_shared<detail::HalvingKernel<S>>(n, 0), std::move(label));
}

// A computable stand-in for the classic non-merging construction: an equal
// mix of the halving opinion and a uniform window of its truncations,
//     1/2 * P_inf + 1/2 * (1/K) * sum_{n=N+1..N+K} P_n.
// Every truncation in the window agrees with P_inf on the first N periods,
// so the mixture's cylinder probabilities equal P_inf's for all histories of
// length <= N (exactly, in rational mode), yet the two opinions disagree
// forever about the tail event "symbol 1 infinitely often".
template <ProbScalar S>
struct NonmergingSurrogate {
  int identity_depth = 0;  // N: cylinder identity is guaranteed through here
  int window = 0;          // K
  Opinion<S> opinion;      // the mixture
  Opinion<S> reference;    // P_inf
};

template <ProbScalar S>
NonmergingSurrogate<S> make_nonmerging_surrogate(int identity_depth, int window) {
  if (identity_depth < 1) throw std::invalid_argument("identity depth must be >= 1");
  if (window < 1) throw std::invalid_argument("window must be >= 1");
  std::vector<S> weights;
  std::vector<Opinion<S>> components;
  weights.push_back(ratio<S>(1, 2));
  components.push_back(halving_opinion<S>());
  for (int n = identity_depth + 1; n <= identity_depth + window; ++n) {
    weights.push_back(ratio<S>(1, 2) / S(window));
    components.push_back(halving_opinion_truncated<S>(n));
  }
  std::string label = "surrogate(N=" + std::to_string(identity_depth) +
                      ",K=" + std::to_string(window) + ")";
  return NonmergingSurrogate<S>{identity_depth, window,
                                Opinion<S>::bayes_mixture(weights, components, label),
                                halving_opinion<S>()};
}

// Conditional-probability gap on the tail event A = {symbol 1 infinitely
// often} after observing `reference`:
//     P_inf(A | ref) - P_mix(A | ref).
// A is invisible at any finite depth, so the two tail constants are supplied
// analytically (P_inf(A) = 1, truncated components give A probability 0);
// the rest is exact cylinder arithmetic. Within the identity regime the gap
// is exactly 1/2.
template <ProbScalar S>
S nonmerging_gap(const NonmergingSurrogate<S>& surrogate, const History& reference) {
  if (static_cast<int>(reference.length()) > surrogate.identity_depth)
    throw std::invalid_argument("gap is defined only within the identity regime (t <= N)");
  // P_inf(A | ref) = 1 and P_mix(A ∩ ref) = 1/2 * P_inf(ref), so the gap is
  // 1 - (1/2) P_inf(ref) / P_mix(ref).
  S p_inf = surrogate.reference.cylinder_prob(reference);
  S p_mix = surrogate.opinion.cylinder_prob(reference);
  return S(1) - ratio<S>(1, 2) * p_inf / p_mix;
}

}  // namespace optest
