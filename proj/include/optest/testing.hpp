#pragma once

#include <algorithm>
#include <functional>
#include <numeric>
#include <string>
#include <utility>
#include <vector>

#include "optest/opinion.hpp"

namespace optest {

// A finite union of cylinders, normalized so no listed history is a prefix
// of another. Membership of any sufficiently long history is decidable.
class RejectionRegion {
 public:
  RejectionRegion() = default;

  // Drops duplicates and any cylinder that has a proper prefix in the list;
  // the union is unchanged. Cylinders end up in lexicographic order.
  static RejectionRegion normalize(std::vector<History> cylinders, int alphabet_size) {
    std::sort(cylinders.begin(), cylinders.end());
    RejectionRegion region;
    region.alphabet_ = alphabet_size;
    for (auto& h : cylinders) {
      if (!region.cylinders_.empty() && region.cylinders_.back().is_prefix_of(h)) continue;
      region.cylinders_.push_back(std::move(h));
    }
    // Prefix-free cylinders cover the whole space iff their uniform masses
    // m^-depth add up to one; exact in rationals.
    Rational mass(0);
    for (const auto& h : region.cylinders_)
      mass += Rational(BigInt(1), boost::multiprecision::pow(BigInt(alphabet_size),
                                                             static_cast<unsigned>(h.length())));
    region.full_cover_ = mass == Rational(1);
    return region;
  }

  const std::vector<History>& cylinders() const { return cylinders_; }
  bool empty() const { return cylinders_.empty(); }
  bool covers_everything() const { return full_cover_; }
  int alphabet_size() const { return alphabet_; }

  std::size_t max_depth() const {
    std::size_t d = 0;
    for (const auto& h : cylinders_) d = std::max(d, h.length());
    return d;
  }

  enum class Membership { in, out, undecided };

  // Whether every path extending h lies in the region (in), none does (out),
  // or h is too short to tell (undecided).
  Membership membership(const History& h) const {
    bool undecided = false;
    for (const auto& c : cylinders_) {
      if (c.is_prefix_of(h)) return Membership::in;
      if (h.is_proper_prefix_of(c)) undecided = true;
    }
    return undecided ? Membership::undecided : Membership::out;
  }

  bool operator==(const RejectionRegion&) const = default;

 private:
  std::vector<History> cylinders_;
  int alphabet_ = 2;
  bool full_cover_ = false;
};

// A test maps each announced opinion to the rejection region considered
// inconsistent with it. The rule is deterministic.
template <ProbScalar S>
struct Test {
  std::string label;
  S level{};  // nominal type-I level epsilon
  std::function<RejectionRegion(const Opinion<S>&)> rule;
};

template <ProbScalar S>
S region_prob(const Opinion<S>& opinion, const RejectionRegion& region) {
  S total = S(0);
  for (const auto& h : region.cylinders()) total += opinion.cylinder_prob(h);
  return total;
}

template <ProbScalar S>
S type1_error(const Test<S>& test, const Opinion<S>& opinion) {
  return region_prob(opinion, test.rule(opinion));
}

// A finite partition of the path space into cylinders, each carrying
// probability at most epsilon.
template <ProbScalar S>
struct CylinderPartition {
  std::vector<History> cells;  // prefix-free, lexicographic
  std::vector<S> probs;        // aligned with cells; sums to 1 exactly
  S epsilon{};
};

// Splits any cell with probability above epsilon into its children until all
// cells comply. Opinions that keep more than epsilon on a single path past
// max_depth have no such partition; that surfaces as AtomDetected.
template <ProbScalar S>
CylinderPartition<S> cylinder_partition(const Opinion<S>& opinion, const S& epsilon,
                                        int max_depth) {
  if (!(epsilon > S(0)) || epsilon > S(1))
    throw std::invalid_argument("epsilon must lie in (0, 1]");
  if (max_depth < 1) throw std::invalid_argument("max_depth must be >= 1");

  CylinderPartition<S> partition;
  partition.epsilon = epsilon;
  History h;
  auto split = [&](auto&& self, const detail::KernelPtr<S>& state, const S& mass) -> void {
    if (!(mass > epsilon)) {
      partition.cells.push_back(h);
      partition.probs.push_back(mass);
      return;
    }
    if (static_cast<int>(h.length()) == max_depth)
      throw AtomDetected("cell \"" + h.str() + "\" keeps probability above epsilon at max depth");
    std::vector<S> dist = state->next();
    for (std::size_t a = 0; a < dist.size(); ++a) {
      h.push_back(static_cast<int>(a));
      S child_mass = mass * dist[a];
      self(self, child_mass > S(0) ? state->advance(static_cast<int>(a)) : state, child_mass);
      h.pop_back();
    }
  };
  split(split, opinion.kernel(), S(1));
  return partition;
}

// Test whose region for P is the single cylinder along the reference path at
// the first time its P-probability falls strictly below epsilon. Controls
// type I error at epsilon by construction and is refuted, for any finite-
// support strategy, on the deepest of its support cylinders.
template <ProbScalar S>
Test<S> make_cylinder_test(const ReferencePath& reference, const S& epsilon, int max_depth) {
  if (!(epsilon > S(0)) || epsilon > S(1))
    throw std::invalid_argument("epsilon must lie in (0, 1]");
  if (max_depth < 1) throw std::invalid_argument("max_depth must be >= 1");
  Test<S> test;
  test.label = "cylinder(ref=" + reference.str() + ")";
  test.level = epsilon;
  test.rule = [reference, epsilon, max_depth](const Opinion<S>& opinion) {
    if (reference.max_symbol() >= opinion.alphabet_size())
      throw std::invalid_argument("reference pattern leaves the opinion's alphabet");
    detail::KernelPtr<S> state = opinion.kernel();
    S mass = S(1);
    for (int t = 1; t <= max_depth; ++t) {
      int a = reference.at(static_cast<std::size_t>(t - 1));
      S step = state->next()[a];
      mass *= step;
      if (mass < epsilon)
        return RejectionRegion::normalize({reference.prefix(static_cast<std::size_t>(t))},
                                          opinion.alphabet_size());
      state = state->advance(a);  // mass >= epsilon > 0 here
    }
    throw AtomDetected("opinion \"" + opinion.label() +
                       "\" keeps reference-path probability above epsilon through depth " +
                       std::to_string(max_depth));
  };
  return test;
}

// Finite-horizon baseline test: reject the depth-d cylinders of smallest
// probability under the announced opinion, greedily while the rejected mass
// stays within epsilon (ties broken lexicographically). Controls type I
// error at epsilon for every opinion by construction.
template <ProbScalar S>
Test<S> make_tail_rejection_test(int horizon, const S& epsilon) {
  if (!(epsilon > S(0)) || !(epsilon < S(1)))
    throw std::invalid_argument("epsilon must lie in (0, 1)");
  if (horizon < 1) throw std::invalid_argument("horizon must be >= 1");
  Test<S> test;
  test.label = "tail_rejection(d=" + std::to_string(horizon) + ")";
  test.level = epsilon;
  test.rule = [horizon, epsilon](const Opinion<S>& opinion) {
    int m = opinion.alphabet_size();
    check_enumerable(m, horizon);
    std::vector<History> cells = all_histories(m, horizon);
    std::vector<S> probs;
    probs.reserve(cells.size());
    History h;
    auto fill = [&](auto&& self, const detail::KernelPtr<S>& state, const S& mass,
                    int remaining) -> void {
      if (remaining == 0) {
        probs.push_back(mass);
        return;
      }
      std::vector<S> dist = state->next();
      for (int a = 0; a < m; ++a) {
        S child = mass * dist[a];
        self(self, child > S(0) ? state->advance(a) : state, child, remaining - 1);
      }
    };
    fill(fill, opinion.kernel(), S(1), horizon);

    std::vector<std::size_t> order(cells.size());
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::stable_sort(order.begin(), order.end(),
                     [&](std::size_t a, std::size_t b) { return probs[a] < probs[b]; });
    std::vector<History> chosen;
    S cumulative = S(0);
    for (std::size_t idx : order) {
      if (cumulative + probs[idx] > epsilon) break;
      cumulative += probs[idx];
      chosen.push_back(cells[idx]);
    }
    return RejectionRegion::normalize(std::move(chosen), m);
  };
  return test;
}

}  // namespace optest
