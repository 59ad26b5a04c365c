#pragma once

#include <algorithm>
#include <map>
#include <memory>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "optest/errors.hpp"
#include "optest/history.hpp"
#include "optest/numeric.hpp"

namespace optest {

using Json = nlohmann::ordered_json;

template <ProbScalar S>
Json json_scalar(const S& x) {
  if constexpr (std::same_as<S, Rational>) {
    return Json(scalar_str(x));
  } else {
    return Json(x);
  }
}

template <ProbScalar S>
Json json_vector(const std::vector<S>& xs) {
  Json arr = Json::array();
  for (const auto& x : xs) arr.push_back(json_scalar(x));
  return arr;
}

template <ProbScalar S>
void validate_distribution(const std::vector<S>& p) {
  if (p.size() < 2) throw std::invalid_argument("distribution needs at least two entries");
  S total = S(0);
  for (const auto& v : p) {
    if (v < S(0)) throw std::invalid_argument("negative probability");
    total += v;
  }
  if constexpr (std::same_as<S, Rational>) {
    if (total != S(1)) throw std::invalid_argument("probabilities must sum to 1");
  } else {
    if (std::fabs(total - 1.0) > 1e-12) throw std::invalid_argument("probabilities must sum to 1");
  }
}

namespace detail {

// A forecast kernel in conditioned form: next() is the one-step-ahead
// distribution at the current state and advance(a) is the state after
// observing symbol a (caller guarantees next()[a] > 0). Kernels are
// immutable; advancing shares structure.
template <ProbScalar S>
class Kernel : public std::enable_shared_from_this<Kernel<S>> {
 public:
  virtual ~Kernel() = default;
  virtual int alphabet_size() const = 0;
  virtual std::vector<S> next() const = 0;
  virtual std::shared_ptr<const Kernel<S>> advance(int symbol) const = 0;
  // Canonical state identifier: equal keys imply equal conditional laws.
  // Used to merge histories during exact curve enumeration.
  virtual void state_key(std::string& out) const = 0;
  virtual Json describe() const = 0;
};

template <ProbScalar S>
using KernelPtr = std::shared_ptr<const Kernel<S>>;

inline void append_pointer(std::string& out, const void* p) {
  char buf[2 + 2 * sizeof(void*) + 1];
  std::snprintf(buf, sizeof(buf), "%p", p);
  out += buf;
}

inline std::string weight_key(const Rational& w) { return w.str(); }
inline std::string weight_key(double w) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%a", w);
  return buf;
}

template <ProbScalar S>
class IidKernel final : public Kernel<S> {
 public:
  explicit IidKernel(std::vector<S> probs) : probs_(std::move(probs)) {
    validate_distribution(probs_);
  }
  int alphabet_size() const override { return static_cast<int>(probs_.size()); }
  std::vector<S> next() const override { return probs_; }
  KernelPtr<S> advance(int) const override { return this->shared_from_this(); }
  void state_key(std::string& out) const override {
    out += "iid@";
    append_pointer(out, this);
  }
  Json describe() const override {
    return Json{{"kind", "iid"}, {"probs", json_vector(probs_)}};
  }
  const std::vector<S>& probs() const { return probs_; }

 private:
  std::vector<S> probs_;
};

// Independent coordinates with an explicit per-period table and a constant
// tail distribution beyond it.
template <ProbScalar S>
class PeriodKernel final : public Kernel<S> {
 public:
  struct Def {
    std::vector<std::vector<S>> periods;
    std::vector<S> tail;
  };

  PeriodKernel(std::shared_ptr<const Def> def, std::size_t offset)
      : def_(std::move(def)), offset_(offset) {}

  static KernelPtr<S> create(std::vector<std::vector<S>> periods, std::vector<S> tail) {
    validate_distribution(tail);
    for (const auto& p : periods) {
      validate_distribution(p);
      if (p.size() != tail.size())
        throw std::invalid_argument("period distributions must share one alphabet");
    }
    auto def = std::make_shared<Def>(Def{std::move(periods), std::move(tail)});
    return std::make_shared<PeriodKernel>(std::move(def), 0);
  }

  int alphabet_size() const override { return static_cast<int>(def_->tail.size()); }
  std::vector<S> next() const override {
    return offset_ < def_->periods.size() ? def_->periods[offset_] : def_->tail;
  }
  KernelPtr<S> advance(int) const override {
    std::size_t next_offset = std::min(offset_ + 1, def_->periods.size());
    return std::make_shared<PeriodKernel>(def_, next_offset);
  }
  void state_key(std::string& out) const override {
    out += "per@";
    append_pointer(out, def_.get());
    out += "+" + std::to_string(offset_);
  }
  Json describe() const override {
    Json periods = Json::array();
    for (const auto& p : def_->periods) periods.push_back(json_vector(p));
    return Json{{"kind", "time_iid"},
                {"periods", periods},
                {"tail", json_vector(def_->tail)},
                {"offset", offset_}};
  }

 private:
  std::shared_ptr<const Def> def_;
  std::size_t offset_;
};

// Binary kernel with independent coordinates where symbol 0 has probability
// 2^-k in period k; an optional cutoff n makes symbol 0 certain after period
// n. Closed-form, so it is exact at any depth in rational mode.
template <ProbScalar S>
class HalvingKernel final : public Kernel<S> {
 public:
  HalvingKernel(int cutoff, int period) : cutoff_(cutoff), period_(period) {}

  int alphabet_size() const override { return 2; }
  std::vector<S> next() const override {
    int k = period_ + 1;
    if (cutoff_ >= 0 && k > cutoff_) return {S(1), S(0)};
    S p0 = pow2_inverse<S>(k);
    return {p0, S(1) - p0};
  }
  KernelPtr<S> advance(int) const override {
    return std::make_shared<HalvingKernel>(cutoff_, period_ + 1);
  }
  void state_key(std::string& out) const override {
    out += "halv:" + std::to_string(cutoff_) + "+" + std::to_string(period_);
  }
  Json describe() const override {
    Json j{{"kind", "halving"}};
    if (cutoff_ >= 0) j["cutoff"] = cutoff_;
    if (period_ > 0) j["offset"] = period_;
    return j;
  }

 private:
  int cutoff_;  // -1: no cutoff
  int period_;  // 0-based current period
};

template <ProbScalar S>
class MarkovKernel final : public Kernel<S> {
 public:
  struct Def {
    std::vector<S> initial;
    std::vector<std::vector<S>> rows;
  };

  MarkovKernel(std::shared_ptr<const Def> def, int state) : def_(std::move(def)), state_(state) {}

  static KernelPtr<S> create(std::vector<S> initial, std::vector<std::vector<S>> rows) {
    validate_distribution(initial);
    if (rows.size() != initial.size())
      throw std::invalid_argument("markov needs one transition row per symbol");
    for (const auto& r : rows) {
      validate_distribution(r);
      if (r.size() != initial.size())
        throw std::invalid_argument("markov rows must match the alphabet");
    }
    auto def = std::make_shared<Def>(Def{std::move(initial), std::move(rows)});
    return std::make_shared<MarkovKernel>(std::move(def), -1);
  }

  int alphabet_size() const override { return static_cast<int>(def_->initial.size()); }
  std::vector<S> next() const override {
    return state_ < 0 ? def_->initial : def_->rows[state_];
  }
  KernelPtr<S> advance(int symbol) const override {
    return std::make_shared<MarkovKernel>(def_, symbol);
  }
  void state_key(std::string& out) const override {
    out += "mkv@";
    append_pointer(out, def_.get());
    out += ":" + std::to_string(state_);
  }
  Json describe() const override {
    Json rows = Json::array();
    for (const auto& r : def_->rows) rows.push_back(json_vector(r));
    Json j{{"kind", "markov"}, {"initial", json_vector(def_->initial)}, {"rows", rows}};
    if (state_ >= 0) j["state"] = state_;
    return j;
  }

 private:
  std::shared_ptr<const Def> def_;
  int state_;  // -1 before the first observation
};

template <ProbScalar S>
class MixtureKernel final : public Kernel<S> {
 public:
  MixtureKernel(std::vector<S> weights, std::vector<KernelPtr<S>> components)
      : weights_(std::move(weights)), components_(std::move(components)) {
    if (weights_.size() != components_.size() || weights_.empty())
      throw std::invalid_argument("mixture needs matching weights and components");
    S total = S(0);
    for (const auto& w : weights_) {
      if (w <= S(0)) throw std::invalid_argument("mixture weights must be positive");
      total += w;
    }
    if constexpr (std::same_as<S, Rational>) {
      if (total != S(1)) throw std::invalid_argument("mixture weights must sum to 1");
    } else {
      if (std::fabs(total - 1.0) > 1e-12)
        throw std::invalid_argument("mixture weights must sum to 1");
    }
    int m = components_.front()->alphabet_size();
    for (const auto& c : components_)
      if (c->alphabet_size() != m)
        throw std::invalid_argument("mixture components must share one alphabet");
  }

  int alphabet_size() const override { return components_.front()->alphabet_size(); }

  std::vector<S> next() const override {
    std::vector<S> out(alphabet_size(), S(0));
    for (std::size_t i = 0; i < components_.size(); ++i) {
      std::vector<S> ci = components_[i]->next();
      for (std::size_t a = 0; a < out.size(); ++a) out[a] += weights_[i] * ci[a];
    }
    return out;
  }

  KernelPtr<S> advance(int symbol) const override {
    // Bayes step: reweight by the component's one-step likelihood and drop
    // components whose posterior weight is zero.
    std::vector<S> new_weights;
    std::vector<KernelPtr<S>> new_components;
    S denom = S(0);
    std::vector<S> likelihood(components_.size());
    for (std::size_t i = 0; i < components_.size(); ++i) {
      likelihood[i] = components_[i]->next()[symbol];
      denom += weights_[i] * likelihood[i];
    }
    for (std::size_t i = 0; i < components_.size(); ++i) {
      S w = weights_[i] * likelihood[i];
      if (w == S(0)) continue;
      new_weights.push_back(w / denom);
      new_components.push_back(components_[i]->advance(symbol));
    }
    if (new_components.size() == 1) return new_components.front();
    return std::make_shared<MixtureKernel>(std::move(new_weights), std::move(new_components));
  }

  void state_key(std::string& out) const override {
    out += "mix(";
    for (std::size_t i = 0; i < components_.size(); ++i) {
      if (i) out += ",";
      out += weight_key(weights_[i]) + "*";
      components_[i]->state_key(out);
    }
    out += ")";
  }

  Json describe() const override {
    Json comps = Json::array();
    for (const auto& c : components_) comps.push_back(c->describe());
    return Json{{"kind", "mixture"}, {"weights", json_vector(weights_)}, {"components", comps}};
  }

  const std::vector<S>& weights() const { return weights_; }
  const std::vector<KernelPtr<S>>& components() const { return components_; }

 private:
  std::vector<S> weights_;
  std::vector<KernelPtr<S>> components_;
};

// Explicit finite forecast tree: next-symbol distributions for the histories
// shallower than `depth` (zero-mass subtrees are absent), then a constant
// tail distribution.
template <ProbScalar S>
class TableKernel final : public Kernel<S> {
 public:
  static constexpr std::int32_t kTail = -1;

  struct Node {
    std::vector<S> probs;
    std::vector<std::int32_t> child;  // node index, or kTail past the table
  };
  struct Def {
    int depth = 0;
    int alphabet = 2;
    std::vector<Node> nodes;  // nodes[0] is the root
    std::vector<S> tail;
  };

  TableKernel(std::shared_ptr<const Def> def, std::int32_t node)
      : def_(std::move(def)), node_(node) {}

  // Builds from the exact mass assigned to each depth-d history
  // (lexicographic order). Histories with zero mass get no subtree.
  static KernelPtr<S> from_leaf_masses(const std::vector<S>& masses, int depth,
                                       int alphabet_size, std::vector<S> tail) {
    validate_distribution(tail);
    if (static_cast<int>(tail.size()) != alphabet_size)
      throw std::invalid_argument("tail distribution must match the alphabet");
    std::int64_t expect = 1;
    for (int i = 0; i < depth; ++i) expect *= alphabet_size;
    if (static_cast<std::int64_t>(masses.size()) != expect)
      throw std::invalid_argument("mass vector must cover every depth-d history");
    S total = S(0);
    for (const auto& v : masses) {
      if (v < S(0)) throw std::invalid_argument("negative mass");
      total += v;
    }
    if constexpr (std::same_as<S, Rational>) {
      if (total != S(1)) throw std::invalid_argument("masses must sum to 1");
    } else {
      if (std::fabs(total - 1.0) > 1e-9) throw std::invalid_argument("masses must sum to 1");
    }

    auto def = std::make_shared<Def>();
    def->depth = depth;
    def->alphabet = alphabet_size;
    def->tail = std::move(tail);
    if (depth == 0) return std::make_shared<TableKernel>(std::move(def), kTail);

    struct Range {
      std::int64_t begin, end;
      int level;
    };
    // Subtree mass of a contiguous leaf range; recursion allocates child
    // nodes in lexicographic order for positive-mass branches.
    auto subtree_mass = [&](std::int64_t b, std::int64_t e) {
      S m = S(0);
      for (std::int64_t i = b; i < e; ++i) m += masses[i];
      return m;
    };
    auto build = [&](auto&& self, std::int64_t b, std::int64_t e, int level) -> std::int32_t {
      std::int32_t id = static_cast<std::int32_t>(def->nodes.size());
      def->nodes.push_back(Node{});
      std::int64_t span = (e - b) / alphabet_size;
      S node_mass = subtree_mass(b, e);
      std::vector<S> probs(alphabet_size, S(0));
      std::vector<std::int32_t> child(alphabet_size, kTail);
      for (int a = 0; a < alphabet_size; ++a) {
        S cm = subtree_mass(b + a * span, b + (a + 1) * span);
        probs[a] = cm / node_mass;
        if (cm > S(0) && level + 1 < depth)
          child[a] = self(self, b + a * span, b + (a + 1) * span, level + 1);
      }
      def->nodes[id].probs = std::move(probs);
      def->nodes[id].child = std::move(child);
      return id;
    };
    build(build, 0, static_cast<std::int64_t>(masses.size()), 0);
    return std::make_shared<TableKernel>(std::move(def), 0);
  }

  // Builds from explicit per-history rows; every positive-probability
  // history shallower than `depth` must have a row.
  static KernelPtr<S> from_rows(int depth, const std::map<History, std::vector<S>>& rows,
                                int alphabet_size, std::vector<S> tail) {
    validate_distribution(tail);
    if (static_cast<int>(tail.size()) != alphabet_size)
      throw std::invalid_argument("tail distribution must match the alphabet");
    if (depth < 1) throw std::invalid_argument("table depth must be >= 1");
    auto def = std::make_shared<Def>();
    def->depth = depth;
    def->alphabet = alphabet_size;
    def->tail = std::move(tail);
    auto build = [&](auto&& self, const History& h) -> std::int32_t {
      auto it = rows.find(h);
      if (it == rows.end())
        throw std::invalid_argument("missing table row for history \"" + h.str() + "\"");
      const std::vector<S>& probs = it->second;
      validate_distribution(probs);
      if (static_cast<int>(probs.size()) != alphabet_size)
        throw std::invalid_argument("table row size must match the alphabet");
      std::int32_t id = static_cast<std::int32_t>(def->nodes.size());
      def->nodes.push_back(Node{probs, std::vector<std::int32_t>(alphabet_size, kTail)});
      if (static_cast<int>(h.length()) + 1 < depth) {
        for (int a = 0; a < alphabet_size; ++a) {
          if (probs[a] > S(0)) {
            std::int32_t c = self(self, h.extended(a));
            def->nodes[id].child[a] = c;
          }
        }
      }
      return id;
    };
    build(build, History{});
    return std::make_shared<TableKernel>(std::move(def), 0);
  }

  int alphabet_size() const override { return def_->alphabet; }
  std::vector<S> next() const override {
    if (node_ == kTail) return def_->tail;
    return def_->nodes[node_].probs;
  }
  KernelPtr<S> advance(int symbol) const override {
    if (node_ == kTail) return this->shared_from_this();
    return std::make_shared<TableKernel>(def_, def_->nodes[node_].child[symbol]);
  }
  void state_key(std::string& out) const override {
    out += "tbl@";
    append_pointer(out, def_.get());
    out += ":" + std::to_string(node_);
  }
  Json describe() const override {
    Json j{{"kind", "table"}, {"depth", def_->depth}, {"tail", json_vector(def_->tail)}};
    Json rows = Json::object();
    auto walk = [&](auto&& self, std::int32_t id, const History& h) -> void {
      rows[h.str().empty() ? "root" : h.str()] = json_vector(def_->nodes[id].probs);
      for (int a = 0; a < def_->alphabet; ++a) {
        std::int32_t c = def_->nodes[id].child[a];
        if (c != kTail) self(self, c, h.extended(a));
      }
    };
    if (!def_->nodes.empty() && node_ == 0) walk(walk, 0, History{});
    j["rows"] = rows;
    return j;
  }

 private:
  std::shared_ptr<const Def> def_;
  std::int32_t node_;
};

}  // namespace detail

// A probability process on the outcome tree, given by its next-symbol
// conditional distributions. Immutable and cheap to copy; safe to share
// across threads.
template <ProbScalar S>
class Opinion {
 public:
  static Opinion iid(std::vector<S> probs, std::string label = {}) {
    return Opinion(std::make_shared<detail::IidKernel<S>>(std::move(probs)), std::move(label));
  }

  // Binary shorthand; p_one is the probability of symbol 1.
  static Opinion bernoulli(const S& p_one, std::string label = {}) {
    return iid({S(1) - p_one, p_one}, std::move(label));
  }

  static Opinion time_inhomogeneous(std::vector<std::vector<S>> periods, std::vector<S> tail,
                                    std::string label = {}) {
    return Opinion(detail::PeriodKernel<S>::create(std::move(periods), std::move(tail)),
                   std::move(label));
  }

  static Opinion markov(std::vector<S> initial, std::vector<std::vector<S>> rows,
                        std::string label = {}) {
    return Opinion(detail::MarkovKernel<S>::create(std::move(initial), std::move(rows)),
                   std::move(label));
  }

  static Opinion bayes_mixture(std::vector<S> weights, std::vector<Opinion> components,
                               std::string label = {}) {
    std::vector<detail::KernelPtr<S>> kernels;
    kernels.reserve(components.size());
    for (const auto& c : components) kernels.push_back(c.kernel());
    return Opinion(
        std::make_shared<detail::MixtureKernel<S>>(std::move(weights), std::move(kernels)),
        std::move(label));
  }

  static Opinion table_from_rows(int depth, const std::map<History, std::vector<S>>& rows,
                                 int alphabet_size, std::vector<S> tail, std::string label = {}) {
    return Opinion(
        detail::TableKernel<S>::from_rows(depth, rows, alphabet_size, std::move(tail)),
        std::move(label));
  }

  static Opinion uniform(int alphabet_size, std::string label = {}) {
    std::vector<S> p(alphabet_size, ratio<S>(1, alphabet_size));
    return Opinion::iid(std::move(p), std::move(label));
  }

  explicit Opinion(detail::KernelPtr<S> kernel, std::string label = {})
      : kernel_(std::move(kernel)), label_(std::move(label)) {}

  int alphabet_size() const { return kernel_->alphabet_size(); }
  const std::string& label() const { return label_; }
  Opinion relabeled(std::string label) const { return Opinion(kernel_, std::move(label)); }

  // One-step-ahead forecast after the given history. For mixtures this is
  // the posterior-weighted average of the component forecasts.
  std::vector<S> next_distribution(const History& h = History{}) const {
    return conditioned(h)->next();
  }

  // Probability of the cylinder identified by h (chain rule along h).
  S cylinder_prob(const History& h) const {
    detail::KernelPtr<S> state = kernel_;
    S acc = S(1);
    for (int a : h) {
      check_symbol(a);
      S p = state->next()[a];
      if (p == S(0)) return S(0);
      acc *= p;
      state = state->advance(a);
    }
    return acc;
  }

  // Conditional opinion given h; throws ConditioningOnNullEvent when h has
  // probability zero.
  Opinion condition(const History& h) const { return Opinion(conditioned(h), label_); }

  Opinion advance(int symbol) const {
    check_symbol(symbol);
    if (kernel_->next()[symbol] == S(0))
      throw ConditioningOnNullEvent("conditioning on a null one-step event");
    return Opinion(kernel_->advance(symbol), label_);
  }

  bool is_mixture() const {
    return dynamic_cast<const detail::MixtureKernel<S>*>(kernel_.get()) != nullptr;
  }

  // Posterior over the mixture components after h, in the prior's component
  // order (zero entries kept).
  std::vector<S> posterior_weights(const History& h) const {
    const auto* mix = dynamic_cast<const detail::MixtureKernel<S>*>(kernel_.get());
    if (!mix) throw std::invalid_argument("posterior_weights needs a mixture opinion");
    const auto& weights = mix->weights();
    const auto& comps = mix->components();
    std::vector<S> post(weights.size());
    S total = S(0);
    for (std::size_t i = 0; i < comps.size(); ++i) {
      post[i] = weights[i] * Opinion(comps[i]).cylinder_prob(h);
      total += post[i];
    }
    if (total == S(0))
      throw ConditioningOnNullEvent("history has probability zero under the mixture");
    for (auto& w : post) w /= total;
    return post;
  }

  // Samples a depth-long history; the marginal law equals the cylinder
  // distribution at that depth. Deterministic given the seed.
  History sample_path(int depth, std::uint64_t seed) const {
    SplitMix64 rng(seed);
    detail::KernelPtr<S> state = kernel_;
    History h;
    for (int t = 0; t < depth; ++t) {
      std::vector<S> dist = state->next();
      double u = rng.next_unit();
      int chosen = -1;
      double acc = 0.0;
      for (std::size_t a = 0; a < dist.size(); ++a) {
        if (dist[a] == S(0)) continue;
        acc += to_double(dist[a]);
        chosen = static_cast<int>(a);
        if (u < acc) break;
      }
      h.push_back(chosen);
      state = state->advance(chosen);
    }
    return h;
  }

  std::string state_key() const {
    std::string key;
    kernel_->state_key(key);
    return key;
  }

  Json describe() const {
    Json j = kernel_->describe();
    if (!label_.empty()) j["label"] = label_;
    return j;
  }

  const detail::KernelPtr<S>& kernel() const { return kernel_; }

 private:
  void check_symbol(int a) const {
    if (a < 0 || a >= alphabet_size())
      throw std::invalid_argument("symbol out of range for the alphabet");
  }

  detail::KernelPtr<S> conditioned(const History& h) const {
    detail::KernelPtr<S> state = kernel_;
    for (int a : h) {
      check_symbol(a);
      if (state->next()[a] == S(0))
        throw ConditioningOnNullEvent("history \"" + h.str() + "\" has probability zero");
      state = state->advance(a);
    }
    return state;
  }

  detail::KernelPtr<S> kernel_;
  std::string label_;
};

}  // namespace optest
