#pragma once

#include <algorithm>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include "optest/opinion.hpp"

namespace optest {

namespace detail {

// Sum over depth-L suffixes of |pmass*P(s) - qmass*Q(s)|, pruning subtrees
// once either side has no mass left (a dead side contributes the other
// side's remaining mass).
template <ProbScalar S>
S tv_sum(const KernelPtr<S>& p, const KernelPtr<S>& q, const S& pmass, const S& qmass,
         int lookahead) {
  if (pmass == S(0)) return qmass;
  if (qmass == S(0)) return pmass;
  if (lookahead == 0) return scalar_abs<S>(pmass - qmass);
  std::vector<S> pd = p->next();
  std::vector<S> qd = q->next();
  S total = S(0);
  for (std::size_t a = 0; a < pd.size(); ++a) {
    S pm = pmass * pd[a];
    S qm = qmass * qd[a];
    if (pm == S(0) && qm == S(0)) continue;
    if (pm == S(0)) {
      total += qm;
    } else if (qm == S(0)) {
      total += pm;
    } else {
      total += tv_sum(p->advance(static_cast<int>(a)), q->advance(static_cast<int>(a)), pm, qm,
                      lookahead - 1);
    }
  }
  return total;
}

template <ProbScalar S>
S tv_between_states(const KernelPtr<S>& p, const KernelPtr<S>& q, int lookahead) {
  return tv_sum<S>(p, q, S(1), S(1), lookahead) / S(2);
}

}  // namespace detail

// Total variation between the lookahead-L conditional forecasts of P and Q
// after the given history. This is the event-supremum distance restricted to
// events measurable at depth L; it is nondecreasing in L and lower-bounds
// the full supremum.
template <ProbScalar S>
S tv_lookahead(const Opinion<S>& p, const Opinion<S>& q, const History& h, int lookahead) {
  if (lookahead < 1) throw std::invalid_argument("lookahead must be >= 1");
  if (p.alphabet_size() != q.alphabet_size())
    throw std::invalid_argument("opinions must share one alphabet");
  check_enumerable(p.alphabet_size(), lookahead);
  Opinion<S> pc = p.condition(h);
  Opinion<S> qc = q.condition(h);
  return detail::tv_between_states<S>(pc.kernel(), qc.kernel(), lookahead);
}

enum class CurveMethod { exact_enumeration, monte_carlo };

// Summary of the random variable TV_L(t) under paths drawn from Q: its mean,
// maximum, and the frequency of TV_L(t) > threshold, per period t. Paths on
// which P's conditional dies (a Q-positive, P-null history) count as maximal
// disagreement.
template <ProbScalar S>
struct MergingCurve {
  struct Row {
    S mean, max, exceedance;
  };
  int lookahead = 1;
  S threshold{};
  CurveMethod method = CurveMethod::exact_enumeration;
  int n_paths = 0;        // monte carlo only
  std::uint64_t seed = 0; // monte carlo only
  std::vector<Row> rows;  // index t = 0..t_max
};

namespace detail {

template <ProbScalar S>
struct PairState {
  KernelPtr<S> p;  // empty: P's conditional is dead on this branch
  KernelPtr<S> q;
};

template <ProbScalar S>
MergingCurve<S> merging_curve_exact(const Opinion<S>& p, const Opinion<S>& q, int t_max,
                                    int lookahead, const S& threshold) {
  MergingCurve<S> curve;
  curve.lookahead = lookahead;
  curve.threshold = threshold;
  curve.method = CurveMethod::exact_enumeration;
  curve.rows.reserve(t_max + 1);

  // Level-by-level enumeration of Q-positive histories, merged by the
  // conditional state pair; identical states share one TV evaluation and
  // their Q-mass adds up. Memoryless kernels collapse to a handful of
  // states, so deep horizons stay exact.
  std::map<std::string, std::pair<PairState<S>, S>> level;
  {
    std::string key = "live|" + p.state_key() + "||" + q.state_key();
    level.emplace(std::move(key), std::make_pair(PairState<S>{p.kernel(), q.kernel()}, S(1)));
  }
  for (int t = 0;; ++t) {
    typename MergingCurve<S>::Row row{S(0), S(0), S(0)};
    for (const auto& [key, entry] : level) {
      const auto& [state, mass] = entry;
      S v = state.p ? tv_between_states<S>(state.p, state.q, lookahead) : S(1);
      row.mean += mass * v;
      if (v > threshold) row.exceedance += mass;
      if (v > row.max) row.max = v;
    }
    curve.rows.push_back(std::move(row));
    if (t == t_max) break;

    std::map<std::string, std::pair<PairState<S>, S>> next_level;
    for (const auto& [key, entry] : level) {
      const auto& [state, mass] = entry;
      std::vector<S> qd = state.q->next();
      std::vector<S> pd;
      if (state.p) pd = state.p->next();
      for (std::size_t a = 0; a < qd.size(); ++a) {
        if (qd[a] == S(0)) continue;
        PairState<S> child;
        child.q = state.q->advance(static_cast<int>(a));
        if (state.p && pd[a] > S(0)) child.p = state.p->advance(static_cast<int>(a));
        std::string child_key = child.p ? "live|" : "dead|";
        if (child.p) {
          child.p->state_key(child_key);
          child_key += "||";
        }
        child.q->state_key(child_key);
        auto [it, inserted] =
            next_level.emplace(std::move(child_key), std::make_pair(std::move(child), S(0)));
        it->second.second += mass * qd[a];
      }
      if (static_cast<std::int64_t>(next_level.size()) > kEnumerationLimit)
        throw EnumerationTooLarge("exact merging curve exceeds the per-level state budget");
    }
    level = std::move(next_level);
  }
  return curve;
}

template <ProbScalar S>
MergingCurve<S> merging_curve_monte_carlo(const Opinion<S>& p, const Opinion<S>& q, int t_max,
                                          int lookahead, const S& threshold, int n_paths,
                                          std::uint64_t seed) {
  MergingCurve<S> curve;
  curve.lookahead = lookahead;
  curve.threshold = threshold;
  curve.method = CurveMethod::monte_carlo;
  curve.n_paths = n_paths;
  curve.seed = seed;

  std::vector<S> sum(t_max + 1, S(0));
  std::vector<S> maxv(t_max + 1, S(0));
  std::vector<long> exceed(t_max + 1, 0);
  // Paths are independent given per-path seeds derived from the master seed;
  // accumulation runs in path order so float sums are reproducible.
  for (int i = 0; i < n_paths; ++i) {
    SplitMix64 rng(mix_seed(seed, static_cast<std::uint64_t>(i)));
    KernelPtr<S> ps = p.kernel();
    KernelPtr<S> qs = q.kernel();
    for (int t = 0;; ++t) {
      S v = ps ? tv_between_states<S>(ps, qs, lookahead) : S(1);
      sum[t] += v;
      if (v > threshold) ++exceed[t];
      if (v > maxv[t]) maxv[t] = v;
      if (t == t_max) break;
      std::vector<S> qd = qs->next();
      double u = rng.next_unit();
      int chosen = -1;
      double acc = 0.0;
      for (std::size_t a = 0; a < qd.size(); ++a) {
        if (qd[a] == S(0)) continue;
        acc += to_double(qd[a]);
        chosen = static_cast<int>(a);
        if (u < acc) break;
      }
      if (ps) {
        if (ps->next()[chosen] > S(0)) {
          ps = ps->advance(chosen);
        } else {
          ps.reset();
        }
      }
      qs = qs->advance(chosen);
    }
  }
  curve.rows.resize(t_max + 1);
  for (int t = 0; t <= t_max; ++t) {
    curve.rows[t].mean = sum[t] / S(n_paths);
    curve.rows[t].max = maxv[t];
    curve.rows[t].exceedance = ratio<S>(exceed[t], n_paths);
  }
  return curve;
}

}  // namespace detail

template <ProbScalar S>
MergingCurve<S> merging_curve(const Opinion<S>& p, const Opinion<S>& q, int t_max, int lookahead,
                              const S& threshold, CurveMethod method, int n_paths = 0,
                              std::uint64_t seed = 0) {
  if (t_max < 0) throw std::invalid_argument("t_max must be >= 0");
  if (lookahead < 1) throw std::invalid_argument("lookahead must be >= 1");
  if (p.alphabet_size() != q.alphabet_size())
    throw std::invalid_argument("opinions must share one alphabet");
  check_enumerable(p.alphabet_size(), lookahead);
  if (method == CurveMethod::monte_carlo) {
    if (n_paths < 1) throw std::invalid_argument("monte carlo needs n_paths >= 1");
    return detail::merging_curve_monte_carlo(p, q, t_max, lookahead, threshold, n_paths, seed);
  }
  return detail::merging_curve_exact(p, q, t_max, lookahead, threshold);
}

// Finite-horizon absolute-continuity diagnostic: likelihood ratios Q/P over
// the depth-d histories in Q's support, the P-mass of that support, and the
// histories where P vanishes but Q does not. A diagnostic, not a decision
// procedure: absolute continuity proper is a statement about limits.
template <ProbScalar S>
struct AbsContinuityReport {
  int horizon = 0;
  bool ratio_infinite = false;  // true iff violations is nonempty
  S max_ratio{};                // over histories with P > 0, Q > 0
  S p_mass_on_q_support{};
  std::vector<History> violations;  // depth-d histories with P = 0 < Q
};

template <ProbScalar S>
AbsContinuityReport<S> abs_continuity_report(const Opinion<S>& p, const Opinion<S>& q, int depth) {
  if (depth < 1) throw std::invalid_argument("depth must be >= 1");
  if (p.alphabet_size() != q.alphabet_size())
    throw std::invalid_argument("opinions must share one alphabet");
  check_enumerable(p.alphabet_size(), depth);

  AbsContinuityReport<S> report;
  report.horizon = depth;
  report.max_ratio = S(0);
  report.p_mass_on_q_support = S(0);

  History h;
  auto walk = [&](auto&& self, const detail::KernelPtr<S>& ps, const detail::KernelPtr<S>& qs,
                  const S& pmass, const S& qmass, int remaining) -> void {
    if (remaining == 0) {
      if (pmass == S(0)) {
        report.violations.push_back(h);
        report.ratio_infinite = true;
      } else {
        S r = qmass / pmass;
        if (r > report.max_ratio) report.max_ratio = r;
        report.p_mass_on_q_support += pmass;
      }
      return;
    }
    std::vector<S> qd = qs->next();
    std::vector<S> pd;
    if (ps) pd = ps->next();
    for (std::size_t a = 0; a < qd.size(); ++a) {
      if (qd[a] == S(0)) continue;  // only Q's support matters
      S pm = ps ? pmass * pd[a] : S(0);
      h.push_back(static_cast<int>(a));
      self(self, pm > S(0) ? ps->advance(static_cast<int>(a)) : detail::KernelPtr<S>{},
           qs->advance(static_cast<int>(a)), pm, qmass * qd[a], remaining - 1);
      h.pop_back();
    }
  };
  walk(walk, p.kernel(), q.kernel(), S(1), S(1), depth);
  return report;
}

}  // namespace optest
