// Acceptance suite: seven end-to-end criteria, each checked at its stated
// tolerance and time budget. Prints one PASS/FAIL line per criterion and
// exits nonzero if any fails.

#include <chrono>
#include <cstdio>
#include <functional>
#include <string>
#include <vector>

#include "optest/manipulation.hpp"
#include "optest/merging.hpp"
#include "optest/nonmerging.hpp"
#include "optest/serialize.hpp"

#include "helpers.hpp"

using namespace optest;
using optest::test::standard_corpus;

namespace {

struct Criterion {
  std::string name;
  double budget_seconds;
  std::function<bool(std::string&)> run;
};

bool check(bool ok, std::string& detail, const std::string& message) {
  if (!ok && detail.empty()) detail = message;
  return ok;
}

// 1. The surrogate's conditional gap on the tail event is exactly 1/2 at
// every t in 0..16, and its cylinder probabilities match the halving
// opinion's exactly through depth 16.
bool criterion_nonmerging_gap(std::string& detail) {
  auto surrogate = make_nonmerging_surrogate<Rational>(16, 8);
  ReferencePath zeros = ReferencePath::parse("0");
  bool ok = true;
  for (int t = 0; t <= 16; ++t) {
    History h = zeros.prefix(static_cast<std::size_t>(t));
    ok &= check(nonmerging_gap(surrogate, h) == Rational(1, 2), detail,
                "gap != 1/2 at t=" + std::to_string(t));
    ok &= check(surrogate.opinion.cylinder_prob(h) == surrogate.reference.cylinder_prob(h),
                detail, "identity fails at t=" + std::to_string(t));
  }
  // identity across all histories, not only the reference path
  for (int t = 0; t <= 16; t += 4) {
    SplitMix64 rng(404 + static_cast<std::uint64_t>(t));
    for (int trial = 0; trial < 25; ++trial) {
      History h = optest::test::random_history(rng, 2, t);
      ok &= check(surrogate.opinion.cylinder_prob(h) == surrogate.reference.cylinder_prob(h),
                  detail, "identity fails off the reference path at t=" + std::to_string(t));
    }
  }
  if (ok) detail = "gap = 1/2 exactly and P == P_inf on cylinders through t = 16";
  return ok;
}

// 2. The half/half mixture merges with its component: Monte Carlo exceedance
// at t = 100 under 5000 paths is below 0.05 and nonincreasing on 10/50/100.
bool criterion_merging(std::string& detail) {
  auto p = Opinion<double>::bayes_mixture(
      {0.5, 0.5},
      {Opinion<double>::bernoulli(1.0 / 3.0), Opinion<double>::bernoulli(2.0 / 3.0)}, "mix");
  auto q = Opinion<double>::bernoulli(1.0 / 3.0, "bern13");
  auto curve =
      merging_curve<double>(p, q, 100, 6, 0.1, CurveMethod::monte_carlo, 5000, 20240817);
  double e10 = curve.rows[10].exceedance;
  double e50 = curve.rows[50].exceedance;
  double e100 = curve.rows[100].exceedance;
  char buf[160];
  std::snprintf(buf, sizeof(buf), "exceedance(10)=%.4f (50)=%.4f (100)=%.4f", e10, e50, e100);
  detail = buf;  // informative for pass and fail alike
  return e100 < 0.05 && e10 >= e50 && e50 >= e100;
}

// 3. Without absolute continuity the disagreement never decays: TV is
// exactly 1/5 and the exceedance is exactly one at every t through 100.
bool criterion_no_merging(std::string& detail) {
  auto p = Opinion<Rational>::bernoulli(Rational(1, 2));
  auto q = Opinion<Rational>::bernoulli(Rational(7, 10));
  auto curve = merging_curve<Rational>(p, q, 100, 1, Rational(1, 10),
                                       CurveMethod::exact_enumeration);
  bool ok = true;
  for (int t = 0; t <= 100; ++t) {
    ok &= curve.rows[t].mean == Rational(1, 5);
    ok &= curve.rows[t].max == Rational(1, 5);
    ok &= curve.rows[t].exceedance == Rational(1);
  }
  detail = "TV = 1/5 exactly and exceedance = 1 at every t <= 100";
  return check(ok, detail, "constant-disagreement curve is not identically (1/5, 1)");
}

// 4. The cylinder test along 0101... controls type I error strictly below
// 1/20 on the whole corpus, and the uniform strategy over the corpus is
// refuted on a cylinder with pass probability exactly zero.
bool criterion_cylinder_test(std::string& detail) {
  ReferencePath ref = ReferencePath::parse("01");
  auto test = make_cylinder_test<Rational>(ref, Rational(1, 20), 4096);
  auto corpus = standard_corpus<Rational>();
  bool ok = true;
  Strategy<Rational> uniform;
  for (const auto& opinion : corpus) {
    ok &= check(type1_error(test, opinion) < Rational(1, 20), detail,
                "type-I error not below 1/20 for " + opinion.label());
    uniform.support.push_back(opinion);
    uniform.weights.push_back(Rational(1, corpus.size()));
  }
  History witness = nonmanipulability_witness(test, uniform, ref);
  Rational pass = pass_prob(uniform, test, witness);
  ok &= check(pass == Rational(0), detail, "witness pass probability is not exactly zero");
  if (ok) detail = "all 11 type-I errors < 1/20; witness " + witness.str() + " has pass prob 0";
  return ok;
}

// 5. The tail-rejection test at horizon 8 is manipulable: a certified
// strategy passes with probability at least 0.75 on every depth-8 history.
bool criterion_manipulation(std::string& detail) {
  auto test = make_tail_rejection_test<double>(8, 0.2);
  ManipulationReport report = double_oracle_manipulate(test, 8, 0.2, 0.05, 300, 1e-6);
  bool ok = report.certified;
  ok &= report.achieved_value >= 0.75;
  ok &= report.iterations <= 300;
  ok &= report.per_path_pass.size() == 256;
  double min_pass = 1.0;
  for (double v : report.per_path_pass) min_pass = std::min(min_pass, v);
  ok &= min_pass >= 0.75;
  char buf[160];
  std::snprintf(buf, sizeof(buf),
                "certified=%d value=%.6f min per-path pass=%.6f iterations=%d support=%zu",
                report.certified, report.achieved_value, min_pass, report.iterations,
                report.strategy.support.size());
  detail = buf;
  return ok;
}

// 6. Exact game solving: closed forms to 1e-9, agreement with the grid
// oracle on 100 seeded games, duality gap at most 1e-8 everywhere.
bool criterion_game_solver(std::string& detail) {
  bool ok = true;
  auto pennies = MatrixGame::from_payoffs({{1, 0}, {0, 1}});
  auto sol = solve_matrix_game(pennies, 1e-9);
  ok &= std::fabs(sol.value - 0.5) <= 1e-9 && sol.duality_gap <= 1e-8;

  auto skewed = MatrixGame::from_payoffs({{0.9, 0.1}, {0.2, 0.8}});
  sol = solve_matrix_game(skewed, 1e-9);
  ok &= std::fabs(sol.value - 0.5) <= 1e-9 && sol.duality_gap <= 1e-8;
  ok &= check(ok, detail, "closed-form 2x2 games missed 0.5 at 1e-9");

  SplitMix64 rng(606);
  double worst = 0.0;
  for (int trial = 0; trial < 100; ++trial) {
    int r = 2 + static_cast<int>(rng.next() % 2);
    int c = 2 + static_cast<int>(rng.next() % 2);
    std::vector<std::vector<double>> payoffs(r, std::vector<double>(c));
    for (auto& row : payoffs)
      for (auto& v : row) v = rng.next_unit();
    auto game = MatrixGame::from_payoffs(std::move(payoffs));
    auto s = solve_matrix_game(game, 1e-8);
    double diff = std::fabs(s.value - brute_force_value(game, 1000));
    worst = std::max(worst, diff);
    ok &= check(diff < 0.005, detail, "grid oracle disagreement on trial " +
                                          std::to_string(trial));
    ok &= check(s.duality_gap <= 1e-8, detail, "duality gap above 1e-8 on trial " +
                                                   std::to_string(trial));
  }
  char buf[120];
  std::snprintf(buf, sizeof(buf), "closed forms exact; worst oracle deviation %.2e over 100 games",
                worst);
  if (ok) detail = buf;
  return ok;
}

// 7. Cylinder partitions: prefix-free, exact unit total, every cell at most
// epsilon, across the corpus and epsilon grid; the point mass has no
// partition and surfaces as AtomDetected.
bool criterion_partition(std::string& detail) {
  bool ok = true;
  int cells_total = 0;
  for (const auto& opinion : standard_corpus<Rational>()) {
    for (const auto& eps : {Rational(1, 4), Rational(1, 10), Rational(1, 100)}) {
      auto partition = cylinder_partition<Rational>(opinion, eps, 64);
      Rational total(0);
      for (std::size_t i = 0; i < partition.cells.size(); ++i) {
        ok &= partition.probs[i] <= eps;
        total += partition.probs[i];
      }
      ok &= check(total == Rational(1), detail,
                  "cell probabilities do not sum to 1 for " + opinion.label());
      for (std::size_t i = 0; i < partition.cells.size(); ++i)
        for (std::size_t j = i + 1; j < partition.cells.size(); ++j)
          ok &= !partition.cells[i].is_prefix_of(partition.cells[j]);
      cells_total += static_cast<int>(partition.cells.size());
    }
  }
  bool atom_raised = false;
  try {
    cylinder_partition<Rational>(Opinion<Rational>::iid({Rational(1), Rational(0)}),
                                 Rational(1, 2), 30);
  } catch (const AtomDetected&) {
    atom_raised = true;
  }
  ok &= check(atom_raised, detail, "point-mass kernel did not raise AtomDetected");
  if (ok)
    detail = std::to_string(cells_total) +
             " cells across 33 partitions, all exact; point mass raises AtomDetected";
  return ok;
}

}  // namespace

int main() {
  std::vector<Criterion> criteria = {
      {"non-merging gap is exactly 1/2 (N=16, K=8)", 1.0, criterion_nonmerging_gap},
      {"mixture merges with its component (Monte Carlo, 5000 paths)", 60.0, criterion_merging},
      {"constant disagreement without absolute continuity", 1.0, criterion_no_merging},
      {"cylinder test: type-I control and zero-pass witness", 5.0, criterion_cylinder_test},
      {"tail-rejection test manipulated to 0.75 on all 256 paths", 120.0,
       criterion_manipulation},
      {"matrix game solver against closed forms and the grid oracle", 10.0,
       criterion_game_solver},
      {"epsilon cylinder partitions over the corpus", 5.0, criterion_partition},
  };

  int failures = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    const auto& criterion = criteria[i];
    std::string detail;
    bool ok = false;
    auto start = std::chrono::steady_clock::now();
    try {
      ok = criterion.run(detail);
    } catch (const std::exception& e) {
      detail = std::string("exception: ") + e.what();
    }
    double seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    if (seconds > criterion.budget_seconds) {
      ok = false;
      detail += " [over time budget]";
    }
    std::printf("%s  criterion %zu: %s (%.2fs, budget %.0fs) -- %s\n", ok ? "PASS" : "FAIL",
                i + 1, criterion.name.c_str(), seconds, criterion.budget_seconds,
                detail.c_str());
    if (!ok) ++failures;
  }
  if (failures) std::printf("%d criterion(s) FAILED\n", failures);
  return failures;
}
