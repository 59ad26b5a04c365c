#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "optest/errors.hpp"
#include "optest/game.hpp"
#include "optest/numeric.hpp"

using namespace optest;

namespace {

MatrixGame random_game(SplitMix64& rng, int rows, int cols) {
  std::vector<std::vector<double>> payoffs(rows, std::vector<double>(cols));
  for (auto& row : payoffs)
    for (auto& v : row) v = rng.next_unit();
  return MatrixGame::from_payoffs(std::move(payoffs));
}

double bracket_lower(const MatrixGame& g, const GameSolution& s) {
  double lower = 1e300;
  for (int i = 0; i < g.rows(); ++i) {
    double v = 0;
    for (int j = 0; j < g.cols(); ++j) v += g.payoffs[i][j] * s.col_strategy[j];
    lower = std::min(lower, v);
  }
  return lower;
}

double bracket_upper(const MatrixGame& g, const GameSolution& s) {
  double upper = -1e300;
  for (int j = 0; j < g.cols(); ++j) {
    double v = 0;
    for (int i = 0; i < g.rows(); ++i) v += g.payoffs[i][j] * s.row_strategy[i];
    upper = std::max(upper, v);
  }
  return upper;
}

}  // namespace

TEST_CASE("matching pennies") {
  auto game = MatrixGame::from_payoffs({{1, 0}, {0, 1}});
  auto sol = solve_matrix_game(game, 1e-9);
  CHECK(sol.value == doctest::Approx(0.5).epsilon(1e-9));
  CHECK(sol.duality_gap <= 1e-9);
  for (double v : sol.row_strategy) CHECK(v == doctest::Approx(0.5).epsilon(1e-9));
  for (double v : sol.col_strategy) CHECK(v == doctest::Approx(0.5).epsilon(1e-9));
}

TEST_CASE("constant game") {
  auto game = MatrixGame::from_payoffs({{1, 1}, {1, 1}});
  auto sol = solve_matrix_game(game, 1e-9);
  CHECK(sol.value == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(sol.duality_gap <= 1e-12);
}

TEST_CASE("2x2 closed form") {
  // value = (0.8*0.9 - 0.1*0.2) / (0.9 + 0.8 - 0.1 - 0.2) = 0.5
  auto game = MatrixGame::from_payoffs({{0.9, 0.1}, {0.2, 0.8}});
  auto sol = solve_matrix_game(game, 1e-9);
  CHECK(sol.value == doctest::Approx(0.5).epsilon(1e-9));
  CHECK(std::fabs(sol.value - brute_force_value(game, 1000)) < 0.002);
}

TEST_CASE("1x1 game") {
  auto game = MatrixGame::from_payoffs({{0.3}});
  CHECK(solve_matrix_game(game, 1e-9).value == doctest::Approx(0.3).epsilon(1e-12));
  CHECK(brute_force_value(game, 1000) == doctest::Approx(0.3));
}

TEST_CASE("single row / single column games") {
  // Nature picks the row: with one column the expert is fixed.
  auto col = MatrixGame::from_payoffs({{0.9}, {0.2}, {0.5}});
  auto sol = solve_matrix_game(col, 1e-9);
  CHECK(sol.value == doctest::Approx(0.2).epsilon(1e-9));
  auto row = MatrixGame::from_payoffs({{0.9, 0.2, 0.5}});
  CHECK(solve_matrix_game(row, 1e-9).value == doctest::Approx(0.9).epsilon(1e-9));
}

TEST_CASE("value bracketing and gap on random games") {
  SplitMix64 rng(2024);
  for (int trial = 0; trial < 60; ++trial) {
    int r = 1 + static_cast<int>(rng.next() % 5);
    int c = 1 + static_cast<int>(rng.next() % 5);
    auto game = random_game(rng, r, c);
    auto sol = solve_matrix_game(game, 1e-8);
    double lower = bracket_lower(game, sol);
    double upper = bracket_upper(game, sol);
    CHECK(lower <= sol.value + 1e-12);
    CHECK(sol.value <= upper + 1e-12);
    CHECK(upper - lower <= 1e-8);
    CHECK(sol.duality_gap == doctest::Approx(std::max(0.0, upper - lower)));
  }
}

TEST_CASE("agreement with the brute force oracle on 2x2 and 3x3 games") {
  SplitMix64 rng(99);
  for (int trial = 0; trial < 40; ++trial) {
    int r = 2 + static_cast<int>(rng.next() % 2);
    int c = 2 + static_cast<int>(rng.next() % 2);
    auto game = random_game(rng, r, c);
    auto sol = solve_matrix_game(game, 1e-8);
    CHECK(std::fabs(sol.value - brute_force_value(game, 1000)) < 0.005);
  }
}

TEST_CASE("scale and shift equivariance") {
  SplitMix64 rng(7);
  auto game = random_game(rng, 3, 3);
  auto sol = solve_matrix_game(game, 1e-9);
  MatrixGame scaled = game;
  for (auto& row : scaled.payoffs)
    for (auto& v : row) v = 2.5 * v + 0.75;
  auto sol2 = solve_matrix_game(scaled, 1e-8);
  CHECK(sol2.value == doctest::Approx(2.5 * sol.value + 0.75).epsilon(1e-7));
}

TEST_CASE("transposition antisymmetry") {
  SplitMix64 rng(13);
  for (int trial = 0; trial < 10; ++trial) {
    auto game = random_game(rng, 3, 2);
    MatrixGame neg_t;
    neg_t.payoffs.assign(game.cols(), std::vector<double>(game.rows()));
    for (int i = 0; i < game.rows(); ++i)
      for (int j = 0; j < game.cols(); ++j) neg_t.payoffs[j][i] = -game.payoffs[i][j];
    auto a = solve_matrix_game(game, 1e-8);
    auto b = solve_matrix_game(neg_t, 1e-8);
    CHECK(b.value == doctest::Approx(-a.value).epsilon(1e-7));
  }
}

TEST_CASE("best row response minimizes and breaks ties low") {
  auto pennies = MatrixGame::from_payoffs({{1, 0}, {0, 1}});
  auto [r1, p1] = best_row_response(pennies, {1.0, 0.0});
  CHECK(r1 == 1);
  CHECK(p1 == 0.0);
  auto constant = MatrixGame::from_payoffs({{1, 1}, {1, 1}});
  CHECK(best_row_response(constant, {0.5, 0.5}).first == 0);
  auto mixed = MatrixGame::from_payoffs({{0.9, 0.1}, {0.2, 0.8}});
  auto [r3, p3] = best_row_response(mixed, {0.5, 0.5});
  CHECK(r3 == 0);
  CHECK(p3 == doctest::Approx(0.5));
}

TEST_CASE("brute force oracle rejects big games") {
  auto game = MatrixGame::from_payoffs(
      {{0.1, 0.2, 0.3, 0.4}, {0.1, 0.2, 0.3, 0.4}, {0.1, 0.2, 0.3, 0.4}});
  CHECK_THROWS_AS(brute_force_value(game, 100), std::invalid_argument);
}

TEST_CASE("multiplicative weights route reaches loose tolerances") {
  auto pennies = MatrixGame::from_payoffs({{1, 0}, {0, 1}});
  auto sol = solve_matrix_game(pennies, 5e-3, GameMethod::multiplicative_weights, 200000);
  CHECK(sol.value == doctest::Approx(0.5).epsilon(5e-3));
  CHECK(sol.duality_gap <= 5e-3);
  auto skewed = MatrixGame::from_payoffs({{0.9, 0.1}, {0.2, 0.8}});
  auto sol2 = solve_matrix_game(skewed, 5e-3, GameMethod::multiplicative_weights, 400000);
  CHECK(sol2.value == doctest::Approx(0.5).epsilon(5e-3));
  CHECK_THROWS_AS(
      solve_matrix_game(skewed, 1e-9, GameMethod::multiplicative_weights, 500),
      NonConvergence);
}

TEST_CASE("matrix text round trip") {
  auto game = MatrixGame::from_payoffs({{0.9, 0.1}, {0.2, 0.8}});
  auto parsed = parse_matrix_text(matrix_text(game));
  CHECK(parsed.payoffs == game.payoffs);
  CHECK_THROWS_AS(parse_matrix_text("1 2\nnope\n"), std::invalid_argument);
  CHECK_THROWS_AS(parse_matrix_text(""), std::invalid_argument);
  auto commented = parse_matrix_text("# a game\n1 0\n0 1\n");
  CHECK(commented.rows() == 2);
}

TEST_CASE("degenerate games with duplicate rows and columns") {
  auto game = MatrixGame::from_payoffs({{0.3, 0.3, 0.7}, {0.3, 0.3, 0.7}, {0.6, 0.6, 0.1}});
  auto sol = solve_matrix_game(game, 1e-8);
  CHECK(sol.duality_gap <= 1e-8);
  CHECK(std::fabs(sol.value - brute_force_value(game, 1000)) < 0.005);
}
