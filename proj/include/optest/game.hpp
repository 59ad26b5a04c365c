#pragma once

#include <string>
#include <vector>

namespace optest {

// Finite two-player zero-sum game. Entries are the column player's payoff;
// the row player (Nature) minimizes, the column player (the expert)
// maximizes.
struct MatrixGame {
  std::vector<std::vector<double>> payoffs;  // rows x cols
  std::vector<std::string> row_labels;       // optional, sized rows or empty
  std::vector<std::string> col_labels;       // optional, sized cols or empty

  int rows() const { return static_cast<int>(payoffs.size()); }
  int cols() const { return payoffs.empty() ? 0 : static_cast<int>(payoffs.front().size()); }

  static MatrixGame from_payoffs(std::vector<std::vector<double>> payoffs,
                                 std::vector<std::string> row_labels = {},
                                 std::vector<std::string> col_labels = {});
};

struct GameSolution {
  double value = 0.0;
  std::vector<double> row_strategy;
  std::vector<double> col_strategy;
  double duality_gap = 0.0;
  long iterations = 0;  // simplex pivots or weight updates
};

enum class GameMethod { automatic, linear_program, multiplicative_weights };

// Solves the game to within tol: the returned duality gap
//   max_j (x^T A)_j - min_i (A y)_i
// is at most tol and both strategies are tol-optimal. The LP route is exact
// up to float arithmetic; the multiplicative-weights route (averaged
// iterates, learning rate sqrt(ln n / T)) trades accuracy for scalability
// and throws NonConvergence when the budget runs out first.
GameSolution solve_matrix_game(const MatrixGame& game, double tol,
                               GameMethod method = GameMethod::automatic, long max_iters = 0);

// Row minimizing the expected payoff against the given column mixture; ties
// go to the lowest index.
std::pair<int, double> best_row_response(const MatrixGame& game,
                                         const std::vector<double>& col_strategy);

// Independent oracle for tiny games (r, c <= 3): exhaustive grid search over
// both simplices. The bracket width, and hence the error, is O(1/grid).
double brute_force_value(const MatrixGame& game, int grid);

// Plain numeric text format: one row per line, entries space-separated.
MatrixGame parse_matrix_text(const std::string& text);
std::string matrix_text(const MatrixGame& game);

}  // namespace optest
