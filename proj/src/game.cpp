#include "optest/game.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>
#include <stdexcept>

#include "optest/errors.hpp"
#include "optest/numeric.hpp"

namespace optest {

namespace {

constexpr double kPivotEps = 1e-9;

// Dense phase-2 simplex for
//   max c.x  s.t.  A x <= b, x >= 0,  b >= 0.
// Dantzig's rule with a Bland fallback against degenerate stalling, plus
// periodic refactorization of the tableau from the original data so pivot
// round-off cannot accumulate. Fills primal x and the duals y of the row
// constraints; throws NonConvergence if the pivot budget runs out.
struct Simplex {
  int m, n;
  std::vector<std::vector<double>> a;
  std::vector<double> b, c;
  std::vector<std::vector<double>> tab;  // (m+1) x (n+m+1)
  std::vector<int> basis;
  long pivots = 0;

  Simplex(std::vector<std::vector<double>> a_in, std::vector<double> b_in,
          std::vector<double> c_in)
      : m(static_cast<int>(b_in.size())),
        n(static_cast<int>(c_in.size())),
        a(std::move(a_in)),
        b(std::move(b_in)),
        c(std::move(c_in)) {
    tab.assign(m + 1, std::vector<double>(n + m + 1, 0.0));
    basis.resize(m);
    for (int i = 0; i < m; ++i) {
      for (int j = 0; j < n; ++j) tab[i][j] = a[i][j];
      tab[i][n + i] = 1.0;
      tab[i][n + m] = b[i];
      basis[i] = n + i;
    }
    for (int j = 0; j < n; ++j) tab[m][j] = -c[j];
  }

  double original(int i, int j) const {  // entry of [A | I | b]
    if (j < n) return a[i][j];
    if (j < n + m) return j - n == i ? 1.0 : 0.0;
    return b[i];
  }
  double cost(int j) const { return j < n ? c[j] : 0.0; }

  // Rebuilds the tableau as B^-1 [A | I | b] by Gaussian elimination with
  // partial pivoting, then recomputes the reduced-cost row. Row k ends up
  // carrying basis[k] as before.
  void refactorize() {
    const int w = n + m + 1;
    std::vector<std::vector<double>> lhs(m, std::vector<double>(m));
    for (int i = 0; i < m; ++i)
      for (int k = 0; k < m; ++k) lhs[i][k] = original(i, basis[k]);
    std::vector<std::vector<double>> rhs(m, std::vector<double>(w));
    for (int i = 0; i < m; ++i)
      for (int j = 0; j < w; ++j) rhs[i][j] = original(i, j);
    for (int col = 0; col < m; ++col) {
      int piv = col;
      for (int i = col + 1; i < m; ++i)
        if (std::fabs(lhs[i][col]) > std::fabs(lhs[piv][col])) piv = i;
      if (std::fabs(lhs[piv][col]) < 1e-13)
        throw NonConvergence("simplex: singular basis during refactorization");
      std::swap(lhs[piv], lhs[col]);
      std::swap(rhs[piv], rhs[col]);
      double inv = 1.0 / lhs[col][col];
      for (int j = 0; j < m; ++j) lhs[col][j] *= inv;
      for (int j = 0; j < w; ++j) rhs[col][j] *= inv;
      for (int i = 0; i < m; ++i) {
        if (i == col) continue;
        double f = lhs[i][col];
        if (f == 0.0) continue;
        for (int j = 0; j < m; ++j) lhs[i][j] -= f * lhs[col][j];
        for (int j = 0; j < w; ++j) rhs[i][j] -= f * rhs[col][j];
      }
    }
    for (int i = 0; i < m; ++i) tab[i] = std::move(rhs[i]);
    for (int j = 0; j < w; ++j) {
      double z = 0.0;
      for (int k = 0; k < m; ++k) z += cost(basis[k]) * tab[k][j];
      tab[m][j] = j < n + m ? z - cost(j) : z;
    }
  }

  // One entering/leaving step; returns false at (apparent) optimality.
  bool step(bool bland) {
    int enter = -1;
    double most_negative = -kPivotEps;
    for (int j = 0; j < n + m; ++j) {
      if (tab[m][j] < most_negative) {
        enter = j;
        if (bland) break;
        most_negative = tab[m][j];
      }
    }
    if (enter < 0) return false;
    int leave = -1;
    double best_ratio = 0.0;
    for (int i = 0; i < m; ++i) {
      if (tab[i][enter] > kPivotEps) {
        double r = std::max(tab[i][n + m], 0.0) / tab[i][enter];
        if (leave < 0 || r < best_ratio - kPivotEps ||
            (r < best_ratio + kPivotEps && basis[i] < basis[leave])) {
          leave = i;
          best_ratio = r;
        }
      }
    }
    if (leave < 0) throw NonConvergence("simplex: objective unbounded");
    pivot(leave, enter);
    return true;
  }

  double solve(std::vector<double>& x, std::vector<double>& y, long max_pivots) {
    const long bland_after = 12L * (m + n) + 200;
    const long refactor_every = 50;
    for (;;) {
      bool moved = false;
      for (long k = 0; k < refactor_every; ++k) {
        if (!step(pivots > bland_after)) break;
        moved = true;
        if (++pivots > max_pivots) throw NonConvergence("simplex: pivot budget exhausted");
      }
      refactorize();
      if (!moved) {
        if (!step(pivots > bland_after)) break;  // clean optimum
        if (++pivots > max_pivots) throw NonConvergence("simplex: pivot budget exhausted");
      }
    }
    x.assign(n, 0.0);
    for (int i = 0; i < m; ++i)
      if (basis[i] < n) x[basis[i]] = std::max(tab[i][n + m], 0.0);
    y.assign(m, 0.0);
    for (int i = 0; i < m; ++i) y[i] = std::max(tab[m][n + i], 0.0);
    return tab[m][n + m];
  }

  void pivot(int r, int s) {
    double inv = 1.0 / tab[r][s];
    for (double& v : tab[r]) v *= inv;
    tab[r][s] = 1.0;  // keep the unit entry exact
    for (int i = 0; i <= m; ++i) {
      if (i == r) continue;
      double factor = tab[i][s];
      if (factor == 0.0) continue;
      for (int j = 0; j <= n + m; ++j) tab[i][j] -= factor * tab[r][j];
      tab[i][s] = 0.0;
    }
    basis[r] = s;
  }
};

void validate_game(const MatrixGame& game) {
  if (game.rows() < 1 || game.cols() < 1) throw std::invalid_argument("empty game matrix");
  for (const auto& row : game.payoffs) {
    if (static_cast<int>(row.size()) != game.cols())
      throw std::invalid_argument("ragged game matrix");
    for (double v : row)
      if (!std::isfinite(v)) throw std::invalid_argument("game entries must be finite");
  }
}

void normalize_strategy(std::vector<double>& s) {
  double total = 0.0;
  for (double& v : s) {
    if (v < 0.0) v = 0.0;
    total += v;
  }
  if (total <= 0.0) {
    std::fill(s.begin(), s.end(), 1.0 / static_cast<double>(s.size()));
    return;
  }
  for (double& v : s) v /= total;
}

// Expert security level and Nature exposure; their difference is the gap.
std::pair<double, double> payoff_bracket(const MatrixGame& game, const std::vector<double>& x,
                                         const std::vector<double>& y) {
  int r = game.rows(), c = game.cols();
  double lower = std::numeric_limits<double>::infinity();
  for (int i = 0; i < r; ++i) {
    double v = 0.0;
    for (int j = 0; j < c; ++j) v += game.payoffs[i][j] * y[j];
    lower = std::min(lower, v);
  }
  double upper = -std::numeric_limits<double>::infinity();
  for (int j = 0; j < c; ++j) {
    double v = 0.0;
    for (int i = 0; i < r; ++i) v += game.payoffs[i][j] * x[i];
    upper = std::max(upper, v);
  }
  return {lower, upper};
}

GameSolution solve_lp(const MatrixGame& game, double tol, long max_iters) {
  int r = game.rows(), c = game.cols();
  double min_entry = game.payoffs[0][0];
  for (const auto& row : game.payoffs)
    for (double v : row) min_entry = std::min(min_entry, v);
  // Shift so every entry is >= 1; the shifted value is then positive and the
  // classic normalization u = x / value turns both players' problems into
  // one primal/dual LP pair:
  //   max 1.u  s.t.  A'^T u <= 1, u >= 0,
  // whose optimum is 1/value, primal solution Nature's mixture, row duals
  // the expert's.
  double shift = 1.0 - min_entry;
  std::vector<std::vector<double>> at(c, std::vector<double>(r));
  for (int i = 0; i < r; ++i)
    for (int j = 0; j < c; ++j) at[j][i] = game.payoffs[i][j] + shift;
  std::vector<double> b(c, 1.0), obj(r, 1.0);

  Simplex simplex(at, b, obj);
  std::vector<double> u, w;
  long budget = max_iters > 0 ? max_iters : 200000;
  double total = simplex.solve(u, w, budget);
  if (total <= 0.0) throw NonConvergence("game LP returned a nonpositive normalizer");

  GameSolution sol;
  sol.iterations = simplex.pivots;
  sol.row_strategy = std::move(u);
  sol.col_strategy = std::move(w);
  normalize_strategy(sol.row_strategy);
  normalize_strategy(sol.col_strategy);
  auto [lower, upper] = payoff_bracket(game, sol.row_strategy, sol.col_strategy);
  sol.value = 0.5 * (lower + upper);
  sol.duality_gap = std::max(0.0, upper - lower);
  if (sol.duality_gap > tol)
    throw NonConvergence("game LP finished with duality gap above tolerance");
  return sol;
}

GameSolution solve_mw(const MatrixGame& game, double tol, long max_iters) {
  int r = game.rows(), c = game.cols();
  long iters = max_iters > 0 ? max_iters : 100000;
  // Hedge self-play with averaged iterates; the average strategies converge
  // at rate O(sqrt(ln n / T)).
  double scale = 0.0;
  for (const auto& row : game.payoffs)
    for (double v : row) scale = std::max(scale, std::fabs(v));
  if (scale == 0.0) scale = 1.0;
  double eta_row = std::sqrt(std::log(std::max(2, r)) / static_cast<double>(iters)) / scale;
  double eta_col = std::sqrt(std::log(std::max(2, c)) / static_cast<double>(iters)) / scale;

  std::vector<double> log_wx(r, 0.0), log_wy(c, 0.0);
  std::vector<double> avg_x(r, 0.0), avg_y(c, 0.0);
  std::vector<double> x(r), y(c);
  for (long t = 0; t < iters; ++t) {
    auto softmax = [](const std::vector<double>& lw, std::vector<double>& out) {
      double mx = *std::max_element(lw.begin(), lw.end());
      double total = 0.0;
      for (std::size_t i = 0; i < lw.size(); ++i) {
        out[i] = std::exp(lw[i] - mx);
        total += out[i];
      }
      for (double& v : out) v /= total;
    };
    softmax(log_wx, x);
    softmax(log_wy, y);
    for (int i = 0; i < r; ++i) avg_x[i] += x[i];
    for (int j = 0; j < c; ++j) avg_y[j] += y[j];
    for (int i = 0; i < r; ++i) {
      double payoff = 0.0;
      for (int j = 0; j < c; ++j) payoff += game.payoffs[i][j] * y[j];
      log_wx[i] -= eta_row * payoff;  // Nature shifts toward low payoffs
    }
    for (int j = 0; j < c; ++j) {
      double payoff = 0.0;
      for (int i = 0; i < r; ++i) payoff += game.payoffs[i][j] * x[i];
      log_wy[j] += eta_col * payoff;
    }
  }
  GameSolution sol;
  sol.iterations = iters;
  sol.row_strategy = std::move(avg_x);
  sol.col_strategy = std::move(avg_y);
  normalize_strategy(sol.row_strategy);
  normalize_strategy(sol.col_strategy);
  auto [lower, upper] = payoff_bracket(game, sol.row_strategy, sol.col_strategy);
  sol.value = 0.5 * (lower + upper);
  sol.duality_gap = std::max(0.0, upper - lower);
  if (sol.duality_gap > tol)
    throw NonConvergence("multiplicative weights stopped with gap " +
                         std::to_string(sol.duality_gap) + " > tol");
  return sol;
}

}  // namespace

MatrixGame MatrixGame::from_payoffs(std::vector<std::vector<double>> payoffs,
                                    std::vector<std::string> row_labels,
                                    std::vector<std::string> col_labels) {
  MatrixGame game{std::move(payoffs), std::move(row_labels), std::move(col_labels)};
  validate_game(game);
  if (!game.row_labels.empty() && static_cast<int>(game.row_labels.size()) != game.rows())
    throw std::invalid_argument("row label count mismatch");
  if (!game.col_labels.empty() && static_cast<int>(game.col_labels.size()) != game.cols())
    throw std::invalid_argument("col label count mismatch");
  return game;
}

GameSolution solve_matrix_game(const MatrixGame& game, double tol, GameMethod method,
                               long max_iters) {
  validate_game(game);
  if (!(tol > 0.0)) throw std::invalid_argument("tol must be positive");
  switch (method) {
    case GameMethod::multiplicative_weights:
      return solve_mw(game, tol, max_iters);
    case GameMethod::linear_program:
      return solve_lp(game, tol, max_iters);
    case GameMethod::automatic:
    default:
      return solve_lp(game, tol, max_iters);
  }
}

std::pair<int, double> best_row_response(const MatrixGame& game,
                                         const std::vector<double>& col_strategy) {
  validate_game(game);
  if (static_cast<int>(col_strategy.size()) != game.cols())
    throw std::invalid_argument("column strategy size mismatch");
  int best = 0;
  double best_payoff = std::numeric_limits<double>::infinity();
  for (int i = 0; i < game.rows(); ++i) {
    double v = 0.0;
    for (int j = 0; j < game.cols(); ++j) v += game.payoffs[i][j] * col_strategy[j];
    if (v < best_payoff) {  // ties keep the lowest index
      best = i;
      best_payoff = v;
    }
  }
  return {best, best_payoff};
}

double brute_force_value(const MatrixGame& game, int grid) {
  validate_game(game);
  if (game.rows() > 3 || game.cols() > 3)
    throw std::invalid_argument("brute force oracle handles games up to 3x3");
  if (grid < 1) throw std::invalid_argument("grid must be >= 1");

  auto enumerate = [&](int dims, auto&& visit) {
    std::vector<double> point(dims);
    if (dims == 1) {
      point[0] = 1.0;
      visit(point);
      return;
    }
    for (int a = 0; a <= grid; ++a) {
      if (dims == 2) {
        point[0] = static_cast<double>(a) / grid;
        point[1] = 1.0 - point[0];
        visit(point);
      } else {
        for (int b = 0; a + b <= grid; ++b) {
          point[0] = static_cast<double>(a) / grid;
          point[1] = static_cast<double>(b) / grid;
          point[2] = 1.0 - point[0] - point[1];
          visit(point);
        }
      }
    }
  };

  int r = game.rows(), c = game.cols();
  double lower = -std::numeric_limits<double>::infinity();
  enumerate(c, [&](const std::vector<double>& y) {
    double worst = std::numeric_limits<double>::infinity();
    for (int i = 0; i < r; ++i) {
      double v = 0.0;
      for (int j = 0; j < c; ++j) v += game.payoffs[i][j] * y[j];
      worst = std::min(worst, v);
    }
    lower = std::max(lower, worst);
  });
  double upper = std::numeric_limits<double>::infinity();
  enumerate(r, [&](const std::vector<double>& x) {
    double worst = -std::numeric_limits<double>::infinity();
    for (int j = 0; j < c; ++j) {
      double v = 0.0;
      for (int i = 0; i < r; ++i) v += game.payoffs[i][j] * x[i];
      worst = std::max(worst, v);
    }
    upper = std::min(upper, worst);
  });
  return 0.5 * (lower + upper);
}

MatrixGame parse_matrix_text(const std::string& text) {
  std::vector<std::vector<double>> rows;
  std::istringstream lines(text);
  std::string line;
  while (std::getline(lines, line)) {
    auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    std::istringstream fields(line);
    std::vector<double> row;
    double v;
    while (fields >> v) row.push_back(v);
    if (!fields.eof()) throw std::invalid_argument("bad matrix line: " + line);
    if (!row.empty()) rows.push_back(std::move(row));
  }
  if (rows.empty()) throw std::invalid_argument("empty matrix text");
  return MatrixGame::from_payoffs(std::move(rows));
}

std::string matrix_text(const MatrixGame& game) {
  std::string out;
  for (const auto& row : game.payoffs) {
    for (std::size_t j = 0; j < row.size(); ++j) {
      if (j) out += " ";
      out += scalar_str(row[j]);
    }
    out += "\n";
  }
  return out;
}

}  // namespace optest
