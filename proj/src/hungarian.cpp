#include <algorithm>
#include <cmath>
#include <limits>
#include <vector>

#include "wlmp/matching.hpp"

namespace wlmp {
namespace {

using Index = std::size_t;
constexpr Index kNone = std::numeric_limits<Index>::max();

struct DualSolution {
  std::vector<Index> row_to_col;
  std::vector<double> u;  // row potentials
  std::vector<double> v;  // column potentials
};

// Shortest augmenting path with potentials, one row at a time. Index 0 of
// the 1-based work arrays is the virtual column used to start each search.
DualSolution solve_dual(const Eigen::MatrixXd& c) {
  const Index n = static_cast<Index>(c.rows());
  constexpr double inf = std::numeric_limits<double>::infinity();
  std::vector<double> u(n + 1, 0.0), v(n + 1, 0.0), min_slack(n + 1);
  std::vector<Index> col_owner(n + 1, 0), way(n + 1, 0);
  std::vector<char> used(n + 1);

  for (Index row = 1; row <= n; ++row) {
    col_owner[0] = row;
    Index col0 = 0;
    std::fill(min_slack.begin(), min_slack.end(), inf);
    std::fill(used.begin(), used.end(), 0);
    do {
      used[col0] = 1;
      const Index r = col_owner[col0];
      double delta = inf;
      Index col1 = 0;
      for (Index j = 1; j <= n; ++j) {
        if (used[j]) continue;
        const double slack = c(static_cast<Eigen::Index>(r - 1), static_cast<Eigen::Index>(j - 1)) - u[r] - v[j];
        if (slack < min_slack[j]) {
          min_slack[j] = slack;
          way[j] = col0;
        }
        if (min_slack[j] < delta) {
          delta = min_slack[j];
          col1 = j;
        }
      }
      for (Index j = 0; j <= n; ++j) {
        if (used[j]) {
          u[col_owner[j]] += delta;
          v[j] -= delta;
        } else {
          min_slack[j] -= delta;
        }
      }
      col0 = col1;
    } while (col_owner[col0] != 0);
    do {
      const Index col1 = way[col0];
      col_owner[col0] = col_owner[col1];
      col0 = col1;
    } while (col0 != 0);
  }

  DualSolution out;
  out.row_to_col.assign(n, kNone);
  for (Index j = 1; j <= n; ++j) out.row_to_col[col_owner[j] - 1] = j - 1;
  out.u.assign(u.begin() + 1, u.end());
  out.v.assign(v.begin() + 1, v.end());
  return out;
}

// Every optimal matching uses only edges that are tight under optimal
// potentials, so the lexicographically smallest optimum is a perfect matching
// of the tight subgraph. Rows are fixed in order; row i moves to a smaller
// tight column j when an alternating path from j's current owner back to
// i's current column exists among the unfixed rows.
std::vector<Index> lexicographic_refinement(const Eigen::MatrixXd& c, const DualSolution& dual) {
  const Index n = static_cast<Index>(c.rows());
  const double tol = 1e-9 * (1.0 + c.cwiseAbs().maxCoeff());

  std::vector<std::vector<Index>> tight(n);
  for (Index i = 0; i < n; ++i) {
    for (Index j = 0; j < n; ++j) {
      if (c(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) - dual.u[i] - dual.v[j] <= tol) {
        tight[i].push_back(j);
      }
    }
  }

  std::vector<Index> row_to_col = dual.row_to_col;
  std::vector<Index> col_to_row(n);
  for (Index i = 0; i < n; ++i) col_to_row[row_to_col[i]] = i;

  std::vector<Index> parent_col(n);   // for each visited column: column we came from
  std::vector<char> visited(n);
  std::vector<Index> queue;
  queue.reserve(n);

  for (Index i = 0; i < n; ++i) {
    const Index current = row_to_col[i];
    for (const Index j : tight[i]) {
      if (j >= current) break;
      const Index owner = col_to_row[j];
      if (owner < i) continue;  // owned by a fixed row
      // BFS over columns: from column x (owned by row r = col_to_row[x]),
      // row r may move to any tight column y; reaching `current` closes the
      // cycle i→j, owner(j)→…→current.
      std::fill(visited.begin(), visited.end(), 0);
      queue.clear();
      queue.push_back(j);
      visited[j] = 1;
      visited[current] = 0;
      Index found = kNone;
      for (Index head = 0; head < queue.size() && found == kNone; ++head) {
        const Index x = queue[head];
        const Index r = col_to_row[x];
        for (const Index y : tight[r]) {
          if (visited[y]) continue;
          if (y == current) {
            parent_col[y] = x;
            found = y;
            break;
          }
          if (col_to_row[y] < i) continue;
          visited[y] = 1;
          parent_col[y] = x;
          queue.push_back(y);
        }
      }
      if (found == kNone) continue;
      // shift every row on the path one column along
      Index y = found;
      while (y != j) {
        const Index x = parent_col[y];
        const Index r = col_to_row[x];
        row_to_col[r] = y;
        col_to_row[y] = r;
        y = x;
      }
      row_to_col[i] = j;
      col_to_row[j] = i;
      break;
    }
  }
  return row_to_col;
}

double total_of(const Eigen::MatrixXd& c, const std::vector<Index>& row_to_col) {
  double total = 0.0;
  for (Index i = 0; i < row_to_col.size(); ++i) {
    total += c(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(row_to_col[i]));
  }
  return total;
}

}  // namespace

Assignment hungarian(const CostMatrix& cost) {
  const Eigen::MatrixXd& c = cost.entries();
  Assignment out;
  if (c.rows() == 0) return out;

  const DualSolution dual = solve_dual(c);
  std::vector<Index> refined = lexicographic_refinement(c, dual);
  // the tolerance on tight edges may admit a matching that is worse by a
  // rounding-level amount; never trade real cost for lexicographic order
  const double raw_total = total_of(c, dual.row_to_col);
  if (total_of(c, refined) > raw_total + 1e-12 * (1.0 + std::abs(raw_total))) {
    refined = dual.row_to_col;
  }

  out.pairs = std::move(refined);
  out.pair_costs.resize(out.pairs.size());
  for (Index i = 0; i < out.pairs.size(); ++i) {
    out.pair_costs[i] = c(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(out.pairs[i]));
    out.total_cost += out.pair_costs[i];
  }
  return out;
}

}  // namespace wlmp
