// Copyright 2026 The d2d-ee Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
// http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "d2dee/assignment.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <optional>

namespace d2dee {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

struct Matching {
  std::vector<int> col_of_row;
  double total = 0;
};

double row_order_total(const Eigen::MatrixXd& w, const std::vector<int>& col_of_row) {
  double total = 0;
  for (std::size_t r = 0; r < col_of_row.size(); ++r) total += w(static_cast<Eigen::Index>(r), col_of_row[r]);
  return total;
}

// Shortest-augmenting-path Hungarian method on a rows <= cols weight matrix,
// maximising. `allowed(r, c)` false marks a forbidden edge. Returns nullopt
// when no complete matching of the rows exists.
template <typename Allowed>
std::optional<Matching> hungarian(const Eigen::MatrixXd& w, const std::vector<int>& rows,
                                  const std::vector<int>& cols, Allowed allowed) {
  const int n = static_cast<int>(rows.size());
  const int m = static_cast<int>(cols.size());
  if (n == 0) return Matching{};
  if (n > m) return std::nullopt;

  const auto cost = [&](int i, int j) {  // 1-based local indices
    const int r = rows[i - 1], c = cols[j - 1];
    return allowed(r, c) ? -w(r, c) : kInf;
  };
  std::vector<double> u(n + 1, 0.0), v(m + 1, 0.0);
  std::vector<int> match(m + 1, 0), way(m + 1, 0);
  for (int i = 1; i <= n; ++i) {
    match[0] = i;
    int j0 = 0;
    std::vector<double> minv(m + 1, kInf);
    std::vector<char> used(m + 1, 0);
    do {
      used[j0] = 1;
      const int i0 = match[j0];
      double delta = kInf;
      int j1 = 0;
      for (int j = 1; j <= m; ++j) {
        if (used[j]) continue;
        const double c = cost(i0, j);
        if (c < kInf) {
          const double cur = c - u[i0] - v[j];
          if (cur < minv[j]) {
            minv[j] = cur;
            way[j] = j0;
          }
        }
        if (minv[j] < delta) {
          delta = minv[j];
          j1 = j;
        }
      }
      if (delta == kInf) return std::nullopt;
      for (int j = 0; j <= m; ++j) {
        if (used[j]) {
          u[match[j]] += delta;
          v[j] -= delta;
        } else {
          minv[j] -= delta;
        }
      }
      j0 = j1;
    } while (match[j0] != 0);
    do {
      const int j1 = way[j0];
      match[j0] = match[j1];
      j0 = j1;
    } while (j0 != 0);
  }

  Matching out;
  out.col_of_row.assign(n, -1);
  for (int j = 1; j <= m; ++j)
    if (match[j] != 0) out.col_of_row[match[j] - 1] = cols[j - 1];
  for (int i = 0; i < n; ++i) out.total += w(rows[i], out.col_of_row[i]);
  return out;
}

// Walks the rows in order and moves each one to the smallest column that still
// admits an optimal completion.
template <typename Allowed>
std::vector<int> lexicographic_optimum(const Eigen::MatrixXd& w, std::vector<int> col_of_row,
                                       Allowed allowed) {
  const int n = static_cast<int>(w.rows());
  const int m = static_cast<int>(w.cols());
  const double optimum = row_order_total(w, col_of_row);

  std::vector<char> taken(m, 0);
  double fixed = 0;
  for (int i = 0; i < n; ++i) {
    std::vector<int> rest_rows;
    for (int r = i + 1; r < n; ++r) rest_rows.push_back(r);
    double rest_bound = 0;
    for (int r : rest_rows) {
      double best = -kInf;
      for (int c = 0; c < m; ++c)
        if (!taken[c] && allowed(r, c)) best = std::max(best, w(r, c));
      rest_bound += best;
    }
    for (int j = 0; j < col_of_row[i]; ++j) {
      if (taken[j] || !allowed(i, j)) continue;
      if (fixed + w(i, j) + rest_bound < optimum && !utilities_tie(fixed + w(i, j) + rest_bound, optimum))
        continue;
      std::vector<int> rest_cols;
      for (int c = 0; c < m; ++c)
        if (!taken[c] && c != j) rest_cols.push_back(c);
      const auto rest = hungarian(w, rest_rows, rest_cols, allowed);
      if (!rest) continue;
      const double total = fixed + w(i, j) + rest->total;
      if (total >= optimum || utilities_tie(total, optimum)) {
        col_of_row[i] = j;
        for (std::size_t k = 0; k < rest_rows.size(); ++k) col_of_row[rest_rows[k]] = rest->col_of_row[k];
        break;
      }
    }
    taken[col_of_row[i]] = 1;
    fixed += w(i, col_of_row[i]);
  }
  return col_of_row;
}

std::vector<int> iota_vector(int n) {
  std::vector<int> v(n);
  for (int i = 0; i < n; ++i) v[i] = i;
  return v;
}

}  // namespace

bool utilities_tie(double a, double b) {
  return std::abs(a - b) <= 1e-12 * std::max({1.0, std::abs(a), std::abs(b)});
}

Assignment max_weight_assignment(const Eigen::MatrixXd& utilities, AssignmentPolicy policy) {
  const int n = static_cast<int>(utilities.rows());
  const int m = static_cast<int>(utilities.cols());
  if (n > m) throw SizeError("max_weight_assignment: more pairs than RBs");

  Assignment out;
  out.rb_of_pair.assign(n, kUnassigned);
  if (n == 0) return out;

  if (policy == AssignmentPolicy::strict) {
    const auto allowed = [&](int r, int c) { return !is_forbidden(utilities(r, c)); };
    const auto solved = hungarian(utilities, iota_vector(n), iota_vector(m), allowed);
    if (!solved) throw InfeasibleError("max_weight_assignment: no complete assignment avoids forbidden entries");
    out.rb_of_pair = lexicographic_optimum(utilities, solved->col_of_row, allowed);
    out.total_utility = row_order_total(utilities, out.rb_of_pair);
    return out;
  }

  // drop_infeasible: rows with no admissible entry are removed up front; the
  // rest get a private "drop" column whose penalty exceeds any utility spread,
  // so the number of assigned pairs is maximised before the utility.
  std::vector<int> kept;
  for (int i = 0; i < n; ++i) {
    bool any = false;
    for (int j = 0; j < m; ++j) any = any || !is_forbidden(utilities(i, j));
    if (any) kept.push_back(i);
    else out.dropped_pairs.push_back(i);
  }
  const int k = static_cast<int>(kept.size());
  if (k == 0) return out;

  double spread = 0;
  for (int r : kept) {
    double row_max = 0;
    for (int j = 0; j < m; ++j)
      if (!is_forbidden(utilities(r, j))) row_max = std::max(row_max, std::abs(utilities(r, j)));
    spread += row_max;
  }
  const double drop_penalty = -(2.0 * spread + 1.0);

  Eigen::MatrixXd extended = Eigen::MatrixXd::Constant(k, m + k, kInfeasibleUtility);
  for (int a = 0; a < k; ++a) {
    extended.row(a).head(m) = utilities.row(kept[a]);
    extended(a, m + a) = drop_penalty;
  }
  const auto allowed = [&](int r, int c) { return !is_forbidden(extended(r, c)); };
  const auto solved = hungarian(extended, iota_vector(k), iota_vector(m + k), allowed);
  const auto cols = lexicographic_optimum(extended, solved->col_of_row, allowed);
  for (int a = 0; a < k; ++a) {
    if (cols[a] < m) out.rb_of_pair[kept[a]] = cols[a];
    else out.dropped_pairs.push_back(kept[a]);
  }
  std::sort(out.dropped_pairs.begin(), out.dropped_pairs.end());
  for (int i = 0; i < n; ++i)
    if (out.rb_of_pair[i] != kUnassigned) out.total_utility += utilities(i, out.rb_of_pair[i]);
  return out;
}

Assignment brute_force_assignment(const Eigen::MatrixXd& utilities) {
  const int n = static_cast<int>(utilities.rows());
  const int m = static_cast<int>(utilities.cols());
  if (n > m) throw SizeError("brute_force_assignment: more pairs than RBs");
  if (m > 10) throw SizeError("brute_force_assignment: at most 10 RBs");

  std::vector<int> current(n, 0), best;
  std::vector<char> taken(m, 0);
  double best_total = -kInf;
  const auto recurse = [&](auto&& self, int row) -> void {
    if (row == n) {
      const double total = row_order_total(utilities, current);
      if (best.empty() || (total > best_total && !utilities_tie(total, best_total))) {
        best = current;
        best_total = total;
      }
      return;
    }
    for (int c = 0; c < m; ++c) {
      if (taken[c]) continue;
      taken[c] = 1;
      current[row] = c;
      self(self, row + 1);
      taken[c] = 0;
    }
  };
  recurse(recurse, 0);

  Assignment out;
  out.rb_of_pair = best;
  out.total_utility = n == 0 ? 0.0 : best_total;
  return out;
}

}  // namespace d2dee
