// Copyright 2026 The geomask Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     https://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef GEOMASK_ASSIGNMENT_HPP_
#define GEOMASK_ASSIGNMENT_HPP_

#include <cstddef>
#include <functional>
#include <limits>
#include <string>
#include <vector>

#include "geomask/errors.hpp"

namespace geomask {

/// Minimum-cost assignment of each row to a distinct column.
struct AssignmentResult {
  /// column_of_row[i] is the column assigned to row i; size == n_rows.
  std::vector<std::size_t> column_of_row;
  double total_cost = 0.0;
};

/// Exact rectangular linear assignment by shortest augmenting paths with
/// potentials (the Jonker-Volgenant style Hungarian variant), O(n^2 * m).
/// Requires n_rows <= n_cols; callers with more rows than columns
/// transpose. Costs are pulled through the callable on demand, so no
/// n x m matrix is ever materialized; cost(i, j) must be finite and is
/// evaluated O(n * m) times total.
inline AssignmentResult solve_assignment(
    std::size_t n_rows, std::size_t n_cols,
    const std::function<double(std::size_t, std::size_t)>& cost) {
  if (n_rows > n_cols) {
    throw ConfigError("assignment requires n_rows <= n_cols (got " +
                      std::to_string(n_rows) + " x " +
                      std::to_string(n_cols) + "); transpose the problem");
  }
  AssignmentResult result;
  if (n_rows == 0) return result;

  constexpr double kInf = std::numeric_limits<double>::infinity();
  const std::size_t n = n_rows;
  const std::size_t m = n_cols;

  // 1-indexed working arrays; index 0 is the virtual start column.
  std::vector<double> u(n + 1, 0.0);
  std::vector<double> v(m + 1, 0.0);
  std::vector<std::size_t> p(m + 1, 0);    // p[j]: row matched to column j
  std::vector<std::size_t> way(m + 1, 0);  // predecessor column on the path
  std::vector<double> minv(m + 1, 0.0);
  std::vector<char> used(m + 1, 0);

  for (std::size_t i = 1; i <= n; ++i) {
    p[0] = i;
    std::size_t j0 = 0;
    std::fill(minv.begin(), minv.end(), kInf);
    std::fill(used.begin(), used.end(), 0);
    do {
      used[j0] = 1;
      const std::size_t i0 = p[j0];
      double delta = kInf;
      std::size_t j1 = 0;
      for (std::size_t j = 1; j <= m; ++j) {
        if (used[j]) continue;
        const double cur = cost(i0 - 1, j - 1) - u[i0] - v[j];
        if (cur < minv[j]) {
          minv[j] = cur;
          way[j] = j0;
        }
        if (minv[j] < delta) {
          delta = minv[j];
          j1 = j;
        }
      }
      for (std::size_t j = 0; j <= m; ++j) {
        if (used[j]) {
          u[p[j]] += delta;
          v[j] -= delta;
        } else {
          minv[j] -= delta;
        }
      }
      j0 = j1;
    } while (p[j0] != 0);
    do {
      const std::size_t j1 = way[j0];
      p[j0] = p[j1];
      j0 = j1;
    } while (j0 != 0);
  }

  result.column_of_row.assign(n, 0);
  for (std::size_t j = 1; j <= m; ++j) {
    if (p[j] != 0) result.column_of_row[p[j] - 1] = j - 1;
  }
  for (std::size_t i = 0; i < n; ++i) {
    result.total_cost += cost(i, result.column_of_row[i]);
  }
  return result;
}

/// Greedy injective matching: rows in index order each take the cheapest
/// still-unused column. Deterministic, O(n * m), and never better than
/// the optimum; used as a sanity upper bound on assignment cost.
inline AssignmentResult greedy_matching(
    std::size_t n_rows, std::size_t n_cols,
    const std::function<double(std::size_t, std::size_t)>& cost) {
  if (n_rows > n_cols) {
    throw ConfigError("greedy matching requires n_rows <= n_cols");
  }
  AssignmentResult result;
  std::vector<char> taken(n_cols, 0);
  result.column_of_row.reserve(n_rows);
  for (std::size_t i = 0; i < n_rows; ++i) {
    double best = std::numeric_limits<double>::infinity();
    std::size_t best_j = n_cols;
    for (std::size_t j = 0; j < n_cols; ++j) {
      if (taken[j]) continue;
      const double c = cost(i, j);
      if (c < best) {
        best = c;
        best_j = j;
      }
    }
    taken[best_j] = 1;
    result.column_of_row.push_back(best_j);
    result.total_cost += best;
  }
  return result;
}

}  // namespace geomask

#endif  // GEOMASK_ASSIGNMENT_HPP_
