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

// Independent reference implementations the tests check the library
// against. Everything here is written from the definitions with plain
// loops and explicit arithmetic, deliberately not calling the library's
// region, index, or solver code, so that agreement between the two is
// meaningful evidence rather than a tautology.

#ifndef GEOMASK_TESTS_ORACLES_HPP_
#define GEOMASK_TESTS_ORACLES_HPP_

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <set>
#include <span>
#include <utility>
#include <vector>

#include "geomask/geometry.hpp"
#include "geomask/methods.hpp"

namespace geomask::oracles {

inline double dist(const Point& a, const Point& b) {
  const double dx = a.x - b.x;
  const double dy = a.y - b.y;
  return std::sqrt(dx * dx + dy * dy);
}

// -- Nearest neighbor ------------------------------------------------------

struct BruteNn {
  double distance = std::numeric_limits<double>::infinity();
  std::vector<std::size_t> ties;
};

/// Linear-scan nearest neighbor with the same closed tie window the
/// library promises: every index whose distance is within eps of the
/// minimum, ascending.
inline BruteNn brute_nn(std::span<const Point> points, const Point& q,
                        double eps) {
  BruteNn out;
  for (const Point& p : points) {
    out.distance = std::min(out.distance, dist(p, q));
  }
  for (std::size_t i = 0; i < points.size(); ++i) {
    if (dist(points[i], q) <= out.distance + eps) out.ties.push_back(i);
  }
  return out;
}

// -- Method membership, spelled out by hand --------------------------------

/// Could an original at `from` produce a masked point at `to` under the
/// method? Closed bounds with absolute tolerance eps.
inline bool reachable(const MaskMethod& method, const Point& from,
                      const Point& to, double eps) {
  if (const auto* u = std::get_if<UniformDisk>(&method)) {
    return dist(from, to) <= u->radius + eps;
  }
  if (const auto* d = std::get_if<Donut>(&method)) {
    const double r = dist(from, to);
    return r >= d->r_min - eps && r <= d->r_max + eps;
  }
  const auto& g = std::get<GridSnap>(method);
  const double i = std::floor((from.x - g.origin_x) / g.cell_size);
  const double j = std::floor((from.y - g.origin_y) / g.cell_size);
  const Point center{g.origin_x + (i + 0.5) * g.cell_size,
                     g.origin_y + (j + 0.5) * g.cell_size};
  return dist(center, to) <= eps;
}

// -- The four metrics, from their definitions ------------------------------

inline int k_original(const Point& a_prime, const Point& a,
                      std::span<const Point> candidates, double eps) {
  const double r = dist(a_prime, a);
  int k = 0;
  for (const Point& y : candidates) {
    if (dist(a_prime, y) <= r + eps) ++k;
  }
  return k;
}

inline int k_original_method(const Point& a_prime,
                             std::span<const Point> candidates,
                             const MaskMethod& method, bool clip,
                             const StudyArea& area, double eps) {
  int k = 0;
  for (const Point& y : candidates) {
    if (!reachable(method, y, a_prime, eps)) continue;
    if (clip && !area.contains(y, eps)) continue;
    ++k;
  }
  return k;
}

inline int k_moved(const Point& a, const Point& a_prime,
                   std::span<const Point> masked, double eps) {
  const double r = dist(a, a_prime);
  int k = 0;
  for (const Point& y : masked) {
    if (dist(a, y) <= r + eps) ++k;
  }
  return k;
}

inline int k_moved_method(const Point& a, std::span<const Point> masked,
                          const MaskMethod& method, bool clip,
                          const StudyArea& area, double eps) {
  int k = 0;
  for (const Point& y : masked) {
    if (!reachable(method, a, y, eps)) continue;
    if (clip && !area.contains(y, eps)) continue;
    ++k;
  }
  return k;
}

/// Textbook spatial k-anonymity: the number of masked points at most as
/// far from a record's true location as its own masked point. Kept as a
/// separate implementation (not an alias of k_moved above) on purpose.
inline int textbook_spatial_k_anonymity(std::size_t record,
                                        std::span<const Point> originals,
                                        std::span<const Point> masked,
                                        double eps) {
  const double displacement = dist(originals[record], masked[record]);
  int k = 0;
  for (const Point& m : masked) {
    if (dist(originals[record], m) <= displacement + eps) ++k;
  }
  return k;
}

/// Distinct coordinates among candidates counted by a predicate, using
/// exact equality like the library does.
template <typename Pred>
inline int distinct_where(std::span<const Point> points, Pred&& pred) {
  std::set<std::pair<double, double>> seen;
  for (const Point& p : points) {
    if (pred(p)) seen.emplace(p.x, p.y);
  }
  return static_cast<int>(seen.size());
}

// -- Assignment -------------------------------------------------------------

/// Exact minimum-cost injective assignment of rows to columns found by
/// trying every injection. Exponential; callers keep rows <= 8.
template <typename Cost>
inline double brute_assignment_cost(std::size_t n_rows, std::size_t n_cols,
                                    Cost&& cost) {
  std::vector<std::size_t> cols(n_cols);
  for (std::size_t j = 0; j < n_cols; ++j) cols[j] = j;
  double best = std::numeric_limits<double>::infinity();
  std::vector<bool> used(n_cols, false);
  std::vector<std::size_t> pick(n_rows, 0);
  const auto recurse = [&](auto&& self, std::size_t row,
                           double so_far) -> void {
    if (so_far >= best) return;
    if (row == n_rows) {
      best = so_far;
      return;
    }
    for (std::size_t j = 0; j < n_cols; ++j) {
      if (used[j]) continue;
      used[j] = true;
      self(self, row + 1, so_far + cost(row, j));
      used[j] = false;
    }
  };
  recurse(recurse, 0, 0.0);
  return best;
}

// -- Distribution checks ----------------------------------------------------

/// Two-sided Kolmogorov-Smirnov statistic of samples against a continuous
/// CDF: sup over sample points of the gap between the empirical and the
/// model distribution.
template <typename Cdf>
inline double ks_statistic(std::vector<double> samples, Cdf&& cdf) {
  std::sort(samples.begin(), samples.end());
  const double n = static_cast<double>(samples.size());
  double stat = 0.0;
  for (std::size_t i = 0; i < samples.size(); ++i) {
    const double f = cdf(samples[i]);
    const double hi = (static_cast<double>(i) + 1.0) / n - f;
    const double lo = f - static_cast<double>(i) / n;
    stat = std::max({stat, hi, lo});
  }
  return stat;
}

/// Mean displacement radius of an area-uniform draw from the annulus
/// [r_min, r_max]: the ratio of the first radial moment to the area.
inline double annulus_mean_radius(double r_min, double r_max) {
  return 2.0 * (r_max * r_max * r_max - r_min * r_min * r_min) /
         (3.0 * (r_max * r_max - r_min * r_min));
}

}  // namespace geomask::oracles

#endif  // GEOMASK_TESTS_ORACLES_HPP_
