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

#ifndef GEOMASK_SPATIAL_INDEX_HPP_
#define GEOMASK_SPATIAL_INDEX_HPP_

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdlib>
#include <limits>
#include <span>
#include <vector>

#include "geomask/errors.hpp"
#include "geomask/geometry.hpp"

namespace geomask {

/// Nearest-neighbor answer. Ties carries every index whose distance to
/// the query is within the boundary tolerance of the minimum, in
/// ascending index order; co-located candidates are all reported rather
/// than silently resolved, because attack scoring must see the whole tie
/// set. Empty input yields an infinite distance and no ties.
struct NnResult {
  double distance = std::numeric_limits<double>::infinity();
  std::vector<std::size_t> ties;
};

/// Uniform-grid point index. Pure accelerator: nn() and the region
/// queries return exactly what a linear scan over the same points with
/// the same tolerance returns. The bucket size only moves work around
/// (default: bounding-box diagonal / sqrt(n)); it can never change an
/// answer.
class PointIndex {
 public:
  explicit PointIndex(std::span<const Point> points,
                      double bucket_size = 0.0)
      : points_(points.begin(), points.end()) {
    if (points_.empty()) {
      min_x_ = min_y_ = 0.0;
      h_ = 1.0;
      cols_ = rows_ = 1;
      buckets_.resize(1);
      return;
    }
    double lo_x = points_[0].x, hi_x = points_[0].x;
    double lo_y = points_[0].y, hi_y = points_[0].y;
    for (const Point& p : points_) {
      lo_x = std::min(lo_x, p.x);
      hi_x = std::max(hi_x, p.x);
      lo_y = std::min(lo_y, p.y);
      hi_y = std::max(hi_y, p.y);
    }
    min_x_ = lo_x;
    min_y_ = lo_y;
    const double width = hi_x - lo_x;
    const double height = hi_y - lo_y;
    const double diagonal = std::hypot(width, height);
    h_ = bucket_size > 0.0
             ? bucket_size
             : diagonal / std::sqrt(static_cast<double>(points_.size()));
    if (!(h_ > 0.0)) h_ = 1.0;
    cols_ = grid_extent(width);
    rows_ = grid_extent(height);
    buckets_.resize(cols_ * rows_);
    for (std::size_t i = 0; i < points_.size(); ++i) {
      buckets_[bucket_of(points_[i])].push_back(i);
    }
  }

  std::size_t size() const { return points_.size(); }
  const Point& point(std::size_t i) const { return points_[i]; }
  double bucket_size() const { return h_; }

  /// Nearest neighbors of q with the full tie set (d <= d_min + eps).
  /// Throws DomainError on an empty index: "nearest of nothing" has no
  /// answer and silently returning an empty set would hide caller bugs.
  NnResult nn(const Point& q, double eps = kBoundaryEpsilon) const {
    NnResult result;
    if (points_.empty()) {
      throw DomainError("nearest-neighbor query on an empty index");
    }

    // Pass 1: expanding square rings of buckets around q until the ring
    // itself cannot hold anything closer than the best distance so far.
    const std::ptrdiff_t cx = col_of(q.x);
    const std::ptrdiff_t cy = row_of(q.y);
    // Rings are centered on the (possibly out-of-grid) cell containing q;
    // the farthest grid cell bounds how many rings can exist at all.
    const std::ptrdiff_t max_ring =
        std::max(std::max(std::abs(cx), std::abs(cx - (cols_ - 1))),
                 std::max(std::abs(cy), std::abs(cy - (rows_ - 1))));
    double best = std::numeric_limits<double>::infinity();
    for (std::ptrdiff_t ring = 0; ring <= max_ring; ++ring) {
      if (ring > 0 &&
          static_cast<double>(ring - 1) * h_ > best + eps) {
        break;
      }
      visit_ring(cx, cy, ring, [&](std::size_t b) {
        if (bucket_min_dist(b, q) > best) return;
        for (const std::size_t i : buckets_[b]) {
          best = std::min(best, distance(points_[i], q));
        }
      });
    }

    // Pass 2: re-collect every index within best + eps so ties straddling
    // bucket borders are never missed.
    result.distance = best;
    const double reach = best + eps;
    const std::ptrdiff_t c0 = col_of(q.x - reach);
    const std::ptrdiff_t c1 = col_of(q.x + reach);
    const std::ptrdiff_t r0 = row_of(q.y - reach);
    const std::ptrdiff_t r1 = row_of(q.y + reach);
    for (std::ptrdiff_t r = std::max<std::ptrdiff_t>(r0, 0);
         r <= std::min<std::ptrdiff_t>(r1, rows_ - 1); ++r) {
      for (std::ptrdiff_t c = std::max<std::ptrdiff_t>(c0, 0);
           c <= std::min<std::ptrdiff_t>(c1, cols_ - 1); ++c) {
        for (const std::size_t i :
             buckets_[static_cast<std::size_t>(r) * cols_ +
                      static_cast<std::size_t>(c)]) {
          if (distance(points_[i], q) <= reach) result.ties.push_back(i);
        }
      }
    }
    std::sort(result.ties.begin(), result.ties.end());
    return result;
  }

  /// Number of indexed points in the region, duplicates included.
  /// Identical to restricted_count over the same points.
  std::size_t count_in_region(const Region& region,
                              double eps = kBoundaryEpsilon) const {
    std::size_t n = 0;
    for_candidates(region, eps, [&](std::size_t i) {
      if (region.contains(points_[i], eps)) ++n;
    });
    return n;
  }

  /// Indices of points in the region, ascending.
  std::vector<std::size_t> indices_in_region(
      const Region& region, double eps = kBoundaryEpsilon) const {
    std::vector<std::size_t> out;
    for_candidates(region, eps, [&](std::size_t i) {
      if (region.contains(points_[i], eps)) out.push_back(i);
    });
    std::sort(out.begin(), out.end());
    return out;
  }

 private:
  std::size_t grid_extent(double span_len) const {
    const double cells = std::ceil(span_len / h_);
    const std::size_t n =
        cells > 0.0 ? static_cast<std::size_t>(cells) : std::size_t{1};
    return std::max<std::size_t>(n, 1);
  }

  std::ptrdiff_t col_of(double x) const {
    return static_cast<std::ptrdiff_t>(std::floor((x - min_x_) / h_));
  }
  std::ptrdiff_t row_of(double y) const {
    return static_cast<std::ptrdiff_t>(std::floor((y - min_y_) / h_));
  }

  std::size_t bucket_of(const Point& p) const {
    const std::ptrdiff_t c =
        std::clamp<std::ptrdiff_t>(col_of(p.x), 0, cols_ - 1);
    const std::ptrdiff_t r =
        std::clamp<std::ptrdiff_t>(row_of(p.y), 0, rows_ - 1);
    return static_cast<std::size_t>(r) * cols_ + static_cast<std::size_t>(c);
  }

  /// Smallest distance from q to bucket b's rectangle (0 when inside).
  double bucket_min_dist(std::size_t b, const Point& q) const {
    const std::size_t r = b / cols_;
    const std::size_t c = b % cols_;
    const double x0 = min_x_ + static_cast<double>(c) * h_;
    const double y0 = min_y_ + static_cast<double>(r) * h_;
    const double dx = std::max({x0 - q.x, 0.0, q.x - (x0 + h_)});
    const double dy = std::max({y0 - q.y, 0.0, q.y - (y0 + h_)});
    return std::hypot(dx, dy);
  }

  /// Applies fn to every in-range bucket on the square ring at Chebyshev
  /// distance `ring` from (cx, cy).
  template <typename Fn>
  void visit_ring(std::ptrdiff_t cx, std::ptrdiff_t cy, std::ptrdiff_t ring,
                  Fn&& fn) const {
    const auto cols = static_cast<std::ptrdiff_t>(cols_);
    const auto rows = static_cast<std::ptrdiff_t>(rows_);
    const auto visit = [&](std::ptrdiff_t c, std::ptrdiff_t r) {
      if (c < 0 || c >= cols || r < 0 || r >= rows) return;
      fn(static_cast<std::size_t>(r) * cols_ + static_cast<std::size_t>(c));
    };
    if (ring == 0) {
      visit(cx, cy);
      return;
    }
    for (std::ptrdiff_t c = cx - ring; c <= cx + ring; ++c) {
      visit(c, cy - ring);
      visit(c, cy + ring);
    }
    for (std::ptrdiff_t r = cy - ring + 1; r <= cy + ring - 1; ++r) {
      visit(cx - ring, r);
      visit(cx + ring, r);
    }
  }

  /// Applies fn to every index in buckets overlapping the region's
  /// bounding box. The box is conservative under eps, so no point the
  /// region contains can hide in a skipped bucket.
  template <typename Fn>
  void for_candidates(const Region& region, double eps, Fn&& fn) const {
    if (points_.empty()) return;
    const Cell box = region.bounding_box(eps);
    if (box.min_x > box.max_x || box.min_y > box.max_y) return;
    const std::ptrdiff_t c0 = std::max<std::ptrdiff_t>(col_of(box.min_x), 0);
    const std::ptrdiff_t c1 =
        std::min<std::ptrdiff_t>(col_of(box.max_x), cols_ - 1);
    const std::ptrdiff_t r0 = std::max<std::ptrdiff_t>(row_of(box.min_y), 0);
    const std::ptrdiff_t r1 =
        std::min<std::ptrdiff_t>(row_of(box.max_y), rows_ - 1);
    for (std::ptrdiff_t r = r0; r <= r1; ++r) {
      for (std::ptrdiff_t c = c0; c <= c1; ++c) {
        for (const std::size_t i :
             buckets_[static_cast<std::size_t>(r) * cols_ +
                      static_cast<std::size_t>(c)]) {
          fn(i);
        }
      }
    }
  }

  std::vector<Point> points_;
  double min_x_ = 0.0;
  double min_y_ = 0.0;
  double h_ = 1.0;
  std::ptrdiff_t cols_ = 1;
  std::ptrdiff_t rows_ = 1;
  std::vector<std::vector<std::size_t>> buckets_;
};

}  // namespace geomask

#endif  // GEOMASK_SPATIAL_INDEX_HPP_
