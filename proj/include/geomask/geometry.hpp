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

#ifndef GEOMASK_GEOMETRY_HPP_
#define GEOMASK_GEOMETRY_HPP_

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <span>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "geomask/errors.hpp"

namespace geomask {

/// Absolute tolerance, in coordinate units, used for every boundary
/// decision in the library. All regions are closed: a point at distance
/// exactly r from a disk center is inside, and membership tests accept
/// d <= r + epsilon so that points reconstructed through floating-point
/// arithmetic do not fall off the boundary they were sampled on.
inline constexpr double kBoundaryEpsilon = 1e-9;

/// A location in a planar (projected) coordinate system, in meters.
struct Point {
  double x = 0.0;
  double y = 0.0;

  friend bool operator==(const Point&, const Point&) = default;
};

/// Euclidean distance between two points.
inline double distance(const Point& a, const Point& b) {
  return std::hypot(a.x - b.x, a.y - b.y);
}

inline bool is_finite(const Point& p) {
  return std::isfinite(p.x) && std::isfinite(p.y);
}

/// True when two points coincide up to the boundary tolerance.
inline bool coincident(const Point& a, const Point& b,
                       double eps = kBoundaryEpsilon) {
  return distance(a, b) <= eps;
}

namespace detail {

/// Distance from point p to the closed segment [a, b].
inline double segment_distance(const Point& p, const Point& a,
                               const Point& b) {
  const double vx = b.x - a.x;
  const double vy = b.y - a.y;
  const double len2 = vx * vx + vy * vy;
  if (len2 == 0.0) return distance(p, a);
  double t = ((p.x - a.x) * vx + (p.y - a.y) * vy) / len2;
  t = std::clamp(t, 0.0, 1.0);
  return distance(p, Point{a.x + t * vx, a.y + t * vy});
}

}  // namespace detail

/// The region within which original and masked locations live. Always
/// carries an axis-aligned bounding rectangle; optionally restricted
/// further by a simple polygon ring. Membership is closed and uses the
/// same epsilon tolerance as every other region test.
class StudyArea {
 public:
  /// Rectangular study area [min_x, max_x] x [min_y, max_y].
  StudyArea(double min_x, double min_y, double max_x, double max_y)
      : min_x_(min_x), min_y_(min_y), max_x_(max_x), max_y_(max_y) {
    if (!std::isfinite(min_x) || !std::isfinite(min_y) ||
        !std::isfinite(max_x) || !std::isfinite(max_y)) {
      throw DomainError("study area bounds must be finite");
    }
    if (min_x >= max_x || min_y >= max_y) {
      throw DomainError("study area must have positive width and height");
    }
  }

  /// Study area bounded by a simple polygon ring (not self-intersecting,
  /// implicitly closed: the last vertex connects back to the first).
  static StudyArea from_polygon(std::vector<Point> ring) {
    if (ring.size() < 3) {
      throw DomainError("polygon study area needs at least 3 vertices");
    }
    double lo_x = ring[0].x, hi_x = ring[0].x;
    double lo_y = ring[0].y, hi_y = ring[0].y;
    for (const Point& p : ring) {
      if (!is_finite(p)) {
        throw DomainError("polygon study area vertices must be finite");
      }
      lo_x = std::min(lo_x, p.x);
      hi_x = std::max(hi_x, p.x);
      lo_y = std::min(lo_y, p.y);
      hi_y = std::max(hi_y, p.y);
    }
    StudyArea area(lo_x, lo_y, hi_x, hi_y);
    area.ring_ = std::move(ring);
    return area;
  }

  /// Smallest rectangle containing all points, grown by margin on each
  /// side. Used as a fallback when no explicit area accompanies a dataset.
  static StudyArea bounding(std::span<const Point> points,
                            double margin = 0.0) {
    if (points.empty()) {
      throw DomainError("cannot derive a study area from an empty dataset");
    }
    double lo_x = points[0].x, hi_x = points[0].x;
    double lo_y = points[0].y, hi_y = points[0].y;
    for (const Point& p : points) {
      lo_x = std::min(lo_x, p.x);
      hi_x = std::max(hi_x, p.x);
      lo_y = std::min(lo_y, p.y);
      hi_y = std::max(hi_y, p.y);
    }
    // Degenerate clouds (single point, collinear on an axis) still need a
    // usable rectangle; pad the flat dimension.
    const double pad_x = (hi_x - lo_x > 0.0) ? margin : std::max(margin, 0.5);
    const double pad_y = (hi_y - lo_y > 0.0) ? margin : std::max(margin, 0.5);
    return StudyArea(lo_x - pad_x, lo_y - pad_y, hi_x + pad_x, hi_y + pad_y);
  }

  double min_x() const { return min_x_; }
  double min_y() const { return min_y_; }
  double max_x() const { return max_x_; }
  double max_y() const { return max_y_; }
  double width() const { return max_x_ - min_x_; }
  double height() const { return max_y_ - min_y_; }
  double diagonal() const { return std::hypot(width(), height()); }
  Point center() const {
    return {min_x_ + width() / 2.0, min_y_ + height() / 2.0};
  }

  bool has_polygon() const { return !ring_.empty(); }
  const std::vector<Point>& polygon() const { return ring_; }

  bool contains(const Point& p, double eps = kBoundaryEpsilon) const {
    if (p.x < min_x_ - eps || p.x > max_x_ + eps || p.y < min_y_ - eps ||
        p.y > max_y_ + eps) {
      return false;
    }
    if (ring_.empty()) return true;
    return polygon_contains(p, eps);
  }

  friend bool operator==(const StudyArea&, const StudyArea&) = default;

 private:
  /// Even-odd crossing test plus an explicit boundary check, so that the
  /// polygon is closed under the same tolerance as every other region.
  bool polygon_contains(const Point& p, double eps) const {
    const std::size_t n = ring_.size();
    for (std::size_t i = 0; i < n; ++i) {
      const Point& a = ring_[i];
      const Point& b = ring_[(i + 1) % n];
      if (detail::segment_distance(p, a, b) <= eps) return true;
    }
    bool inside = false;
    for (std::size_t i = 0, j = n - 1; i < n; j = i++) {
      const Point& a = ring_[i];
      const Point& b = ring_[j];
      const bool crosses = (a.y > p.y) != (b.y > p.y);
      if (crosses) {
        const double x_hit = (b.x - a.x) * (p.y - a.y) / (b.y - a.y) + a.x;
        if (p.x < x_hit) inside = !inside;
      }
    }
    return inside;
  }

  double min_x_, min_y_, max_x_, max_y_;
  std::vector<Point> ring_;
};

/// Closed disk: every point with distance(center, p) <= radius.
struct ClosedDisk {
  Point center;
  double radius = 0.0;

  friend bool operator==(const ClosedDisk&, const ClosedDisk&) = default;
};

/// Closed annulus: r_min <= distance(center, p) <= r_max.
struct Annulus {
  Point center;
  double r_min = 0.0;
  double r_max = 0.0;

  friend bool operator==(const Annulus&, const Annulus&) = default;
};

/// Closed axis-aligned rectangle [min_x, max_x] x [min_y, max_y].
/// Grid-snapping preimages are represented as cells.
struct Cell {
  double min_x = 0.0;
  double min_y = 0.0;
  double max_x = 0.0;
  double max_y = 0.0;

  bool contains(const Point& p, double eps = kBoundaryEpsilon) const {
    return p.x >= min_x - eps && p.x <= max_x + eps && p.y >= min_y - eps &&
           p.y <= max_y + eps;
  }

  friend bool operator==(const Cell&, const Cell&) = default;
};

/// A displacement region: one primitive shape, optionally intersected
/// with one or more study areas. Regions are value types produced by the
/// masking methods (forward and backward areas) and consumed by the
/// counting primitives that drive every anonymity metric.
class Region {
 public:
  using Shape = std::variant<ClosedDisk, Annulus, Cell>;

  static Region disk(Point center, double radius) {
    if (!is_finite(center) || !std::isfinite(radius) || radius < 0.0) {
      throw DomainError("disk requires a finite center and radius >= 0");
    }
    return Region(ClosedDisk{center, radius});
  }

  static Region annulus(Point center, double r_min, double r_max) {
    if (!is_finite(center) || !std::isfinite(r_min) ||
        !std::isfinite(r_max) || r_min < 0.0 || r_max < r_min) {
      throw DomainError("annulus requires finite 0 <= r_min <= r_max");
    }
    return Region(Annulus{center, r_min, r_max});
  }

  static Region cell(double min_x, double min_y, double max_x, double max_y) {
    if (!std::isfinite(min_x) || !std::isfinite(min_y) ||
        !std::isfinite(max_x) || !std::isfinite(max_y) || min_x > max_x ||
        min_y > max_y) {
      throw DomainError("cell requires finite min <= max bounds");
    }
    return Region(Cell{min_x, min_y, max_x, max_y});
  }

  static Region cell(const Cell& c) {
    return cell(c.min_x, c.min_y, c.max_x, c.max_y);
  }

  /// Returns this region further restricted to the given study area.
  Region intersected_with(StudyArea area) const {
    Region out = *this;
    out.clips_.push_back(std::move(area));
    return out;
  }

  const Shape& shape() const { return shape_; }
  const std::vector<StudyArea>& clips() const { return clips_; }

  bool contains(const Point& p, double eps = kBoundaryEpsilon) const {
    const bool in_shape = std::visit(
        [&](const auto& s) { return shape_contains(s, p, eps); }, shape_);
    if (!in_shape) return false;
    for (const StudyArea& a : clips_) {
      if (!a.contains(p, eps)) return false;
    }
    return true;
  }

  /// Conservative closed bounding box of the region (clips applied).
  /// Every point the region contains under tolerance eps lies inside.
  Cell bounding_box(double eps = kBoundaryEpsilon) const {
    Cell box = std::visit(
        [&](const auto& s) { return shape_box(s, eps); }, shape_);
    for (const StudyArea& a : clips_) {
      box.min_x = std::max(box.min_x, a.min_x() - eps);
      box.min_y = std::max(box.min_y, a.min_y() - eps);
      box.max_x = std::min(box.max_x, a.max_x() + eps);
      box.max_y = std::min(box.max_y, a.max_y() + eps);
    }
    return box;
  }

 private:
  explicit Region(Shape shape) : shape_(std::move(shape)) {}

  static bool shape_contains(const ClosedDisk& d, const Point& p,
                             double eps) {
    return distance(d.center, p) <= d.radius + eps;
  }
  static bool shape_contains(const Annulus& a, const Point& p, double eps) {
    const double d = distance(a.center, p);
    return d >= a.r_min - eps && d <= a.r_max + eps;
  }
  static bool shape_contains(const Cell& c, const Point& p, double eps) {
    return c.contains(p, eps);
  }

  static Cell shape_box(const ClosedDisk& d, double eps) {
    const double r = d.radius + eps;
    return {d.center.x - r, d.center.y - r, d.center.x + r, d.center.y + r};
  }
  static Cell shape_box(const Annulus& a, double eps) {
    const double r = a.r_max + eps;
    return {a.center.x - r, a.center.y - r, a.center.x + r, a.center.y + r};
  }
  static Cell shape_box(const Cell& c, double eps) {
    return {c.min_x - eps, c.min_y - eps, c.max_x + eps, c.max_y + eps};
  }

  Shape shape_;
  std::vector<StudyArea> clips_;
};

inline bool region_contains(const Region& region, const Point& p,
                            double eps = kBoundaryEpsilon) {
  return region.contains(p, eps);
}

/// Number of points falling in the region, counting duplicates with
/// multiplicity. This is the primitive behind every k-anonymity metric.
inline std::size_t restricted_count(std::span<const Point> points,
                                    const Region& region,
                                    double eps = kBoundaryEpsilon) {
  std::size_t n = 0;
  for (const Point& p : points) {
    if (region.contains(p, eps)) ++n;
  }
  return n;
}

}  // namespace geomask

#endif  // GEOMASK_GEOMETRY_HPP_
