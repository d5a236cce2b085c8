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

#ifndef GEOMASK_METHODS_HPP_
#define GEOMASK_METHODS_HPP_

#include <cmath>
#include <cstdint>
#include <numbers>
#include <optional>
#include <string>
#include <variant>

#include "geomask/errors.hpp"
#include "geomask/geometry.hpp"
#include "geomask/rng.hpp"
#include "geomask/strconv.hpp"

namespace geomask {

/// Draw budget for rejection sampling when masked points must stay inside
/// the study area. Exceeding it raises SamplingError; it means the
/// displacement region barely overlaps the area.
inline constexpr int kMaxResampleDraws = 10'000;

/// Random perturbation within a closed disk of the given radius,
/// uniform by area.
struct UniformDisk {
  double radius = 0.0;

  friend bool operator==(const UniformDisk&, const UniformDisk&) = default;
};

/// Random perturbation within a closed annulus, uniform by area: points
/// land at least r_min and at most r_max away from the original.
struct Donut {
  double r_min = 0.0;
  double r_max = 0.0;

  friend bool operator==(const Donut&, const Donut&) = default;
};

/// Deterministic aggregation to the center of the grid cell containing
/// the original. Cells have side cell_size and origin (origin_x, origin_y).
struct GridSnap {
  double cell_size = 0.0;
  double origin_x = 0.0;
  double origin_y = 0.0;

  friend bool operator==(const GridSnap&, const GridSnap&) = default;
};

using MaskMethod = std::variant<UniformDisk, Donut, GridSnap>;

/// Explains what is wrong with the method parameters, or nothing when they
/// are valid. The non-throwing form exists for validators that want to
/// collect problems instead of stopping at the first one.
inline std::optional<std::string> method_problem(const MaskMethod& method) {
  if (const auto* u = std::get_if<UniformDisk>(&method)) {
    if (!std::isfinite(u->radius) || u->radius <= 0.0) {
      return "uniform disk radius must be finite and > 0";
    }
  } else if (const auto* d = std::get_if<Donut>(&method)) {
    if (!std::isfinite(d->r_min) || !std::isfinite(d->r_max) ||
        d->r_min <= 0.0 || d->r_max <= d->r_min) {
      return "donut radii must satisfy 0 < r_min < r_max";
    }
  } else {
    const auto& g = std::get<GridSnap>(method);
    if (!std::isfinite(g.cell_size) || g.cell_size <= 0.0 ||
        !std::isfinite(g.origin_x) || !std::isfinite(g.origin_y)) {
      return "grid snap requires finite origin and cell size > 0";
    }
  }
  return std::nullopt;
}

/// Throws ConfigError unless the method parameters are valid.
inline void validate_method(const MaskMethod& method) {
  if (auto problem = method_problem(method)) throw ConfigError(*problem);
}

inline const char* method_name(const MaskMethod& method) {
  if (std::holds_alternative<UniformDisk>(method)) return "uniform";
  if (std::holds_alternative<Donut>(method)) return "donut";
  return "gridsnap";
}

/// True for methods whose masked output is a deterministic function of
/// the original location.
inline bool is_deterministic(const MaskMethod& method) {
  return std::holds_alternative<GridSnap>(method);
}

/// True when knowing the method allows exact reconstruction of original
/// locations from masked ones (no method in this library is; random
/// perturbation loses the draw and grid snapping loses the offset).
inline bool is_invertible(const MaskMethod&) { return false; }

/// A masking method plus the output policy applied when it runs. With
/// clip_to_area set, random methods resample until the masked point lies
/// inside the study area; both the forward and the backward displacement
/// regions are then intersected with the area. Grid snapping is
/// deterministic, so the flag does not alter its output, only its areas.
struct MethodDescriptor {
  MaskMethod method;
  bool clip_to_area = false;

  friend bool operator==(const MethodDescriptor&,
                         const MethodDescriptor&) = default;
};

namespace detail {

inline Cell grid_cell_of(const GridSnap& g, const Point& p) {
  const double i = std::floor((p.x - g.origin_x) / g.cell_size);
  const double j = std::floor((p.y - g.origin_y) / g.cell_size);
  const double x0 = g.origin_x + i * g.cell_size;
  const double y0 = g.origin_y + j * g.cell_size;
  return Cell{x0, y0, x0 + g.cell_size, y0 + g.cell_size};
}

inline Point grid_center_of(const GridSnap& g, const Point& p) {
  const Cell c = grid_cell_of(g, p);
  return Point{(c.min_x + c.max_x) / 2.0, (c.min_y + c.max_y) / 2.0};
}

/// One displacement draw, uniform by area over the disk or annulus.
/// Draw order (radius variate, then angle variate) is part of the pinned
/// reproducibility contract.
inline Point displace(const Point& origin, double r_min, double r_max,
                      Rng& rng) {
  const double u = rng.next_unit();
  const double t = rng.next_unit();
  const double r = std::sqrt(u * (r_max * r_max - r_min * r_min) +
                             r_min * r_min);
  const double theta = 2.0 * std::numbers::pi * t;
  return Point{origin.x + r * std::cos(theta), origin.y + r * std::sin(theta)};
}

}  // namespace detail

/// Forward displacement region: everywhere the masked location can land
/// for an original at x. Throws DomainError when x lies outside the study
/// area, since masking is only defined for in-area originals.
inline Region forward_area(const MethodDescriptor& descriptor, const Point& x,
                           const StudyArea& area,
                           double eps = kBoundaryEpsilon) {
  validate_method(descriptor.method);
  if (!is_finite(x)) throw DomainError("forward area requires a finite point");
  if (!area.contains(x, eps)) {
    throw DomainError("original location lies outside the study area");
  }
  Region region = std::visit(
      [&](const auto& m) -> Region {
        using M = std::decay_t<decltype(m)>;
        if constexpr (std::is_same_v<M, UniformDisk>) {
          return Region::disk(x, m.radius);
        } else if constexpr (std::is_same_v<M, Donut>) {
          return Region::annulus(x, m.r_min, m.r_max);
        } else {
          // Deterministic: the only reachable output is the cell center.
          return Region::disk(detail::grid_center_of(m, x), 0.0);
        }
      },
      descriptor.method);
  if (descriptor.clip_to_area) region = region.intersected_with(area);
  return region;
}

/// Backward displacement region: everywhere an original could have been
/// for a masked location at x_prime. No in-area precondition: a masked
/// point may legitimately sit outside the study area when clipping is
/// off. With clipping on, the region is intersected with the area, since
/// originals always live inside it.
inline Region backward_area(const MethodDescriptor& descriptor,
                            const Point& x_prime, const StudyArea& area) {
  validate_method(descriptor.method);
  if (!is_finite(x_prime)) {
    throw DomainError("backward area requires a finite point");
  }
  Region region = std::visit(
      [&](const auto& m) -> Region {
        using M = std::decay_t<decltype(m)>;
        if constexpr (std::is_same_v<M, UniformDisk>) {
          return Region::disk(x_prime, m.radius);
        } else if constexpr (std::is_same_v<M, Donut>) {
          return Region::annulus(x_prime, m.r_min, m.r_max);
        } else {
          return Region::cell(detail::grid_cell_of(m, x_prime));
        }
      },
      descriptor.method);
  if (descriptor.clip_to_area) region = region.intersected_with(area);
  return region;
}

/// Masks one location. Random methods draw from the method distribution;
/// with clip_to_area they redraw until the result lands inside the study
/// area, up to kMaxResampleDraws (SamplingError beyond that). Grid
/// snapping returns the cell center unconditionally: it has no randomness
/// to redraw, so the clip flag cannot change its output.
inline Point mask_point(const MethodDescriptor& descriptor, const Point& x,
                        const StudyArea& area, Rng& rng,
                        double eps = kBoundaryEpsilon) {
  validate_method(descriptor.method);
  if (!is_finite(x)) throw DomainError("mask_point requires a finite point");
  if (!area.contains(x, eps)) {
    throw DomainError("original location lies outside the study area");
  }

  if (const auto* g = std::get_if<GridSnap>(&descriptor.method)) {
    return detail::grid_center_of(*g, x);
  }

  double r_min = 0.0;
  double r_max = 0.0;
  if (const auto* u = std::get_if<UniformDisk>(&descriptor.method)) {
    r_max = u->radius;
  } else {
    const auto& d = std::get<Donut>(descriptor.method);
    r_min = d.r_min;
    r_max = d.r_max;
  }

  for (int draw = 0; draw < kMaxResampleDraws; ++draw) {
    const Point candidate = detail::displace(x, r_min, r_max, rng);
    if (!descriptor.clip_to_area || area.contains(candidate, eps)) {
      return candidate;
    }
  }
  throw SamplingError(
      "exceeded " + std::to_string(kMaxResampleDraws) +
      " draws while clipping to the study area; the displacement region "
      "barely overlaps it");
}

/// Parses the method grammar used on the command line and in reports:
///   uniform:R
///   donut:R_MIN,R_MAX
///   gridsnap:CELL[,ORIGIN_X,ORIGIN_Y]
/// Throws ConfigError on unknown names, arity mismatches, unparsable
/// numbers, or out-of-range parameters.
inline MaskMethod parse_method(std::string_view text) {
  const std::size_t colon = text.find(':');
  if (colon == std::string_view::npos) {
    throw ConfigError("method spec needs the form name:params, got '" +
                      std::string(text) + "'");
  }
  const std::string_view name = trim(text.substr(0, colon));
  std::vector<double> params;
  for (const std::string_view part : split(text.substr(colon + 1), ',')) {
    const auto value = parse_double(trim(part));
    if (!value) {
      throw ConfigError("bad numeric parameter in method spec '" +
                        std::string(text) + "'");
    }
    params.push_back(*value);
  }

  MaskMethod method;
  if (name == "uniform") {
    if (params.size() != 1) {
      throw ConfigError("uniform takes exactly one parameter: uniform:R");
    }
    method = UniformDisk{params[0]};
  } else if (name == "donut") {
    if (params.size() != 2) {
      throw ConfigError("donut takes two parameters: donut:R_MIN,R_MAX");
    }
    method = Donut{params[0], params[1]};
  } else if (name == "gridsnap") {
    if (params.size() != 1 && params.size() != 3) {
      throw ConfigError(
          "gridsnap takes one or three parameters: gridsnap:CELL[,OX,OY]");
    }
    GridSnap g{params[0], 0.0, 0.0};
    if (params.size() == 3) {
      g.origin_x = params[1];
      g.origin_y = params[2];
    }
    method = g;
  } else {
    throw ConfigError("unknown masking method '" + std::string(name) + "'");
  }
  validate_method(method);
  return method;
}

/// Canonical spelling of a method in the same grammar parse_method reads.
/// Grid origins are included only when nonzero, matching user input in
/// the common case.
inline std::string format_method(const MaskMethod& method) {
  if (const auto* u = std::get_if<UniformDisk>(&method)) {
    return "uniform:" + format_double(u->radius);
  }
  if (const auto* d = std::get_if<Donut>(&method)) {
    return "donut:" + format_double(d->r_min) + "," + format_double(d->r_max);
  }
  const auto& g = std::get<GridSnap>(method);
  std::string out = "gridsnap:" + format_double(g.cell_size);
  if (g.origin_x != 0.0 || g.origin_y != 0.0) {
    out += "," + format_double(g.origin_x) + "," + format_double(g.origin_y);
  }
  return out;
}

}  // namespace geomask

#endif  // GEOMASK_METHODS_HPP_
