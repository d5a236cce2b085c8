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

#ifndef GEOMASK_SYNTH_HPP_
#define GEOMASK_SYNTH_HPP_

#include <cmath>
#include <cstdint>
#include <numbers>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "geomask/dataset.hpp"
#include "geomask/errors.hpp"
#include "geomask/geometry.hpp"
#include "geomask/methods.hpp"
#include "geomask/rng.hpp"

namespace geomask {

/// Parameters for synthetic address universes used in experiments and
/// acceptance runs. Everything is a pure function of the spec, seed
/// included, so a spec reproduces its universe exactly. Generation is
/// single-threaded on purpose: each point consumes a data-dependent
/// number of draws from one stream.
struct SynthSpec {
  enum class Layout { kUniform, kClustered };

  StudyArea area;
  std::size_t universe_size = 0;
  Layout layout = Layout::kUniform;
  /// Clustered layout only: number of cluster centers and the standard
  /// deviation of the radially symmetric Gaussian scatter around them.
  std::size_t clusters = 10;
  double cluster_sigma = 0.0;
  std::uint64_t seed = 0;
};

/// A categorical attribute sampler: each target record gets one value of
/// `name` drawn from `categories` with probability proportional to the
/// weights.
struct AttributeGenerator {
  std::string name;
  std::vector<std::pair<std::string, double>> categories;
};

namespace detail {

/// Uniform draw inside the study area. Rectangles never reject; polygon
/// areas reject until the draw falls inside.
inline Point uniform_in_area(const StudyArea& area, Rng& rng) {
  for (int draw = 0; draw < kMaxResampleDraws; ++draw) {
    const Point p{rng.uniform(area.min_x(), area.max_x()),
                  rng.uniform(area.min_y(), area.max_y())};
    if (area.contains(p)) return p;
  }
  throw SamplingError(
      "could not draw a point inside the polygon study area; its area is "
      "negligible relative to its bounding box");
}

/// Radially symmetric Gaussian offset via the polar Box-Muller transform.
/// Spelled out rather than taken from <random> so that draws are
/// identical across standard library implementations.
inline Point gaussian_offset(double sigma, Rng& rng) {
  const double u = 1.0 - rng.next_unit();  // (0, 1]: keeps the log finite
  const double t = rng.next_unit();
  const double r = sigma * std::sqrt(-2.0 * std::log(u));
  const double theta = 2.0 * std::numbers::pi * t;
  return Point{r * std::cos(theta), r * std::sin(theta)};
}

inline void validate_generators(std::span<const AttributeGenerator> gens) {
  for (const AttributeGenerator& g : gens) {
    if (g.name.empty()) {
      throw ConfigError("attribute generator needs a name");
    }
    if (g.categories.empty()) {
      throw ConfigError("attribute generator '" + g.name +
                        "' needs at least one category");
    }
    double total = 0.0;
    for (const auto& [label, weight] : g.categories) {
      if (!(weight >= 0.0) || !std::isfinite(weight)) {
        throw ConfigError("attribute generator '" + g.name +
                          "' has a negative or non-finite weight");
      }
      total += weight;
    }
    if (!(total > 0.0)) {
      throw ConfigError("attribute generator '" + g.name +
                        "' has zero total weight");
    }
  }
}

inline std::string draw_category(const AttributeGenerator& g, Rng& rng) {
  double total = 0.0;
  for (const auto& [label, weight] : g.categories) total += weight;
  const double u = rng.next_unit() * total;
  double cumulative = 0.0;
  for (const auto& [label, weight] : g.categories) {
    cumulative += weight;
    if (u < cumulative) return label;
  }
  return g.categories.back().first;
}

}  // namespace detail

/// Generates the address universe described by the spec. Universe records
/// are named b1..bm in generation order. An empty universe (size 0) is
/// allowed; it models "no population knowledge available".
inline AddressUniverse generate_universe(const SynthSpec& spec) {
  AddressUniverse universe{spec.area, {}};
  universe.records.reserve(spec.universe_size);
  const auto add = [&](const Point& p) {
    universe.records.push_back(
        Record{"b" + std::to_string(universe.records.size() + 1), p, {}});
  };

  if (spec.layout == SynthSpec::Layout::kUniform) {
    Rng rng = Rng::for_label(spec.seed, "universe/uniform");
    for (std::size_t i = 0; i < spec.universe_size; ++i) {
      add(detail::uniform_in_area(spec.area, rng));
    }
    return universe;
  }

  if (spec.universe_size == 0) return universe;
  if (spec.clusters == 0) {
    throw ConfigError("clustered layout needs at least one cluster");
  }
  if (!(spec.cluster_sigma > 0.0) || !std::isfinite(spec.cluster_sigma)) {
    throw ConfigError("clustered layout needs a positive cluster sigma");
  }
  Rng center_rng = Rng::for_label(spec.seed, "universe/centers");
  std::vector<Point> centers;
  centers.reserve(spec.clusters);
  for (std::size_t c = 0; c < spec.clusters; ++c) {
    centers.push_back(detail::uniform_in_area(spec.area, center_rng));
  }
  Rng rng = Rng::for_label(spec.seed, "universe/clustered");
  for (std::size_t i = 0; i < spec.universe_size; ++i) {
    Point p;
    int draw = 0;
    do {
      if (++draw > kMaxResampleDraws) {
        throw SamplingError(
            "cluster scatter keeps leaving the study area; reduce "
            "cluster sigma or enlarge the area");
      }
      const Point& center = centers[rng.below(centers.size())];
      const Point offset = detail::gaussian_offset(spec.cluster_sigma, rng);
      p = Point{center.x + offset.x, center.y + offset.y};
    } while (!spec.area.contains(p));
    add(p);
  }
  return universe;
}

/// Samples n distinct universe addresses as study participants, without
/// replacement (partial Fisher-Yates), and draws their attributes from
/// the generators. Ids are id_prefix + 1-based draw number, so target ids
/// never collide with universe ids. Deterministic in (universe order, n,
/// generators, seed). Throws DomainError when n exceeds the universe.
inline std::vector<Record> sample_targets(
    const AddressUniverse& universe, std::size_t n,
    std::span<const AttributeGenerator> generators, std::uint64_t seed,
    const std::string& id_prefix = "p") {
  if (n > universe.records.size()) {
    throw DomainError("cannot sample " + std::to_string(n) +
                      " targets from a universe of " +
                      std::to_string(universe.records.size()) + " addresses");
  }
  detail::validate_generators(generators);
  std::vector<std::size_t> order(universe.records.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
  Rng rng = Rng::for_label(seed, "targets");
  std::vector<Record> out;
  out.reserve(n);
  for (std::size_t i = 0; i < n; ++i) {
    const std::size_t j = i + rng.below(order.size() - i);
    std::swap(order[i], order[j]);
    Record r{id_prefix + std::to_string(i + 1),
             universe.records[order[i]].location,
             {}};
    for (const AttributeGenerator& g : generators) {
      r.attributes[g.name] = detail::draw_category(g, rng);
    }
    out.push_back(std::move(r));
  }
  return out;
}

inline std::vector<Record> sample_targets(const AddressUniverse& universe,
                                          std::size_t n, std::uint64_t seed,
                                          const std::string& id_prefix = "p") {
  return sample_targets(universe, n, {}, seed, id_prefix);
}

/// Clones every record `copies - 1` extra times at the same coordinate,
/// modelling several persons registered at one address. Clone ids append
/// "#2", "#3", ... to the source id; attributes are copied verbatim.
inline std::vector<Record> with_address_multiplicity(
    std::span<const Record> records, std::size_t copies) {
  if (copies == 0) throw ConfigError("multiplicity must be at least 1");
  std::vector<Record> out;
  out.reserve(records.size() * copies);
  for (const Record& r : records) {
    out.push_back(r);
    for (std::size_t c = 2; c <= copies; ++c) {
      Record clone = r;
      clone.id = r.id + "#" + std::to_string(c);
      out.push_back(std::move(clone));
    }
  }
  return out;
}

}  // namespace geomask

#endif  // GEOMASK_SYNTH_HPP_
