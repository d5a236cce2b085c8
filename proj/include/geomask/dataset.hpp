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

#ifndef GEOMASK_DATASET_HPP_
#define GEOMASK_DATASET_HPP_

#include <cstddef>
#include <functional>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <unordered_map>
#include <unordered_set>
#include <utility>
#include <vector>

#include "geomask/errors.hpp"
#include "geomask/geometry.hpp"
#include "geomask/methods.hpp"

namespace geomask {

// Attribute values are kept as text. Numeric attributes read from typed
// sources are canonicalized to their shortest round-trip decimal form, so
// equality on the text is equality on the value.
using AttributeMap = std::map<std::string, std::string>;

// One georeferenced record: a stable identifier, a planar location in
// meters, and an open set of named attributes.
struct Record {
  std::string id;
  Point location;
  AttributeMap attributes;
};

// The population of real addresses a data intruder could draw candidates
// from, together with the study area that bounds every experiment.
struct AddressUniverse {
  StudyArea area;
  std::vector<Record> records;
};

// A masked dataset paired with its original, linked one-to-one by id.
// `original[i]` and `masked[i]` always describe the same underlying record.
// The universe and the method descriptor are carried along when known; both
// are optional because a holder of masked data does not necessarily know
// either.
struct LinkedDatasets {
  std::vector<Record> original;
  std::vector<Record> masked;
  std::optional<AddressUniverse> universe;
  std::optional<MethodDescriptor> method;
};

// Additional identified records an attacker brings to the table. When
// `participation_knowledge` is set, every record is known to belong to the
// target dataset; otherwise the records are merely known real addresses.
struct ExternalDataset {
  std::vector<Record> records;
  bool participation_knowledge = false;
};

// What the intruder is assumed to know.
struct KnowledgeProfile {
  bool participation = false;
  bool method = false;
};

struct Violation {
  std::string where;
  std::string message;
};

namespace detail {

inline std::string point_text(const Point& p) {
  return "(" + std::to_string(p.x) + ", " + std::to_string(p.y) + ")";
}

// Hashable exact-coordinate key. Exact bit equality is intentional: linkage
// and membership checks treat coordinates as identifiers, not measurements.
struct PointKey {
  double x = 0.0;
  double y = 0.0;
  bool operator==(const PointKey&) const = default;
};

struct PointKeyHash {
  size_t operator()(const PointKey& k) const {
    const std::hash<double> h;
    const size_t a = h(k.x);
    const size_t b = h(k.y);
    return a ^ (b + 0x9e3779b97f4a7c15ULL + (a << 6) + (a >> 2));
  }
};

using PointSet = std::unordered_set<PointKey, PointKeyHash>;

inline PointSet coordinate_set(std::span<const Record> records) {
  PointSet set;
  set.reserve(records.size());
  for (const Record& r : records) set.insert(PointKey{r.location.x, r.location.y});
  return set;
}

}  // namespace detail

// Structural checks on a bare record list: finite coordinates, non-empty
// unique ids.
inline std::vector<Violation> validate_records(std::span<const Record> records,
                                               const std::string& where) {
  std::vector<Violation> out;
  std::unordered_set<std::string> seen;
  seen.reserve(records.size());
  for (size_t i = 0; i < records.size(); ++i) {
    const Record& r = records[i];
    if (r.id.empty()) {
      out.push_back({where, "record #" + std::to_string(i + 1) + " has an empty id"});
    }
    if (!is_finite(r.location)) {
      out.push_back({where, "record '" + r.id + "' has a non-finite coordinate"});
    }
    if (!seen.insert(r.id).second) {
      out.push_back({where, "duplicate id '" + r.id + "'"});
    }
  }
  return out;
}

// Full dataset validation. Reports violations instead of throwing so callers
// can render all problems at once. Checks, in order: record well-formedness
// on both sides, equal cardinality, the id bijection, and, when a universe
// is attached, that every original address is a universe address. Masked
// coordinates are free points, so no containment is required of them.
inline std::vector<Violation> validate(const LinkedDatasets& data) {
  std::vector<Violation> out = validate_records(data.original, "original");
  {
    auto masked = validate_records(data.masked, "masked");
    out.insert(out.end(), masked.begin(), masked.end());
  }
  if (data.original.size() != data.masked.size()) {
    out.push_back({"link", "original has " + std::to_string(data.original.size()) +
                               " records but masked has " + std::to_string(data.masked.size())});
    return out;
  }
  for (size_t i = 0; i < data.original.size(); ++i) {
    if (data.original[i].id != data.masked[i].id) {
      out.push_back({"link", "row " + std::to_string(i + 1) + " links id '" +
                                 data.original[i].id + "' to id '" + data.masked[i].id + "'"});
    }
  }
  if (data.universe.has_value()) {
    auto universe_violations = validate_records(data.universe->records, "universe");
    out.insert(out.end(), universe_violations.begin(), universe_violations.end());
    const detail::PointSet addresses = detail::coordinate_set(data.universe->records);
    for (const Record& r : data.original) {
      if (!addresses.contains(detail::PointKey{r.location.x, r.location.y})) {
        out.push_back({"universe", "original '" + r.id + "' at " +
                                       detail::point_text(r.location) +
                                       " is not a universe address"});
      }
    }
  }
  if (data.method.has_value()) {
    if (auto problem = method_problem(data.method->method)) {
      out.push_back({"method", *problem});
    }
  }
  return out;
}

inline void validate_or_throw(const LinkedDatasets& data) {
  const auto violations = validate(data);
  if (violations.empty()) return;
  std::string message = "invalid linked datasets:";
  for (const Violation& v : violations) {
    message += "\n  [" + v.where + "] " + v.message;
  }
  throw DataError(message);
}

// Keeps the records whose attribute maps satisfy `predicate`, preserving
// input order. The predicate sees the whole map, so "missing attribute"
// policies belong to the predicate; the helpers below treat a missing
// attribute as a non-match.
inline std::vector<Record> attribute_prefilter(
    std::span<const Record> records,
    const std::function<bool(const AttributeMap&)>& predicate) {
  std::vector<Record> out;
  for (const Record& r : records) {
    if (predicate(r.attributes)) out.push_back(r);
  }
  return out;
}

// Predicate matching records whose attribute `name` exists and equals
// `value` exactly.
inline std::function<bool(const AttributeMap&)> attribute_equals(std::string name,
                                                                 std::string value) {
  return [name = std::move(name), value = std::move(value)](const AttributeMap& attrs) {
    const auto it = attrs.find(name);
    return it != attrs.end() && it->second == value;
  };
}

// Predicate requiring every (name, value) pair in `required` to match.
// An empty requirement accepts everything.
inline std::function<bool(const AttributeMap&)> attributes_match(AttributeMap required) {
  return [required = std::move(required)](const AttributeMap& attrs) {
    for (const auto& [name, value] : required) {
      const auto it = attrs.find(name);
      if (it == attrs.end() || it->second != value) return false;
    }
    return true;
  };
}

inline std::vector<Point> locations_of(std::span<const Record> records) {
  std::vector<Point> out;
  out.reserve(records.size());
  for (const Record& r : records) out.push_back(r.location);
  return out;
}

}  // namespace geomask

#endif  // GEOMASK_DATASET_HPP_
