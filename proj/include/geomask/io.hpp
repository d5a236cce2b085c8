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

#ifndef GEOMASK_IO_HPP_
#define GEOMASK_IO_HPP_

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <istream>
#include <ostream>
#include <set>
#include <span>
#include <sstream>
#include <string>
#include <string_view>
#include <unordered_map>
#include <unordered_set>
#include <utility>
#include <vector>

#include <json.hpp>

#include "geomask/dataset.hpp"
#include "geomask/errors.hpp"
#include "geomask/rng.hpp"
#include "geomask/strconv.hpp"

namespace geomask {

/// A parsed point file: records plus the names of any attribute columns
/// that followed the fixed id,x,y triple, in file order.
struct PointsCsv {
  std::vector<Record> records;
  std::vector<std::string> attribute_names;
};

/// Reads the point CSV schema:
///
///   id,x,y[,attr...]
///   a,100.5,200.25,f
///
/// The first three header columns must be exactly id, x, y; anything
/// after them names an attribute column. Non-empty attribute cells turn
/// into attribute map entries keyed by the column name; empty cells mean
/// "attribute absent". Fields are comma-separated with no quoting (ids
/// and attributes therefore cannot contain commas). Blank lines are
/// skipped. Throws DataError with a line number on any malformed row,
/// including a duplicate id.
inline PointsCsv read_points_csv(std::istream& in,
                                 std::string_view source = "<stream>") {
  PointsCsv out;
  std::string line;
  std::size_t line_no = 0;
  bool saw_header = false;
  std::unordered_set<std::string> seen_ids;
  const auto fail = [&](const std::string& message) {
    throw DataError(std::string(source) + ":" + std::to_string(line_no) +
                    ": " + message);
  };

  while (std::getline(in, line)) {
    ++line_no;
    const std::string_view trimmed = trim(line);
    if (trimmed.empty()) continue;
    const std::vector<std::string_view> fields = split(trimmed, ',');

    if (!saw_header) {
      if (fields.size() < 3 || trim(fields[0]) != "id" ||
          trim(fields[1]) != "x" || trim(fields[2]) != "y") {
        fail("header must start with id,x,y");
      }
      for (std::size_t i = 3; i < fields.size(); ++i) {
        const std::string name(trim(fields[i]));
        if (name.empty()) fail("empty attribute column name");
        out.attribute_names.push_back(name);
      }
      saw_header = true;
      continue;
    }

    if (fields.size() != 3 + out.attribute_names.size()) {
      fail("expected " + std::to_string(3 + out.attribute_names.size()) +
           " fields, got " + std::to_string(fields.size()));
    }
    Record r;
    r.id = std::string(trim(fields[0]));
    if (r.id.empty()) fail("empty id");
    if (!seen_ids.insert(r.id).second) fail("duplicate id '" + r.id + "'");
    const auto x = parse_double(trim(fields[1]));
    const auto y = parse_double(trim(fields[2]));
    if (!x || !y) fail("x and y must be finite decimal numbers");
    r.location = Point{*x, *y};
    if (!is_finite(r.location)) fail("x and y must be finite");
    for (std::size_t i = 3; i < fields.size(); ++i) {
      const std::string_view value = trim(fields[i]);
      if (!value.empty()) {
        r.attributes[out.attribute_names[i - 3]] = std::string(value);
      }
    }
    out.records.push_back(std::move(r));
  }
  if (!saw_header) fail("missing header line");
  return out;
}

/// Reads a GeoJSON FeatureCollection of Point features onto the same
/// record model as the CSV reader: feature id (or an "id" property)
/// becomes the record id, coordinates become the location, remaining
/// scalar properties become attributes. Numbers are canonicalized to
/// their shortest round-trip decimal form so an attribute compares equal
/// whichever format carried it. Non-point geometries, non-scalar
/// properties, and missing ids are data errors.
inline PointsCsv read_points_geojson(std::istream& in,
                                     std::string_view source = "<stream>") {
  using Json = nlohmann::json;
  const auto fail = [&](const std::string& message) {
    throw DataError(std::string(source) + ": " + message);
  };

  Json root;
  try {
    root = Json::parse(in);
  } catch (const Json::parse_error& e) {
    fail(std::string("invalid JSON: ") + e.what());
  }
  if (!root.is_object() || root.value("type", "") != "FeatureCollection" ||
      !root.contains("features") || !root["features"].is_array()) {
    fail("expected a GeoJSON FeatureCollection");
  }

  PointsCsv out;
  std::set<std::string> names;
  std::unordered_set<std::string> seen_ids;
  std::size_t feature_no = 0;
  for (const Json& feature : root["features"]) {
    ++feature_no;
    const auto fail_feature = [&](const std::string& message) {
      fail("feature #" + std::to_string(feature_no) + ": " + message);
    };
    if (!feature.is_object() || feature.value("type", "") != "Feature") {
      fail_feature("not a Feature object");
    }
    const Json& geometry = feature.contains("geometry") ? feature["geometry"]
                                                        : Json();
    if (!geometry.is_object() || geometry.value("type", "") != "Point") {
      fail_feature("only Point geometries are supported");
    }
    const Json& coords = geometry.contains("coordinates")
                             ? geometry["coordinates"]
                             : Json();
    if (!coords.is_array() || coords.size() < 2 ||
        !coords[0].is_number() || !coords[1].is_number()) {
      fail_feature("coordinates must be a [x, y] number pair");
    }

    Record r;
    r.location = Point{coords[0].get<double>(), coords[1].get<double>()};
    if (!is_finite(r.location)) fail_feature("coordinates must be finite");

    const Json& props = feature.contains("properties") ? feature["properties"]
                                                       : Json();
    const auto scalar_text = [&](const Json& v) -> std::string {
      if (v.is_string()) return v.get<std::string>();
      if (v.is_boolean()) return v.get<bool>() ? "true" : "false";
      if (v.is_number_integer()) {
        return std::to_string(v.get<long long>());
      }
      if (v.is_number()) return format_double(v.get<double>());
      fail_feature("property values must be scalars");
      return {};
    };

    if (feature.contains("id")) {
      r.id = scalar_text(feature["id"]);
    } else if (props.is_object() && props.contains("id")) {
      r.id = scalar_text(props["id"]);
    }
    if (r.id.empty()) fail_feature("missing id");
    if (!seen_ids.insert(r.id).second) {
      fail_feature("duplicate id '" + r.id + "'");
    }
    if (props.is_object()) {
      for (const auto& [key, value] : props.items()) {
        if (key == "id" || value.is_null()) continue;
        r.attributes[key] = scalar_text(value);
        names.insert(key);
      }
    }
    out.records.push_back(std::move(r));
  }
  out.attribute_names.assign(names.begin(), names.end());
  return out;
}

namespace io_detail {

inline bool has_geojson_extension(const std::filesystem::path& path) {
  const std::string ext = path.extension().string();
  return ext == ".geojson" || ext == ".json";
}

}  // namespace io_detail

/// File-opening wrapper. A path that cannot be opened is a usage problem
/// (ConfigError); malformed content inside is a data problem (DataError).
/// Files ending in .geojson or .json go through the GeoJSON reader,
/// everything else through the CSV reader.
inline PointsCsv read_points_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    throw ConfigError("cannot open '" + path.string() + "' for reading");
  }
  if (io_detail::has_geojson_extension(path)) {
    return read_points_geojson(in, path.string());
  }
  return read_points_csv(in, path.string());
}

inline PointsCsv read_points_csv(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    throw ConfigError("cannot open '" + path.string() + "' for reading");
  }
  return read_points_csv(in, path.string());
}

/// Sorted union of every attribute name present in the records. Used as
/// the column set when writing files for record lists whose provenance
/// did not fix one.
inline std::vector<std::string> attribute_columns(
    std::span<const Record> records) {
  std::set<std::string> names;
  for (const Record& r : records) {
    for (const auto& [name, value] : r.attributes) names.insert(name);
  }
  return {names.begin(), names.end()};
}

inline void write_points_csv(std::ostream& out,
                             std::span<const Record> records,
                             std::span<const std::string> attribute_names) {
  out << "id,x,y";
  for (const std::string& name : attribute_names) out << ',' << name;
  out << '\n';
  for (const Record& r : records) {
    out << r.id << ',' << format_double(r.location.x) << ','
        << format_double(r.location.y);
    for (const std::string& name : attribute_names) {
      const auto it = r.attributes.find(name);
      out << ',' << (it != r.attributes.end() ? it->second : "");
    }
    out << '\n';
  }
}

/// Serializes records to a string in the same CSV schema read_points_csv
/// reads. Coordinates use shortest round-trip formatting, so writing and
/// re-reading reproduces the exact doubles.
inline std::string points_csv_string(
    std::span<const Record> records,
    std::span<const std::string> attribute_names) {
  std::ostringstream out;
  write_points_csv(out, records, attribute_names);
  return out.str();
}

inline std::string points_csv_string(std::span<const Record> records) {
  const std::vector<std::string> names = attribute_columns(records);
  return points_csv_string(records, names);
}

/// Writes content to path atomically: a sibling temp file is written in
/// full, then renamed over the target, so readers never observe a
/// half-written file.
inline void write_text_atomic(const std::filesystem::path& path,
                              std::string_view content) {
  std::filesystem::path tmp = path;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) {
      throw ConfigError("cannot open '" + tmp.string() + "' for writing");
    }
    out.write(content.data(),
              static_cast<std::streamsize>(content.size()));
    if (!out) {
      throw ConfigError("failed writing '" + tmp.string() + "'");
    }
  }
  std::error_code ec;
  std::filesystem::rename(tmp, path, ec);
  if (ec) {
    throw ConfigError("failed to move '" + tmp.string() + "' to '" +
                      path.string() + "': " + ec.message());
  }
}

inline void write_points_csv(const std::filesystem::path& path,
                             std::span<const Record> records,
                             std::span<const std::string> attribute_names) {
  write_text_atomic(path, points_csv_string(records, attribute_names));
}

inline void write_points_csv(const std::filesystem::path& path,
                             std::span<const Record> records) {
  write_text_atomic(path, points_csv_string(records));
}

/// Content digest of a file, in the same fnv1a64:<hex> form reports use.
/// Lets a report reader confirm which input files produced it.
inline std::string file_digest(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    throw ConfigError("cannot open '" + path.string() + "' for reading");
  }
  std::ostringstream buffer;
  buffer << in.rdbuf();
  const std::string bytes = buffer.str();
  char hex[17];
  std::snprintf(hex, sizeof hex, "%016llx",
                static_cast<unsigned long long>(fnv1a64(bytes)));
  return std::string("fnv1a64:") + hex;
}

/// True when every coordinate could plausibly be a longitude/latitude
/// pair in degrees. The library works in planar meters; distances on
/// raw degrees would be meaningless, so the CLI refuses such input
/// unless explicitly told the data really is planar.
inline bool looks_geographic(std::span<const Record> records) {
  if (records.empty()) return false;
  for (const Record& r : records) {
    if (std::abs(r.location.x) > 180.0 || std::abs(r.location.y) > 90.0) {
      return false;
    }
  }
  return true;
}

/// Joins an original and a masked record list into linked datasets by
/// id: every id must appear exactly once on each side. The masked side
/// is reordered to the original's order. Masked files written without
/// attribute columns inherit the original's attributes, since masking
/// never changes them. Throws DataError when ids do not line up.
inline LinkedDatasets link_datasets(std::vector<Record> original,
                                    std::vector<Record> masked) {
  if (original.size() != masked.size()) {
    throw DataError("original has " + std::to_string(original.size()) +
                    " records but masked has " +
                    std::to_string(masked.size()));
  }
  std::unordered_map<std::string_view, std::size_t> where;
  where.reserve(masked.size());
  for (std::size_t j = 0; j < masked.size(); ++j) {
    if (!where.emplace(masked[j].id, j).second) {
      throw DataError("duplicate id '" + masked[j].id +
                      "' in masked dataset");
    }
  }
  LinkedDatasets out;
  out.original = std::move(original);
  out.masked.reserve(out.original.size());
  for (const Record& r : out.original) {
    const auto it = where.find(std::string_view(r.id));
    if (it == where.end()) {
      throw DataError("id '" + r.id + "' is missing from the masked dataset");
    }
    Record m = masked[it->second];
    if (m.attributes.empty() && !r.attributes.empty()) {
      m.attributes = r.attributes;
    }
    out.masked.push_back(std::move(m));
  }
  validate_or_throw(out);
  return out;
}

}  // namespace geomask

#endif  // GEOMASK_IO_HPP_
