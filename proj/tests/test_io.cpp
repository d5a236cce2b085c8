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

#include "geomask/io.hpp"

#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "geomask/dataset.hpp"
#include "geomask/errors.hpp"

namespace geomask {
namespace {

namespace fs = std::filesystem;

std::string error_text(const std::function<void()>& fn) {
  try {
    fn();
  } catch (const std::exception& e) {
    return e.what();
  }
  return "";
}

fs::path temp_file(const std::string& name) {
  return fs::path(::testing::TempDir()) / name;
}

// -- CSV ----------------------------------------------------------------------

TEST(CsvReader, AcceptsTheDocumentedSchema) {
  std::istringstream in(
      "id,x,y,sex,age\n"
      "a,100.5,200.25,f,31\n"
      "\n"
      "b,-3,0,,\n"
      "c,0.1,1e3,m,\n");
  const PointsCsv csv = read_points_csv(in);
  ASSERT_EQ(csv.records.size(), 3u);
  EXPECT_EQ(csv.attribute_names,
            (std::vector<std::string>{"sex", "age"}));

  EXPECT_EQ(csv.records[0].id, "a");
  EXPECT_DOUBLE_EQ(csv.records[0].location.x, 100.5);
  EXPECT_DOUBLE_EQ(csv.records[0].location.y, 200.25);
  EXPECT_EQ(csv.records[0].attributes.at("sex"), "f");
  EXPECT_EQ(csv.records[0].attributes.at("age"), "31");

  // Empty cells mean "attribute absent", not "empty string value".
  EXPECT_TRUE(csv.records[1].attributes.empty());
  EXPECT_EQ(csv.records[2].attributes.size(), 1u);
  EXPECT_DOUBLE_EQ(csv.records[2].location.y, 1000.0);
}

TEST(CsvReader, TrimsWhitespaceAroundFields) {
  std::istringstream in(
      " id , x , y , note \r\n"
      "  a , 1.5 , 2.5 , hello \r\n");
  const PointsCsv csv = read_points_csv(in);
  ASSERT_EQ(csv.records.size(), 1u);
  EXPECT_EQ(csv.records[0].id, "a");
  EXPECT_DOUBLE_EQ(csv.records[0].location.x, 1.5);
  EXPECT_EQ(csv.records[0].attributes.at("note"), "hello");
  EXPECT_EQ(csv.attribute_names, (std::vector<std::string>{"note"}));
}

TEST(CsvReader, RejectsMalformedInputWithLineNumbers) {
  const auto read = [](const std::string& text) {
    return [text] {
      std::istringstream in(text);
      read_points_csv(in, "points.csv");
    };
  };
  // Wrong header.
  EXPECT_THROW(read("x,y,id\na,1,2\n")(), DataError);
  EXPECT_THROW(read("")(), DataError);
  // Field count mismatches against the header.
  EXPECT_THROW(read("id,x,y\na,1,2,extra\n")(), DataError);
  EXPECT_THROW(read("id,x,y,sex\na,1,2\n")(), DataError);
  // Coordinate problems.
  EXPECT_THROW(read("id,x,y\na,abc,2\n")(), DataError);
  EXPECT_THROW(read("id,x,y\na,nan,2\n")(), DataError);
  EXPECT_THROW(read("id,x,y\na,inf,2\n")(), DataError);
  EXPECT_THROW(read("id,x,y\na,,2\n")(), DataError);
  // Identifier problems.
  EXPECT_THROW(read("id,x,y\n,1,2\n")(), DataError);
  EXPECT_THROW(read("id,x,y\na,1,2\na,3,4\n")(), DataError);
  // Empty attribute column name.
  EXPECT_THROW(read("id,x,y,\na,1,2,v\n")(), DataError);

  const std::string message =
      error_text(read("id,x,y\na,1,2\na,3,4\n"));
  EXPECT_NE(message.find("points.csv:3"), std::string::npos) << message;
  EXPECT_NE(message.find("duplicate id 'a'"), std::string::npos) << message;
}

TEST(CsvRoundTrip, ReproducesExactDoublesAndAttributes) {
  const std::vector<Record> records = {
      {"a", {0.1, 0.30000000000000004}, {{"sex", "f"}}},
      {"b", {-1.0 / 3.0, 12345678.901234567}, {}},
      {"c", {1e-17, -2.5e300}, {{"sex", "m"}, {"zz", "9"}}},
  };
  const std::vector<std::string> columns = {"sex", "zz"};
  const std::string text = points_csv_string(records, columns);
  std::istringstream in(text);
  const PointsCsv back = read_points_csv(in);

  ASSERT_EQ(back.records.size(), records.size());
  EXPECT_EQ(back.attribute_names, columns);
  for (std::size_t i = 0; i < records.size(); ++i) {
    EXPECT_EQ(back.records[i].id, records[i].id);
    // Exact bit-level equality thanks to shortest round-trip formatting.
    EXPECT_EQ(back.records[i].location.x, records[i].location.x);
    EXPECT_EQ(back.records[i].location.y, records[i].location.y);
    EXPECT_EQ(back.records[i].attributes, records[i].attributes);
  }
}

TEST(CsvWriter, DefaultColumnsAreTheSortedAttributeUnion) {
  const std::vector<Record> records = {
      {"a", {1, 2}, {{"zeta", "1"}, {"alpha", "2"}}},
      {"b", {3, 4}, {{"mid", "3"}}},
  };
  EXPECT_EQ(attribute_columns(records),
            (std::vector<std::string>{"alpha", "mid", "zeta"}));
  const std::string text = points_csv_string(records);
  EXPECT_EQ(text.substr(0, text.find('\n')), "id,x,y,alpha,mid,zeta");
}

// -- GeoJSON ------------------------------------------------------------------

TEST(GeoJsonReader, ReadsFeatureCollections) {
  std::istringstream in(R"({
    "type": "FeatureCollection",
    "features": [
      {"type": "Feature", "id": "a",
       "geometry": {"type": "Point", "coordinates": [100.5, 200.25]},
       "properties": {"sex": "f", "age": 31, "weight": 62.5,
                      "insured": true, "note": null}},
      {"type": "Feature",
       "geometry": {"type": "Point", "coordinates": [-3, 0]},
       "properties": {"id": "b"}}
    ]
  })");
  const PointsCsv out = read_points_geojson(in);
  ASSERT_EQ(out.records.size(), 2u);
  EXPECT_EQ(out.records[0].id, "a");
  EXPECT_DOUBLE_EQ(out.records[0].location.x, 100.5);
  // Scalar properties are canonicalized to strings; null is skipped.
  EXPECT_EQ(out.records[0].attributes.at("sex"), "f");
  EXPECT_EQ(out.records[0].attributes.at("age"), "31");
  EXPECT_EQ(out.records[0].attributes.at("weight"), "62.5");
  EXPECT_EQ(out.records[0].attributes.at("insured"), "true");
  EXPECT_FALSE(out.records[0].attributes.contains("note"));
  // The id can live in the properties; it never becomes an attribute.
  EXPECT_EQ(out.records[1].id, "b");
  EXPECT_TRUE(out.records[1].attributes.empty());
  // Collected attribute names are the sorted union.
  EXPECT_EQ(out.attribute_names,
            (std::vector<std::string>{"age", "insured", "sex", "weight"}));
}

TEST(GeoJsonReader, RejectsWhatItCannotRepresent) {
  const auto read = [](const std::string& text) {
    return [text] {
      std::istringstream in(text);
      read_points_geojson(in, "points.geojson");
    };
  };
  EXPECT_THROW(read("{nope")(), DataError);
  EXPECT_THROW(read(R"({"type": "Feature"})")(), DataError);
  EXPECT_THROW(read(R"({"type": "FeatureCollection", "features": [
      {"type": "Feature", "id": "a",
       "geometry": {"type": "LineString", "coordinates": [[0,0],[1,1]]}}
  ]})")(),
               DataError);
  EXPECT_THROW(read(R"({"type": "FeatureCollection", "features": [
      {"type": "Feature",
       "geometry": {"type": "Point", "coordinates": [0, 0]}}
  ]})")(),
               DataError);
  EXPECT_THROW(read(R"({"type": "FeatureCollection", "features": [
      {"type": "Feature", "id": "a",
       "geometry": {"type": "Point", "coordinates": [0, 0]},
       "properties": {"bag": {"nested": 1}}}
  ]})")(),
               DataError);
  EXPECT_THROW(read(R"({"type": "FeatureCollection", "features": [
      {"type": "Feature", "id": "a",
       "geometry": {"type": "Point", "coordinates": [0, 0]}},
      {"type": "Feature", "id": "a",
       "geometry": {"type": "Point", "coordinates": [1, 1]}}
  ]})")(),
               DataError);
  const std::string message = error_text(
      read(R"({"type": "FeatureCollection", "features": [
      {"type": "Feature", "id": "a",
       "geometry": {"type": "Point", "coordinates": [0]}}
  ]})"));
  EXPECT_NE(message.find("feature #1"), std::string::npos) << message;
}

// -- Files --------------------------------------------------------------------

TEST(PointsFile, DispatchesOnExtension) {
  const fs::path csv_path = temp_file("dispatch.csv");
  const fs::path json_path = temp_file("dispatch.geojson");
  write_text_atomic(csv_path, "id,x,y\na,1,2\n");
  write_text_atomic(json_path, R"({"type": "FeatureCollection", "features": [
      {"type": "Feature", "id": "a",
       "geometry": {"type": "Point", "coordinates": [1, 2]}}]})");
  EXPECT_EQ(read_points_file(csv_path).records[0].id, "a");
  EXPECT_EQ(read_points_file(json_path).records[0].id, "a");
  // A missing path is a usage error, not a data error.
  EXPECT_THROW(read_points_file(temp_file("no_such_file.csv")), ConfigError);
}

TEST(PointsFile, WriteReadRoundTripThroughDisk) {
  const std::vector<Record> records = {
      {"a", {0.1, 0.2}, {{"sex", "f"}}},
      {"b", {1.0 / 7.0, -9.999999999999999e-5}, {}},
  };
  const fs::path path = temp_file("roundtrip.csv");
  write_points_csv(path, records);
  const PointsCsv back = read_points_file(path);
  ASSERT_EQ(back.records.size(), 2u);
  EXPECT_EQ(back.records[1].location.x, records[1].location.x);
  EXPECT_EQ(back.records[1].location.y, records[1].location.y);
  EXPECT_EQ(back.records[0].attributes.at("sex"), "f");
}

TEST(WriteTextAtomic, ReplacesContentAndLeavesNoTempFile) {
  const fs::path path = temp_file("atomic.txt");
  write_text_atomic(path, "first");
  write_text_atomic(path, "second");
  std::ifstream in(path);
  std::string content((std::istreambuf_iterator<char>(in)),
                      std::istreambuf_iterator<char>());
  EXPECT_EQ(content, "second");
  EXPECT_FALSE(fs::exists(path.string() + ".tmp"));
}

TEST(FileDigest, IsStableAndContentSensitive) {
  const fs::path a = temp_file("digest_a.csv");
  const fs::path b = temp_file("digest_b.csv");
  const fs::path empty = temp_file("digest_empty.csv");
  write_text_atomic(a, "id,x,y\na,1,2\n");
  write_text_atomic(b, "id,x,y\na,1,3\n");
  write_text_atomic(empty, "");

  const std::string da = file_digest(a);
  EXPECT_EQ(da, file_digest(a));
  EXPECT_NE(da, file_digest(b));
  // fnv1a64 of the empty string is the FNV offset basis.
  EXPECT_EQ(file_digest(empty), "fnv1a64:cbf29ce484222325");
  ASSERT_EQ(da.size(), 8u + 16u);
  EXPECT_EQ(da.substr(0, 8), "fnv1a64:");
  for (const char c : da.substr(8)) {
    EXPECT_TRUE((c >= '0' && c <= '9') || (c >= 'a' && c <= 'f')) << c;
  }
}

TEST(LooksGeographic, FlagsPlausibleDegreeData) {
  const std::vector<Record> degrees = {{"a", {-122.42, 37.77}, {}},
                                       {"b", {2.35, 48.86}, {}}};
  EXPECT_TRUE(looks_geographic(degrees));
  const std::vector<Record> meters = {{"a", {553000, 4183000}, {}}};
  EXPECT_FALSE(looks_geographic(meters));
  // One clearly planar coordinate clears the whole dataset.
  const std::vector<Record> mixed = {{"a", {-122.42, 37.77}, {}},
                                     {"b", {500, 100}, {}}};
  EXPECT_FALSE(looks_geographic(mixed));
  // y beyond +-90 cannot be a latitude.
  const std::vector<Record> tall = {{"a", {10, 95}, {}}};
  EXPECT_FALSE(looks_geographic(tall));
  EXPECT_FALSE(looks_geographic(std::vector<Record>{}));
}

// -- Linking ------------------------------------------------------------------

TEST(LinkDatasets, ReordersByIdAndInheritsAttributes) {
  const std::vector<Record> original = {{"a", {0, 0}, {{"sex", "f"}}},
                                        {"b", {10, 0}, {{"sex", "m"}}},
                                        {"c", {20, 0}, {}}};
  const std::vector<Record> masked = {{"c", {21, 1}, {}},
                                      {"a", {1, 1}, {}},
                                      {"b", {11, 1}, {{"sex", "x"}}}};
  const LinkedDatasets linked = link_datasets(original, masked);
  ASSERT_EQ(linked.masked.size(), 3u);
  EXPECT_EQ(linked.masked[0].id, "a");
  EXPECT_EQ(linked.masked[1].id, "b");
  EXPECT_EQ(linked.masked[2].id, "c");
  EXPECT_DOUBLE_EQ(linked.masked[0].location.x, 1.0);
  // Attribute-free masked rows inherit the original's attributes; rows
  // that carry their own keep them.
  EXPECT_EQ(linked.masked[0].attributes.at("sex"), "f");
  EXPECT_EQ(linked.masked[1].attributes.at("sex"), "x");
  EXPECT_TRUE(linked.masked[2].attributes.empty());
}

TEST(LinkDatasets, RejectsIdMismatches) {
  const std::vector<Record> original = {{"a", {0, 0}, {}}, {"b", {1, 0}, {}}};
  EXPECT_THROW(link_datasets(original, {{"a", {0, 1}, {}}}), DataError);
  EXPECT_THROW(
      link_datasets(original, {{"a", {0, 1}, {}}, {"x", {1, 1}, {}}}),
      DataError);
  EXPECT_THROW(
      link_datasets(original, {{"a", {0, 1}, {}}, {"a", {1, 1}, {}}}),
      DataError);
  const std::string message = error_text([&] {
    link_datasets(original, {{"a", {0, 1}, {}}, {"x", {1, 1}, {}}});
  });
  EXPECT_NE(message.find("'b'"), std::string::npos) << message;
}

}  // namespace
}  // namespace geomask
