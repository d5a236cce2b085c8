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

#include "geomask/synth.hpp"

#include <gtest/gtest.h>

#include <map>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "geomask/dataset.hpp"
#include "geomask/errors.hpp"

namespace geomask {
namespace {

const StudyArea kArea(0, 0, 1000, 1000);

TEST(GenerateUniverse, ProducesNamedInAreaAddresses) {
  const AddressUniverse u = generate_universe({kArea, 500});
  ASSERT_EQ(u.records.size(), 500u);
  for (std::size_t i = 0; i < u.records.size(); ++i) {
    EXPECT_EQ(u.records[i].id, "b" + std::to_string(i + 1));
    EXPECT_TRUE(kArea.contains(u.records[i].location));
    EXPECT_TRUE(u.records[i].attributes.empty());
  }
  EXPECT_TRUE(validate_records(u.records, "universe").empty());
}

TEST(GenerateUniverse, IsAPureFunctionOfTheSpec) {
  SynthSpec spec{kArea, 200};
  spec.seed = 77;
  const AddressUniverse a = generate_universe(spec);
  const AddressUniverse b = generate_universe(spec);
  ASSERT_EQ(a.records.size(), b.records.size());
  for (std::size_t i = 0; i < a.records.size(); ++i) {
    EXPECT_EQ(a.records[i].location.x, b.records[i].location.x);
    EXPECT_EQ(a.records[i].location.y, b.records[i].location.y);
  }
  spec.seed = 78;
  const AddressUniverse c = generate_universe(spec);
  std::size_t same = 0;
  for (std::size_t i = 0; i < a.records.size(); ++i) {
    if (a.records[i].location.x == c.records[i].location.x) ++same;
  }
  EXPECT_LT(same, 5u);
}

TEST(GenerateUniverse, EmptyUniverseIsAllowed) {
  const AddressUniverse u = generate_universe({kArea, 0});
  EXPECT_TRUE(u.records.empty());
}

TEST(GenerateUniverse, ClusteredLayoutConcentratesPoints) {
  SynthSpec spec{kArea, 2000, SynthSpec::Layout::kClustered, 4, 25.0, 5};
  const AddressUniverse u = generate_universe(spec);
  ASSERT_EQ(u.records.size(), 2000u);
  for (const Record& r : u.records) {
    EXPECT_TRUE(kArea.contains(r.location));
  }
  // With four tight clusters, the mean nearest-neighbor spacing is far
  // below the ~12.5 expected of 2000 uniform points on this area. Use a
  // crude proxy: count 50x50 grid cells that hold at least one point.
  // Uniform fill touches most of the 400 cells; four sigma-25 clusters
  // cannot reach more than a small fraction of them.
  std::set<std::pair<int, int>> cells;
  for (const Record& r : u.records) {
    cells.insert({static_cast<int>(r.location.x / 50.0),
                  static_cast<int>(r.location.y / 50.0)});
  }
  EXPECT_LT(cells.size(), 120u);

  const AddressUniverse uniform = generate_universe({kArea, 2000});
  std::set<std::pair<int, int>> uniform_cells;
  for (const Record& r : uniform.records) {
    uniform_cells.insert({static_cast<int>(r.location.x / 50.0),
                          static_cast<int>(r.location.y / 50.0)});
  }
  EXPECT_GT(uniform_cells.size(), 300u);
}

TEST(GenerateUniverse, ClusteredLayoutValidatesItsParameters) {
  EXPECT_THROW(
      generate_universe({kArea, 10, SynthSpec::Layout::kClustered, 0, 25.0, 1}),
      ConfigError);
  EXPECT_THROW(
      generate_universe({kArea, 10, SynthSpec::Layout::kClustered, 3, 0.0, 1}),
      ConfigError);
  // Size zero returns before parameter checks can matter.
  EXPECT_NO_THROW(
      generate_universe({kArea, 0, SynthSpec::Layout::kClustered, 0, 0.0, 1}));
}

TEST(SampleTargets, DrawsDistinctUniverseAddresses) {
  const AddressUniverse u = generate_universe({kArea, 300});
  const std::vector<Record> targets = sample_targets(u, 120, 9);
  ASSERT_EQ(targets.size(), 120u);

  std::set<std::pair<double, double>> addresses;
  for (const Record& r : u.records) {
    addresses.insert({r.location.x, r.location.y});
  }
  std::set<std::pair<double, double>> drawn;
  for (std::size_t i = 0; i < targets.size(); ++i) {
    EXPECT_EQ(targets[i].id, "p" + std::to_string(i + 1));
    EXPECT_TRUE(addresses.contains({targets[i].location.x,
                                    targets[i].location.y}));
    drawn.insert({targets[i].location.x, targets[i].location.y});
  }
  // Without replacement: all 120 addresses are distinct.
  EXPECT_EQ(drawn.size(), 120u);
}

TEST(SampleTargets, IsDeterministicPerSeed) {
  const AddressUniverse u = generate_universe({kArea, 100});
  const std::vector<Record> a = sample_targets(u, 40, 3);
  const std::vector<Record> b = sample_targets(u, 40, 3);
  const std::vector<Record> c = sample_targets(u, 40, 4);
  ASSERT_EQ(a.size(), b.size());
  std::size_t same_as_c = 0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    EXPECT_EQ(a[i].location.x, b[i].location.x);
    EXPECT_EQ(a[i].location.y, b[i].location.y);
    if (a[i].location.x == c[i].location.x) ++same_as_c;
  }
  EXPECT_LT(same_as_c, a.size());
}

TEST(SampleTargets, RejectsOversampling) {
  const AddressUniverse u = generate_universe({kArea, 10});
  EXPECT_THROW(sample_targets(u, 11, 0), DomainError);
  EXPECT_NO_THROW(sample_targets(u, 10, 0));
  EXPECT_TRUE(sample_targets(u, 0, 0).empty());
}

TEST(SampleTargets, HonorsAttributeWeights) {
  const AddressUniverse u = generate_universe({kArea, 2000});
  const std::vector<AttributeGenerator> gens = {
      {"sex", {{"f", 0.5}, {"m", 0.5}}},
      {"age", {{"young", 0.2}, {"old", 0.8}}}};
  const std::vector<Record> targets = sample_targets(u, 2000, gens, 21);
  std::map<std::string, int> sex, age;
  for (const Record& r : targets) {
    ++sex[r.attributes.at("sex")];
    ++age[r.attributes.at("age")];
  }
  // n = 2000, p = 0.5: sd = sqrt(2000 * 0.25) ~ 22.4, so +-100 is ~4.5
  // standard deviations.
  EXPECT_NEAR(sex["f"], 1000, 100);
  EXPECT_NEAR(sex["m"], 1000, 100);
  // p = 0.2: sd ~ 17.9; +-90 is ~5 standard deviations.
  EXPECT_NEAR(age["young"], 400, 90);
  EXPECT_NEAR(age["old"], 1600, 90);
}

TEST(SampleTargets, ValidatesGenerators) {
  const AddressUniverse u = generate_universe({kArea, 10});
  const std::vector<AttributeGenerator> unnamed = {{"", {{"x", 1.0}}}};
  EXPECT_THROW(sample_targets(u, 5, unnamed, 0), ConfigError);
  const std::vector<AttributeGenerator> empty_cats = {{"sex", {}}};
  EXPECT_THROW(sample_targets(u, 5, empty_cats, 0), ConfigError);
  const std::vector<AttributeGenerator> negative = {
      {"sex", {{"f", -1.0}, {"m", 2.0}}}};
  EXPECT_THROW(sample_targets(u, 5, negative, 0), ConfigError);
  const std::vector<AttributeGenerator> zero_total = {
      {"sex", {{"f", 0.0}, {"m", 0.0}}}};
  EXPECT_THROW(sample_targets(u, 5, zero_total, 0), ConfigError);
}

TEST(AddressMultiplicity, ClonesRecordsInPlace) {
  const std::vector<Record> base = {{"p1", {1, 2}, {{"sex", "f"}}},
                                    {"p2", {3, 4}, {}}};
  const std::vector<Record> tripled = with_address_multiplicity(base, 3);
  ASSERT_EQ(tripled.size(), 6u);
  EXPECT_EQ(tripled[0].id, "p1");
  EXPECT_EQ(tripled[1].id, "p1#2");
  EXPECT_EQ(tripled[2].id, "p1#3");
  EXPECT_EQ(tripled[3].id, "p2");
  EXPECT_EQ(tripled[4].id, "p2#2");
  EXPECT_EQ(tripled[5].id, "p2#3");
  for (int i : {0, 1, 2}) {
    EXPECT_EQ(tripled[i].location.x, 1);
    EXPECT_EQ(tripled[i].location.y, 2);
    EXPECT_EQ(tripled[i].attributes.at("sex"), "f");
  }
  // The result is still a valid dataset (no id collisions).
  EXPECT_TRUE(validate_records(tripled, "targets").empty());
}

TEST(AddressMultiplicity, OneIsTheIdentityAndZeroIsRejected) {
  const std::vector<Record> base = {{"p1", {1, 2}, {}}};
  const std::vector<Record> same = with_address_multiplicity(base, 1);
  ASSERT_EQ(same.size(), 1u);
  EXPECT_EQ(same[0].id, "p1");
  EXPECT_THROW(with_address_multiplicity(base, 0), ConfigError);
}

}  // namespace
}  // namespace geomask
