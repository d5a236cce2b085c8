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

#include "geomask/metrics.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <string>
#include <vector>

#include "geomask/errors.hpp"
#include "geomask/masking.hpp"
#include "geomask/spatial_index.hpp"
#include "geomask/synth.hpp"
#include "oracles.hpp"

namespace geomask {
namespace {

const StudyArea kWide(-1000, -1000, 1000, 1000);

// Frozen worked examples. Each value was computed by hand from the metric
// definition and is asserted exactly.

TEST(KOriginal, FrozenFiveCandidateExample) {
  // Masked point at the origin, true original at (3, 0): the candidate
  // circle has radius 3 and catches (3,0), (1,1), (-2,0) but not (5,5)
  // or (0,4).
  const std::vector<Point> candidates{
      {3, 0}, {1, 1}, {-2, 0}, {5, 5}, {0, 4}};
  EXPECT_EQ(k_original({0, 0}, {3, 0}, candidates), 3);
}

TEST(KOriginal, RequiresTruthAmongCandidates) {
  const std::vector<Point> candidates{{1, 1}, {-2, 0}};
  EXPECT_THROW(k_original({0, 0}, {3, 0}, candidates), DomainError);
}

TEST(KOriginal, PerfectMaskingStillCountsSelf) {
  // Zero displacement: only candidates at the masked point itself count.
  const std::vector<Point> candidates{{2, 2}, {5, 5}};
  EXPECT_EQ(k_original({2, 2}, {2, 2}, candidates), 1);
}

TEST(KOriginalMethod, FrozenDonutExample) {
  // Donut 50..200 backward region around the origin: (0,100) and (120,0)
  // are inside; (0,30) violates the inner radius and (0,250) the outer.
  const std::vector<Point> candidates{{0, 100}, {0, 30}, {0, 250}, {120, 0}};
  const MethodDescriptor donut{Donut{50, 200}, false};
  EXPECT_EQ(k_original_method({0, 0}, candidates, donut, kWide), 2);
}

TEST(KOriginalMethod, MismatchedDescriptorCanReturnZero) {
  // No candidate is reachable under a tiny disk: the declared method
  // clearly did not produce this masked point, and the count says so.
  const std::vector<Point> candidates{{0, 100}, {100, 0}};
  const MethodDescriptor tiny{UniformDisk{5}, false};
  EXPECT_EQ(k_original_method({0, 0}, candidates, tiny, kWide), 0);
}

TEST(KMoved, FrozenFourPointExample) {
  // Original at the origin, its masked point at (0, 3): radius-3 circle
  // around the original catches (0,3), (1,1), (-2,1) but not (4,4).
  const std::vector<Point> masked{{0, 3}, {1, 1}, {-2, 1}, {4, 4}};
  EXPECT_EQ(k_moved({0, 0}, {0, 3}, masked), 3);
}

TEST(KMoved, RequiresOwnMaskedPoint) {
  const std::vector<Point> masked{{1, 1}, {4, 4}};
  EXPECT_THROW(k_moved({0, 0}, {0, 3}, masked), DomainError);
}

TEST(KMovedMethod, FrozenUniformDiskExample) {
  // Forward disk of radius 100 around the original: (50,0) and (0,99)
  // are reachable, (150,0) is not.
  const std::vector<Point> masked{{50, 0}, {150, 0}, {0, 99}};
  const MethodDescriptor disk{UniformDisk{100}, false};
  EXPECT_EQ(k_moved_method({0, 0}, masked, disk, kWide), 2);
}

TEST(KMovedMethod, GridSnapCountsCellmates) {
  // Records in the same cell snap to the same center, so the count for
  // an original is exactly the number of masked points at its center.
  const GridSnap grid{100};
  const MethodDescriptor descriptor{grid, false};
  const StudyArea area(0, 0, 1000, 1000);
  // Three originals share cell [0,100)^2, one lives next door.
  const std::vector<Point> originals{{10, 10}, {60, 80}, {99, 1}, {150, 50}};
  std::vector<Point> masked;
  for (const Point& a : originals) {
    masked.push_back(detail::grid_center_of(grid, a));
  }
  EXPECT_EQ(k_moved_method(originals[0], masked, descriptor, area), 3);
  EXPECT_EQ(k_moved_method(originals[3], masked, descriptor, area), 1);
}

TEST(KMovedMethod, OutOfAreaOriginalIsADomainError) {
  const StudyArea area(0, 0, 10, 10);
  const std::vector<Point> masked{{5, 5}};
  EXPECT_THROW(
      k_moved_method({50, 50}, masked, {UniformDisk{10}, false}, area),
      DomainError);
}

// Distribution summaries.

TEST(SummarizeK, NearestRankQuantilesOnKnownVector) {
  std::vector<KCount> values;
  for (const int k : {1, 2, 2, 3, 5, 5, 5, 8, 9, 10}) {
    values.push_back({k, k});
  }
  const KSummary s = summarize_k(values);
  EXPECT_EQ(s.min, 1);
  EXPECT_EQ(s.max, 10);
  EXPECT_DOUBLE_EQ(s.mean, 5.0);
  // Nearest-rank on n = 10: rank ceil(0.05*10) = 1, ceil(0.25*10) = 3,
  // ceil(0.5*10) = 5, ceil(0.75*10) = 8, ceil(0.95*10) = 10.
  EXPECT_DOUBLE_EQ(s.q05, 1.0);
  EXPECT_DOUBLE_EQ(s.q25, 2.0);
  EXPECT_DOUBLE_EQ(s.q50, 5.0);
  EXPECT_DOUBLE_EQ(s.q75, 8.0);
  EXPECT_DOUBLE_EQ(s.q95, 10.0);
  const double expected_inverse =
      (1.0 + 0.5 + 0.5 + 1.0 / 3 + 3 * (1.0 / 5) + 1.0 / 8 + 1.0 / 9 +
       1.0 / 10) /
      10.0;
  EXPECT_NEAR(s.mean_inverse, expected_inverse, 1e-12);
  // Histogram covers every record once, values ascending.
  std::size_t total = 0;
  int last = -1;
  for (const auto& [k, count] : s.histogram) {
    EXPECT_GT(k, last);
    last = k;
    total += count;
  }
  EXPECT_EQ(total, values.size());
}

TEST(SummarizeK, ZeroCountsContributeZeroToMeanInverse) {
  const std::vector<KCount> values{{0, 0}, {2, 1}};
  const KSummary s = summarize_k(values);
  EXPECT_DOUBLE_EQ(s.mean_inverse, 0.25);
  EXPECT_EQ(s.min, 0);
}

// Whole-report behavior.

LinkedDatasets masked_instance(std::size_t m, std::size_t n,
                               const MaskRun& run, std::uint64_t seed,
                               const StudyArea& area) {
  const AddressUniverse universe = generate_universe(
      {area, m, SynthSpec::Layout::kUniform, 10, 0.0, seed});
  const std::vector<Record> targets = sample_targets(universe, n, seed);
  LinkedDatasets data = mask_dataset(targets, run, area, 0);
  data.universe = universe;
  return data;
}

TEST(ComputeReport, AgreesWithDefinitionalOracles) {
  const StudyArea area(0, 0, 2000, 2000);
  const MaskRun run{{Donut{30, 180}, false}, 5};
  const LinkedDatasets data = masked_instance(400, 120, run, 9, area);
  const MetricReport report = compute_report(data, area);

  const std::vector<Point> universe = locations_of(data.universe->records);
  const std::vector<Point> originals = locations_of(data.original);
  const std::vector<Point> masked = locations_of(data.masked);
  ASSERT_EQ(report.records.size(), data.original.size());
  for (std::size_t i = 0; i < report.records.size(); ++i) {
    const RecordMetrics& rm = report.records[i];
    const Point& a = originals[i];
    const Point& ap = masked[i];
    EXPECT_EQ(rm.k_original_a.count,
              oracles::k_original(ap, a, originals, 1e-9));
    ASSERT_TRUE(rm.k_original_b.has_value());
    EXPECT_EQ(rm.k_original_b->count,
              oracles::k_original(ap, a, universe, 1e-9));
    ASSERT_TRUE(rm.k_original_method_b.has_value());
    EXPECT_EQ(rm.k_original_method_b->count,
              oracles::k_original_method(ap, universe, run.descriptor.method,
                                         false, area, 1e-9));
    EXPECT_EQ(rm.k_moved.count, oracles::k_moved(a, ap, masked, 1e-9));
    ASSERT_TRUE(rm.k_moved_method.has_value());
    EXPECT_EQ(rm.k_moved_method->count,
              oracles::k_moved_method(a, masked, run.descriptor.method,
                                      false, area, 1e-9));
  }
}

TEST(ComputeReport, DistinctCountsMatchOracleAndNeverExceedTotals) {
  const StudyArea area(0, 0, 500, 500);
  const AddressUniverse universe = generate_universe(
      {area, 150, SynthSpec::Layout::kUniform, 10, 0.0, 3});
  // Address multiplicity: clones share coordinates, so distinct counts
  // must fall below the plain ones.
  const std::vector<Record> targets =
      with_address_multiplicity(sample_targets(universe, 40, 3), 3);
  LinkedDatasets data =
      mask_dataset(targets, {{GridSnap{50}, false}, 1}, area, 0);
  data.universe = universe;
  const MetricReport report = compute_report(data, area);

  const std::vector<Point> masked = locations_of(data.masked);
  for (std::size_t i = 0; i < report.records.size(); ++i) {
    const RecordMetrics& rm = report.records[i];
    EXPECT_LE(rm.k_moved.distinct, rm.k_moved.count);
    EXPECT_GE(rm.k_moved.distinct, 1);
    const Point& a = data.original[i].location;
    const double r = rm.displacement;
    const int expected_distinct = oracles::distinct_where(
        masked,
        [&](const Point& p) { return oracles::dist(a, p) <= r + 1e-9; });
    EXPECT_EQ(rm.k_moved.distinct, expected_distinct);
  }
}

TEST(ComputeReport, ParticipantPoolNeverBeatsUniverse) {
  // A (participants) is a subset of B (universe), so every A-count is
  // bounded by the matching B-count.
  const StudyArea area(0, 0, 1500, 1500);
  const LinkedDatasets data =
      masked_instance(900, 250, {{UniformDisk{90}, false}, 2}, 17, area);
  const MetricReport report = compute_report(data, area);
  for (const RecordMetrics& rm : report.records) {
    ASSERT_TRUE(rm.k_original_b.has_value());
    EXPECT_LE(rm.k_original_a.count, rm.k_original_b->count);
    ASSERT_TRUE(rm.k_original_method_a.has_value());
    ASSERT_TRUE(rm.k_original_method_b.has_value());
    EXPECT_LE(rm.k_original_method_a->count, rm.k_original_method_b->count);
  }
}

TEST(ComputeReport, SoundRunsKeepEveryMetricAtLeastOne) {
  const StudyArea area(0, 0, 1500, 1500);
  for (const MaskMethod method :
       {MaskMethod{UniformDisk{70}}, MaskMethod{Donut{20, 130}},
        MaskMethod{GridSnap{120}}}) {
    const LinkedDatasets data =
        masked_instance(500, 150, {{method, false}, 8}, 23, area);
    const MetricReport report = compute_report(data, area);
    for (const RecordMetrics& rm : report.records) {
      EXPECT_GE(rm.k_original_a.count, 1);
      EXPECT_GE(rm.k_original_b->count, 1);
      EXPECT_GE(rm.k_original_method_a->count, 1);
      EXPECT_GE(rm.k_original_method_b->count, 1);
      EXPECT_GE(rm.k_moved.count, 1);
      EXPECT_GE(rm.k_moved_method->count, 1);
    }
    // Records near the boundary may escape the area when clipping is off;
    // that is reported but it is not an unsoundness.
    for (const std::string& warning : report.warnings) {
      EXPECT_EQ(warning.find("unsound"), std::string::npos) << warning;
    }
  }
}

TEST(ComputeReport, CircleMetricsAreRigidMotionInvariant) {
  const StudyArea area(0, 0, 1000, 1000);
  const LinkedDatasets data =
      masked_instance(300, 80, {{UniformDisk{60}, false}, 4}, 31, area);
  const MetricReport base = compute_report(data, area);

  // Rotate everything by 30 degrees about the area center and translate;
  // distances are preserved, so the circle metrics cannot change.
  const double c = std::cos(0.5235987755982988);
  const double s = std::sin(0.5235987755982988);
  const auto transform = [&](const Point& p) {
    return Point{c * p.x - s * p.y + 300.0, s * p.x + c * p.y - 40.0};
  };
  LinkedDatasets moved = data;
  for (Record& r : moved.original) r.location = transform(r.location);
  for (Record& r : moved.masked) r.location = transform(r.location);
  for (Record& r : moved.universe->records) r.location = transform(r.location);
  moved.method = std::nullopt;
  std::vector<Point> all = locations_of(moved.original);
  {
    const std::vector<Point> extra = locations_of(moved.universe->records);
    all.insert(all.end(), extra.begin(), extra.end());
    const std::vector<Point> extra2 = locations_of(moved.masked);
    all.insert(all.end(), extra2.begin(), extra2.end());
  }
  const MetricReport rotated =
      compute_report(moved, StudyArea::bounding(all, 1.0));

  for (std::size_t i = 0; i < base.records.size(); ++i) {
    EXPECT_EQ(rotated.records[i].k_original_a.count,
              base.records[i].k_original_a.count);
    EXPECT_EQ(rotated.records[i].k_original_b->count,
              base.records[i].k_original_b->count);
    EXPECT_EQ(rotated.records[i].k_moved.count, base.records[i].k_moved.count);
  }
}

TEST(ComputeReport, MetricsScaleWithCoordinatesAndParameters) {
  const StudyArea area(0, 0, 1000, 1000);
  const MaskRun run{{Donut{25, 150}, false}, 6};
  const LinkedDatasets data = masked_instance(400, 100, run, 41, area);
  const MetricReport base = compute_report(data, area);

  const double scale = 2.5;
  LinkedDatasets scaled = data;
  for (Record& r : scaled.original) {
    r.location = {r.location.x * scale, r.location.y * scale};
  }
  for (Record& r : scaled.masked) {
    r.location = {r.location.x * scale, r.location.y * scale};
  }
  for (Record& r : scaled.universe->records) {
    r.location = {r.location.x * scale, r.location.y * scale};
  }
  scaled.method = MethodDescriptor{Donut{25 * scale, 150 * scale}, false};
  const StudyArea scaled_area(0, 0, 1000 * scale, 1000 * scale);
  const MetricReport big = compute_report(scaled, scaled_area);

  for (std::size_t i = 0; i < base.records.size(); ++i) {
    EXPECT_EQ(big.records[i].k_original_a.count,
              base.records[i].k_original_a.count);
    EXPECT_EQ(big.records[i].k_original_method_b->count,
              base.records[i].k_original_method_b->count);
    EXPECT_EQ(big.records[i].k_moved.count, base.records[i].k_moved.count);
    EXPECT_EQ(big.records[i].k_moved_method->count,
              base.records[i].k_moved_method->count);
  }
}

TEST(ComputeReport, NearestNeighborSucceedsExactlyWhenKIsOne) {
  // The re-identification reading of the metric: a nearest-neighbor
  // intruder looking at a masked point uniquely recovers the original
  // address exactly when k_original is 1 (no other candidate ties).
  const StudyArea area(0, 0, 1200, 1200);
  const LinkedDatasets data =
      masked_instance(600, 200, {{UniformDisk{55}, false}, 12}, 51, area);
  const std::vector<Point> universe = locations_of(data.universe->records);
  const PointIndex index(universe);
  const MetricReport report = compute_report(data, area);
  for (std::size_t i = 0; i < data.original.size(); ++i) {
    const NnResult nn = index.nn(data.masked[i].location);
    const bool unique_hit =
        nn.ties.size() == 1 &&
        coincident(universe[nn.ties[0]], data.original[i].location);
    EXPECT_EQ(unique_hit, report.records[i].k_original_b->count == 1)
        << "record " << i;
  }
}

TEST(ComputeReport, EmitsClassicKAnonymityNote) {
  const StudyArea area(0, 0, 500, 500);
  const LinkedDatasets data =
      masked_instance(100, 30, {{UniformDisk{40}, false}, 3}, 61, area);
  const MetricReport report = compute_report(data, area);
  bool found = false;
  for (const std::string& note : report.notes) {
    if (note.find("classic spatial k-anonymity") != std::string::npos) {
      found = true;
    }
  }
  EXPECT_TRUE(found);
}

TEST(ComputeReport, FlagsUnsoundMethodDescriptor) {
  const StudyArea area(0, 0, 1000, 1000);
  LinkedDatasets data =
      masked_instance(200, 60, {{UniformDisk{100}, false}, 7}, 71, area);
  // Claim a much tighter method than the one that actually ran.
  data.method = MethodDescriptor{UniformDisk{5}, false};
  const MetricReport report = compute_report(data, area);
  ASSERT_FALSE(report.warnings.empty());
  bool found = false;
  for (const std::string& w : report.warnings) {
    if (w.find("unsound") != std::string::npos) found = true;
  }
  EXPECT_TRUE(found);
  // Metrics are still computed; some method counts may be zero.
  ASSERT_TRUE(report.moved_method.has_value());
  EXPECT_EQ(report.moved_method->min, 0);
}

TEST(ComputeReport, NotesGridSnapNonInvertibility) {
  const StudyArea area(0, 0, 1000, 1000);
  const LinkedDatasets data =
      masked_instance(150, 40, {{GridSnap{100}, false}, 2}, 81, area);
  const MetricReport report = compute_report(data, area);
  bool found = false;
  for (const std::string& note : report.notes) {
    if (note.find("not invertible") != std::string::npos) found = true;
  }
  EXPECT_TRUE(found);
}

TEST(ComputeReport, WarnsAboutEscapedMaskedPoints) {
  const StudyArea area(0, 0, 100, 100);
  std::vector<Record> originals{{"a", {99, 50}, {}}, {"b", {50, 50}, {}}};
  LinkedDatasets data{originals, originals, {}, {}};
  data.masked[0].location = {140, 50};
  data.masked[1].location = {55, 55};
  const MetricReport report = compute_report(data, area);
  bool found = false;
  for (const std::string& w : report.warnings) {
    if (w.find("outside the study area") != std::string::npos) found = true;
  }
  EXPECT_TRUE(found);
}

TEST(ComputeReport, RejectsOriginalsMissingFromUniverse) {
  const StudyArea area(0, 0, 100, 100);
  std::vector<Record> originals{{"a", {10, 10}, {}}};
  LinkedDatasets data{originals, originals, {}, {}};
  data.universe = AddressUniverse{area, {{"b1", {50, 50}, {}}}};
  EXPECT_THROW(compute_report(data, area), DataError);
}

TEST(ComputeReport, EmptyDatasetYieldsEmptyReport) {
  const StudyArea area(0, 0, 100, 100);
  const LinkedDatasets data;
  const MetricReport report = compute_report(data, area);
  EXPECT_TRUE(report.records.empty());
  EXPECT_FALSE(report.original_a.has_value());
  EXPECT_FALSE(report.moved.has_value());
}

TEST(ComputeReport, ThreadCountDoesNotChangeResults) {
  const StudyArea area(0, 0, 800, 800);
  const LinkedDatasets data =
      masked_instance(300, 90, {{Donut{15, 95}, false}, 13}, 91, area);
  const MetricReport one = compute_report(data, area, {1e-9, 1});
  const MetricReport many = compute_report(data, area, {1e-9, 8});
  for (std::size_t i = 0; i < one.records.size(); ++i) {
    EXPECT_EQ(one.records[i].k_original_b->count,
              many.records[i].k_original_b->count);
    EXPECT_EQ(one.records[i].k_moved.count, many.records[i].k_moved.count);
  }
}

}  // namespace
}  // namespace geomask
