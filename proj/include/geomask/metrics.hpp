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

#ifndef GEOMASK_METRICS_HPP_
#define GEOMASK_METRICS_HPP_

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "geomask/dataset.hpp"
#include "geomask/errors.hpp"
#include "geomask/geometry.hpp"
#include "geomask/methods.hpp"
#include "geomask/parallel.hpp"
#include "geomask/spatial_index.hpp"

namespace geomask {

// The four anonymity metrics, each a candidate count from one intruder's
// point of view. All use closed regions with the global boundary
// tolerance, and duplicate coordinates count with multiplicity (several
// persons can share an address; collapsing them would overstate
// anonymity). Summaries additionally report distinct-coordinate counts.
//
//   k_original         how many candidate addresses are at most as far
//                      from the masked point as its true origin is. The
//                      candidate pool is the address universe B, or the
//                      participant addresses A for an intruder with
//                      participation knowledge.
//   k_original_method  how many candidate addresses lie in the backward
//                      displacement region of the masked point, i.e.
//                      could have produced it under the known method.
//   k_moved            how many masked points are at most as far from a
//                      known original as its own masked point is.
//                      This is exactly the classic spatial k-anonymity
//                      count of the record.
//   k_moved_method     how many masked points lie in the forward
//                      displacement region of a known original, i.e. are
//                      reachable from it under the known method.

/// Metric 1. Counts candidates within the closed circle around the masked
/// point a_prime whose radius is the displacement distance d(a_prime, a).
/// The true original a must itself be a candidate (the pool is B, which
/// contains all of A, or A itself), so the count is always at least 1; a
/// missing
/// truth means the inputs are inconsistent and raises DomainError.
inline int k_original(const Point& a_prime, const Point& a,
                      std::span<const Point> candidates,
                      double eps = kBoundaryEpsilon) {
  bool truth_present = false;
  const double radius = distance(a_prime, a);
  int k = 0;
  for (const Point& y : candidates) {
    if (distance(a_prime, y) <= radius + eps) ++k;
    if (!truth_present && coincident(y, a, eps)) truth_present = true;
  }
  if (!truth_present) {
    throw DomainError(
        "k_original requires the original location to be one of the "
        "candidates");
  }
  return k;
}

/// Metric 2. Counts candidates inside the backward displacement region of
/// the masked point: the addresses that could have produced a_prime under
/// the declared method. Zero is possible when the declared method did not
/// actually produce a_prime, so no precondition is enforced here; report
/// generation flags such descriptors as unsound instead.
inline int k_original_method(const Point& a_prime,
                             std::span<const Point> candidates,
                             const MethodDescriptor& method,
                             const StudyArea& area,
                             double eps = kBoundaryEpsilon) {
  const Region backward = backward_area(method, a_prime, area);
  return static_cast<int>(restricted_count(candidates, backward, eps));
}

/// Metric 3. Counts masked points within the closed circle around the
/// original a whose radius is the displacement distance d(a, a_prime).
/// The record's own masked point a_prime must be present in the masked
/// dataset, so the count is always at least 1.
inline int k_moved(const Point& a, const Point& a_prime,
                   std::span<const Point> masked,
                   double eps = kBoundaryEpsilon) {
  bool self_present = false;
  const double radius = distance(a, a_prime);
  int k = 0;
  for (const Point& y : masked) {
    if (distance(a, y) <= radius + eps) ++k;
    if (!self_present && coincident(y, a_prime, eps)) self_present = true;
  }
  if (!self_present) {
    throw DomainError(
        "k_moved requires the masked location to be part of the masked "
        "dataset");
  }
  return k;
}

/// Metric 4. Counts masked points inside the forward displacement region
/// of the original a: the masked locations a could have produced under
/// the declared method. Throws DomainError when a lies outside the study
/// area (the forward region is undefined there).
inline int k_moved_method(const Point& a, std::span<const Point> masked,
                          const MethodDescriptor& method,
                          const StudyArea& area,
                          double eps = kBoundaryEpsilon) {
  const Region forward = forward_area(method, a, area, eps);
  return static_cast<int>(restricted_count(masked, forward, eps));
}

/// A candidate count together with the number of distinct coordinates
/// among the counted candidates. `count` is the metric value proper;
/// `distinct` collapses coincident duplicates and feeds the secondary
/// histograms.
struct KCount {
  int count = 0;
  int distinct = 0;

  friend bool operator==(const KCount&, const KCount&) = default;
};

/// All metric values of one record. The `_a` variants use the participant
/// addresses as the candidate pool and are always computable; the `_b`
/// variants need the address universe; the method-related variants need
/// the method descriptor.
struct RecordMetrics {
  std::string id;
  double displacement = 0.0;
  KCount k_original_a;
  std::optional<KCount> k_original_b;
  std::optional<KCount> k_original_method_a;
  std::optional<KCount> k_original_method_b;
  KCount k_moved;
  std::optional<KCount> k_moved_method;
};

/// Distribution summary of one metric across a dataset. Quantiles use the
/// nearest-rank rule on the sorted values. mean_inverse is the mean of
/// 1/k over records with k >= 1, the quantity that predicts an intruder's
/// expected success rate when guessing uniformly within each candidate
/// set; records with k = 0 (possible only for unsound method descriptors)
/// contribute 0 to it.
struct KSummary {
  int min = 0;
  int max = 0;
  double mean = 0.0;
  double mean_inverse = 0.0;
  double q05 = 0.0;
  double q25 = 0.0;
  double q50 = 0.0;
  double q75 = 0.0;
  double q95 = 0.0;
  /// Records per metric value, ascending in the value. `histogram` bins
  /// the counts with multiplicity; `histogram_distinct` bins the
  /// distinct-coordinate counts of the same records.
  std::vector<std::pair<int, std::size_t>> histogram;
  std::vector<std::pair<int, std::size_t>> histogram_distinct;
};

/// Nearest-rank quantile of already-sorted values: the smallest element
/// whose rank is at least ceil(p * n).
inline double nearest_rank(std::span<const int> sorted, double p) {
  const std::size_t n = sorted.size();
  std::size_t rank =
      static_cast<std::size_t>(std::ceil(p * static_cast<double>(n)));
  rank = std::clamp<std::size_t>(rank, 1, n);
  return static_cast<double>(sorted[rank - 1]);
}

inline KSummary summarize_k(std::span<const KCount> values) {
  std::vector<int> sorted;
  sorted.reserve(values.size());
  for (const KCount& v : values) sorted.push_back(v.count);
  std::sort(sorted.begin(), sorted.end());
  KSummary s;
  s.min = sorted.front();
  s.max = sorted.back();
  double total = 0.0;
  double total_inverse = 0.0;
  for (const int k : sorted) {
    total += k;
    if (k >= 1) total_inverse += 1.0 / static_cast<double>(k);
  }
  const auto n = static_cast<double>(sorted.size());
  s.mean = total / n;
  s.mean_inverse = total_inverse / n;
  s.q05 = nearest_rank(sorted, 0.05);
  s.q25 = nearest_rank(sorted, 0.25);
  s.q50 = nearest_rank(sorted, 0.50);
  s.q75 = nearest_rank(sorted, 0.75);
  s.q95 = nearest_rank(sorted, 0.95);
  std::map<int, std::size_t> hist;
  for (const int k : sorted) ++hist[k];
  s.histogram.assign(hist.begin(), hist.end());
  std::map<int, std::size_t> hist_distinct;
  for (const KCount& v : values) ++hist_distinct[v.distinct];
  s.histogram_distinct.assign(hist_distinct.begin(), hist_distinct.end());
  return s;
}

/// Per-record metrics plus per-metric summaries for a linked dataset.
/// Summary slots are absent when the corresponding input (universe,
/// method) is absent or the dataset is empty.
struct MetricReport {
  std::vector<RecordMetrics> records;
  std::optional<KSummary> original_b;
  std::optional<KSummary> original_a;
  std::optional<KSummary> original_method_b;
  std::optional<KSummary> original_method_a;
  std::optional<KSummary> moved;
  std::optional<KSummary> moved_method;
  std::vector<std::string> warnings;
  std::vector<std::string> notes;
};

struct MetricOptions {
  double epsilon = kBoundaryEpsilon;
  std::size_t num_threads = 0;
};

namespace metrics_detail {

/// Count plus distinct-coordinate count of index points inside a region.
/// Distinctness is exact coordinate equality: duplicates are exact clones
/// in this model, and tolerance-based grouping would not be transitive.
inline KCount region_pair(const PointIndex& index, const Region& region,
                          double eps) {
  KCount out;
  detail::PointSet seen;
  for (const std::size_t j : index.indices_in_region(region, eps)) {
    ++out.count;
    const Point& p = index.point(j);
    if (seen.insert(detail::PointKey{p.x, p.y}).second) ++out.distinct;
  }
  return out;
}

}  // namespace metrics_detail

/// Computes every metric the inputs allow for every record, using the
/// universe and method descriptor attached to the linked dataset. The
/// circle metrics come out of spatial-index queries that are
/// observationally identical to the definitional linear scans above.
/// Throws DataError on inconsistent linked data (including participant
/// addresses missing from the universe, which would make the B-variant
/// metrics ill-defined) and DomainError when a record violates a metric
/// precondition.
inline MetricReport compute_report(const LinkedDatasets& data,
                                   const StudyArea& area,
                                   const MetricOptions& options = {}) {
  validate_or_throw(data);
  const std::optional<MethodDescriptor>& method = data.method;
  const bool has_universe = data.universe.has_value();
  const double eps = options.epsilon;

  MetricReport report;
  report.records.resize(data.original.size());
  if (data.original.empty()) return report;

  const std::vector<Point> original_points = locations_of(data.original);
  const std::vector<Point> masked_points = locations_of(data.masked);
  const PointIndex original_index(original_points);
  const PointIndex masked_index(masked_points);
  std::optional<std::vector<Point>> universe_points;
  std::optional<PointIndex> universe_index;
  if (has_universe) {
    universe_points = locations_of(data.universe->records);
    universe_index.emplace(*universe_points);
  }

  parallel_for(
      data.original.size(),
      [&](std::size_t i) {
        const Point& a = data.original[i].location;
        const Point& a_prime = data.masked[i].location;
        RecordMetrics& rm = report.records[i];
        rm.id = data.original[i].id;
        rm.displacement = distance(a, a_prime);

        // Metrics seen from the masked point.
        const Region original_ball = Region::disk(a_prime, rm.displacement);
        rm.k_original_a =
            metrics_detail::region_pair(original_index, original_ball, eps);
        if (universe_index) {
          rm.k_original_b =
              metrics_detail::region_pair(*universe_index, original_ball, eps);
        }
        if (method) {
          const Region backward = backward_area(*method, a_prime, area);
          rm.k_original_method_a =
              metrics_detail::region_pair(original_index, backward, eps);
          if (universe_index) {
            rm.k_original_method_b =
                metrics_detail::region_pair(*universe_index, backward, eps);
          }
        }

        // Metrics seen from the original point.
        const Region moved_ball = Region::disk(a, rm.displacement);
        rm.k_moved = metrics_detail::region_pair(masked_index, moved_ball, eps);
        if (method) {
          const Region forward = forward_area(*method, a, area, eps);
          rm.k_moved_method =
              metrics_detail::region_pair(masked_index, forward, eps);
        }
      },
      options.num_threads);

  const auto collect = [&](auto&& get) {
    std::vector<KCount> values;
    values.reserve(report.records.size());
    for (const RecordMetrics& rm : report.records) values.push_back(get(rm));
    return values;
  };
  report.original_a = summarize_k(
      collect([](const RecordMetrics& rm) { return rm.k_original_a; }));
  report.moved =
      summarize_k(collect([](const RecordMetrics& rm) { return rm.k_moved; }));
  if (has_universe) {
    report.original_b = summarize_k(
        collect([](const RecordMetrics& rm) { return *rm.k_original_b; }));
  }
  if (method) {
    report.original_method_a = summarize_k(collect(
        [](const RecordMetrics& rm) { return *rm.k_original_method_a; }));
    report.moved_method = summarize_k(
        collect([](const RecordMetrics& rm) { return *rm.k_moved_method; }));
    if (has_universe) {
      report.original_method_b = summarize_k(collect(
          [](const RecordMetrics& rm) { return *rm.k_original_method_b; }));
    }
  }

  report.notes.push_back(
      "k_moved is the classic spatial k-anonymity count of each record");

  if (method) {
    // A descriptor that cannot reproduce some record's masked point makes
    // the method-related counts promises about the wrong method. They are
    // still reported (sensitivity studies need them) but marked unsound.
    std::size_t unreachable = 0;
    for (std::size_t i = 0; i < masked_points.size(); ++i) {
      const Region forward =
          forward_area(*method, original_points[i], area, eps);
      if (!forward.contains(masked_points[i], eps)) ++unreachable;
    }
    if (unreachable > 0) {
      report.warnings.push_back(
          "unsound method descriptor: " + std::to_string(unreachable) +
          " masked location(s) are not reachable from their originals under "
          "'" + format_method(method->method) +
          "'; method-related metrics are not guarantees for this data");
    }
    if (is_deterministic(method->method)) {
      report.notes.push_back(
          "method '" + std::string(method_name(method->method)) +
          "' is deterministic and not invertible: a method-aware intruder "
          "recovers the exact preimage cell of every masked point, and only "
          "records sharing a cell protect each other");
    }
  }
  std::size_t escaped = 0;
  for (const Point& p : masked_points) {
    if (!area.contains(p, eps)) ++escaped;
  }
  if (escaped > 0) {
    report.warnings.push_back(
        std::to_string(escaped) +
        " masked location(s) fall outside the study area (masking ran "
        "without clipping)");
  }
  return report;
}

}  // namespace geomask

#endif  // GEOMASK_METRICS_HPP_
