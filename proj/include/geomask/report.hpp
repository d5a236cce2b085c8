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

#ifndef GEOMASK_REPORT_HPP_
#define GEOMASK_REPORT_HPP_

#include <algorithm>
#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "geomask/attack.hpp"
#include "geomask/dataset.hpp"
#include "geomask/geometry.hpp"
#include "geomask/io.hpp"
#include "geomask/metrics.hpp"
#include "geomask/methods.hpp"
#include "geomask/rng.hpp"
#include "geomask/strconv.hpp"
#include "geomask/version.hpp"

namespace geomask {

using Json = nlohmann::json;

// JSON views of the library types. nlohmann::json keeps object keys
// sorted and prints doubles with shortest round-trip formatting, so a
// given value always serializes to the same bytes.

inline Json to_json(const StudyArea& area) {
  Json j{{"min_x", area.min_x()},
         {"min_y", area.min_y()},
         {"max_x", area.max_x()},
         {"max_y", area.max_y()}};
  if (area.has_polygon()) {
    Json ring = Json::array();
    for (const Point& p : area.polygon()) ring.push_back({p.x, p.y});
    j["polygon"] = std::move(ring);
  }
  return j;
}

inline Json to_json(const KSummary& s) {
  const auto hist_json = [](const std::vector<std::pair<int, std::size_t>>&
                                hist) {
    Json out = Json::array();
    for (const auto& [k, count] : hist) {
      out.push_back({{"k", k}, {"count", count}});
    }
    return out;
  };
  return Json{{"min", s.min},
              {"max", s.max},
              {"mean", s.mean},
              {"mean_inverse", s.mean_inverse},
              {"q05", s.q05},
              {"q25", s.q25},
              {"q50", s.q50},
              {"q75", s.q75},
              {"q95", s.q95},
              {"histogram", hist_json(s.histogram)},
              {"histogram_distinct", hist_json(s.histogram_distinct)}};
}

inline Json to_json(const RecordMetrics& rm) {
  Json j{{"id", rm.id},
         {"displacement", rm.displacement},
         {"k_original_A", rm.k_original_a.count},
         {"k_moved", rm.k_moved.count}};
  if (rm.k_original_b) j["k_original_B"] = rm.k_original_b->count;
  if (rm.k_original_method_a) {
    j["k_original_method_A"] = rm.k_original_method_a->count;
  }
  if (rm.k_original_method_b) {
    j["k_original_method_B"] = rm.k_original_method_b->count;
  }
  if (rm.k_moved_method) j["k_moved_method"] = rm.k_moved_method->count;
  return j;
}

/// Metric summaries keyed by the metric names used everywhere in the
/// output surface.
inline std::vector<std::pair<std::string, const KSummary*>> summary_slots(
    const MetricReport& report) {
  std::vector<std::pair<std::string, const KSummary*>> out;
  if (report.original_b) out.emplace_back("k_original_B", &*report.original_b);
  if (report.original_a) out.emplace_back("k_original_A", &*report.original_a);
  if (report.original_method_b) {
    out.emplace_back("k_original_method_B", &*report.original_method_b);
  }
  if (report.original_method_a) {
    out.emplace_back("k_original_method_A", &*report.original_method_a);
  }
  if (report.moved) out.emplace_back("k_moved", &*report.moved);
  if (report.moved_method) {
    out.emplace_back("k_moved_method", &*report.moved_method);
  }
  return out;
}

inline Json to_json(const MetricReport& report, bool include_records = true) {
  Json summaries = Json::object();
  for (const auto& [name, summary] : summary_slots(report)) {
    summaries[name] = to_json(*summary);
  }
  Json j{{"n_records", report.records.size()},
         {"summaries", std::move(summaries)},
         {"notes", report.notes}};
  if (include_records) {
    Json records = Json::array();
    for (const RecordMetrics& rm : report.records) {
      records.push_back(to_json(rm));
    }
    j["records"] = std::move(records);
  }
  return j;
}

/// Minimum-k policy check: does every record clear the configured
/// threshold under each computed metric? The threshold value itself is
/// omitted unless explicitly requested, since publishing the chosen k
/// can itself narrow an intruder's search; the pass/fail verdicts are
/// always shown.
inline Json policy_json(const MetricReport& report, int min_k,
                        bool show_threshold) {
  Json checks = Json::object();
  for (const auto& [name, summary] : summary_slots(report)) {
    checks[name] = summary->min >= min_k ? "pass" : "fail";
  }
  Json j{{"checks", std::move(checks)}};
  if (show_threshold) j["threshold"] = min_k;
  return j;
}

inline Json to_json(const QueryOutcome& q) {
  Json j{{"query_id", q.query_id},
         {"candidate_set_size", q.candidate_set_size},
         {"ties_at_best", q.ties_at_best},
         {"correct", q.correct},
         {"success", q.success},
         {"rank_of_truth", q.rank_of_truth},
         {"scored", q.scored}};
  if (!q.truth_id.empty()) j["truth_id"] = q.truth_id;
  if (!q.matched_ids.empty()) {
    j["matched_ids"] = q.matched_ids;
    j["guess_distance"] = q.guess_distance;
  }
  return j;
}

inline Json to_json(const AttackOutcome& outcome,
                    bool include_queries = true) {
  Json j{{"scenario", outcome.scenario.label()},
         {"strategy", strategy_name(outcome.strategy)},
         {"n_queries", outcome.queries.size()},
         {"scored", outcome.scored},
         {"structural_misses", outcome.structural_misses},
         {"success_rate", outcome.success_rate},
         {"mean_candidate_set_size", outcome.mean_candidate_set_size}};
  if (outcome.predicted_success) {
    j["predicted_success"] = *outcome.predicted_success;
  }
  if (!outcome.warnings.empty()) j["warnings"] = outcome.warnings;
  if (include_queries) {
    Json queries = Json::array();
    for (const QueryOutcome& q : outcome.queries) {
      queries.push_back(to_json(q));
    }
    j["queries"] = std::move(queries);
  }
  return j;
}

/// The fixed frame every CLI report is written in. The payload carries
/// the subcommand's result; config echoes the resolved run parameters
/// and inputs carries content digests of the files that went in, so a
/// report is self-describing and reproducible.
struct ReportEnvelope {
  std::string kind;
  Json config = Json::object();
  Json inputs = Json::object();
  Json payload = Json::object();
  std::vector<std::string> warnings;
  /// Present only when timing was explicitly requested: wall-clock time
  /// makes otherwise identical runs produce different bytes.
  std::optional<double> timing_ms;
};

/// Renders the envelope. The digest covers everything except itself and
/// the timing field, so byte-identical payloads always carry identical
/// digests.
inline Json envelope_json(const ReportEnvelope& envelope) {
  Json j{{"schema_version", kReportSchemaVersion},
         {"kind", envelope.kind},
         {"tool", {{"name", "geomask"}, {"version", kVersionString}}},
         {"rng", std::string(kRngAlgorithm)},
         {"config", envelope.config},
         {"inputs", envelope.inputs},
         {"payload", envelope.payload},
         {"warnings", envelope.warnings}};
  const std::uint64_t h = fnv1a64(j.dump());
  char hex[17];
  static const char* digits = "0123456789abcdef";
  for (int i = 0; i < 16; ++i) {
    hex[15 - i] = digits[(h >> (4 * i)) & 0xF];
  }
  hex[16] = '\0';
  j["digest"] = std::string("fnv1a64:") + hex;
  if (envelope.timing_ms) j["timing_ms"] = *envelope.timing_ms;
  return j;
}

/// Canonical serialization of a report: two-space indent, sorted keys,
/// trailing newline.
inline std::string report_string(const ReportEnvelope& envelope) {
  return envelope_json(envelope).dump(2) + "\n";
}

/// Writes the report atomically.
inline void write_report_json(const std::filesystem::path& path,
                              const ReportEnvelope& envelope) {
  write_text_atomic(path, report_string(envelope));
}

namespace detail {

inline void svg_panel(std::string& svg, const KSummary& s,
                      const std::string& title, double top) {
  constexpr double kWidth = 640.0;
  constexpr double kHeight = 220.0;
  constexpr double kLeft = 48.0;
  constexpr double kBottom = 32.0;
  constexpr double kTop = 28.0;
  const double plot_w = kWidth - kLeft - 16.0;
  const double plot_h = kHeight - kTop - kBottom;

  // Merge the tail when there are too many distinct values to draw.
  constexpr std::size_t kMaxBins = 48;
  std::vector<std::pair<std::string, std::size_t>> bins;
  if (s.histogram.size() <= kMaxBins) {
    for (const auto& [k, count] : s.histogram) {
      bins.emplace_back(std::to_string(k), count);
    }
  } else {
    for (std::size_t i = 0; i + 1 < kMaxBins; ++i) {
      bins.emplace_back(std::to_string(s.histogram[i].first),
                        s.histogram[i].second);
    }
    std::size_t tail = 0;
    for (std::size_t i = kMaxBins - 1; i < s.histogram.size(); ++i) {
      tail += s.histogram[i].second;
    }
    bins.emplace_back(">=" + std::to_string(s.histogram[kMaxBins - 1].first),
                      tail);
  }
  std::size_t peak = 1;
  for (const auto& [label, count] : bins) peak = std::max(peak, count);

  svg += "<g transform=\"translate(0," + format_double(top) + ")\">\n";
  svg += "<text x=\"" + format_double(kLeft) +
         "\" y=\"18\" font-size=\"13\" font-family=\"sans-serif\" "
         "font-weight=\"bold\">" +
         title + "</text>\n";
  svg += "<line x1=\"" + format_double(kLeft) + "\" y1=\"" +
         format_double(kTop + plot_h) + "\" x2=\"" +
         format_double(kLeft + plot_w) + "\" y2=\"" +
         format_double(kTop + plot_h) + "\" stroke=\"#444\"/>\n";

  const double slot = plot_w / static_cast<double>(bins.size());
  const double bar_w = std::max(2.0, slot * 0.8);
  for (std::size_t i = 0; i < bins.size(); ++i) {
    const double h =
        plot_h * static_cast<double>(bins[i].second) /
        static_cast<double>(peak);
    const double x = kLeft + slot * static_cast<double>(i) +
                     (slot - bar_w) / 2.0;
    const double y = kTop + plot_h - h;
    svg += "<rect x=\"" + format_double(x) + "\" y=\"" + format_double(y) +
           "\" width=\"" + format_double(bar_w) + "\" height=\"" +
           format_double(h) + "\" fill=\"#4878a8\"/>\n";
    if (bins.size() <= 24 || i % 4 == 0) {
      svg += "<text x=\"" + format_double(x + bar_w / 2.0) + "\" y=\"" +
             format_double(kTop + plot_h + 14.0) +
             "\" font-size=\"10\" font-family=\"sans-serif\" "
             "text-anchor=\"middle\">" +
             bins[i].first + "</text>\n";
    }
  }
  svg += "<text x=\"" + format_double(kLeft) + "\" y=\"" +
         format_double(kTop + plot_h + 28.0) +
         "\" font-size=\"10\" font-family=\"sans-serif\">mean=" +
         format_double(s.mean) + "  median=" + format_double(s.q50) +
         "  min=" + std::to_string(s.min) + "  max=" + std::to_string(s.max) +
         "</text>\n";
  svg += "</g>\n";
}

}  // namespace detail

/// Renders the k-value histograms of a metric report as a standalone
/// SVG document, one panel per available metric.
inline std::string svg_metric_histograms(const MetricReport& report) {
  const std::vector<std::pair<std::string, const KSummary*>> panels =
      summary_slots(report);
  const double height = 220.0 * static_cast<double>(std::max<std::size_t>(
                                    panels.size(), 1));
  std::string svg =
      "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"640\" height=\"" +
      format_double(height) + "\" viewBox=\"0 0 640 " +
      format_double(height) + "\">\n";
  double top = 0.0;
  for (const auto& [title, summary] : panels) {
    detail::svg_panel(svg, *summary, title, top);
    top += 220.0;
  }
  if (panels.empty()) {
    svg +=
        "<text x=\"24\" y=\"24\" font-family=\"sans-serif\" font-size=\"13\">"
        "no metrics available</text>\n";
  }
  svg += "</svg>\n";
  return svg;
}

/// Plain-text table of the metric summaries, for terminal consumption.
/// The JSON report keeps full double precision; this table rounds to four
/// decimals so the columns stay readable.
inline std::string text_metric_table(const MetricReport& report) {
  std::string out;
  out += "metric                 min    max    mean      median  mean(1/k)\n";
  out += "--------------------  -----  -----  --------  ------  ---------\n";
  const auto pad = [](std::string s, std::size_t width) {
    if (s.size() < width) s.append(width - s.size(), ' ');
    return s;
  };
  const auto fixed = [](double v) {
    char buffer[32];
    std::snprintf(buffer, sizeof buffer, "%.4f", v);
    return std::string(buffer);
  };
  for (const auto& [name, s] : summary_slots(report)) {
    out += pad(name, 22) + pad(std::to_string(s->min), 7) +
           pad(std::to_string(s->max), 7) + pad(fixed(s->mean), 10) +
           pad(fixed(s->q50), 8) + fixed(s->mean_inverse) + "\n";
  }
  return out;
}

}  // namespace geomask

#endif  // GEOMASK_REPORT_HPP_
