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

#ifndef GEOMASK_CLI_HPP_
#define GEOMASK_CLI_HPP_

#include <algorithm>
#include <chrono>
#include <cstdint>
#include <cstdio>
#include <iostream>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include <CLI11.hpp>

#include "geomask/attack.hpp"
#include "geomask/dataset.hpp"
#include "geomask/errors.hpp"
#include "geomask/geometry.hpp"
#include "geomask/io.hpp"
#include "geomask/masking.hpp"
#include "geomask/methods.hpp"
#include "geomask/metrics.hpp"
#include "geomask/report.hpp"
#include "geomask/synth.hpp"
#include "geomask/version.hpp"

namespace geomask {

/// Options shared by every subcommand.
struct RunConfig {
  double epsilon = kBoundaryEpsilon;
  /// 0 means automatic: GEOMASK_THREADS if set, hardware otherwise.
  std::size_t threads = 0;
  bool assume_planar = false;
  bool emit_timing = false;
  /// "min_x,min_y,max_x,max_y"; empty means derive from the data.
  std::string area_text;
};

namespace cli_detail {

inline StudyArea parse_area(const std::string& text) {
  const std::vector<std::string_view> parts = split(text, ',');
  if (parts.size() != 4) {
    throw ConfigError("--area expects min_x,min_y,max_x,max_y");
  }
  double v[4];
  for (int i = 0; i < 4; ++i) {
    const auto parsed = parse_double(trim(parts[i]));
    if (!parsed) {
      throw ConfigError("--area has a non-numeric bound: '" + text + "'");
    }
    v[i] = *parsed;
  }
  return StudyArea(v[0], v[1], v[2], v[3]);
}

/// Loads a point file (CSV, or GeoJSON by extension) and applies the
/// geographic-coordinate guard: data whose every coordinate fits in
/// longitude/latitude ranges is almost certainly in degrees, and
/// Euclidean geometry on degrees is wrong.
inline PointsCsv load_points(const std::string& path,
                             const RunConfig& config) {
  PointsCsv csv = read_points_file(std::filesystem::path(path));
  if (!config.assume_planar && looks_geographic(csv.records)) {
    throw DataError(
        "'" + path +
        "' looks like longitude/latitude degrees (all |x| <= 180, "
        "|y| <= 90); this tool needs planar coordinates in meters. Pass "
        "--assume-planar if the data really is planar");
  }
  return csv;
}

/// Resolves the study area: an explicit --area wins; otherwise the
/// bounding box of every point the run has loaded, with a note in the
/// report warnings.
inline StudyArea resolve_area(const RunConfig& config,
                              std::span<const Point> points,
                              std::vector<std::string>& warnings) {
  if (!config.area_text.empty()) return parse_area(config.area_text);
  StudyArea area = StudyArea::bounding(points);
  warnings.push_back(
      "study area derived from the data bounding box; pass --area for a "
      "stable, data-independent area");
  return area;
}

inline Json config_common(const RunConfig& config, const StudyArea& area) {
  Json j{{"epsilon", config.epsilon},
         {"area", to_json(area)},
         {"threads", config.threads == 0
                         ? Json("auto")
                         : Json(config.threads)}};
  return j;
}

/// Writes the finished report to the requested path, or to stdout when
/// no path was given.
inline void finish_report(
    ReportEnvelope envelope, const std::string& report_path,
    const RunConfig& config,
    std::chrono::steady_clock::time_point started) {
  if (config.emit_timing) {
    const auto elapsed = std::chrono::steady_clock::now() - started;
    envelope.timing_ms =
        std::chrono::duration<double, std::milli>(elapsed).count();
  }
  if (report_path.empty()) {
    std::cout << report_string(envelope);
  } else {
    write_report_json(report_path, envelope);
  }
}

inline Json displacement_summary(const LinkedDatasets& linked) {
  const std::vector<double> d = displacement_distances(linked);
  if (d.empty()) {
    return Json{{"n_records", 0}};
  }
  double lo = d[0], hi = d[0], sum = 0.0;
  for (const double v : d) {
    lo = std::min(lo, v);
    hi = std::max(hi, v);
    sum += v;
  }
  return Json{{"n_records", d.size()},
              {"min", lo},
              {"max", hi},
              {"mean", sum / static_cast<double>(d.size())}};
}

/// Parses one --attribute spec: name:labelA=0.5,labelB=0.5 (weights
/// optional, default 1).
inline AttributeGenerator parse_attribute_spec(const std::string& text) {
  const std::size_t colon = text.find(':');
  if (colon == std::string::npos || colon == 0) {
    throw ConfigError(
        "--attribute expects name:label[=weight],label[=weight],...");
  }
  AttributeGenerator g;
  g.name = std::string(trim(std::string_view(text).substr(0, colon)));
  for (const std::string_view part :
       split(std::string_view(text).substr(colon + 1), ',')) {
    const std::size_t eq = part.find('=');
    std::string label;
    double weight = 1.0;
    if (eq == std::string_view::npos) {
      label = std::string(trim(part));
    } else {
      label = std::string(trim(part.substr(0, eq)));
      const auto parsed = parse_double(trim(part.substr(eq + 1)));
      if (!parsed || !(*parsed >= 0.0)) {
        throw ConfigError("bad weight in --attribute '" + text + "'");
      }
      weight = *parsed;
    }
    if (label.empty()) {
      throw ConfigError("empty label in --attribute '" + text + "'");
    }
    g.categories.emplace_back(std::move(label), weight);
  }
  if (g.categories.empty()) {
    throw ConfigError("--attribute '" + text + "' has no categories");
  }
  return g;
}

// Per-subcommand option bags.

struct GenerateOptions {
  RunConfig config;
  std::string out_universe;
  std::string out_targets;
  std::string report_path;
  std::string layout = "uniform";
  std::vector<std::string> attribute_specs;
  std::uint64_t universe_size = 0;
  std::uint64_t targets = 0;
  std::uint64_t seed = 0;
  std::uint64_t clusters = 10;
  std::uint64_t multiplicity = 1;
  double cluster_sigma = 0.0;
};

struct MaskOptions {
  RunConfig config;
  std::string input;
  std::string output;
  std::string report_path;
  std::string method;
  std::uint64_t seed = 0;
  bool clip = false;
};

struct MetricsOptions {
  RunConfig config;
  std::string original;
  std::string masked;
  std::string universe;
  std::string method;
  std::string report_path;
  std::string svg_path;
  int min_k = 0;
  bool show_threshold = false;
  bool clip = false;
  bool per_record = false;
};

struct AttackOptionsCli {
  RunConfig config;
  std::string original;
  std::string masked;
  std::string universe;
  std::string external;
  std::string method;
  std::string scenario;
  std::string strategy;
  std::string report_path;
  std::uint64_t assignment_cap = 5000;
  bool external_participants = false;
  bool clip = false;
  bool per_query = false;
};

struct ReportOptions {
  RunConfig config;
  std::string input;
  std::string universe;
  std::string method;
  std::string scenarios;
  std::string out_masked;
  std::string report_path;
  std::string svg_path;
  std::uint64_t seed = 0;
  bool clip = false;
};

inline void run_generate(const GenerateOptions& o) {
  const auto started = std::chrono::steady_clock::now();
  if (o.config.area_text.empty()) {
    throw ConfigError("generate needs an explicit --area");
  }
  SynthSpec spec{parse_area(o.config.area_text),
                 static_cast<std::size_t>(o.universe_size),
                 o.layout == "clustered" ? SynthSpec::Layout::kClustered
                                         : SynthSpec::Layout::kUniform,
                 static_cast<std::size_t>(o.clusters),
                 o.cluster_sigma,
                 o.seed};
  if (o.layout != "uniform" && o.layout != "clustered") {
    throw ConfigError("--layout must be uniform or clustered");
  }
  std::vector<AttributeGenerator> generators;
  for (const std::string& text : o.attribute_specs) {
    generators.push_back(parse_attribute_spec(text));
  }

  const AddressUniverse universe = generate_universe(spec);
  std::vector<Record> targets = sample_targets(
      universe, static_cast<std::size_t>(o.targets), generators, o.seed);
  if (o.multiplicity > 1) {
    targets = with_address_multiplicity(
        targets, static_cast<std::size_t>(o.multiplicity));
  }

  write_points_csv(o.out_universe, universe.records);
  write_points_csv(o.out_targets, targets);

  ReportEnvelope envelope;
  envelope.kind = "generate";
  envelope.config = config_common(o.config, spec.area);
  envelope.config["seed"] = o.seed;
  envelope.config["layout"] = o.layout;
  if (o.layout == "clustered") {
    envelope.config["clusters"] = o.clusters;
    envelope.config["cluster_sigma"] = o.cluster_sigma;
  }
  if (o.multiplicity > 1) envelope.config["multiplicity"] = o.multiplicity;
  if (!o.attribute_specs.empty()) {
    envelope.config["attributes"] = o.attribute_specs;
  }
  envelope.config["files"] =
      Json{{"universe", o.out_universe}, {"targets", o.out_targets}};
  envelope.payload = Json{{"universe_size", universe.records.size()},
                          {"targets", targets.size()}};
  finish_report(std::move(envelope), o.report_path, o.config, started);
}

inline void run_mask(const MaskOptions& o) {
  const auto started = std::chrono::steady_clock::now();
  const PointsCsv in = load_points(o.input, o.config);
  std::vector<std::string> warnings;
  const std::vector<Point> points = locations_of(in.records);
  const StudyArea area = resolve_area(o.config, points, warnings);

  const MaskRun run{MethodDescriptor{parse_method(o.method), o.clip}, o.seed};
  const LinkedDatasets linked =
      mask_dataset(in.records, run, area, o.config.threads);
  write_points_csv(o.output, linked.masked, in.attribute_names);

  ReportEnvelope envelope;
  envelope.kind = "mask";
  envelope.config = config_common(o.config, area);
  envelope.config["method"] = format_method(run.descriptor.method);
  envelope.config["clip"] = o.clip;
  envelope.config["seed"] = o.seed;
  envelope.config["files"] = Json{{"input", o.input}, {"output", o.output}};
  envelope.inputs = Json{{"input", file_digest(o.input)}};
  envelope.payload = Json{{"displacement", displacement_summary(linked)}};
  envelope.warnings = std::move(warnings);
  finish_report(std::move(envelope), o.report_path, o.config, started);
}

inline void run_metrics(const MetricsOptions& o) {
  const auto started = std::chrono::steady_clock::now();
  PointsCsv original = load_points(o.original, o.config);
  PointsCsv masked = load_points(o.masked, o.config);

  std::optional<PointsCsv> universe_csv;
  if (!o.universe.empty()) {
    universe_csv = load_points(o.universe, o.config);
  }
  std::optional<MethodDescriptor> method;
  if (!o.method.empty()) {
    method = MethodDescriptor{parse_method(o.method), o.clip};
  }

  std::vector<std::string> warnings;
  std::vector<Point> all_points = locations_of(original.records);
  {
    const std::vector<Point> m = locations_of(masked.records);
    all_points.insert(all_points.end(), m.begin(), m.end());
    if (universe_csv) {
      const std::vector<Point> u = locations_of(universe_csv->records);
      all_points.insert(all_points.end(), u.begin(), u.end());
    }
  }
  const StudyArea area = resolve_area(o.config, all_points, warnings);

  LinkedDatasets linked =
      link_datasets(std::move(original.records), std::move(masked.records));
  if (universe_csv) {
    linked.universe = AddressUniverse{area, std::move(universe_csv->records)};
  }
  linked.method = method;

  const MetricReport report = compute_report(
      linked, area, MetricOptions{o.config.epsilon, o.config.threads});

  ReportEnvelope envelope;
  envelope.kind = "metrics";
  envelope.config = config_common(o.config, area);
  if (method) {
    envelope.config["method"] = format_method(method->method);
    envelope.config["clip"] = o.clip;
  }
  envelope.config["files"] = Json{{"original", o.original},
                                  {"masked", o.masked},
                                  {"universe", o.universe}};
  envelope.inputs = Json{{"original", file_digest(o.original)},
                         {"masked", file_digest(o.masked)}};
  if (!o.universe.empty()) {
    envelope.inputs["universe"] = file_digest(o.universe);
  }
  envelope.payload = to_json(report, o.per_record);
  if (o.min_k > 0) {
    envelope.payload["policy"] = policy_json(report, o.min_k,
                                             o.show_threshold);
  }
  envelope.warnings = std::move(warnings);
  envelope.warnings.insert(envelope.warnings.end(), report.warnings.begin(),
                           report.warnings.end());
  finish_report(envelope, o.report_path, o.config, started);

  if (!o.svg_path.empty()) {
    write_text_atomic(o.svg_path, svg_metric_histograms(report));
  }
}

inline void run_attack(const AttackOptionsCli& o) {
  const auto started = std::chrono::steady_clock::now();
  const ScenarioId scenario = ScenarioId::parse(o.scenario);
  PointsCsv original = load_points(o.original, o.config);
  PointsCsv masked = load_points(o.masked, o.config);

  std::optional<PointsCsv> universe_csv;
  if (!o.universe.empty()) universe_csv = load_points(o.universe, o.config);
  std::optional<ExternalDataset> external;
  if (!o.external.empty()) {
    external = ExternalDataset{load_points(o.external, o.config).records,
                               o.external_participants};
  }
  std::optional<MethodDescriptor> method;
  if (!o.method.empty()) {
    method = MethodDescriptor{parse_method(o.method), o.clip};
  }

  std::vector<std::string> warnings;
  std::vector<Point> all_points = locations_of(original.records);
  {
    const std::vector<Point> m = locations_of(masked.records);
    all_points.insert(all_points.end(), m.begin(), m.end());
    if (universe_csv) {
      const std::vector<Point> u = locations_of(universe_csv->records);
      all_points.insert(all_points.end(), u.begin(), u.end());
    }
    if (external) {
      const std::vector<Point> e = locations_of(external->records);
      all_points.insert(all_points.end(), e.begin(), e.end());
    }
  }
  const StudyArea area = resolve_area(o.config, all_points, warnings);

  const LinkedDatasets linked =
      link_datasets(std::move(original.records), std::move(masked.records));
  std::optional<AddressUniverse> universe;
  if (universe_csv) {
    universe = AddressUniverse{area, std::move(universe_csv->records)};
  }

  AttackOptions options;
  options.epsilon = o.config.epsilon;
  options.num_threads = o.config.threads;
  options.assignment_cap = static_cast<std::size_t>(o.assignment_cap);
  if (!o.strategy.empty()) options.strategy = parse_strategy(o.strategy);

  const AttackOutcome outcome = run_scenario(
      scenario, linked, area, universe ? &*universe : nullptr,
      external ? &*external : nullptr, method, options);

  ReportEnvelope envelope;
  envelope.kind = "attack";
  envelope.config = config_common(o.config, area);
  envelope.config["scenario"] = scenario.label();
  envelope.config["strategy"] = strategy_name(outcome.strategy);
  if (method) {
    envelope.config["method"] = format_method(method->method);
    envelope.config["clip"] = o.clip;
  }
  envelope.config["files"] = Json{{"original", o.original},
                                  {"masked", o.masked},
                                  {"universe", o.universe},
                                  {"external", o.external}};
  envelope.inputs = Json{{"original", file_digest(o.original)},
                         {"masked", file_digest(o.masked)}};
  if (!o.universe.empty()) {
    envelope.inputs["universe"] = file_digest(o.universe);
  }
  if (!o.external.empty()) {
    envelope.inputs["external"] = file_digest(o.external);
  }
  envelope.payload = to_json(outcome, o.per_query);
  envelope.warnings = std::move(warnings);
  envelope.warnings.insert(envelope.warnings.end(), outcome.warnings.begin(),
                           outcome.warnings.end());
  finish_report(std::move(envelope), o.report_path, o.config, started);
}

inline void run_report(const ReportOptions& o) {
  const auto started = std::chrono::steady_clock::now();
  const PointsCsv in = load_points(o.input, o.config);
  std::optional<PointsCsv> universe_csv;
  if (!o.universe.empty()) universe_csv = load_points(o.universe, o.config);

  std::vector<std::string> warnings;
  std::vector<Point> all_points = locations_of(in.records);
  if (universe_csv) {
    const std::vector<Point> u = locations_of(universe_csv->records);
    all_points.insert(all_points.end(), u.begin(), u.end());
  }
  const StudyArea area = resolve_area(o.config, all_points, warnings);

  const MethodDescriptor descriptor{parse_method(o.method), o.clip};
  const MaskRun run{descriptor, o.seed};
  LinkedDatasets linked =
      mask_dataset(in.records, run, area, o.config.threads);
  if (universe_csv) {
    linked.universe = AddressUniverse{area, std::move(universe_csv->records)};
  }
  if (!o.out_masked.empty()) {
    write_points_csv(o.out_masked, linked.masked, in.attribute_names);
  }

  const MetricReport metrics = compute_report(
      linked, area, MetricOptions{o.config.epsilon, o.config.threads});

  // Scenario list: explicit, or everything the inputs support.
  std::vector<ScenarioId> scenarios;
  if (!o.scenarios.empty()) {
    for (const std::string_view part : split(o.scenarios, ',')) {
      scenarios.push_back(ScenarioId::parse(trim(part)));
    }
  } else {
    for (const int perspective : {1, 2}) {
      for (const bool knows_method : {false, true}) {
        for (const bool participation : {false, true}) {
          const ScenarioId id{perspective, participation, knows_method};
          if (!linked.universe && !participation) continue;
          scenarios.push_back(id);
        }
      }
    }
    std::sort(scenarios.begin(), scenarios.end(),
              [](const ScenarioId& a, const ScenarioId& b) {
                return a.perspective != b.perspective
                           ? a.perspective < b.perspective
                           : a.minor() < b.minor();
              });
  }

  Json attacks = Json::array();
  std::vector<std::string> attack_lines;
  AttackOptions attack_options;
  attack_options.epsilon = o.config.epsilon;
  attack_options.num_threads = o.config.threads;
  // Full precision lives in the JSON report; the terminal lines round to
  // four decimals.
  const auto fixed = [](double v) {
    char buffer[32];
    std::snprintf(buffer, sizeof buffer, "%.4f", v);
    return std::string(buffer);
  };
  for (const ScenarioId& scenario : scenarios) {
    const AttackOutcome outcome =
        run_scenario(scenario, linked, area, nullptr, attack_options);
    attacks.push_back(to_json(outcome, false));
    std::string line = "scenario " + scenario.label() + " (" +
                       strategy_name(outcome.strategy) +
                       "): success_rate=" + fixed(outcome.success_rate);
    if (outcome.predicted_success) {
      line += "  mean(1/k)=" + fixed(*outcome.predicted_success);
    }
    attack_lines.push_back(std::move(line));
  }

  // The human-readable summary goes to stdout; the JSON and SVG forms
  // are written on request.
  std::cout << "geomask report: " << linked.original.size() << " records, "
            << "method " << format_method(descriptor.method) << ", seed "
            << o.seed << "\n\n";
  std::cout << text_metric_table(metrics) << "\n";
  for (const std::string& line : attack_lines) std::cout << line << "\n";
  for (const std::string& note : metrics.notes) {
    std::cout << "note: " << note << "\n";
  }
  for (const std::string& warning : metrics.warnings) {
    std::cout << "warning: " << warning << "\n";
  }

  ReportEnvelope envelope;
  envelope.kind = "report";
  envelope.config = config_common(o.config, area);
  envelope.config["method"] = format_method(descriptor.method);
  envelope.config["clip"] = o.clip;
  envelope.config["seed"] = o.seed;
  envelope.config["files"] = Json{{"input", o.input},
                                  {"universe", o.universe},
                                  {"masked_output", o.out_masked}};
  envelope.inputs = Json{{"input", file_digest(o.input)}};
  if (!o.universe.empty()) {
    envelope.inputs["universe"] = file_digest(o.universe);
  }
  envelope.payload = Json{{"displacement", displacement_summary(linked)},
                          {"metrics", to_json(metrics, false)},
                          {"attacks", std::move(attacks)}};
  envelope.warnings = std::move(warnings);
  envelope.warnings.insert(envelope.warnings.end(), metrics.warnings.begin(),
                           metrics.warnings.end());
  if (!o.report_path.empty()) {
    finish_report(envelope, o.report_path, o.config, started);
  }

  if (!o.svg_path.empty()) {
    write_text_atomic(o.svg_path, svg_metric_histograms(metrics));
  }
}

inline void add_common(CLI::App* cmd, RunConfig& config) {
  cmd->add_option("--epsilon", config.epsilon,
                  "Boundary tolerance in coordinate units")
      ->capture_default_str();
  cmd->add_option("--threads", config.threads,
                  "Worker threads (0 = GEOMASK_THREADS env or hardware)");
  cmd->add_flag("--assume-planar", config.assume_planar,
                "Accept coordinates that look like lon/lat degrees");
  cmd->add_flag("--emit-timing", config.emit_timing,
                "Add wall-clock timing to the report (breaks byte-for-byte "
                "reproducibility)");
  cmd->add_option("--area", config.area_text,
                  "Study area as min_x,min_y,max_x,max_y");
}

}  // namespace cli_detail

/// Entry point of the command-line tool, callable in-process. Takes the
/// arguments after the program name. Returns 0 on success, 2 for
/// configuration/usage errors, 3 for data errors.
inline int cli_dispatch(std::vector<std::string> args) {
  using namespace cli_detail;

  CLI::App app{
      "geomask: point-location masking, anonymity metrics, and "
      "re-identification attack simulation"};
  app.require_subcommand(1);
  app.set_version_flag("--version", std::string(kVersionString));

  GenerateOptions gen;
  auto* generate = app.add_subcommand(
      "generate", "Create a synthetic address universe and target sample");
  add_common(generate, gen.config);
  generate->add_option("--universe-size", gen.universe_size,
                       "Number of universe addresses")->required();
  generate->add_option("--targets", gen.targets,
                       "Number of target records to sample")->required();
  generate->add_option("--seed", gen.seed, "Random seed")
      ->capture_default_str();
  generate->add_option("--layout", gen.layout, "uniform or clustered")
      ->capture_default_str();
  generate->add_option("--clusters", gen.clusters,
                       "Cluster count (clustered layout)")
      ->capture_default_str();
  generate->add_option("--cluster-sigma", gen.cluster_sigma,
                       "Cluster scatter std dev (clustered layout)");
  generate->add_option("--attribute", gen.attribute_specs,
                       "Categorical attribute: name:label[=w],label[=w],...")
      ->take_all();
  generate->add_option("--multiplicity", gen.multiplicity,
                       "Clone each target this many times at its address")
      ->capture_default_str();
  generate->add_option("--out-universe", gen.out_universe,
                       "Universe CSV output path")->required();
  generate->add_option("--out-targets", gen.out_targets,
                       "Targets CSV output path")->required();
  generate->add_option("--report", gen.report_path,
                       "JSON report path (default: stdout)");
  generate->callback([&] { run_generate(gen); });

  MaskOptions mask;
  auto* mask_cmd =
      app.add_subcommand("mask", "Mask a point dataset with a method");
  add_common(mask_cmd, mask.config);
  mask_cmd->add_option("--in", mask.input, "Input CSV (id,x,y[,attr...])")
      ->required();
  mask_cmd->add_option("--out", mask.output, "Masked CSV output path")
      ->required();
  mask_cmd->add_option("--method", mask.method,
                       "uniform:R | donut:RMIN,RMAX | gridsnap:CELL[,OX,OY]")
      ->required();
  mask_cmd->add_option("--seed", mask.seed, "Random seed")
      ->capture_default_str();
  mask_cmd->add_flag("--clip", mask.clip,
                     "Resample until masked points stay in the study area");
  mask_cmd->add_option("--report", mask.report_path,
                       "JSON report path (default: stdout)");
  mask_cmd->callback([&] { run_mask(mask); });

  MetricsOptions metrics;
  auto* metrics_cmd = app.add_subcommand(
      "metrics", "Compute anonymity metrics for a masked dataset");
  add_common(metrics_cmd, metrics.config);
  metrics_cmd->add_option("--original", metrics.original,
                          "Original CSV")->required();
  metrics_cmd->add_option("--masked", metrics.masked, "Masked CSV")
      ->required();
  metrics_cmd->add_option("--universe", metrics.universe,
                          "Address universe CSV");
  metrics_cmd->add_option("--method", metrics.method,
                          "Method the masked data was produced with");
  metrics_cmd->add_flag("--clip", metrics.clip,
                        "The masked data was clipped to the study area");
  metrics_cmd->add_flag("--per-record", metrics.per_record,
                        "Include per-record metrics in the report");
  metrics_cmd->add_option("--min-k", metrics.min_k,
                          "Check every metric against this k threshold");
  metrics_cmd->add_flag("--show-threshold", metrics.show_threshold,
                        "Print the --min-k value in the report (off by "
                        "default; the verdicts alone do not reveal it)");
  metrics_cmd->add_option("--report", metrics.report_path,
                          "JSON report path (default: stdout)");
  metrics_cmd->add_option("--svg", metrics.svg_path,
                          "Write k-histograms as SVG");
  metrics_cmd->callback([&] { run_metrics(metrics); });

  AttackOptionsCli attack;
  auto* attack_cmd =
      app.add_subcommand("attack", "Simulate an intruder scenario");
  add_common(attack_cmd, attack.config);
  attack_cmd->add_option("--original", attack.original, "Original CSV")
      ->required();
  attack_cmd->add_option("--masked", attack.masked, "Masked CSV")
      ->required();
  attack_cmd->add_option("--scenario", attack.scenario,
                         "1.1..1.4 or 2.1..2.4")->required();
  attack_cmd->add_option("--universe", attack.universe,
                         "Address universe CSV");
  attack_cmd->add_option("--external", attack.external,
                         "External identified dataset CSV (perspective 2)");
  attack_cmd->add_flag("--external-participants", attack.external_participants,
                       "Every external record is known to be a participant");
  attack_cmd->add_option("--method", attack.method,
                         "Method descriptor (scenarios *.3 and *.4)");
  attack_cmd->add_flag("--clip", attack.clip,
                       "The masked data was clipped to the study area");
  attack_cmd->add_option("--strategy", attack.strategy,
                         "Override: nn, cross_match, reversal, forward");
  attack_cmd->add_option("--assignment-cap", attack.assignment_cap,
                         "Max size for the exact assignment solver")
      ->capture_default_str();
  attack_cmd->add_flag("--per-query", attack.per_query,
                       "Include per-query outcomes in the report");
  attack_cmd->add_option("--report", attack.report_path,
                         "JSON report path (default: stdout)");
  attack_cmd->callback([&] { run_attack(attack); });

  ReportOptions report;
  auto* report_cmd = app.add_subcommand(
      "report", "Mask, measure, and attack in one reproducible run");
  add_common(report_cmd, report.config);
  report_cmd->add_option("--in", report.input, "Original CSV")->required();
  report_cmd->add_option("--method", report.method, "Masking method")
      ->required();
  report_cmd->add_option("--seed", report.seed, "Random seed")
      ->capture_default_str();
  report_cmd->add_flag("--clip", report.clip,
                       "Clip masked points to the study area");
  report_cmd->add_option("--universe", report.universe,
                         "Address universe CSV");
  report_cmd->add_option("--scenarios", report.scenarios,
                         "Comma-separated scenario list (default: all "
                         "supported by the inputs)");
  report_cmd->add_option("--out-masked", report.out_masked,
                         "Masked CSV output path");
  report_cmd->add_option("--report", report.report_path, "JSON report path");
  report_cmd->add_option("--svg", report.svg_path,
                         "Write k-histograms as SVG");
  report_cmd->callback([&] { run_report(report); });

  try {
    std::reverse(args.begin(), args.end());
    app.parse(std::move(args));
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  } catch (const ConfigError& e) {
    std::cerr << "geomask: error: " << e.what() << '\n';
    return 2;
  } catch (const DataError& e) {
    std::cerr << "geomask: error: " << e.what() << '\n';
    return 3;
  } catch (const DomainError& e) {
    std::cerr << "geomask: error: " << e.what() << '\n';
    return 3;
  } catch (const SamplingError& e) {
    std::cerr << "geomask: error: " << e.what() << '\n';
    return 3;
  } catch (const std::exception& e) {
    std::cerr << "geomask: internal error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}

/// argv-style adapter for main().
inline int cli_dispatch(int argc, const char* const* argv) {
  std::vector<std::string> args;
  args.reserve(argc > 0 ? static_cast<std::size_t>(argc - 1) : 0);
  for (int i = 1; i < argc; ++i) args.emplace_back(argv[i]);
  return cli_dispatch(std::move(args));
}

}  // namespace geomask

#endif  // GEOMASK_CLI_HPP_
