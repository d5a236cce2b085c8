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

#ifndef GEOMASK_ATTACK_HPP_
#define GEOMASK_ATTACK_HPP_

#include <algorithm>
#include <cstddef>
#include <iterator>
#include <limits>
#include <numeric>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <utility>
#include <vector>

#include "geomask/assignment.hpp"
#include "geomask/dataset.hpp"
#include "geomask/errors.hpp"
#include "geomask/geometry.hpp"
#include "geomask/methods.hpp"
#include "geomask/parallel.hpp"
#include "geomask/spatial_index.hpp"

namespace geomask {

/// One of the eight canonical intruder scenarios. The perspective says
/// what the intruder starts from (1: a published masked point, looking
/// for the original address; 2: a known person with a known original
/// location, looking for their masked record). The two knowledge flags
/// say whether the intruder knows who participated and whether the
/// masking method and its parameters are public.
struct ScenarioId {
  int perspective = 1;
  bool participation = false;
  bool method = false;

  int minor() const { return 1 + (participation ? 1 : 0) + (method ? 2 : 0); }

  std::string label() const {
    return std::to_string(perspective) + "." + std::to_string(minor());
  }

  /// Parses "P.M" with P in {1,2} and M in {1,2,3,4}.
  static ScenarioId parse(std::string_view text) {
    const auto fail = [&] {
      throw ConfigError("unknown scenario '" + std::string(text) +
                        "'; expected one of 1.1..1.4, 2.1..2.4");
    };
    if (text.size() != 3 || text[1] != '.') fail();
    const char p = text[0];
    const char m = text[2];
    if ((p != '1' && p != '2') || m < '1' || m > '4') fail();
    ScenarioId id;
    id.perspective = p - '0';
    id.participation = (m == '2' || m == '4');
    id.method = (m == '3' || m == '4');
    return id;
  }

  friend bool operator==(const ScenarioId&, const ScenarioId&) = default;
};

/// How the intruder turns a candidate pool into a guess.
enum class Strategy {
  /// Pick the candidate nearest to the probe point.
  kNearest,
  /// Method knowledge, perspective 1: keep only pool addresses inside the
  /// backward displacement region of the masked point. A unique survivor
  /// is the answer; anything else is an unanswered query.
  kReversal,
  /// Method knowledge, perspective 2: keep only masked points inside the
  /// forward displacement region of the known original. A unique survivor
  /// is the answer; anything else is an unanswered query.
  kForward,
  /// Globally optimal one-to-one linkage minimizing total distance
  /// (exact rectangular assignment).
  kAssignment,
};

inline const char* strategy_name(Strategy s) {
  switch (s) {
    case Strategy::kNearest: return "nn";
    case Strategy::kReversal: return "reversal";
    case Strategy::kForward: return "forward";
    case Strategy::kAssignment: return "cross_match";
  }
  return "unknown";
}

inline Strategy parse_strategy(std::string_view text) {
  if (text == "nn" || text == "nearest") return Strategy::kNearest;
  if (text == "reversal") return Strategy::kReversal;
  if (text == "forward") return Strategy::kForward;
  if (text == "cross_match" || text == "assignment") {
    return Strategy::kAssignment;
  }
  throw ConfigError("unknown strategy '" + std::string(text) +
                    "'; expected nn, cross_match, reversal, or forward");
}

/// Canonical strategy for a scenario: method knowledge enables the
/// region-filtered attacks; a participation-complete external dataset
/// makes the global assignment the natural linkage; otherwise plain
/// nearest neighbor.
inline Strategy canonical_strategy(const ScenarioId& scenario) {
  if (scenario.perspective == 1) {
    return scenario.method ? Strategy::kReversal : Strategy::kNearest;
  }
  if (scenario.method) return Strategy::kForward;
  return scenario.participation ? Strategy::kAssignment : Strategy::kNearest;
}

/// Index value meaning "no candidate".
inline constexpr std::size_t kNoMatch = std::numeric_limits<std::size_t>::max();

/// Outcome of attacking one query.
struct QueryOutcome {
  std::string query_id;
  /// Ids of the candidates the strategy settled on. Distance strategies
  /// list the whole minimal-distance tie set; region strategies list the
  /// unique survivor or nothing; the assignment lists the linked partner.
  std::vector<std::string> matched_ids;
  /// Id of the true answer (the first one, if several pool entries are
  /// equally true); empty for structural misses.
  std::string truth_id;
  double guess_distance = std::numeric_limits<double>::infinity();
  /// Number of candidates the guess was effectively drawn from: the
  /// survivor count for region strategies, the (attribute-filtered) pool
  /// size otherwise.
  std::size_t candidate_set_size = 0;
  /// Size of the minimal-distance tie set for distance strategies; for
  /// region strategies, the survivor count again.
  std::size_t ties_at_best = 0;
  /// True when the attack's answer is the truth. A distance tie counts as
  /// correct when the tie set contains the truth; its success weight
  /// below carries the 1/ties discount.
  bool correct = false;
  /// Contribution to the success rate: hits / ties for distance
  /// strategies (the intruder guesses uniformly within the tie set),
  /// either 0 or 1 for region strategies and the assignment.
  double success = 0.0;
  /// 1 + number of candidates strictly closer to the probe than the true
  /// answer, within the strategy's candidate set; 0 when the truth is
  /// not in that set.
  std::size_t rank_of_truth = 0;
  /// False when the true answer does not exist in the pool at all (e.g.
  /// a non-participant in the external dataset), so no strategy could
  /// ever succeed on this query.
  bool scored = false;
};

/// Aggregate outcome of one scenario run.
struct AttackOutcome {
  ScenarioId scenario;
  Strategy strategy = Strategy::kNearest;
  std::vector<QueryOutcome> queries;
  std::size_t scored = 0;
  std::size_t structural_misses = 0;
  double success_sum = 0.0;
  /// success_sum / scored; 0 when nothing was scorable. Structural
  /// misses stay out of the denominator, since no strategy could link
  /// them; they are reported separately.
  double success_rate = 0.0;
  double mean_candidate_set_size = 0.0;
  /// Mean of 1/k under the scenario's defining anonymity metric: the
  /// success rate of a hypothetical intruder guessing uniformly within
  /// each record's candidate set. Absent when no record admits the
  /// metric.
  std::optional<double> predicted_success;
  std::vector<std::string> warnings;
};

struct AttackOptions {
  double epsilon = kBoundaryEpsilon;
  std::size_t num_threads = 0;
  /// Hard cap on the smaller side of an assignment problem; the exact
  /// solver is cubic and anything beyond this is a configuration error.
  std::size_t assignment_cap = 5000;
  /// Override the scenario's canonical strategy (e.g. run plain nearest
  /// neighbor in a method-knowledge scenario for comparison).
  std::optional<Strategy> strategy = std::nullopt;
};

struct CrossMatchOptions {
  std::size_t n_max = 5000;
};

/// Result of the exact cross-match between two record sets.
struct CrossMatchResult {
  /// matched[i] is the candidate index linked to queries[i], or kNoMatch
  /// for queries left unmatched (only possible when queries outnumber
  /// candidates). Each candidate appears at most once.
  std::vector<std::size_t> matched;
  double total_cost = 0.0;
};

/// Links every query record to a distinct candidate record so that the
/// total Euclidean distance is minimal (exact rectangular assignment,
/// not greedy). When queries outnumber candidates the roles are swapped
/// internally and the surplus queries end up unmatched. Both sides are
/// processed in id order with lowest-id preference inside the solver, so
/// reordering an input file cannot change which equal-cost optimum comes
/// out. Throws DomainError on an empty side and ConfigError when the
/// smaller side exceeds options.n_max.
inline CrossMatchResult cross_match(std::span<const Record> queries,
                                    std::span<const Record> candidates,
                                    const CrossMatchOptions& options = {}) {
  const std::size_t nq = queries.size();
  const std::size_t nc = candidates.size();
  if (nq == 0 || nc == 0) {
    throw DomainError("cross-match needs non-empty record sets");
  }
  if (std::min(nq, nc) > options.n_max) {
    throw ConfigError(
        "cross-match size " + std::to_string(std::min(nq, nc)) +
        " exceeds the exact-solver cap of " + std::to_string(options.n_max));
  }

  const auto id_order = [](std::span<const Record> records) {
    std::vector<std::size_t> order(records.size());
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
      return records[a].id < records[b].id;
    });
    return order;
  };
  const std::vector<std::size_t> q_order = id_order(queries);
  const std::vector<std::size_t> c_order = id_order(candidates);

  CrossMatchResult result;
  result.matched.assign(nq, kNoMatch);
  if (nq <= nc) {
    const AssignmentResult sol = solve_assignment(
        nq, nc, [&](std::size_t i, std::size_t j) {
          return distance(queries[q_order[i]].location,
                          candidates[c_order[j]].location);
        });
    for (std::size_t i = 0; i < nq; ++i) {
      result.matched[q_order[i]] = c_order[sol.column_of_row[i]];
    }
    result.total_cost = sol.total_cost;
    return result;
  }
  const AssignmentResult sol = solve_assignment(
      nc, nq, [&](std::size_t i, std::size_t j) {
        return distance(candidates[c_order[i]].location,
                        queries[q_order[j]].location);
      });
  for (std::size_t i = 0; i < nc; ++i) {
    result.matched[q_order[sol.column_of_row[i]]] = c_order[i];
  }
  result.total_cost = sol.total_cost;
  return result;
}

/// Keeps the candidates an original at a_prime could have come from: the
/// pool restricted to the backward displacement region. With a correct
/// method descriptor the truth always survives; a unique survivor is the
/// attack's answer.
inline std::vector<Record> reversal_attack(const Point& a_prime,
                                           std::span<const Record> candidates,
                                           const MethodDescriptor& method,
                                           const StudyArea& area,
                                           double eps = kBoundaryEpsilon) {
  const Region backward = backward_area(method, a_prime, area);
  std::vector<Record> out;
  for (const Record& r : candidates) {
    if (backward.contains(r.location, eps)) out.push_back(r);
  }
  return out;
}

/// Keeps the masked points a known original at a could have produced:
/// the masked dataset restricted to the forward displacement region. The
/// survivor count equals the k_moved_method metric by construction.
inline std::vector<Record> forward_reproduction_attack(
    const Point& a, std::span<const Record> masked,
    const MethodDescriptor& method, const StudyArea& area,
    double eps = kBoundaryEpsilon) {
  const Region forward = forward_area(method, a, area, eps);
  std::vector<Record> out;
  for (const Record& r : masked) {
    if (forward.contains(r.location, eps)) out.push_back(r);
  }
  return out;
}

namespace detail {

/// A pool of candidate points an attack guesses from, with ids for
/// reporting.
struct CandidatePool {
  std::vector<Point> points;
  std::vector<std::string> labels;
};

/// One attack query: where the intruder probes from and which pool
/// indices count as a correct answer.
struct AttackQuery {
  std::string id;
  Point probe;
  /// Pool indices that are true answers, ascending. Empty means the
  /// truth is not in the pool (structural miss).
  std::vector<std::size_t> acceptable;
  /// Region filter for the region strategies; nullopt for the distance
  /// strategies.
  std::optional<Region> filter;
  /// Pool indices compatible with the query's attributes (ascending);
  /// nullopt means attributes do not restrict this query.
  std::optional<std::vector<std::size_t>> allowed;
  /// Set when the strategy can rule out every candidate a priori (e.g. a
  /// probe outside the study area under method knowledge).
  bool no_candidates = false;
};

inline std::string truth_label(const AttackQuery& q,
                               const CandidatePool& pool) {
  return q.acceptable.empty() ? std::string() : pool.labels[q.acceptable[0]];
}

/// Distance-based guessing (the nearest strategy): nearest candidate in
/// the (attribute-filtered) pool, ties broken by a uniform guess.
inline std::vector<QueryOutcome> run_nearest(
    std::span<const AttackQuery> queries, const CandidatePool& pool,
    const PointIndex& pool_index, const AttackOptions& options) {
  std::vector<QueryOutcome> out(queries.size());
  const double eps = options.epsilon;

  parallel_for(
      queries.size(),
      [&](std::size_t qi) {
        const AttackQuery& q = queries[qi];
        QueryOutcome& o = out[qi];
        o.query_id = q.id;
        o.scored = !q.acceptable.empty();
        o.truth_id = truth_label(q, pool);

        const bool whole_pool = !q.allowed.has_value();
        const std::span<const std::size_t> allowed =
            whole_pool ? std::span<const std::size_t>() : *q.allowed;
        o.candidate_set_size =
            whole_pool ? pool.points.size() : allowed.size();

        std::vector<std::size_t> ties;
        double best = std::numeric_limits<double>::infinity();
        if (whole_pool) {
          NnResult nn = pool_index.nn(q.probe, eps);
          best = nn.distance;
          ties = std::move(nn.ties);
        } else {
          for (const std::size_t i : allowed) {
            best = std::min(best, distance(pool.points[i], q.probe));
          }
          for (const std::size_t i : allowed) {
            if (distance(pool.points[i], q.probe) <= best + eps) {
              ties.push_back(i);
            }
          }
        }
        o.ties_at_best = ties.size();
        if (!ties.empty()) {
          o.guess_distance = best;
          o.matched_ids.reserve(ties.size());
          for (const std::size_t t : ties) {
            o.matched_ids.push_back(pool.labels[t]);
          }
        }
        if (!o.scored) return;

        // Tie-weighted success: the intruder picks one tied candidate at
        // random, so credit the fraction of the tie set that is correct.
        std::size_t hits = 0;
        for (const std::size_t t : ties) {
          if (std::binary_search(q.acceptable.begin(), q.acceptable.end(),
                                 t)) {
            ++hits;
          }
        }
        if (hits > 0) {
          o.correct = true;
          o.success =
              static_cast<double>(hits) / static_cast<double>(ties.size());
        }

        // Rank of the true answer within the candidate set.
        double truth_dist = std::numeric_limits<double>::infinity();
        bool truth_in_set = false;
        for (const std::size_t a : q.acceptable) {
          if (whole_pool ||
              std::binary_search(allowed.begin(), allowed.end(), a)) {
            truth_in_set = true;
            truth_dist =
                std::min(truth_dist, distance(pool.points[a], q.probe));
          }
        }
        if (truth_in_set) {
          std::size_t closer = 0;
          const auto count_closer = [&](std::size_t i) {
            if (distance(pool.points[i], q.probe) + eps < truth_dist) {
              ++closer;
            }
          };
          if (whole_pool) {
            for (std::size_t i = 0; i < pool.points.size(); ++i) {
              count_closer(i);
            }
          } else {
            for (const std::size_t i : allowed) count_closer(i);
          }
          o.rank_of_truth = closer + 1;
        }
      },
      options.num_threads);
  return out;
}

/// Region-based guessing (reversal and forward strategies): the filter
/// region plus any attribute restriction defines the survivor set. The
/// attack answers only when exactly one candidate survives; an ambiguous
/// or empty survivor set is an unanswered query and scores 0.
inline std::vector<QueryOutcome> run_region(
    std::span<const AttackQuery> queries, const CandidatePool& pool,
    const PointIndex& pool_index, const AttackOptions& options) {
  std::vector<QueryOutcome> out(queries.size());
  const double eps = options.epsilon;

  parallel_for(
      queries.size(),
      [&](std::size_t qi) {
        const AttackQuery& q = queries[qi];
        QueryOutcome& o = out[qi];
        o.query_id = q.id;
        o.scored = !q.acceptable.empty();
        o.truth_id = truth_label(q, pool);

        std::vector<std::size_t> survivors;
        if (!q.no_candidates && q.filter) {
          survivors = pool_index.indices_in_region(*q.filter, eps);
          if (q.allowed) {
            std::vector<std::size_t> both;
            std::set_intersection(survivors.begin(), survivors.end(),
                                  q.allowed->begin(), q.allowed->end(),
                                  std::back_inserter(both));
            survivors = std::move(both);
          }
        }
        o.candidate_set_size = survivors.size();
        o.ties_at_best = survivors.size();

        if (survivors.size() == 1) {
          const std::size_t only = survivors.front();
          o.matched_ids.push_back(pool.labels[only]);
          o.guess_distance = distance(pool.points[only], q.probe);
          if (o.scored &&
              std::binary_search(q.acceptable.begin(), q.acceptable.end(),
                                 only)) {
            o.correct = true;
            o.success = 1.0;
          }
        }
        if (!o.scored) return;

        double truth_dist = std::numeric_limits<double>::infinity();
        bool truth_in_set = false;
        for (const std::size_t a : q.acceptable) {
          if (std::binary_search(survivors.begin(), survivors.end(), a)) {
            truth_in_set = true;
            truth_dist =
                std::min(truth_dist, distance(pool.points[a], q.probe));
          }
        }
        if (truth_in_set) {
          std::size_t closer = 0;
          for (const std::size_t i : survivors) {
            if (distance(pool.points[i], q.probe) + eps < truth_dist) {
              ++closer;
            }
          }
          o.rank_of_truth = closer + 1;
        }
      },
      options.num_threads);
  return out;
}

/// Runs the exact-assignment linkage and scores it per query.
inline std::vector<QueryOutcome> run_assignment(
    std::span<const AttackQuery> queries, const CandidatePool& pool,
    const AttackOptions& options) {
  std::vector<Record> query_records(queries.size());
  for (std::size_t i = 0; i < queries.size(); ++i) {
    query_records[i] = Record{queries[i].id, queries[i].probe, {}};
  }
  std::vector<Record> pool_records(pool.points.size());
  for (std::size_t j = 0; j < pool.points.size(); ++j) {
    pool_records[j] = Record{pool.labels[j], pool.points[j], {}};
  }
  const CrossMatchResult match = cross_match(
      query_records, pool_records, CrossMatchOptions{options.assignment_cap});

  std::vector<QueryOutcome> out(queries.size());
  const double eps = options.epsilon;
  parallel_for(
      queries.size(),
      [&](std::size_t qi) {
        const AttackQuery& q = queries[qi];
        QueryOutcome& o = out[qi];
        o.query_id = q.id;
        o.scored = !q.acceptable.empty();
        o.truth_id = truth_label(q, pool);
        o.candidate_set_size = pool.points.size();
        const std::size_t j = match.matched[qi];
        if (j != kNoMatch) {
          o.ties_at_best = 1;
          o.matched_ids.push_back(pool.labels[j]);
          o.guess_distance = distance(pool.points[j], q.probe);
        }
        if (!o.scored) return;
        if (j != kNoMatch &&
            std::binary_search(q.acceptable.begin(), q.acceptable.end(), j)) {
          o.correct = true;
          o.success = 1.0;
        }
        double truth_dist = std::numeric_limits<double>::infinity();
        for (const std::size_t a : q.acceptable) {
          truth_dist = std::min(truth_dist, distance(pool.points[a], q.probe));
        }
        std::size_t closer = 0;
        for (const Point& p : pool.points) {
          if (distance(p, q.probe) + eps < truth_dist) ++closer;
        }
        o.rank_of_truth = closer + 1;
      },
      options.num_threads);
  return out;
}

inline void aggregate(AttackOutcome& outcome) {
  double sizes = 0.0;
  for (const QueryOutcome& q : outcome.queries) {
    sizes += static_cast<double>(q.candidate_set_size);
    if (q.scored) {
      ++outcome.scored;
      outcome.success_sum += q.success;
    } else {
      ++outcome.structural_misses;
    }
  }
  outcome.success_rate =
      outcome.scored > 0
          ? outcome.success_sum / static_cast<double>(outcome.scored)
          : 0.0;
  outcome.mean_candidate_set_size =
      outcome.queries.empty()
          ? 0.0
          : sizes / static_cast<double>(outcome.queries.size());
}

}  // namespace detail

/// Plain nearest-neighbor linkage of queries against candidates, scored
/// by id: candidates sharing a query's id are its true answers. Distance
/// ties are resolved by a uniform guess (success weight 1/ties). Throws
/// DomainError when candidates are empty.
inline AttackOutcome nn_attack(std::span<const Record> queries,
                               std::span<const Record> candidates,
                               const AttackOptions& options = {}) {
  if (candidates.empty()) {
    throw DomainError("nn_attack needs a non-empty candidate set");
  }
  detail::CandidatePool pool;
  pool.points.reserve(candidates.size());
  pool.labels.reserve(candidates.size());
  std::unordered_map<std::string_view, std::size_t> by_id;
  by_id.reserve(candidates.size());
  for (std::size_t j = 0; j < candidates.size(); ++j) {
    pool.points.push_back(candidates[j].location);
    pool.labels.push_back(candidates[j].id);
    by_id.emplace(candidates[j].id, j);
  }
  const PointIndex pool_index(pool.points);

  std::vector<detail::AttackQuery> attack_queries(queries.size());
  for (std::size_t i = 0; i < queries.size(); ++i) {
    detail::AttackQuery& q = attack_queries[i];
    q.id = queries[i].id;
    q.probe = queries[i].location;
    const auto it = by_id.find(std::string_view(queries[i].id));
    if (it != by_id.end()) q.acceptable.push_back(it->second);
  }

  AttackOutcome outcome;
  outcome.strategy = Strategy::kNearest;
  outcome.queries =
      detail::run_nearest(attack_queries, pool, pool_index, options);
  detail::aggregate(outcome);
  return outcome;
}

/// Runs one canonical scenario against a linked dataset.
///
/// Perspective 1 attacks every masked record; the candidate pool is the
/// address universe (or the participants' original locations when
/// participation is known). Perspective 2 attacks from an external
/// identified dataset toward the masked records; when no external
/// dataset is supplied a canonical one is synthesized (the participants
/// themselves under participation knowledge, otherwise one identified
/// record per universe address).
///
/// Queries whose true answer is absent from the data (non-participants
/// in the external dataset) are structural misses: they are reported but
/// excluded from the success-rate denominator, since no strategy could
/// link them.
///
/// Throws ConfigError when the scenario needs an input that is missing
/// (method descriptor for *.3/*.4, universe for 1.1/1.3/2.1/2.3 without
/// an explicit external dataset) and DomainError when the candidate pool
/// comes out empty.
inline AttackOutcome run_scenario(
    const ScenarioId& scenario, const LinkedDatasets& data,
    const StudyArea& area, const AddressUniverse* universe,
    const ExternalDataset* external,
    const std::optional<MethodDescriptor>& method,
    const AttackOptions& options = {}) {
  validate_or_throw(data);
  if (scenario.method && !method) {
    throw ConfigError("scenario " + scenario.label() +
                      " assumes method knowledge; pass the method that "
                      "produced the masked data");
  }
  if (method) validate_method(method->method);

  AttackOutcome outcome;
  outcome.scenario = scenario;
  outcome.strategy =
      options.strategy ? *options.strategy : canonical_strategy(scenario);
  if ((outcome.strategy == Strategy::kReversal ||
       outcome.strategy == Strategy::kForward) &&
      !method) {
    throw ConfigError("the " +
                      std::string(strategy_name(outcome.strategy)) +
                      " strategy needs the method descriptor");
  }
  if (outcome.strategy == Strategy::kReversal && scenario.perspective != 1) {
    throw ConfigError(
        "the reversal strategy starts from masked points; it only applies "
        "to perspective 1");
  }
  if (outcome.strategy == Strategy::kForward && scenario.perspective != 2) {
    throw ConfigError(
        "the forward strategy starts from known originals; it only applies "
        "to perspective 2");
  }
  const double eps = options.epsilon;
  const bool region_strategy = outcome.strategy == Strategy::kReversal ||
                               outcome.strategy == Strategy::kForward;

  // Assemble the candidate pool and the query list.
  detail::CandidatePool pool;
  std::vector<detail::AttackQuery> queries;
  std::vector<Record> pool_records;

  if (scenario.perspective == 1) {
    if (scenario.participation) {
      pool_records = data.original;
    } else {
      if (!universe) {
        throw ConfigError("scenario " + scenario.label() +
                          " needs an address universe");
      }
      pool_records = universe->records;
    }
    if (pool_records.empty()) {
      throw DomainError("scenario " + scenario.label() +
                        " has an empty candidate pool");
    }
    pool.points = locations_of(pool_records);
    for (const Record& r : pool_records) pool.labels.push_back(r.id);
    const PointIndex pool_index(pool.points);
    const bool pool_has_attributes = std::any_of(
        pool_records.begin(), pool_records.end(),
        [](const Record& r) { return !r.attributes.empty(); });

    queries.resize(data.masked.size());
    for (std::size_t i = 0; i < data.masked.size(); ++i) {
      detail::AttackQuery& q = queries[i];
      q.id = data.masked[i].id;
      q.probe = data.masked[i].location;
      // Address-level truth: any pool address coincident with the true
      // original reveals where the person lives.
      q.acceptable = pool_index.indices_in_region(
          Region::disk(data.original[i].location, 0.0), eps);
      if (outcome.strategy == Strategy::kReversal) {
        q.filter = backward_area(*method, q.probe, area);
      }
      // Published attributes narrow an attributed address register.
      if (pool_has_attributes && !data.masked[i].attributes.empty()) {
        std::vector<std::size_t> allowed;
        const auto match = attributes_match(data.masked[i].attributes);
        for (std::size_t j = 0; j < pool_records.size(); ++j) {
          if (match(pool_records[j].attributes)) allowed.push_back(j);
        }
        if (allowed.size() < pool.points.size()) q.allowed = std::move(allowed);
      }
    }
    outcome.queries =
        outcome.strategy == Strategy::kAssignment
            ? detail::run_assignment(queries, pool, options)
        : region_strategy
            ? detail::run_region(queries, pool, pool_index, options)
            : detail::run_nearest(queries, pool, pool_index, options);
  } else {
    // Perspective 2: pool is the published masked dataset.
    if (data.masked.empty()) {
      throw DomainError("scenario " + scenario.label() +
                        " has an empty candidate pool");
    }
    pool.points = locations_of(data.masked);
    for (const Record& r : data.masked) pool.labels.push_back(r.id);
    const PointIndex pool_index(pool.points);
    const PointIndex original_index(locations_of(data.original));

    // The external identified dataset the intruder matches from. Without
    // one, participation knowledge means the intruder holds exactly the
    // participants; otherwise they hold the whole universe.
    std::vector<Record> fallback;
    std::span<const Record> externals;
    bool participation_knowledge = scenario.participation;
    if (external) {
      externals = external->records;
      participation_knowledge = external->participation_knowledge;
      if (scenario.participation && !external->participation_knowledge) {
        outcome.warnings.push_back(
            "scenario " + scenario.label() +
            " assumes participation knowledge but the external dataset does "
            "not declare it; treating every external record as a possible "
            "non-participant");
      }
    } else if (scenario.participation) {
      externals = data.original;
      participation_knowledge = true;
    } else {
      if (!universe) {
        throw ConfigError("scenario " + scenario.label() +
                          " needs an external dataset or an address "
                          "universe to synthesize one");
      }
      fallback = universe->records;
      externals = fallback;
      participation_knowledge = false;
    }

    std::unordered_map<std::string_view, std::size_t> id_to_index;
    if (participation_knowledge) {
      id_to_index.reserve(data.masked.size());
      for (std::size_t j = 0; j < data.masked.size(); ++j) {
        id_to_index.emplace(data.masked[j].id, j);
      }
    }
    const bool pool_has_attributes = std::any_of(
        data.masked.begin(), data.masked.end(),
        [](const Record& r) { return !r.attributes.empty(); });

    queries.resize(externals.size());
    for (std::size_t i = 0; i < externals.size(); ++i) {
      const Record& e = externals[i];
      detail::AttackQuery& q = queries[i];
      q.id = e.id;
      q.probe = e.location;
      if (participation_knowledge) {
        // Person-level truth: the masked record with the same identity.
        const auto it = id_to_index.find(std::string_view(e.id));
        if (it != id_to_index.end()) q.acceptable.push_back(it->second);
      } else {
        // Address-level truth: masked records whose original location is
        // the external record's location.
        q.acceptable = original_index.indices_in_region(
            Region::disk(e.location, 0.0), eps);
      }
      if (outcome.strategy == Strategy::kForward) {
        if (area.contains(e.location, eps)) {
          q.filter = forward_area(*method, e.location, area, eps);
        } else {
          // An external address outside the study area cannot have been
          // masked at all; under method knowledge the intruder rules
          // every candidate out.
          q.no_candidates = true;
        }
      }
      // Attributes the intruder holds narrow the published records.
      if (pool_has_attributes && !e.attributes.empty()) {
        std::vector<std::size_t> allowed;
        const auto match = attributes_match(e.attributes);
        for (std::size_t j = 0; j < data.masked.size(); ++j) {
          if (match(data.masked[j].attributes)) allowed.push_back(j);
        }
        if (allowed.size() < pool.points.size()) q.allowed = std::move(allowed);
      }
    }
    outcome.queries =
        outcome.strategy == Strategy::kAssignment
            ? detail::run_assignment(queries, pool, options)
        : region_strategy
            ? detail::run_region(queries, pool, pool_index, options)
            : detail::run_nearest(queries, pool, pool_index, options);
  }

  detail::aggregate(outcome);

  // A dataset whose records all carry the same attribute values leaks
  // them to any intruder with participation knowledge without a single
  // spatial match.
  if (scenario.participation && data.masked.size() > 1) {
    const AttributeMap& first = data.masked.front().attributes;
    const bool all_equal =
        !first.empty() &&
        std::all_of(data.masked.begin() + 1, data.masked.end(),
                    [&](const Record& r) { return r.attributes == first; });
    if (all_equal) {
      outcome.warnings.push_back(
          "every masked record carries identical attribute values; an "
          "intruder with participation knowledge learns them without any "
          "spatial linkage");
    }
  }

  // Predicted success: mean 1/k under the scenario's defining metric,
  // over the records for which the metric is defined.
  {
    const bool p1 = scenario.perspective == 1;
    const PointIndex metric_index(
        p1 ? pool.points : locations_of(data.masked));
    std::vector<double> inverses(data.original.size(),
                                 std::numeric_limits<double>::quiet_NaN());
    parallel_for(
        data.original.size(),
        [&](std::size_t i) {
          const Point& a = data.original[i].location;
          const Point& a_prime = data.masked[i].location;
          std::size_t k = 0;
          if (p1 && scenario.method) {
            k = metric_index.count_in_region(
                backward_area(*method, a_prime, area), eps);
          } else if (p1) {
            // Defined only when the true original is in this pool.
            if (metric_index.count_in_region(Region::disk(a, 0.0), eps) ==
                0) {
              return;
            }
            k = metric_index.count_in_region(
                Region::disk(a_prime, distance(a, a_prime)), eps);
          } else if (scenario.method) {
            k = metric_index.count_in_region(forward_area(*method, a, area, eps),
                                             eps);
          } else {
            k = metric_index.count_in_region(
                Region::disk(a, distance(a, a_prime)), eps);
          }
          if (k > 0) inverses[i] = 1.0 / static_cast<double>(k);
        },
        options.num_threads);
    double sum = 0.0;
    std::size_t n = 0;
    for (const double v : inverses) {
      if (v == v) {
        sum += v;
        ++n;
      }
    }
    if (n > 0) outcome.predicted_success = sum / static_cast<double>(n);
  }
  return outcome;
}

/// Convenience overload using the universe and method attached to the
/// linked dataset.
inline AttackOutcome run_scenario(const ScenarioId& scenario,
                                  const LinkedDatasets& data,
                                  const StudyArea& area,
                                  const ExternalDataset* external = nullptr,
                                  const AttackOptions& options = {}) {
  return run_scenario(scenario, data, area,
                      data.universe ? &*data.universe : nullptr, external,
                      data.method, options);
}

}  // namespace geomask

#endif  // GEOMASK_ATTACK_HPP_
