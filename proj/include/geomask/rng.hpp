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

#ifndef GEOMASK_RNG_HPP_
#define GEOMASK_RNG_HPP_

#include <cstdint>
#include <random>
#include <string_view>

namespace geomask {

/// Identifier of the random stream recorded in every report so that runs
/// can be reproduced bit for bit. The "u53" suffix pins the uint64 to
/// double conversion: (x >> 11) * 2^-53, giving uniform doubles in [0, 1).
inline constexpr std::string_view kRngAlgorithm = "mt19937_64-u53";

/// SplitMix64 finalizer. Used to derive well-separated substream seeds;
/// the constants are the reference ones from Steele et al.
constexpr std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

/// FNV-1a 64-bit hash, used both for record-id substream derivation and
/// for content digests of report payloads.
constexpr std::uint64_t fnv1a64(std::string_view bytes) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (const char c : bytes) {
    h ^= static_cast<std::uint64_t>(static_cast<unsigned char>(c));
    h *= 0x100000001b3ULL;
  }
  return h;
}

/// Deterministic random source. The engine, the seeding, and the float
/// conversion are pinned: the same seed yields the same draw sequence on
/// every platform and at every thread count (callers give each record its
/// own substream instead of sharing one generator across threads).
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  std::uint64_t next_u64() { return engine_(); }

  /// Uniform double in [0, 1) with 53 random bits.
  double next_unit() {
    return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
  }

  /// Uniform double in [lo, hi).
  double uniform(double lo, double hi) {
    return lo + (hi - lo) * next_unit();
  }

  /// Uniform integer in [0, n). Rejection-sampled, so the result is exact
  /// rather than multiply-biased. n must be positive.
  std::uint64_t below(std::uint64_t n) {
    const std::uint64_t limit = ~std::uint64_t{0} - (~std::uint64_t{0} % n);
    std::uint64_t v = engine_();
    while (v >= limit) v = engine_();
    return v % n;
  }

  /// Substream for one record: mixing the run seed with a hash of the
  /// record id makes per-record draws independent of dataset order and of
  /// how records are assigned to threads.
  static Rng for_record(std::uint64_t run_seed, std::string_view record_id) {
    return Rng(splitmix64(splitmix64(run_seed) ^ fnv1a64(record_id)));
  }

  /// Substream for a named auxiliary purpose (e.g. synthesis phases).
  static Rng for_label(std::uint64_t run_seed, std::string_view label) {
    return for_record(run_seed, label);
  }

 private:
  std::mt19937_64 engine_;
};

}  // namespace geomask

#endif  // GEOMASK_RNG_HPP_
