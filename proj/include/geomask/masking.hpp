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

#ifndef GEOMASK_MASKING_HPP_
#define GEOMASK_MASKING_HPP_

#include <cstdint>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "geomask/dataset.hpp"
#include "geomask/errors.hpp"
#include "geomask/geometry.hpp"
#include "geomask/methods.hpp"
#include "geomask/parallel.hpp"
#include "geomask/rng.hpp"

namespace geomask {

/// Everything needed to reproduce a masking run exactly.
struct MaskRun {
  MethodDescriptor descriptor;
  std::uint64_t seed = 0;

  friend bool operator==(const MaskRun&, const MaskRun&) = default;
};

/// Masks a whole dataset. Each record draws from its own substream keyed
/// by (seed, id), so the output is a pure function of the run parameters:
/// reordering the input or changing the thread count cannot change any
/// masked location. Throws DataError for structurally invalid input and
/// DomainError when an original lies outside the study area.
inline LinkedDatasets mask_dataset(std::span<const Record> originals,
                                   const MaskRun& run, const StudyArea& area,
                                   std::size_t num_threads = 0) {
  validate_method(run.descriptor.method);
  {
    const std::vector<Violation> violations =
        validate_records(originals, "original");
    if (!violations.empty()) {
      std::string message = "cannot mask invalid dataset:";
      for (const Violation& v : violations) {
        message += "\n  " + v.where + ": " + v.message;
      }
      throw DataError(message);
    }
  }

  LinkedDatasets out;
  out.original.assign(originals.begin(), originals.end());
  out.masked.assign(originals.begin(), originals.end());
  out.method = run.descriptor;

  parallel_for(
      out.masked.size(),
      [&](std::size_t i) {
        Rng rng = Rng::for_record(run.seed, out.masked[i].id);
        out.masked[i].location =
            mask_point(run.descriptor, out.original[i].location, area, rng);
      },
      num_threads);
  return out;
}

/// Per-record displacement distances d(x_i, x'_i), in input order.
inline std::vector<double> displacement_distances(const LinkedDatasets& data) {
  std::vector<double> out;
  out.reserve(data.original.size());
  for (std::size_t i = 0; i < data.original.size(); ++i) {
    out.push_back(distance(data.original[i].location,
                           data.masked[i].location));
  }
  return out;
}

}  // namespace geomask

#endif  // GEOMASK_MASKING_HPP_
