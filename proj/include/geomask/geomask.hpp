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

#ifndef GEOMASK_GEOMASK_HPP_
#define GEOMASK_GEOMASK_HPP_

// Umbrella header: the whole library.

#include "geomask/assignment.hpp"
#include "geomask/attack.hpp"
#include "geomask/cli.hpp"
#include "geomask/dataset.hpp"
#include "geomask/errors.hpp"
#include "geomask/geometry.hpp"
#include "geomask/io.hpp"
#include "geomask/masking.hpp"
#include "geomask/methods.hpp"
#include "geomask/metrics.hpp"
#include "geomask/parallel.hpp"
#include "geomask/report.hpp"
#include "geomask/rng.hpp"
#include "geomask/spatial_index.hpp"
#include "geomask/strconv.hpp"
#include "geomask/synth.hpp"
#include "geomask/version.hpp"

#endif  // GEOMASK_GEOMASK_HPP_
