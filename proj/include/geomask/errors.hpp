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

#ifndef GEOMASK_ERRORS_HPP_
#define GEOMASK_ERRORS_HPP_

#include <stdexcept>
#include <string>

namespace geomask {

/// Base class for all errors raised by this library.
class Error : public std::runtime_error {
 public:
  explicit Error(const std::string& what) : std::runtime_error(what) {}
};

/// Bad run configuration: unknown flags, invalid method parameters,
/// missing required inputs, solver size caps. Maps to CLI exit code 2.
class ConfigError : public Error {
 public:
  using Error::Error;
};

/// Malformed input data: unparsable CSV/GeoJSON, non-finite coordinates,
/// duplicate ids. Maps to CLI exit code 3.
class DataError : public Error {
 public:
  using Error::Error;
};

/// A precondition on otherwise well-formed data does not hold, e.g. an
/// address that must be a member of a candidate set is not. Exit code 3.
class DomainError : public Error {
 public:
  using Error::Error;
};

/// Rejection sampling exhausted its draw budget (study area too small
/// relative to the displacement region). Exit code 3.
class SamplingError : public Error {
 public:
  using Error::Error;
};

}  // namespace geomask

#endif  // GEOMASK_ERRORS_HPP_
