// Copyright 2026 The otsg Authors
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef OTSG_ERRORS_HPP
#define OTSG_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace otsg {

// Parameter errors use std::invalid_argument and range errors use
// std::domain_error directly; the types below cover the remaining
// failure kinds that callers may want to catch separately.

/// Mismatched dimensions or sample counts.
class ShapeError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Requested operation outside the supported regime (e.g. brute force
/// beyond the enumerable size).
class CapabilityError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Malformed textual input given on the command line
/// (distribution/model/weight specs, grids, config files).
class ParseError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Unreadable or malformed data file (missing file, non-numeric cell,
/// ragged rows, unknown column). Reported with a location.
class DataError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Iterative method could not proceed (e.g. persistent kink failures).
class OptimizationError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Derivative requested at a declared nondifferentiability point.
/// Carries the offending sample pair when raised from a plan-weighted
/// accumulation (indices are 1-based, -1 when not applicable).
class KinkError : public std::runtime_error {
 public:
  explicit KinkError(const std::string& what, long source_index = -1,
                     long target_index = -1)
      : std::runtime_error(what),
        source_index_(source_index),
        target_index_(target_index) {}

  long source_index() const { return source_index_; }
  long target_index() const { return target_index_; }

 private:
  long source_index_;
  long target_index_;
};

}  // namespace otsg

#endif  // OTSG_ERRORS_HPP
