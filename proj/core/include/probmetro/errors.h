// Copyright 2021 Google LLC
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef PROBMETRO_ERRORS_H
#define PROBMETRO_ERRORS_H

#include <stdexcept>
#include <string>

namespace probmetro {

// Argument outside the mathematical domain (r < 0, s > 1, ...).
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

// Malformed user input: probe files, grids, mismatched profiles.
class ValidationError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// Problem too large for a dense routine.
class SizeError : public std::length_error {
 public:
  using std::length_error::length_error;
};

// Iterative solver gave up. what() carries the diagnostics.
class SolverError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Internal invariant broken, e.g. an allocation that does not sum to S.
class ConsistencyError : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

}  // namespace probmetro

#endif  // PROBMETRO_ERRORS_H
