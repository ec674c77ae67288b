// Copyright 2026 The delay-lqgame Authors
//
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

#pragma once

#include <stdexcept>
#include <string>

namespace delay_lqgame {

/// Base class for every error raised by this library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Operand shapes do not fit the operation.
class DimensionError : public Error {
 public:
  using Error::Error;
};

/// Integration interval with lower bound above upper bound.
class IntervalError : public Error {
 public:
  using Error::Error;
};

/// Block index outside the augmented-state layout.
class IndexError : public Error {
 public:
  using Error::Error;
};

/// A data-model invariant does not hold. `invariant()` names it
/// (e.g. "delay-bound", "symmetry", "positive-definite").
class ValidationError : public Error {
 public:
  ValidationError(std::string invariant, const std::string& detail)
      : Error(invariant + ": " + detail), invariant_(std::move(invariant)) {}

  const std::string& invariant() const noexcept { return invariant_; }

 private:
  std::string invariant_;
};

/// Malformed configuration or gain document. `path()` is a JSON-pointer-like
/// location of the offending field.
class ParseError : public Error {
 public:
  ParseError(std::string path, const std::string& detail)
      : Error(path + ": " + detail), path_(std::move(path)) {}

  const std::string& path() const noexcept { return path_; }

 private:
  std::string path_;
};

/// A linear system that must be solved is numerically singular.
///
/// `step` and `controller` are -1 when the failure is not tied to a recursion
/// step (plain `solve`).
class SingularityError : public Error {
 public:
  SingularityError(const std::string& what, double pivot, int step = -1,
                   int controller = -1)
      : Error(what), pivot_(pivot), step_(step), controller_(controller) {}

  double pivot() const noexcept { return pivot_; }
  int step() const noexcept { return step_; }
  int controller() const noexcept { return controller_; }

 private:
  double pivot_;
  int step_;
  int controller_;
};

}  // namespace delay_lqgame
