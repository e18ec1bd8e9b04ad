// Copyright 2026 The tanco Authors
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

#include <cstddef>
#include <stdexcept>
#include <string>

namespace tanco {

// Base for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class InvalidDegreeError : public Error {
 public:
  using Error::Error;
};

class DegenerateNodesError : public Error {
 public:
  using Error::Error;
};

class DimensionError : public Error {
 public:
  using Error::Error;
};

// A point failed the chart's membership predicate (e.g. non-unit quaternion).
class MembershipError : public Error {
 public:
  using Error::Error;
};

class ConstructionError : public Error {
 public:
  using Error::Error;
};

class OutOfRangeError : public Error {
 public:
  using Error::Error;
};

class ParameterError : public Error {
 public:
  using Error::Error;
};

// A tangent vector or rotation angle beyond the exponential map's
// injectivity radius.
class InjectivityRadiusError : public ParameterError {
 public:
  using ParameterError::ParameterError;
};

// Raised when a differentiated function leaves the domain of an elementary
// operation. `variable` is the first decision variable the offending operand
// depends on, or npos when it could not be attributed.
class DomainError : public Error {
 public:
  static constexpr std::size_t npos = static_cast<std::size_t>(-1);

  DomainError(const std::string& what, std::size_t variable)
      : Error(what), variable_(variable) {}

  std::size_t variable() const { return variable_; }

 private:
  std::size_t variable_;
};

// A user callback produced NaN/Inf at a solver iterate.
class PoisonedEvaluationError : public Error {
 public:
  PoisonedEvaluationError(const std::string& what, int outer, int inner)
      : Error(what), outer_(outer), inner_(inner) {}

  int outer_iteration() const { return outer_; }
  int inner_iteration() const { return inner_; }

 private:
  int outer_;
  int inner_;
};

}  // namespace tanco
