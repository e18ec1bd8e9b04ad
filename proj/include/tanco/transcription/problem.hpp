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

// Multi-phase Bolza problems on a product manifold.
//
// Callbacks are evaluated with doubles and with forward-mode duals, so they
// are built from generic lambdas over std::span<const T> / std::span<T>.
// States are ambient points of the problem chart; dynamics return tangent
// rates of the chart's tangent layout.

#include <cstddef>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "tanco/ad/dual.hpp"
#include "tanco/manifolds/chart.hpp"

namespace tanco::transcription {

// out = f(x), e.g. jump maps, terminal cost (one row).
class StateFn {
 public:
  StateFn() = default;
  template <class F>
  StateFn(F f)  // NOLINT: implicit from lambdas
      : real_([f](std::span<const double> x, std::span<double> out) { f(x, out); }),
        dual_([f](std::span<const ad::Dual> x, std::span<ad::Dual> out) { f(x, out); }) {}

  void operator()(std::span<const double> x, std::span<double> out) const { real_(x, out); }
  void operator()(std::span<const ad::Dual> x, std::span<ad::Dual> out) const { dual_(x, out); }
  explicit operator bool() const { return static_cast<bool>(real_); }

 private:
  std::function<void(std::span<const double>, std::span<double>)> real_;
  std::function<void(std::span<const ad::Dual>, std::span<ad::Dual>)> dual_;
};

// out = f(a, b), e.g. dynamics f(x, u), running cost, boundary b(x0, xf).
class PairFn {
 public:
  PairFn() = default;
  template <class F>
  PairFn(F f)  // NOLINT: implicit from lambdas
      : real_([f](std::span<const double> a, std::span<const double> b, std::span<double> out) {
          f(a, b, out);
        }),
        dual_([f](std::span<const ad::Dual> a, std::span<const ad::Dual> b,
                  std::span<ad::Dual> out) { f(a, b, out); }) {}

  void operator()(std::span<const double> a, std::span<const double> b,
                  std::span<double> out) const {
    real_(a, b, out);
  }
  void operator()(std::span<const ad::Dual> a, std::span<const ad::Dual> b,
                  std::span<ad::Dual> out) const {
    dual_(a, b, out);
  }
  explicit operator bool() const { return static_cast<bool>(real_); }

 private:
  std::function<void(std::span<const double>, std::span<const double>, std::span<double>)> real_;
  std::function<void(std::span<const ad::Dual>, std::span<const ad::Dual>, std::span<ad::Dual>)>
      dual_;
};

struct PhaseSpec {
  PairFn dynamics;      // (x, u) -> tangent rate, chart tangent_dim rows
  PairFn running_cost;  // (x, u) -> 1 row; empty means zero
  PairFn path;          // (x, u) -> path_dim rows, path_lower <= c <= path_upper
  std::size_t path_dim = 0;
  std::vector<double> path_lower;  // empty: -inf
  std::vector<double> path_upper;  // empty: 0
  double duration = 1.0;
  int segments = 1;
  int state_degree = 3;
  int control_degree = 0;  // 0 picks max(1, state_degree - 1)
  std::size_t control_dim = 0;

  int effective_control_degree() const;
};

struct GuessSample {
  std::vector<double> state;    // ambient
  std::vector<double> control;  // empty: zeros
};

// Initial-guess override: state and control in `phase` at absolute time t.
using GuessFn = std::function<GuessSample(std::size_t phase, double t)>;

struct ProblemSpec {
  std::string name;
  manifolds::ManifoldChart chart = manifolds::ManifoldChart::euclidean(1);
  std::vector<PhaseSpec> phases;
  StateFn terminal_cost;  // 1 row; empty means zero
  PairFn boundary;        // (x at start, x at end) -> boundary_dim rows
  std::size_t boundary_dim = 0;
  std::vector<StateFn> jump_maps;  // phases - 1, ambient -> ambient
  std::vector<double> initial_state;
  std::optional<std::vector<double>> goal_hint;  // shapes the default guess
  GuessFn initial_guess;
  std::vector<std::string> state_names;    // ambient; defaults x0, x1, ...
  std::vector<std::string> control_names;  // defaults u0, u1, ...

  double start_time() const { return 0.0; }
  double total_duration() const;
  // Throws ConstructionError naming the offending phase.
  void validate() const;
};

std::vector<std::string> state_column_names(const ProblemSpec& problem);
std::vector<std::string> control_column_names(const ProblemSpec& problem);

}  // namespace tanco::transcription
