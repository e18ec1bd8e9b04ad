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
#include <span>
#include <string>
#include <vector>

#include "json.hpp"
#include "tanco/nlp/problem.hpp"

namespace tanco::nlp {

struct SolveOptions {
  double feas_tol = 1e-8;
  double opt_tol = 1e-6;
  double complementarity_tol = 1e-6;
  int max_outer_iterations = 50;
  int max_inner_iterations = 20000;
  int lbfgs_memory = 20;
  double initial_penalty = 10.0;
  double penalty_growth = 10.0;
  double max_penalty = 1e12;
  bool audit_jacobians = false;
  bool verbose = false;
};

enum class SolveStatus { converged, max_iterations, infeasible_stationary };

const char* to_string(SolveStatus s);

struct SolveReport {
  SolveStatus status = SolveStatus::max_iterations;
  int iterations = 0;        // outer (multiplier) iterations
  int inner_iterations = 0;  // quasi-Newton steps, summed
  double objective = 0.0;
  double max_equality_violation = 0.0;
  double max_inequality_violation = 0.0;
  double stationarity = 0.0;
  double complementarity = 0.0;
  double penalty = 0.0;
  double wall_time_s = 0.0;
  double audit_max_error = -1.0;  // negative when no audit ran

  bool converged() const { return status == SolveStatus::converged; }
};

// Wall time is left out unless asked for, so reports stay reproducible.
nlohmann::json to_json(const SolveReport& report, bool include_timing = false);

struct Multipliers {
  std::vector<double> equality;
  std::vector<double> inequality;
  double penalty = 0.0;  // 0 keeps the options' initial penalty

  bool empty() const { return equality.empty() && inequality.empty(); }
};

struct SolverState {
  std::vector<double> z;
  Multipliers multipliers;
};

// Packs a previous primal/dual solution for reuse. Empty multipliers are
// allowed and give a cold start from `previous`.
SolverState warm_start(const NlpProblem& nlp, std::span<const double> previous,
                       const Multipliers& multipliers);

struct SolveResult {
  std::vector<double> z;
  SolveReport report;
  SolverState state;
};

// Backend interface; external solvers implement the same contract.
class NlpSolver {
 public:
  virtual ~NlpSolver() = default;
  virtual std::string name() const = 0;
  virtual SolveResult solve(const NlpProblem& nlp, std::span<const double> z0,
                            const SolveOptions& options,
                            const SolverState* warm = nullptr) const = 0;
};

using ExternalSolver = NlpSolver;

// Augmented Lagrangian (PHR penalty for inequalities, no slacks) with a
// projected L-BFGS inner solver for the bound-constrained subproblems.
class AugmentedLagrangianSolver final : public NlpSolver {
 public:
  std::string name() const override { return "augmented-lagrangian"; }
  SolveResult solve(const NlpProblem& nlp, std::span<const double> z0,
                    const SolveOptions& options,
                    const SolverState* warm = nullptr) const override;
};

SolveResult solve(const NlpProblem& nlp, std::span<const double> z0,
                  const SolveOptions& options = {}, const SolverState* warm = nullptr);

}  // namespace tanco::nlp
