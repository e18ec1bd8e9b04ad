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

#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "json.hpp"
#include "tanco/nlp/solver.hpp"
#include "tanco/transcription/transcribe.hpp"

namespace tanco::cli {

enum ExitCode : int { kConverged = 0, kSolverFailure = 1, kUsageError = 2 };

struct RunConfig {
  std::string problem = "double-integrator";
  std::optional<int> segments;  // unset keeps the benchmark's mesh
  std::optional<int> degree;
  std::optional<int> control_degree;
  double feas_tol = 1e-8;
  double opt_tol = 1e-6;
  std::string variant = "tangent";
  std::string out_dir = ".";
  int samples_per_segment = 10;
  bool audit_jacobians = false;

  void validate() const;  // throws ParameterError
};

struct RunOutcome {
  transcription::ProblemSpec problem;
  transcription::Transcription transcription;
  nlp::SolveResult result;
  double defect_norm = 0.0;
  std::optional<double> oracle_cost;
  double wall_ms = 0.0;
};

// Builds, transcribes and solves one configuration. Unknown problems raise
// ParameterError.
RunOutcome execute(const RunConfig& config);

nlohmann::json make_report(const RunConfig& config, const RunOutcome& outcome);
void write_trajectory_csv(const RunOutcome& outcome, int samples_per_segment, std::ostream& out);

int run(const RunConfig& config, std::ostream& out, std::ostream& err);
int sweep(const RunConfig& config, const std::string& parameter, const std::vector<int>& values,
          std::ostream& out, std::ostream& err);

int main_entry(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace tanco::cli
