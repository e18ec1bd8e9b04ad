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

// Tangent-space LGR transcription of a ProblemSpec into an NlpProblem.
//
// Per phase with N segments, degree d and control degree du the decision
// vector holds, segment by segment,
//   chi_k (n)  u_k (nu)  dev_{k,1..d} (d * n)  u_{k,1..du} (du * nu)
// followed by the final knot chi_N, u_N. Knot states are exp(ref_k, chi_k)
// around fixed references from the initial guess; dev_{k,j} are deviants of
// the state at node j relative to knot k. The tangent variant works in the
// chart's tangent coordinates; the baseline works in ambient coordinates and
// adds unit-norm rows for every quaternion block at every node. Node-wise
// unit norm plus collocated norm-preserving dynamics would force every
// quaternion polynomial onto the sphere, which only constants satisfy, so the
// baseline also carries one algebraic variable eta per quaternion block per
// node entering the rate as q' = (1/2) q (x) omega + eta q, appended to each
// segment as eta_{k,1..d}.

#include <cstddef>
#include <memory>
#include <string>
#include <vector>

#include "json.hpp"
#include "tanco/collocation/collocation.hpp"
#include "tanco/nlp/problem.hpp"
#include "tanco/transcription/problem.hpp"

namespace tanco::transcription {

enum class Variant { tangent, normalization_baseline };

const char* to_string(Variant v);
Variant parse_variant(const std::string& name);  // ParameterError on unknown

struct PhaseLayout {
  std::size_t offset = 0;
  std::size_t segments = 0;
  std::size_t degree = 0;
  std::size_t control_degree = 0;
  std::size_t n = 0;   // working tangent dimension
  std::size_t nu = 0;  // control dimension
  std::size_t algebraic = 0;  // per node; nonzero only for the baseline
  double t0 = 0.0;
  double h = 0.0;

  std::size_t stride() const {
    return n + nu + degree * n + control_degree * nu + degree * algebraic;
  }
  std::size_t size() const { return segments * stride() + n + nu; }
  std::size_t knot(std::size_t k) const { return offset + k * stride(); }
  std::size_t knot_control(std::size_t k) const { return knot(k) + n; }
  // j in 1..degree
  std::size_t deviant(std::size_t k, std::size_t j) const { return knot(k) + n + nu + (j - 1) * n; }
  // j in 1..control_degree
  std::size_t control(std::size_t k, std::size_t j) const {
    return knot(k) + n + nu + degree * n + (j - 1) * nu;
  }
  // j in 1..degree, i < algebraic
  std::size_t algebraic_var(std::size_t k, std::size_t j, std::size_t i) const {
    return knot(k) + n + nu + degree * n + control_degree * nu + (j - 1) * algebraic + i;
  }
  double tf() const { return t0 + h * static_cast<double>(segments); }
};

namespace detail {
struct Model;
}

struct Transcription {
  nlp::NlpProblem nlp{0};
  Variant variant = Variant::tangent;
  std::vector<PhaseLayout> phases;
  std::vector<double> initial_guess;
  std::size_t normalization_rows = 0;
  std::shared_ptr<const detail::Model> model;
};

Transcription transcribe(const ProblemSpec& problem, Variant variant = Variant::tangent);
Transcription transcribe(const ProblemSpec& problem, Variant variant,
                         collocation::SchemeCache& cache);
Transcription transcribe_normalization_baseline(const ProblemSpec& problem);

// Sum over phases of N(n d + nu du) + (N + 1)(n + nu), n = tangent dim; the
// baseline uses the ambient dim and adds its N d (quaternion blocks) eta
// variables.
std::size_t count_decision_variables(const ProblemSpec& problem,
                                     Variant variant = Variant::tangent);
// Sum over phases of n + N(n d + n + nu); n is the tangent dimension for the
// tangent variant and the ambient dimension for the baseline. Boundary rows
// are not part of the formula.
std::size_t count_equality_constraints(const ProblemSpec& problem,
                                       Variant variant = Variant::tangent);
// Extra unit-norm rows of the baseline: sum over phases of N * d * (ambient
// quaternion coordinates).
std::size_t normalization_surplus(const ProblemSpec& problem);

nlohmann::json sparsity_report(const Transcription& t);

}  // namespace tanco::transcription
