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

#include <memory>
#include <vector>

#include "tanco/collocation/collocation.hpp"
#include "tanco/manifolds/chart.hpp"
#include "tanco/transcription/transcribe.hpp"

namespace tanco::transcription::detail {

struct PhaseModel {
  PairFn dynamics;  // rates in the working chart
  PairFn running_cost;
  PairFn path;
  std::vector<double> path_lower;  // expanded to path_dim, may hold -inf
  std::vector<double> path_upper;
  std::shared_ptr<const collocation::CollocationScheme> state_scheme;
  std::shared_ptr<const collocation::CollocationScheme> control_scheme;
  collocation::DenseMatrix control_at_nodes;   // d x (du + 1)
  std::vector<std::vector<double>> references;  // N + 1 knot references, ambient
};

struct Model {
  manifolds::ManifoldChart chart = manifolds::ManifoldChart::euclidean(1);  // working chart
  manifolds::ManifoldChart problem_chart = manifolds::ManifoldChart::euclidean(1);
  Variant variant = Variant::tangent;
  std::vector<PhaseLayout> layouts;
  std::vector<PhaseModel> phases;
  std::vector<std::size_t> quaternion_offsets;  // ambient offsets of unit quaternions
};

}  // namespace tanco::transcription::detail
