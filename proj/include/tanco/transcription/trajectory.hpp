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

// Piecewise-polynomial trajectories recovered from a transcription solution.

#include <cstddef>
#include <memory>
#include <span>
#include <vector>

#include "tanco/collocation/collocation.hpp"
#include "tanco/manifolds/chart.hpp"
#include "tanco/transcription/transcribe.hpp"

namespace tanco::transcription {

struct SegmentSamples {
  std::vector<double> base;                   // knot state, ambient
  std::vector<std::vector<double>> deviants;  // support points 0..d; [0] is zero
  std::vector<std::vector<double>> controls;  // control support 0..du
};

struct PhaseTrajectory {
  double t0 = 0.0;
  double h = 0.0;
  std::shared_ptr<const collocation::CollocationScheme> state_scheme;
  std::shared_ptr<const collocation::CollocationScheme> control_scheme;
  std::vector<SegmentSamples> segments;
  std::vector<double> final_state;  // knot N
  std::vector<double> final_control;

  double tf() const { return t0 + h * static_cast<double>(segments.size()); }
};

struct StateControl {
  std::vector<double> state;
  std::vector<double> control;
};

class Trajectory {
 public:
  Trajectory(const Transcription& transcription, std::span<const double> z);

  const std::vector<PhaseTrajectory>& phases() const { return phases_; }
  // Chart the states live in: the problem chart, or its ambient Euclidean
  // version for the baseline.
  const manifolds::ManifoldChart& chart() const;
  double t0() const { return phases_.front().t0; }
  double tf() const { return phases_.back().tf(); }

  // Right-continuous at phase boundaries. OutOfRangeError outside [t0, tf].
  StateControl reconstruct(double t) const;
  // Evaluates phase `p` on its own closed interval.
  StateControl reconstruct_in_phase(std::size_t p, double t) const;
  // Segment k of phase p at local time tau in [0, 1].
  StateControl evaluate(std::size_t p, std::size_t k, double tau) const;
  // Deviant interpolant and its time derivative at local time tau.
  void deviant_and_rate(std::size_t p, std::size_t k, double tau, std::vector<double>& dev,
                        std::vector<double>& rate) const;
  // Tangent-rate dynamics of phase p in the trajectory's chart.
  const PairFn& dynamics(std::size_t p) const;

  std::vector<double> phase_end_state(std::size_t p) const;

 private:
  std::vector<PhaseTrajectory> phases_;
  std::shared_ptr<const detail::Model> model_;
};

// Max over samples_per_segment + 1 evenly spaced times per segment of
// |d/dt dev(t) - f(x(t), u(t))|_2, with the derivative of the barycentric
// interpolant taken analytically.
double defect_norm(const Trajectory& trajectory, int samples_per_segment);

}  // namespace tanco::transcription
