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

// Benchmark problems with analytic optima.

#include <array>
#include <optional>
#include <string>
#include <vector>

#include "tanco/transcription/problem.hpp"

namespace tanco::systems {

using transcription::ProblemSpec;

// Euclidean(2) state (y, v), control u; rest at 0 to rest at 1 in T = 1 with
// cost integral of u^2. Optimum u(t) = 6 - 12 t, cost 12.
ProblemSpec make_double_integrator(int segments = 8, int degree = 4);
inline constexpr double kDoubleIntegratorCost = 12.0;

// State (omega, q) on Euclidean(3) x Quaternion, torque control with unit
// inertia, rest-to-rest from identity to exp(axis * angle) in T = 1.
// InjectivityRadiusError when |angle| >= pi.
ProblemSpec make_attitude_reorientation(const std::array<double, 3>& axis, double angle,
                                        int segments = 4, int degree = 4);
double attitude_oracle_cost(double angle);

struct SrbParams {
  double mass = 1.5;
  std::array<double, 3> inertia{0.02, 0.03, 0.04};  // body principal moments
  double gravity = 9.81;
  double duration = 1.0;
  double lift = 0.3;  // goal height change
  double yaw = 0.5;   // goal rotation about the vertical axis
  int segments = 4;
  int degree = 4;
};

// State (l, h, p, q): linear momentum (world), angular momentum (body), and a
// pose, on Euclidean(6) x Pose. Control is the body wrench (force in world
// axes, torque in body axes).
//   l' = F + m g,  h' = tau,  position deviant rate = R(q)^T l / m,
//   orientation deviant rate = I^-1 h.
// Rest-to-rest from the origin pose to the lifted, yawed goal pose.
ProblemSpec make_srb_pose_problem(const SrbParams& params = {});
// Hover cost m^2 g^2 T plus the decoupled vertical and yaw minimum-effort
// terms 12 m^2 lift^2 / T^3 and 12 I_z^2 yaw^2 / T^3.
double srb_oracle_cost(const SrbParams& params);
std::vector<double> srb_hover_control(const SrbParams& params);

struct BounceSchedule {
  std::vector<double> durations;     // per phase
  std::vector<double> apex_heights;  // per phase, at the phase's apex
  std::vector<double> apex_times;    // absolute
};

// Vertical ballistic flight of a point mass dropped from rest at h0, with
// n_bounces impacts (y, v) -> (y, -e v). Phase durations follow the analytic
// schedule. No control and no cost.
ProblemSpec make_bouncing_mass(double restitution, int n_bounces, double h0 = 1.0,
                               double gravity = 9.81, int segments = 2, int degree = 3);
BounceSchedule bounce_schedule(double restitution, int n_bounces, double h0 = 1.0,
                               double gravity = 9.81);

struct Benchmark {
  std::string name;
  ProblemSpec problem;
  std::optional<double> oracle_cost;
};

std::vector<std::string> benchmark_names();
// ParameterError naming the registered benchmarks for unknown names.
Benchmark make_benchmark(const std::string& name);

// Overrides the mesh of every phase; unset values keep the problem's own.
void apply_mesh(ProblemSpec& problem, std::optional<int> segments, std::optional<int> degree,
                std::optional<int> control_degree);

}  // namespace tanco::systems
