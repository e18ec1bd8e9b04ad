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

#include "tanco/systems/systems.hpp"

#include <cmath>
#include <functional>
#include <map>

#include "tanco/errors.hpp"
#include "tanco/manifolds/chart.hpp"

namespace tanco::systems {
namespace {

using manifolds::ManifoldChart;
using manifolds::Quaternion;
using manifolds::Vec3;
using transcription::PhaseSpec;

template <class Span>
using ScalarOf = std::remove_cv_t<typename Span::element_type>;

template <class T>
Quaternion<T> quat_at(std::span<const T> x, std::size_t o) {
  return {x[o], x[o + 1], x[o + 2], x[o + 3]};
}

// 2 vec(goal^* (x) q): zero iff q = +-goal, valid off the unit sphere.
template <class T>
void orientation_error(const Quaternion<double>& goal, const Quaternion<T>& q, std::span<T> out) {
  const Quaternion<T> g{T(goal.w), T(-goal.x), T(-goal.y), T(-goal.z)};
  const auto e = manifolds::hamilton(g, q);
  out[0] = 2.0 * e.x;
  out[1] = 2.0 * e.y;
  out[2] = 2.0 * e.z;
}

PhaseSpec phase(double duration, int segments, int degree, std::size_t nu) {
  PhaseSpec p;
  p.duration = duration;
  p.segments = segments;
  p.state_degree = degree;
  p.control_dim = nu;
  return p;
}

}  // namespace

ProblemSpec make_double_integrator(int segments, int degree) {
  ProblemSpec s;
  s.name = "double-integrator";
  s.chart = ManifoldChart::euclidean(2);
  PhaseSpec p = phase(1.0, segments, degree, 1);
  p.dynamics = [](auto x, auto u, auto out) {
    out[0] = x[1];
    out[1] = u[0];
  };
  p.running_cost = [](auto, auto u, auto out) { out[0] = u[0] * u[0]; };
  s.phases.push_back(std::move(p));
  s.initial_state = {0.0, 0.0};
  s.goal_hint = std::vector<double>{1.0, 0.0};
  s.boundary_dim = 2;
  s.boundary = [](auto, auto xf, auto out) {
    out[0] = xf[0] - 1.0;
    out[1] = xf[1];
  };
  s.state_names = {"y", "v"};
  s.control_names = {"u"};
  return s;
}

ProblemSpec make_attitude_reorientation(const std::array<double, 3>& axis, double angle,
                                        int segments, int degree) {
  if (!(std::abs(angle) < M_PI)) {
    throw InjectivityRadiusError("attitude: |angle| must be below pi, got " + std::to_string(angle));
  }
  const double an = std::sqrt(axis[0] * axis[0] + axis[1] * axis[1] + axis[2] * axis[2]);
  if (!(an > 0.0) && angle != 0.0) throw ParameterError("attitude: zero rotation axis");
  Vec3<double> rv{0.0, 0.0, 0.0};
  if (an > 0.0) rv = {axis[0] / an * angle, axis[1] / an * angle, axis[2] / an * angle};
  const auto goal = manifolds::quat_exp(rv);

  ProblemSpec s;
  s.name = "attitude";
  s.chart = manifolds::product_chart({ManifoldChart::euclidean(3), ManifoldChart::quaternion()});
  PhaseSpec p = phase(1.0, segments, degree, 3);
  p.dynamics = [](auto x, auto u, auto out) {
    for (int i = 0; i < 3; ++i) {
      out[i] = u[i];
      out[3 + i] = x[i];
    }
  };
  p.running_cost = [](auto, auto u, auto out) { out[0] = u[0] * u[0] + u[1] * u[1] + u[2] * u[2]; };
  s.phases.push_back(std::move(p));
  s.initial_state = {0.0, 0.0, 0.0, 1.0, 0.0, 0.0, 0.0};
  s.goal_hint = std::vector<double>{0.0, 0.0, 0.0, goal.w, goal.x, goal.y, goal.z};
  s.boundary_dim = 6;
  s.boundary = [goal](auto, auto xf, auto out) {
    using T = ScalarOf<decltype(xf)>;
    for (int i = 0; i < 3; ++i) out[i] = xf[i];
    orientation_error<T>(goal, quat_at(xf, 3), out.subspan(3, 3));
  };
  s.state_names = {"wx", "wy", "wz", "qw", "qx", "qy", "qz"};
  s.control_names = {"tau_x", "tau_y", "tau_z"};
  return s;
}

double attitude_oracle_cost(double angle) { return 12.0 * angle * angle; }

ProblemSpec make_srb_pose_problem(const SrbParams& prm) {
  if (!(prm.mass > 0.0) || !(prm.duration > 0.0)) throw ParameterError("srb: mass and duration must be positive");
  for (double i : prm.inertia) {
    if (!(i > 0.0)) throw ParameterError("srb: inertia must be positive");
  }
  const auto goal_q = manifolds::quat_exp(Vec3<double>{0.0, 0.0, prm.yaw});

  ProblemSpec s;
  s.name = "srb-pose";
  s.chart = manifolds::product_chart({ManifoldChart::euclidean(6), ManifoldChart::pose()});
  PhaseSpec p = phase(prm.duration, prm.segments, prm.degree, 6);
  const double m = prm.mass, g = prm.gravity;
  const auto I = prm.inertia;
  p.dynamics = [m, g, I](auto x, auto u, auto out) {
    using T = ScalarOf<decltype(x)>;
    const Vec3<T> l{x[0], x[1], x[2]};
    const auto q = quat_at(x, 9);
    const auto v = manifolds::rotate_inverse(q, l);
    for (int i = 0; i < 3; ++i) {
      out[i] = u[i];
      out[3 + i] = u[3 + i];
      out[6 + i] = v[i] / m;
      out[9 + i] = x[3 + i] / I[i];
    }
    out[2] -= m * g;
  };
  p.running_cost = [](auto, auto u, auto out) {
    auto acc = u[0] * u[0];
    for (int i = 1; i < 6; ++i) acc += u[i] * u[i];
    out[0] = acc;
  };
  s.phases.push_back(std::move(p));
  s.initial_state = {0, 0, 0, 0, 0, 0, 0, 0, 0, 1, 0, 0, 0};
  s.goal_hint = std::vector<double>{0, 0, 0, 0, 0, 0, 0, 0, prm.lift, goal_q.w, goal_q.x, goal_q.y, goal_q.z};
  s.boundary_dim = 12;
  const double lift = prm.lift;
  s.boundary = [goal_q, lift](auto, auto xf, auto out) {
    using T = ScalarOf<decltype(xf)>;
    for (int i = 0; i < 6; ++i) out[i] = xf[i];
    out[6] = xf[6];
    out[7] = xf[7];
    out[8] = xf[8] - lift;
    orientation_error<T>(goal_q, quat_at(xf, 9), out.subspan(9, 3));
  };
  const double hover = m * g;
  s.initial_guess = [goal_hint = *s.goal_hint, chart = s.chart, init = s.initial_state,
                     T = prm.duration, hover](std::size_t, double t) {
    std::vector<double> xi = chart.log(init, goal_hint);
    for (double& v : xi) v *= std::clamp(t / T, 0.0, 1.0);
    return transcription::GuessSample{chart.exp(init, xi), {0.0, 0.0, hover, 0.0, 0.0, 0.0}};
  };
  s.state_names = {"lx", "ly", "lz", "hx", "hy", "hz", "px", "py", "pz", "qw", "qx", "qy", "qz"};
  s.control_names = {"fx", "fy", "fz", "tx", "ty", "tz"};
  return s;
}

double srb_oracle_cost(const SrbParams& p) {
  const double T = p.duration, m = p.mass, Iz = p.inertia[2];
  return m * m * p.gravity * p.gravity * T + 12.0 * m * m * p.lift * p.lift / (T * T * T) +
         12.0 * Iz * Iz * p.yaw * p.yaw / (T * T * T);
}

std::vector<double> srb_hover_control(const SrbParams& p) {
  return {0.0, 0.0, p.mass * p.gravity, 0.0, 0.0, 0.0};
}

BounceSchedule bounce_schedule(double e, int n_bounces, double h0, double g) {
  if (!(e > 0.0 && e <= 1.0)) throw ParameterError("bouncing mass: restitution must be in (0, 1]");
  if (n_bounces < 0) throw ParameterError("bouncing mass: n_bounces must be >= 0");
  if (!(h0 > 0.0) || !(g > 0.0)) throw ParameterError("bouncing mass: h0 and g must be positive");
  BounceSchedule s;
  const double v_impact = std::sqrt(2.0 * g * h0);
  s.durations.push_back(std::sqrt(2.0 * h0 / g));
  s.apex_heights.push_back(h0);
  s.apex_times.push_back(0.0);
  double t = s.durations.front();
  double speed = v_impact;
  for (int i = 1; i <= n_bounces; ++i) {
    speed *= e;
    const double flight = 2.0 * speed / g;
    s.durations.push_back(flight);
    s.apex_heights.push_back(speed * speed / (2.0 * g));
    s.apex_times.push_back(t + 0.5 * flight);
    t += flight;
  }
  return s;
}

ProblemSpec make_bouncing_mass(double e, int n_bounces, double h0, double g, int segments,
                               int degree) {
  const auto sched = bounce_schedule(e, n_bounces, h0, g);
  ProblemSpec s;
  s.name = "bouncing-mass";
  s.chart = ManifoldChart::euclidean(2);
  for (double T : sched.durations) {
    PhaseSpec p = phase(T, segments, degree, 0);
    p.dynamics = [g](auto x, auto, auto out) {
      out[0] = x[1];
      out[1] = -g + 0.0 * x[0];
    };
    s.phases.push_back(std::move(p));
  }
  for (int i = 0; i < n_bounces; ++i) {
    s.jump_maps.push_back(transcription::StateFn([e](auto x, auto out) {
      out[0] = x[0];
      out[1] = -e * x[1];
    }));
  }
  s.initial_state = {h0, 0.0};
  s.state_names = {"y", "v"};
  return s;
}

std::vector<std::string> benchmark_names() {
  return {"double-integrator", "attitude", "srb-pose", "bouncing-mass"};
}

Benchmark make_benchmark(const std::string& name) {
  if (name == "double-integrator") return {name, make_double_integrator(), kDoubleIntegratorCost};
  if (name == "attitude") {
    return {name, make_attitude_reorientation({0.0, 0.0, 1.0}, M_PI / 2), attitude_oracle_cost(M_PI / 2)};
  }
  if (name == "srb-pose") {
    const SrbParams p;
    return {name, make_srb_pose_problem(p), srb_oracle_cost(p)};
  }
  if (name == "bouncing-mass") return {name, make_bouncing_mass(0.5, 2), 0.0};
  std::string known;
  for (const auto& n : benchmark_names()) known += (known.empty() ? "" : ", ") + n;
  throw ParameterError("unknown problem '" + name + "'; registered problems: " + known);
}

void apply_mesh(ProblemSpec& problem, std::optional<int> segments, std::optional<int> degree,
                std::optional<int> control_degree) {
  for (auto& p : problem.phases) {
    if (segments) p.segments = *segments;
    if (degree) p.state_degree = *degree;
    if (control_degree) p.control_degree = *control_degree;
  }
}

}  // namespace tanco::systems
