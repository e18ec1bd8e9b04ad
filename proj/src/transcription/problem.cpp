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

#include "tanco/transcription/problem.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "tanco/errors.hpp"

namespace tanco::transcription {
namespace {

constexpr double kSentinel = -7.77e300;
constexpr std::size_t kPad = 16;

// Calls `write` on a padded buffer and checks that exactly `rows` entries
// were written.
template <class Write>
void probe_rows(std::size_t rows, const std::string& what, Write write) {
  std::vector<double> buf(rows + kPad, kSentinel);
  write(std::span<double>(buf.data(), rows));
  const auto written = static_cast<std::size_t>(
      std::count_if(buf.begin(), buf.begin() + static_cast<std::ptrdiff_t>(rows),
                    [](double v) { return v != kSentinel; }));
  const bool overflow =
      std::any_of(buf.begin() + static_cast<std::ptrdiff_t>(rows), buf.end(),
                  [](double v) { return v != kSentinel; });
  if (overflow) {
    throw ConstructionError(what + " writes past its " + std::to_string(rows) + " expected rows");
  }
  if (written != rows) {
    throw ConstructionError(what + " wrote " + std::to_string(written) + " of " +
                            std::to_string(rows) + " expected rows");
  }
}

std::vector<double> padded(std::span<const double> v) {
  std::vector<double> out(v.begin(), v.end());
  out.resize(v.size() + kPad, 0.0);
  return out;
}

}  // namespace

int PhaseSpec::effective_control_degree() const {
  return control_degree > 0 ? control_degree : std::max(1, state_degree - 1);
}

double ProblemSpec::total_duration() const {
  return std::accumulate(phases.begin(), phases.end(), 0.0,
                         [](double s, const PhaseSpec& p) { return s + p.duration; });
}

void ProblemSpec::validate() const {
  const std::size_t na = chart.ambient_dim();
  const std::size_t nt = chart.tangent_dim();
  if (phases.empty()) throw ConstructionError("problem has no phases");
  if (jump_maps.size() + 1 != phases.size()) {
    throw ConstructionError("problem has " + std::to_string(phases.size()) + " phases but " +
                            std::to_string(jump_maps.size()) + " jump maps");
  }
  if (initial_state.size() != na) {
    throw ConstructionError("initial state has " + std::to_string(initial_state.size()) +
                            " entries, chart ambient dimension is " + std::to_string(na));
  }
  chart.check_membership(initial_state, "initial state");
  if (goal_hint && goal_hint->size() != na) {
    throw ConstructionError("goal hint has wrong dimension");
  }

  const auto x = padded(initial_state);
  const std::span<const double> xs(x.data(), na);
  for (std::size_t p = 0; p < phases.size(); ++p) {
    const PhaseSpec& ph = phases[p];
    const std::string tag = "phase " + std::to_string(p) + ": ";
    if (!(ph.duration > 0.0) || !std::isfinite(ph.duration)) {
      throw ConstructionError(tag + "duration must be positive");
    }
    if (ph.segments < 1) throw ConstructionError(tag + "segments must be >= 1");
    if (ph.state_degree < 1) throw ConstructionError(tag + "state degree must be >= 1");
    if (ph.control_degree < 0) throw ConstructionError(tag + "control degree must be >= 0");
    if (!ph.dynamics) throw ConstructionError(tag + "missing dynamics");
    if (!ph.path_lower.empty() && ph.path_lower.size() != ph.path_dim) {
      throw ConstructionError(tag + "path_lower size differs from path_dim");
    }
    if (!ph.path_upper.empty() && ph.path_upper.size() != ph.path_dim) {
      throw ConstructionError(tag + "path_upper size differs from path_dim");
    }
    if (ph.path_dim > 0 && !ph.path) throw ConstructionError(tag + "missing path callback");

    const std::vector<double> u0(ph.control_dim + kPad, 0.0);
    const std::span<const double> us(u0.data(), ph.control_dim);
    probe_rows(nt, tag + "dynamics", [&](std::span<double> out) { ph.dynamics(xs, us, out); });
    if (ph.running_cost) {
      probe_rows(1, tag + "running cost", [&](std::span<double> out) { ph.running_cost(xs, us, out); });
    }
    if (ph.path_dim > 0) {
      probe_rows(ph.path_dim, tag + "path constraint",
                 [&](std::span<double> out) { ph.path(xs, us, out); });
    }
    if (p + 1 < phases.size()) {
      probe_rows(na, tag + "jump map", [&](std::span<double> out) { jump_maps[p](xs, out); });
    }
  }
  if (terminal_cost) {
    probe_rows(1, "terminal cost", [&](std::span<double> out) { terminal_cost(xs, out); });
  }
  if (boundary_dim > 0) {
    if (!boundary) throw ConstructionError("boundary_dim > 0 without a boundary callback");
    probe_rows(boundary_dim, "boundary constraint",
               [&](std::span<double> out) { boundary(xs, xs, out); });
  }
}

std::vector<std::string> state_column_names(const ProblemSpec& problem) {
  if (!problem.state_names.empty()) return problem.state_names;
  std::vector<std::string> names;
  for (std::size_t i = 0; i < problem.chart.ambient_dim(); ++i) names.push_back("x" + std::to_string(i));
  return names;
}

std::vector<std::string> control_column_names(const ProblemSpec& problem) {
  if (!problem.control_names.empty()) return problem.control_names;
  std::size_t nu = 0;
  for (const auto& p : problem.phases) nu = std::max(nu, p.control_dim);
  std::vector<std::string> names;
  for (std::size_t i = 0; i < nu; ++i) names.push_back("u" + std::to_string(i));
  return names;
}

}  // namespace tanco::transcription
