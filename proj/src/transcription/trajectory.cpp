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

#include "tanco/transcription/trajectory.hpp"

#include <cmath>

#include "model.hpp"
#include "tanco/errors.hpp"

namespace tanco::transcription {
namespace {

std::vector<double> slice(std::span<const double> z, std::size_t at, std::size_t count) {
  return {z.begin() + static_cast<std::ptrdiff_t>(at),
          z.begin() + static_cast<std::ptrdiff_t>(at + count)};
}

struct Located {
  std::size_t k;
  double tau;
};

Located locate(const PhaseTrajectory& ph, double t) {
  const double s = (t - ph.t0) / ph.h;
  const std::size_t N = ph.segments.size();
  auto k = static_cast<std::size_t>(std::max(0.0, std::floor(s)));
  if (k >= N) k = N - 1;
  return {k, std::clamp(s - static_cast<double>(k), 0.0, 1.0)};
}

}  // namespace

Trajectory::Trajectory(const Transcription& transcription, std::span<const double> z)
    : model_(transcription.model) {
  if (z.size() != transcription.nlp.n_vars()) {
    throw DimensionError("Trajectory: solution has " + std::to_string(z.size()) +
                         " entries, transcription has " +
                         std::to_string(transcription.nlp.n_vars()));
  }
  const auto& chart = model_->chart;
  for (std::size_t p = 0; p < model_->layouts.size(); ++p) {
    const PhaseLayout& L = model_->layouts[p];
    const detail::PhaseModel& pm = model_->phases[p];
    PhaseTrajectory ph;
    ph.t0 = L.t0;
    ph.h = L.h;
    ph.state_scheme = pm.state_scheme;
    ph.control_scheme = pm.control_scheme;
    for (std::size_t k = 0; k < L.segments; ++k) {
      SegmentSamples seg;
      seg.base = chart.exp(pm.references[k], slice(z, L.knot(k), L.n));
      seg.deviants.push_back(std::vector<double>(L.n, 0.0));
      for (std::size_t j = 1; j <= L.degree; ++j) seg.deviants.push_back(slice(z, L.deviant(k, j), L.n));
      seg.controls.push_back(slice(z, L.knot_control(k), L.nu));
      for (std::size_t j = 1; j <= L.control_degree; ++j) {
        seg.controls.push_back(slice(z, L.control(k, j), L.nu));
      }
      ph.segments.push_back(std::move(seg));
    }
    ph.final_state = chart.exp(pm.references.back(), slice(z, L.knot(L.segments), L.n));
    ph.final_control = slice(z, L.knot_control(L.segments), L.nu);
    phases_.push_back(std::move(ph));
  }
}

const manifolds::ManifoldChart& Trajectory::chart() const { return model_->chart; }

StateControl Trajectory::reconstruct(double t) const {
  const double span = tf() - t0();
  const double slack = 1e-12 * std::max(1.0, span);
  if (!(t >= t0() - slack && t <= tf() + slack)) {
    throw OutOfRangeError("reconstruct: t = " + std::to_string(t) + " outside [" +
                          std::to_string(t0()) + ", " + std::to_string(tf()) + "]");
  }
  std::size_t p = 0;
  while (p + 1 < phases_.size() && t >= phases_[p + 1].t0) ++p;
  return reconstruct_in_phase(p, t);
}

StateControl Trajectory::reconstruct_in_phase(std::size_t p, double t) const {
  if (p >= phases_.size()) throw OutOfRangeError("reconstruct_in_phase: no phase " + std::to_string(p));
  const PhaseTrajectory& ph = phases_[p];
  const double slack = 1e-12 * std::max(1.0, ph.tf() - ph.t0);
  if (!(t >= ph.t0 - slack && t <= ph.tf() + slack)) {
    throw OutOfRangeError("reconstruct_in_phase: t = " + std::to_string(t) + " outside phase " +
                          std::to_string(p));
  }
  const auto [k, tau] = locate(ph, t);
  return evaluate(p, k, tau);
}

StateControl Trajectory::evaluate(std::size_t p, std::size_t k, double tau) const {
  const PhaseTrajectory& ph = phases_.at(p);
  const SegmentSamples& seg = ph.segments.at(k);
  const auto& xs = *ph.state_scheme;
  const auto& us = *ph.control_scheme;
  StateControl r;
  const auto dev = collocation::barycentric_interpolate(xs.support, xs.bary_weights, seg.deviants, tau);
  r.state = model_->chart.exp(seg.base, dev);
  if (!seg.controls.front().empty()) {
    r.control = collocation::barycentric_interpolate(us.support, us.bary_weights, seg.controls, tau);
  }
  return r;
}

void Trajectory::deviant_and_rate(std::size_t p, std::size_t k, double tau,
                                  std::vector<double>& dev, std::vector<double>& rate) const {
  const PhaseTrajectory& ph = phases_.at(p);
  const SegmentSamples& seg = ph.segments.at(k);
  const auto& xs = *ph.state_scheme;
  const auto basis = collocation::barycentric_basis(xs.support, xs.bary_weights, tau);
  const auto dbasis = collocation::barycentric_derivative_basis(xs.support, xs.bary_weights, tau);
  const std::size_t n = seg.deviants.front().size();
  dev.assign(n, 0.0);
  rate.assign(n, 0.0);
  for (std::size_t i = 0; i < basis.size(); ++i) {
    for (std::size_t r = 0; r < n; ++r) {
      dev[r] += basis[i] * seg.deviants[i][r];
      rate[r] += dbasis[i] * seg.deviants[i][r] / ph.h;
    }
  }
}

const PairFn& Trajectory::dynamics(std::size_t p) const { return model_->phases.at(p).dynamics; }

std::vector<double> Trajectory::phase_end_state(std::size_t p) const {
  const PhaseTrajectory& ph = phases_.at(p);
  const SegmentSamples& seg = ph.segments.back();
  return model_->chart.exp(seg.base, seg.deviants.back());
}

double defect_norm(const Trajectory& trajectory, int samples_per_segment) {
  if (samples_per_segment < 1) throw ParameterError("samples_per_segment must be >= 1");
  const auto& phases = trajectory.phases();
  const auto& chart = trajectory.chart();
  double worst = 0.0;
  std::vector<double> dev, rate, f(chart.tangent_dim());
  for (std::size_t p = 0; p < phases.size(); ++p) {
    const PhaseTrajectory& ph = phases[p];
    const auto& dynamics = trajectory.dynamics(p);
    for (std::size_t k = 0; k < ph.segments.size(); ++k) {
      for (int i = 0; i <= samples_per_segment; ++i) {
        const double tau = static_cast<double>(i) / samples_per_segment;
        const auto sc = trajectory.evaluate(p, k, tau);
        trajectory.deviant_and_rate(p, k, tau, dev, rate);
        std::fill(f.begin(), f.end(), 0.0);
        dynamics(std::span<const double>(sc.state), std::span<const double>(sc.control),
                 std::span<double>(f));
        double s = 0.0;
        for (std::size_t r = 0; r < f.size(); ++r) s += (rate[r] - f[r]) * (rate[r] - f[r]);
        worst = std::max(worst, std::sqrt(s));
      }
    }
  }
  return worst;
}

}  // namespace tanco::transcription
