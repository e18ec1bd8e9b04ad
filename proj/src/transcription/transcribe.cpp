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

#include "tanco/transcription/transcribe.hpp"

#include <cmath>
#include <iostream>

#include "model.hpp"
#include "tanco/errors.hpp"

namespace tanco::transcription {
namespace {

using collocation::CollocationScheme;
using manifolds::ManifoldChart;
using nlp::BlockFunction;
using nlp::BlockKind;

template <class Span>
using ScalarOf = std::remove_cv_t<typename Span::element_type>;

template <class T>
std::vector<T> lift(const std::vector<double>& v) {
  std::vector<T> out(v.size());
  for (std::size_t i = 0; i < v.size(); ++i) out[i] = T(v[i]);
  return out;
}

// x = exp(ref, chi) in the working chart.
template <class T>
void knot_state(const detail::Model& m, const std::vector<double>& ref, std::span<const T> chi,
                std::span<T> out) {
  const auto r = lift<T>(ref);
  m.chart.exp<T>(r, chi, out);
}

// Node states and interpolated controls of one segment. `z` is the segment's
// local slice [chi_k, u_k, dev_1..d, u_1..du].
template <class T>
struct SegmentNodes {
  std::vector<std::vector<T>> x;
  std::vector<std::vector<T>> u;
};

template <class T>
SegmentNodes<T> segment_nodes(const detail::Model& m, std::size_t p, std::size_t k,
                              std::span<const T> z) {
  const PhaseLayout& L = m.layouts[p];
  const detail::PhaseModel& pm = m.phases[p];
  const std::size_t n = L.n, nu = L.nu, d = L.degree, du = L.control_degree;
  const std::size_t na = m.chart.ambient_dim();
  std::vector<T> xk(na);
  knot_state<T>(m, pm.references[k], z.subspan(0, n), xk);
  SegmentNodes<T> s;
  s.x.assign(d, std::vector<T>(na));
  s.u.assign(d, std::vector<T>(nu, T(0.0)));
  for (std::size_t j = 0; j < d; ++j) {
    m.chart.exp<T>(xk, z.subspan(n + nu + j * n, n), s.x[j]);
    for (std::size_t i = 0; i <= du; ++i) {
      const double w = pm.control_at_nodes(j, i);
      if (w == 0.0) continue;
      const std::size_t off = i == 0 ? n : n + nu + d * n + (i - 1) * nu;
      for (std::size_t c = 0; c < nu; ++c) s.u[j][c] += w * z[off + c];
    }
  }
  return s;
}

std::vector<std::size_t> quaternion_offsets(const ManifoldChart& chart) {
  std::vector<std::size_t> out;
  std::size_t ia = 0;
  for (const auto& b : chart.blocks()) {
    if (b.kind == manifolds::BlockKind::quaternion) out.push_back(ia);
    if (b.kind == manifolds::BlockKind::pose) out.push_back(ia + 3);
    ia += b.ambient_dim();
  }
  return out;
}

PairFn ambient_dynamics(const ManifoldChart& chart, const PairFn& f) {
  return PairFn([chart, f](auto x, auto u, auto out) {
    using T = ScalarOf<decltype(x)>;
    std::vector<T> rate(chart.tangent_dim(), T(0.0));
    f(x, u, std::span<T>(rate));
    chart.push_forward<T>(x, rate, out);
  });
}

// Linear interpolation from each phase's start toward the goal hint, with the
// phase's share of the remaining horizon; controls zero.
GuessFn default_guess(const ProblemSpec& problem) {
  const auto& chart = problem.chart;
  std::vector<double> t0s, starts_flat;
  std::vector<std::vector<double>> starts, deltas;
  std::vector<double> s = problem.initial_state;
  double t0 = 0.0;
  const double total = problem.total_duration();
  for (std::size_t p = 0; p < problem.phases.size(); ++p) {
    const double T = problem.phases[p].duration;
    std::vector<double> delta(chart.tangent_dim(), 0.0);
    if (problem.goal_hint) {
      delta = chart.log(s, *problem.goal_hint);
      const double share = T / (total - t0);
      for (double& v : delta) v *= share;
    }
    t0s.push_back(t0);
    starts.push_back(s);
    deltas.push_back(delta);
    std::vector<double> end = chart.exp(s, delta);
    if (p + 1 < problem.phases.size()) {
      std::vector<double> next(chart.ambient_dim());
      problem.jump_maps[p](std::span<const double>(end), std::span<double>(next));
      s = next;
    }
    t0 += T;
  }
  std::vector<double> durations;
  for (const auto& ph : problem.phases) durations.push_back(ph.duration);
  return [chart, t0s, starts, deltas, durations](std::size_t p, double t) {
    const double frac = std::clamp((t - t0s[p]) / durations[p], 0.0, 1.0);
    std::vector<double> xi = deltas[p];
    for (double& v : xi) v *= frac;
    return GuessSample{chart.exp(starts[p], xi), {}};
  };
}

std::vector<double> guess_control(const GuessSample& g, std::size_t nu, std::size_t phase) {
  if (g.control.empty()) return std::vector<double>(nu, 0.0);
  if (g.control.size() != nu) {
    throw ConstructionError("phase " + std::to_string(phase) + ": initial guess control has " +
                            std::to_string(g.control.size()) + " entries, expected " +
                            std::to_string(nu));
  }
  return g.control;
}

std::size_t working_dim(const ProblemSpec& problem, Variant variant) {
  return variant == Variant::tangent ? problem.chart.tangent_dim() : problem.chart.ambient_dim();
}

}  // namespace

const char* to_string(Variant v) {
  return v == Variant::tangent ? "tangent" : "normalization-baseline";
}

Variant parse_variant(const std::string& name) {
  if (name == "tangent") return Variant::tangent;
  if (name == "normalization-baseline") return Variant::normalization_baseline;
  throw ParameterError("unknown transcription variant '" + name +
                       "' (expected tangent or normalization-baseline)");
}

std::size_t count_decision_variables(const ProblemSpec& problem, Variant variant) {
  const std::size_t n = working_dim(problem, variant);
  std::size_t total = 0;
  for (const auto& ph : problem.phases) {
    const auto N = static_cast<std::size_t>(ph.segments);
    const auto d = static_cast<std::size_t>(ph.state_degree);
    const auto du = static_cast<std::size_t>(ph.effective_control_degree());
    total += N * (n * d + ph.control_dim * du) + (N + 1) * (n + ph.control_dim);
    if (variant == Variant::normalization_baseline) {
      total += N * d * quaternion_offsets(problem.chart).size();
    }
  }
  return total;
}

std::size_t count_equality_constraints(const ProblemSpec& problem, Variant variant) {
  const std::size_t n = working_dim(problem, variant);
  std::size_t total = 0;
  for (const auto& ph : problem.phases) {
    const auto N = static_cast<std::size_t>(ph.segments);
    const auto d = static_cast<std::size_t>(ph.state_degree);
    total += n + N * (n * d + n + ph.control_dim);
  }
  return total;
}

std::size_t normalization_surplus(const ProblemSpec& problem) {
  const std::size_t q = problem.chart.quaternion_ambient_dim();
  std::size_t total = 0;
  for (const auto& ph : problem.phases) {
    total += static_cast<std::size_t>(ph.segments) * static_cast<std::size_t>(ph.state_degree) * q;
  }
  return total;
}

Transcription transcribe(const ProblemSpec& problem, Variant variant) {
  static collocation::SchemeCache cache;
  return transcribe(problem, variant, cache);
}

Transcription transcribe_normalization_baseline(const ProblemSpec& problem) {
  return transcribe(problem, Variant::normalization_baseline);
}

Transcription transcribe(const ProblemSpec& problem, Variant variant,
                         collocation::SchemeCache& cache) {
  problem.validate();
  const bool baseline = variant == Variant::normalization_baseline;
  if (baseline && problem.chart.is_euclidean()) {
    std::cerr << "warning: normalization baseline on a chart without quaternion blocks adds no "
                 "constraints\n";
  }

  auto model = std::make_shared<detail::Model>();
  model->problem_chart = problem.chart;
  model->chart = baseline ? problem.chart.ambient_euclidean() : problem.chart;
  model->variant = variant;
  if (baseline) model->quaternion_offsets = quaternion_offsets(problem.chart);
  const ManifoldChart& chart = model->chart;
  const std::size_t na = chart.ambient_dim();
  const std::size_t n = chart.tangent_dim();

  const GuessFn guess = problem.initial_guess ? problem.initial_guess : default_guess(problem);

  // Layouts, schemes and references.
  std::size_t offset = 0;
  double t0 = 0.0;
  for (std::size_t p = 0; p < problem.phases.size(); ++p) {
    const PhaseSpec& ph = problem.phases[p];
    PhaseLayout L;
    L.offset = offset;
    L.segments = static_cast<std::size_t>(ph.segments);
    L.degree = static_cast<std::size_t>(ph.state_degree);
    L.control_degree = static_cast<std::size_t>(ph.effective_control_degree());
    L.n = n;
    L.nu = ph.control_dim;
    L.algebraic = model->quaternion_offsets.size();
    L.t0 = t0;
    L.h = ph.duration / static_cast<double>(ph.segments);
    offset += L.size();
    t0 += ph.duration;

    detail::PhaseModel pm;
    pm.dynamics = baseline ? ambient_dynamics(problem.chart, ph.dynamics) : ph.dynamics;
    pm.running_cost = ph.running_cost;
    pm.path = ph.path;
    pm.path_lower = ph.path_lower.empty() ? std::vector<double>(ph.path_dim, -nlp::kInf) : ph.path_lower;
    pm.path_upper = ph.path_upper.empty() ? std::vector<double>(ph.path_dim, 0.0) : ph.path_upper;
    pm.state_scheme = cache.get(ph.state_degree);
    pm.control_scheme = cache.get(static_cast<int>(L.control_degree));
    pm.control_at_nodes = collocation::interpolation_matrix(*pm.control_scheme, pm.state_scheme->nodes);
    for (std::size_t k = 0; k <= L.segments; ++k) {
      const auto g = guess(p, L.t0 + L.h * static_cast<double>(k));
      if (g.state.size() != na) {
        throw ConstructionError("phase " + std::to_string(p) + ": initial guess state has " +
                                std::to_string(g.state.size()) + " entries, expected " +
                                std::to_string(na));
      }
      pm.references.push_back(g.state);
    }
    model->layouts.push_back(L);
    model->phases.push_back(std::move(pm));
  }

  Transcription out;
  out.variant = variant;
  out.phases = model->layouts;
  out.nlp = nlp::NlpProblem(offset);
  out.initial_guess.assign(offset, 0.0);
  nlp::NlpProblem& prob = out.nlp;
  std::shared_ptr<const detail::Model> m = model;

  // Initial guess: knot tangents zero (knots sit at their references),
  // deviants from the guess, controls from the guess.
  for (std::size_t p = 0; p < problem.phases.size(); ++p) {
    const PhaseLayout& L = model->layouts[p];
    const detail::PhaseModel& pm = model->phases[p];
    auto put = [&](std::size_t at, const std::vector<double>& v) {
      std::copy(v.begin(), v.end(), out.initial_guess.begin() + static_cast<std::ptrdiff_t>(at));
    };
    for (std::size_t k = 0; k <= L.segments; ++k) {
      const double tk = L.t0 + L.h * static_cast<double>(k);
      put(L.knot_control(k), guess_control(guess(p, tk), L.nu, p));
      if (k == L.segments) break;
      for (std::size_t j = 1; j <= L.degree; ++j) {
        const double tj = tk + L.h * pm.state_scheme->nodes[j - 1];
        put(L.deviant(k, j), chart.log(pm.references[k], guess(p, tj).state));
      }
      for (std::size_t j = 1; j <= L.control_degree; ++j) {
        const double tj = tk + L.h * pm.control_scheme->nodes[j - 1];
        put(L.control(k, j), guess_control(guess(p, tj), L.nu, p));
      }
    }
  }

  auto range = [](std::size_t from, std::size_t count) {
    std::vector<std::size_t> v(count);
    for (std::size_t i = 0; i < count; ++i) v[i] = from + i;
    return v;
  };
  auto concat = [](std::vector<std::size_t> a, const std::vector<std::size_t>& b) {
    a.insert(a.end(), b.begin(), b.end());
    return a;
  };
  const std::size_t P = problem.phases.size();

  for (std::size_t p = 0; p < P; ++p) {
    const PhaseLayout& L = model->layouts[p];
    const detail::PhaseModel& pm = model->phases[p];
    const std::string tag = "/" + std::to_string(p) + "/";
    const std::size_t d = L.degree;
    const std::size_t nu = L.nu;

    // Entry pin: initial state or jump-map image of the previous phase end.
    if (p == 0) {
      const std::vector<double> x_init = problem.initial_state;
      prob.add_block("initial", BlockKind::equality, range(L.knot(0), n), n,
                     BlockFunction([m, x_init](auto z, auto out) {
                       using T = ScalarOf<decltype(z)>;
                       std::vector<T> x0(m->chart.ambient_dim());
                       knot_state<T>(*m, m->phases[0].references[0], z, x0);
                       const auto target = lift<T>(x_init);
                       m->chart.log<T>(x0, target, out);
                     }));
    } else {
      const PhaseLayout& Lp = model->layouts[p - 1];
      const StateFn jump = problem.jump_maps[p - 1];
      prob.add_block("jump/" + std::to_string(p), BlockKind::equality,
                     concat(range(Lp.knot(Lp.segments), n), range(L.knot(0), n)), n,
                     BlockFunction([m, p, jump](auto z, auto out) {
                       using T = ScalarOf<decltype(z)>;
                       const std::size_t nn = m->chart.tangent_dim();
                       const std::size_t a = m->chart.ambient_dim();
                       std::vector<T> prev(a), next(a), image(a, T(0.0));
                       const auto& prev_refs = m->phases[p - 1].references;
                       knot_state<T>(*m, prev_refs.back(), z.subspan(0, nn), prev);
                       knot_state<T>(*m, m->phases[p].references[0], z.subspan(nn, nn), next);
                       jump(std::span<const T>(prev), std::span<T>(image));
                       m->chart.log<T>(next, image, out);
                     }));
    }

    for (std::size_t k = 0; k < L.segments; ++k) {
      const auto seg = range(L.knot(k), L.stride());
      const std::string id = tag + std::to_string(k);

      prob.add_block("collocation" + id, BlockKind::equality, seg, d * n,
                     BlockFunction([m, p, k](auto z, auto out) {
                       using T = ScalarOf<decltype(z)>;
                       const PhaseLayout& L = m->layouts[p];
                       const detail::PhaseModel& pm = m->phases[p];
                       const auto& D = pm.state_scheme->diff_matrix;
                       const std::size_t nn = L.n, nu = L.nu, d = L.degree;
                       const auto s = segment_nodes<T>(*m, p, k, z);
                       std::vector<T> rate(nn);
                       for (std::size_t j = 0; j < d; ++j) {
                         std::fill(rate.begin(), rate.end(), T(0.0));
                         pm.dynamics(std::span<const T>(s.x[j]), std::span<const T>(s.u[j]),
                                     std::span<T>(rate));
                         for (std::size_t q = 0; q < L.algebraic; ++q) {
                           const T eta = z[L.algebraic_var(0, j + 1, q) - L.knot(0)];
                           const std::size_t o = m->quaternion_offsets[q];
                           for (std::size_t c = 0; c < 4; ++c) rate[o + c] += eta * s.x[j][o + c];
                         }
                         for (std::size_t r = 0; r < nn; ++r) {
                           T acc = L.h * rate[r];
                           for (std::size_t i = 1; i <= d; ++i) {
                             acc -= D(j, i) * z[nn + nu + (i - 1) * nn + r];
                           }
                           out[j * nn + r] = acc;
                         }
                       }
                     }));

      if (pm.running_cost) {
        prob.add_block("cost" + id, BlockKind::objective, seg, 1,
                       BlockFunction([m, p, k](auto z, auto out) {
                         using T = ScalarOf<decltype(z)>;
                         const PhaseLayout& L = m->layouts[p];
                         const detail::PhaseModel& pm = m->phases[p];
                         const auto s = segment_nodes<T>(*m, p, k, z);
                         T acc(0.0);
                         T l[1];
                         for (std::size_t j = 0; j < L.degree; ++j) {
                           l[0] = T(0.0);
                           pm.running_cost(std::span<const T>(s.x[j]), std::span<const T>(s.u[j]),
                                           std::span<T>(l, 1));
                           acc += pm.state_scheme->quad_weights[j] * l[0];
                         }
                         out[0] = L.h * acc;
                       }));
      }

      std::size_t finite_bounds = 0;
      for (std::size_t i = 0; i < pm.path_lower.size(); ++i) {
        finite_bounds += std::isfinite(pm.path_lower[i]) + std::isfinite(pm.path_upper[i]);
      }
      if (finite_bounds > 0) {
        prob.add_block("path" + id, BlockKind::inequality, seg, d * finite_bounds,
                       BlockFunction([m, p, k](auto z, auto out) {
                         using T = ScalarOf<decltype(z)>;
                         const detail::PhaseModel& pm = m->phases[p];
                         const std::size_t nc = pm.path_lower.size();
                         const auto s = segment_nodes<T>(*m, p, k, z);
                         std::vector<T> c(nc);
                         std::size_t row = 0;
                         for (std::size_t j = 0; j < s.x.size(); ++j) {
                           std::fill(c.begin(), c.end(), T(0.0));
                           pm.path(std::span<const T>(s.x[j]), std::span<const T>(s.u[j]),
                                   std::span<T>(c));
                           for (std::size_t i = 0; i < nc; ++i) {
                             if (std::isfinite(pm.path_upper[i])) out[row++] = c[i] - pm.path_upper[i];
                             if (std::isfinite(pm.path_lower[i])) out[row++] = pm.path_lower[i] - c[i];
                           }
                         }
                       }));
      }

      if (baseline && !model->quaternion_offsets.empty()) {
        const std::size_t rows = d * 4 * model->quaternion_offsets.size();
        out.normalization_rows += rows;
        prob.add_block("membership" + id, BlockKind::equality, seg, rows,
                       BlockFunction([m, p, k](auto z, auto out) {
                         using T = ScalarOf<decltype(z)>;
                         const auto s = segment_nodes<T>(*m, p, k, z);
                         std::size_t row = 0;
                         for (const auto& x : s.x) {
                           for (std::size_t o : m->quaternion_offsets) {
                             const T norm = sqrt(x[o] * x[o] + x[o + 1] * x[o + 1] +
                                                 x[o + 2] * x[o + 2] + x[o + 3] * x[o + 3]);
                             for (std::size_t c = 0; c < 4; ++c) out[row++] = x[o + c] - x[o + c] / norm;
                           }
                         }
                       }));
      }

      prob.add_block("continuity" + id, BlockKind::equality,
                     concat(concat(range(L.knot(k), n), range(L.deviant(k, d), n)),
                            range(L.knot(k + 1), n)),
                     n, BlockFunction([m, p, k](auto z, auto out) {
                       using T = ScalarOf<decltype(z)>;
                       const std::size_t nn = m->chart.tangent_dim();
                       const std::size_t a = m->chart.ambient_dim();
                       const auto& refs = m->phases[p].references;
                       std::vector<T> xk(a), xe(a), xn(a);
                       knot_state<T>(*m, refs[k], z.subspan(0, nn), xk);
                       m->chart.exp<T>(xk, z.subspan(nn, nn), xe);
                       knot_state<T>(*m, refs[k + 1], z.subspan(2 * nn, nn), xn);
                       m->chart.log<T>(xn, xe, out);
                     }));

      if (nu > 0) {
        prob.add_block("control-continuity" + id, BlockKind::equality,
                       concat(range(L.control(k, L.control_degree), nu), range(L.knot_control(k + 1), nu)),
                       nu, BlockFunction([nu](auto z, auto out) {
                         for (std::size_t c = 0; c < nu; ++c) out[c] = z[c] - z[nu + c];
                       }));
      }
    }
  }

  const PhaseLayout& first = model->layouts.front();
  const PhaseLayout& last = model->layouts.back();
  const auto final_knot = range(last.knot(last.segments), n);
  if (problem.terminal_cost) {
    const StateFn phi = problem.terminal_cost;
    prob.add_block("terminal", BlockKind::objective, final_knot, 1,
                   BlockFunction([m, phi](auto z, auto out) {
                     using T = ScalarOf<decltype(z)>;
                     std::vector<T> xf(m->chart.ambient_dim());
                     knot_state<T>(*m, m->phases.back().references.back(), z, xf);
                     out[0] = T(0.0);
                     phi(std::span<const T>(xf), out);
                   }));
  }
  if (problem.boundary_dim > 0) {
    const PairFn b = problem.boundary;
    prob.add_block("boundary", BlockKind::equality, concat(range(first.knot(0), n), final_knot),
                   problem.boundary_dim, BlockFunction([m, b](auto z, auto out) {
                     using T = ScalarOf<decltype(z)>;
                     const std::size_t nn = m->chart.tangent_dim();
                     std::vector<T> x0(m->chart.ambient_dim()), xf(m->chart.ambient_dim());
                     knot_state<T>(*m, m->phases.front().references.front(), z.subspan(0, nn), x0);
                     knot_state<T>(*m, m->phases.back().references.back(), z.subspan(nn, nn), xf);
                     b(std::span<const T>(x0), std::span<const T>(xf), out);
                   }));
  }

  out.model = m;
  return out;
}

nlohmann::json sparsity_report(const Transcription& t) {
  nlohmann::json j = t.nlp.sparsity_json();
  j["variant"] = to_string(t.variant);
  j["normalization_rows"] = t.normalization_rows;
  return j;
}

}  // namespace tanco::transcription
