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

#include "tanco/nlp/solver.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <deque>
#include <iostream>
#include <memory>
#include <random>

#include "envelope.hpp"
#include "tanco/errors.hpp"

namespace tanco::nlp {
namespace {

struct Penalty {
  std::vector<double> lambda;  // equality multipliers
  std::vector<double> mu;      // inequality multipliers, >= 0
  double rho = 10.0;
};

struct Iterate {
  std::vector<double> z;
  Evaluation ev;
  double value = 0.0;
  std::vector<double> grad;
};

double al_value(const Evaluation& ev, const Penalty& p) {
  double v = ev.objective;
  for (std::size_t i = 0; i < ev.equalities.size(); ++i) {
    const double c = ev.equalities[i];
    v += p.lambda[i] * c + 0.5 * p.rho * c * c;
  }
  for (std::size_t j = 0; j < ev.inequalities.size(); ++j) {
    const double t = std::max(0.0, p.mu[j] + p.rho * ev.inequalities[j]);
    v += (t * t - p.mu[j] * p.mu[j]) / (2.0 * p.rho);
  }
  return v;
}

std::vector<double> al_gradient(const Evaluation& ev, const Penalty& p) {
  std::vector<double> g = ev.gradient;
  std::vector<double> y(ev.equalities.size());
  for (std::size_t i = 0; i < y.size(); ++i) y[i] = p.lambda[i] + p.rho * ev.equalities[i];
  ev.jac_equalities.add_transpose_product(y, g);
  y.resize(ev.inequalities.size());
  for (std::size_t j = 0; j < y.size(); ++j) {
    y[j] = std::max(0.0, p.mu[j] + p.rho * ev.inequalities[j]);
  }
  ev.jac_inequalities.add_transpose_product(y, g);
  return g;
}

double projected_gradient_norm(const NlpProblem& nlp, std::span<const double> z,
                               std::span<const double> g) {
  double m = 0.0;
  for (std::size_t i = 0; i < z.size(); ++i) {
    const double step = std::clamp(z[i] - g[i], nlp.lower()[i], nlp.upper()[i]) - z[i];
    m = std::max(m, std::abs(step));
  }
  return m;
}

double dot(std::span<const double> a, std::span<const double> b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

double max_abs(std::span<const double> v) {
  double m = 0.0;
  for (double x : v) m = std::max(m, std::abs(x));
  return m;
}

// Initial inverse Hessian of the inner quasi-Newton method:
//   M = rho (J_E^T J_E + J_A^T J_A) + sigma I
// with A the inequality rows inside the plus-function. This is the
// Gauss-Newton part of the penalty; sigma stands in for the curvature of the
// Lagrangian itself.
class Preconditioner {
 public:
  bool active() const { return matrix_ != nullptr; }

  void build(const Evaluation& ev, const Penalty& pen, double sigma, std::size_t n) {
    matrix_.reset();
    std::vector<std::vector<std::pair<std::size_t, double>>> rows;
    auto collect = [&rows](const SparseMatrix& J, std::span<const char> keep) {
      std::vector<std::vector<std::pair<std::size_t, double>>> byrow(J.rows);
      for (const auto& t : J.entries) {
        if (keep.empty() || keep[t.row]) byrow[t.row].push_back({t.col, t.value});
      }
      for (auto& r : byrow) {
        if (!r.empty()) rows.push_back(std::move(r));
      }
    };
    collect(ev.jac_equalities, {});
    std::vector<char> keep(ev.inequalities.size());
    for (std::size_t j = 0; j < keep.size(); ++j) keep[j] = pen.mu[j] + pen.rho * ev.inequalities[j] > 0.0;
    if (!keep.empty()) collect(ev.jac_inequalities, keep);
    if (rows.empty()) return;

    std::vector<std::size_t> first(n);
    for (std::size_t i = 0; i < n; ++i) first[i] = i;
    for (const auto& r : rows) {
      std::size_t lo = n;
      for (const auto& [c, v] : r) lo = std::min(lo, c);
      for (const auto& [c, v] : r) first[c] = std::min(first[c], lo);
    }
    double max_diag = 0.0;
    std::vector<double> diag(n, 0.0);
    for (const auto& r : rows) {
      for (const auto& [c, v] : r) diag[c] += pen.rho * v * v;
    }
    for (double d : diag) max_diag = std::max(max_diag, d);
    sigma = std::max(sigma, 1e-10 * std::max(1.0, max_diag));
    for (int attempt = 0; attempt < 8; ++attempt, sigma *= 100.0) {
      auto m = std::make_unique<detail::EnvelopeMatrix>(first);
      for (std::size_t i = 0; i < n; ++i) m->at(i, i) = sigma;
      for (const auto& r : rows) {
        for (const auto& [a, va] : r) {
          for (const auto& [b, vb] : r) {
            if (b <= a) m->at(a, b) += pen.rho * va * vb;
          }
        }
      }
      if (m->factorize()) {
        matrix_ = std::move(m);
        return;
      }
    }
  }

  void apply(std::span<double> v) const { matrix_->solve(v); }

 private:
  std::unique_ptr<detail::EnvelopeMatrix> matrix_;
};

class InnerSolver {
 public:
  InnerSolver(const NlpProblem& nlp, const SolveOptions& opt, const Penalty& pen, int outer,
              const Preconditioner* precond = nullptr)
      : nlp_(nlp), opt_(opt), pen_(pen), outer_(outer), precond_(precond) {}

  void refresh(Iterate& it) const {
    it.value = al_value(it.ev, pen_);
    it.grad = al_gradient(it.ev, pen_);
  }

  Iterate make(std::vector<double> z, int inner) const {
    Iterate it;
    it.z = std::move(z);
    it.ev = nlp_.evaluate(it.z, true);
    if (!it.ev.finite()) {
      throw PoisonedEvaluationError("non-finite value from block '" + it.ev.nonfinite_block +
                                        "' at outer iteration " + std::to_string(outer_) +
                                        ", inner iteration " + std::to_string(inner),
                                    outer_, inner);
    }
    refresh(it);
    return it;
  }

  // Returns the number of accepted steps; `it` ends at the final iterate.
  int minimize(Iterate& it, double tol, double& pg_out) const {
    const std::size_t n = it.z.size();
    std::deque<std::vector<double>> S, Y;
    std::deque<double> RHO;
    std::vector<double> d(n), trial(n), q(n);
    std::vector<char> active(n);
    int steps = 0;
    int stagnant = 0;
    pg_out = projected_gradient_norm(nlp_, it.z, it.grad);
    while (steps < opt_.max_inner_iterations && pg_out > tol) {
      const auto& lo = nlp_.lower();
      const auto& hi = nlp_.upper();
      for (std::size_t i = 0; i < n; ++i) {
        active[i] = (it.z[i] <= lo[i] && it.grad[i] > 0.0) || (it.z[i] >= hi[i] && it.grad[i] < 0.0);
      }
      bool accepted = false;
      for (int attempt = 0; attempt < 2 && !accepted; ++attempt) {
        if (attempt == 1) {
          S.clear();
          Y.clear();
          RHO.clear();
        }
        two_loop(it.grad, active, S, Y, RHO, d, q);
        double slope = dot(it.grad, d);
        if (!(slope < 0.0)) {
          S.clear();
          Y.clear();
          RHO.clear();
          two_loop(it.grad, active, S, Y, RHO, d, q);
          slope = dot(it.grad, d);
          if (!(slope < 0.0)) break;
        }
        double alpha = 1.0;
        if (S.empty() && !preconditioned()) alpha = std::min(1.0, 1.0 / std::max(1e-300, max_abs(d)));
        bool saw_nonfinite = false;
        for (int ls = 0; ls < 60; ++ls) {
          for (std::size_t i = 0; i < n; ++i) trial[i] = std::clamp(it.z[i] + alpha * d[i], lo[i], hi[i]);
          const Evaluation tev = nlp_.evaluate(trial, false);
          if (!tev.finite()) {
            saw_nonfinite = true;
            alpha *= 0.5;
            continue;
          }
          double decrease = 0.0;
          for (std::size_t i = 0; i < n; ++i) decrease += it.grad[i] * (trial[i] - it.z[i]);
          const double tval = al_value(tev, pen_);
          if (tval <= it.value + 1e-4 * decrease) {
            accepted = true;
            break;
          }
          alpha *= 0.5;
        }
        if (!accepted && saw_nonfinite && attempt == 1) {
          throw PoisonedEvaluationError("every line-search trial was non-finite at outer iteration " +
                                            std::to_string(outer_) + ", inner iteration " +
                                            std::to_string(steps),
                                        outer_, steps);
        }
      }
      if (!accepted) break;  // stalled at numerical precision
      Iterate next = make(trial, steps + 1);
      std::vector<double> s(n), y(n);
      for (std::size_t i = 0; i < n; ++i) {
        s[i] = next.z[i] - it.z[i];
        y[i] = next.grad[i] - it.grad[i];
      }
      const double sy = dot(s, y);
      if (sy > 1e-12 * std::sqrt(dot(s, s) * dot(y, y)) && sy > 0.0) {
        S.push_back(std::move(s));
        Y.push_back(std::move(y));
        RHO.push_back(1.0 / sy);
        if (static_cast<int>(S.size()) > opt_.lbfgs_memory) {
          S.pop_front();
          Y.pop_front();
          RHO.pop_front();
        }
      }
      const double drop = it.value - next.value;
      stagnant = drop <= 1e-15 * std::max(1.0, std::abs(it.value)) ? stagnant + 1 : 0;
      it = std::move(next);
      ++steps;
      pg_out = projected_gradient_norm(nlp_, it.z, it.grad);
      if (stagnant >= 10) break;  // no representable progress left
    }
    return steps;
  }

 private:
  bool preconditioned() const { return precond_ != nullptr && precond_->active(); }

  void two_loop(const std::vector<double>& g, const std::vector<char>& active,
                       const std::deque<std::vector<double>>& S,
                       const std::deque<std::vector<double>>& Y, const std::deque<double>& RHO,
                       std::vector<double>& d, std::vector<double>& q) const {
    const std::size_t n = g.size();
    for (std::size_t i = 0; i < n; ++i) q[i] = active[i] ? 0.0 : g[i];
    std::vector<double> alpha(S.size());
    for (std::size_t k = S.size(); k-- > 0;) {
      alpha[k] = RHO[k] * dot(S[k], q);
      for (std::size_t i = 0; i < n; ++i) q[i] -= alpha[k] * Y[k][i];
    }
    if (preconditioned()) {
      precond_->apply(q);
      for (std::size_t i = 0; i < n; ++i) q[i] = active[i] ? 0.0 : q[i];
    } else {
      double gamma = 1.0;
      if (!S.empty()) gamma = 1.0 / (RHO.back() * dot(Y.back(), Y.back()));
      for (std::size_t i = 0; i < n; ++i) q[i] = active[i] ? 0.0 : gamma * q[i];
    }
    for (std::size_t k = 0; k < S.size(); ++k) {
      const double beta = RHO[k] * dot(Y[k], q);
      for (std::size_t i = 0; i < n; ++i) q[i] += S[k][i] * (alpha[k] - beta);
    }
    for (std::size_t i = 0; i < n; ++i) d[i] = active[i] ? 0.0 : -q[i];
  }

  const NlpProblem& nlp_;
  const SolveOptions& opt_;
  const Penalty& pen_;
  int outer_;
  const Preconditioner* precond_;
};

// Rayleigh quotient of the Lagrangian curvature (penalty Gauss-Newton part
// removed) along a fixed pseudo-random direction, by a gradient difference.
double curvature_estimate(const NlpProblem& nlp, const Iterate& it, const Penalty& pen,
                          const InnerSolver& inner) {
  const std::size_t n = it.z.size();
  std::mt19937 rng(12345);
  std::normal_distribution<double> normal(0.0, 1.0);
  std::vector<double> v(n), zp(n);
  double vv = 0.0;
  for (auto& x : v) {
    x = normal(rng);
    vv += x * x;
  }
  const double eps = 1e-6 * std::max(1.0, max_abs(it.z)) / std::sqrt(vv);
  for (std::size_t i = 0; i < n; ++i) zp[i] = it.z[i] + eps * v[i];
  const Evaluation ev = nlp.evaluate(zp, true);
  if (!ev.finite()) return 0.0;
  Iterate probe;
  probe.ev = ev;
  inner.refresh(probe);
  double vh = 0.0;
  for (std::size_t i = 0; i < n; ++i) vh += v[i] * (probe.grad[i] - it.grad[i]) / eps;
  auto penalty_part = [&](const SparseMatrix& J, std::span<const double> scale) {
    const auto Jv = J.product(v);
    double s = 0.0;
    for (std::size_t r = 0; r < Jv.size(); ++r) {
      if (scale.empty() || scale[r] > 0.0) s += pen.rho * Jv[r] * Jv[r];
    }
    return s;
  };
  vh -= penalty_part(it.ev.jac_equalities, {});
  std::vector<double> act(it.ev.inequalities.size());
  for (std::size_t j = 0; j < act.size(); ++j) act[j] = pen.mu[j] + pen.rho * it.ev.inequalities[j];
  if (!act.empty()) vh -= penalty_part(it.ev.jac_inequalities, act);
  return std::abs(vh) / vv;
}

struct Measures {
  double eq = 0.0;
  double ineq = 0.0;
  double combined = 0.0;  // drives penalty growth
};

Measures measure(const Evaluation& ev, const Penalty& p) {
  Measures m;
  m.eq = max_abs(ev.equalities);
  m.combined = m.eq;
  for (std::size_t j = 0; j < ev.inequalities.size(); ++j) {
    const double g = ev.inequalities[j];
    m.ineq = std::max(m.ineq, g);
    m.combined = std::max(m.combined, std::abs(std::min(-g, p.mu[j] / p.rho)));
  }
  return m;
}

struct Best {
  std::vector<double> z;
  Penalty pen;
  double objective = 0.0;
  Measures m;
  double stationarity = 0.0;
  double complementarity = 0.0;
  bool set = false;
};

// Projected gradient of f + lambda^T c + mu^T g.
double lagrangian_stationarity(const NlpProblem& nlp, const Evaluation& ev,
                               std::span<const double> z, const Penalty& pen) {
  std::vector<double> g = ev.gradient;
  ev.jac_equalities.add_transpose_product(pen.lambda, g);
  ev.jac_inequalities.add_transpose_product(pen.mu, g);
  return projected_gradient_norm(nlp, z, g);
}

double complementarity(const Evaluation& ev, const Penalty& pen) {
  double c = 0.0;
  for (std::size_t j = 0; j < pen.mu.size(); ++j) c = std::max(c, std::abs(pen.mu[j] * ev.inequalities[j]));
  return c;
}

// Gauss-Newton steps toward c = 0 and g_A = 0 (A: rows with positive
// multiplier or positive value) from a converged iterate. Removes the
// first-order objective bias lambda^T c left by the feasibility tolerance.
// Each step is kept only if it lowers the violation without worsening
// stationarity or complementarity past their tolerances.
void polish(const NlpProblem& nlp, const SolveOptions& opt, Best& best) {
  Penalty gn;
  gn.rho = 1.0;
  gn.lambda = best.pen.lambda;
  for (int step = 0; step < 3; ++step) {
    const Evaluation ev = nlp.evaluate(best.z, true);
    gn.mu.assign(ev.inequalities.size(), 0.0);
    for (std::size_t j = 0; j < gn.mu.size(); ++j) gn.mu[j] = best.pen.mu[j] > 0.0 ? 1e300 : 0.0;
    Preconditioner gram;
    gram.build(ev, gn, 0.0, nlp.n_vars());
    if (!gram.active()) return;
    std::vector<double> dz(nlp.n_vars(), 0.0);
    ev.jac_equalities.add_transpose_product(ev.equalities, dz);
    std::vector<double> gk(ev.inequalities.size(), 0.0);
    for (std::size_t j = 0; j < gk.size(); ++j) {
      if (gn.mu[j] > 0.0 || ev.inequalities[j] > 0.0) gk[j] = ev.inequalities[j];
    }
    ev.jac_inequalities.add_transpose_product(gk, dz);
    gram.apply(dz);
    std::vector<double> trial(best.z);
    for (std::size_t i = 0; i < trial.size(); ++i) trial[i] -= dz[i];
    trial = nlp.project(trial);
    const Evaluation tev = nlp.evaluate(trial, true);
    if (!tev.finite()) return;
    const Measures m = measure(tev, best.pen);
    const double pg = lagrangian_stationarity(nlp, tev, trial, best.pen);
    const double comp = complementarity(tev, best.pen);
    const double before = std::max(best.m.eq, best.m.ineq);
    if (!(std::max(m.eq, m.ineq) < before) || pg > std::max(opt.opt_tol, best.stationarity) ||
        comp > std::max(opt.complementarity_tol, best.complementarity)) {
      return;
    }
    best.z = trial;
    best.objective = tev.objective;
    best.m = m;
    best.stationarity = pg;
    best.complementarity = comp;
    if (before < 1e-3 * std::max(m.eq, m.ineq) + 1e-300) return;
  }
}

}  // namespace

const char* to_string(SolveStatus s) {
  switch (s) {
    case SolveStatus::converged: return "converged";
    case SolveStatus::max_iterations: return "max-iters";
    case SolveStatus::infeasible_stationary: return "infeasible-stationary";
  }
  return "?";
}

nlohmann::json to_json(const SolveReport& r, bool include_timing) {
  nlohmann::json j{{"status", to_string(r.status)},
                   {"iterations", r.iterations},
                   {"inner_iterations", r.inner_iterations},
                   {"objective", r.objective},
                   {"max_equality_violation", r.max_equality_violation},
                   {"max_inequality_violation", r.max_inequality_violation},
                   {"stationarity", r.stationarity},
                   {"complementarity", r.complementarity},
                   {"penalty", r.penalty}};
  if (r.audit_max_error >= 0.0) j["audit_max_relative_error"] = r.audit_max_error;
  if (include_timing) j["wall_time_s"] = r.wall_time_s;
  return j;
}

SolverState warm_start(const NlpProblem& nlp, std::span<const double> previous,
                       const Multipliers& multipliers) {
  if (previous.size() != nlp.n_vars()) {
    throw DimensionError("warm_start: primal vector has " + std::to_string(previous.size()) +
                         " entries, problem has " + std::to_string(nlp.n_vars()));
  }
  if (!multipliers.empty() && (multipliers.equality.size() != nlp.n_equalities() ||
                               multipliers.inequality.size() != nlp.n_inequalities())) {
    throw DimensionError("warm_start: multiplier dimensions do not match the problem");
  }
  return {std::vector<double>(previous.begin(), previous.end()), multipliers};
}

SolveResult AugmentedLagrangianSolver::solve(const NlpProblem& nlp, std::span<const double> z0,
                                             const SolveOptions& opt,
                                             const SolverState* warm) const {
  const auto t_start = std::chrono::steady_clock::now();
  if (z0.size() != nlp.n_vars()) {
    throw DimensionError("solve: initial point has " + std::to_string(z0.size()) +
                         " entries, problem has " + std::to_string(nlp.n_vars()));
  }
  Penalty pen;
  pen.lambda.assign(nlp.n_equalities(), 0.0);
  pen.mu.assign(nlp.n_inequalities(), 0.0);
  pen.rho = opt.initial_penalty;
  std::vector<double> start(z0.begin(), z0.end());
  bool warm_duals = false;
  if (warm != nullptr) {
    const auto checked = warm_start(nlp, warm->z, warm->multipliers);
    start = checked.z;
    if (!checked.multipliers.empty()) {
      pen.lambda = checked.multipliers.equality;
      pen.mu = checked.multipliers.inequality;
      warm_duals = true;
    }
    if (checked.multipliers.penalty > 0.0) pen.rho = checked.multipliers.penalty;
  }
  start = nlp.project(start);

  SolveReport report;
  if (opt.audit_jacobians) {
    const auto audit = audit_jacobians(nlp, start);
    report.audit_max_error = audit.max_relative_error;
    if (!audit.passed) {
      throw Error("Jacobian audit failed: relative error " +
                  std::to_string(audit.max_relative_error) + " in block '" + audit.worst_block + "'");
    }
  }

  Iterate it = InnerSolver(nlp, opt, pen, 0).make(start, 0);
  const double omega_floor = 0.1 * opt.opt_tol;
  const bool constrained = nlp.n_equalities() + nlp.n_inequalities() > 0;
  double omega = (warm_duals || !constrained) ? omega_floor : std::max(omega_floor, 1e-2);
  double prev_combined = std::numeric_limits<double>::infinity();
  int stalled_at_cap = 0;

  Best best;

  report.status = SolveStatus::max_iterations;
  for (int outer = 1; outer <= opt.max_outer_iterations; ++outer) {
    Preconditioner precond;
    if (constrained) {
      InnerSolver probe(nlp, opt, pen, outer);
      probe.refresh(it);
      precond.build(it.ev, pen, curvature_estimate(nlp, it, pen, probe), nlp.n_vars());
    }
    InnerSolver inner(nlp, opt, pen, outer, &precond);
    inner.refresh(it);
    double pg = 0.0;
    report.inner_iterations += inner.minimize(it, omega, pg);
    report.iterations = outer;

    const Measures m = measure(it.ev, pen);
    for (std::size_t i = 0; i < pen.lambda.size(); ++i) pen.lambda[i] += pen.rho * it.ev.equalities[i];
    double comp = 0.0;
    for (std::size_t j = 0; j < pen.mu.size(); ++j) {
      pen.mu[j] = std::max(0.0, pen.mu[j] + pen.rho * it.ev.inequalities[j]);
      comp = std::max(comp, std::abs(pen.mu[j] * it.ev.inequalities[j]));
    }

    const bool better = !best.set || std::max(m.eq, m.ineq) < std::max(best.m.eq, best.m.ineq) ||
                        (std::max(m.eq, m.ineq) <= opt.feas_tol && pg < best.stationarity);
    if (better) best = {it.z, pen, it.ev.objective, m, pg, comp, true};

    if (opt.verbose) {
      std::cerr << "outer " << outer << " f=" << it.ev.objective << " eq=" << m.eq
                << " ineq=" << m.ineq << " pg=" << pg << " rho=" << pen.rho
                << " inner=" << report.inner_iterations << "\n";
    }

    if (m.eq <= opt.feas_tol && m.ineq <= opt.feas_tol && pg <= opt.opt_tol &&
        comp <= opt.complementarity_tol) {
      report.status = SolveStatus::converged;
      best = {it.z, pen, it.ev.objective, m, pg, comp, true};
      break;
    }
    if (m.combined > 0.25 * prev_combined) {
      if (pen.rho >= opt.max_penalty) {
        if (++stalled_at_cap >= 3) {
          report.status = SolveStatus::infeasible_stationary;
          break;
        }
      }
      pen.rho = std::min(pen.rho * opt.penalty_growth, opt.max_penalty);
    } else {
      stalled_at_cap = 0;
    }
    prev_combined = m.combined;
    omega = std::max(omega_floor, omega * 0.1);
  }

  if (report.status == SolveStatus::converged) polish(nlp, opt, best);

  report.objective = best.objective;
  report.max_equality_violation = best.m.eq;
  report.max_inequality_violation = best.m.ineq;
  report.stationarity = best.stationarity;
  report.complementarity = best.complementarity;
  report.penalty = best.pen.rho;
  report.wall_time_s =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t_start).count();

  SolveResult result;
  result.z = best.z;
  result.report = report;
  result.state.z = best.z;
  result.state.multipliers = {best.pen.lambda, best.pen.mu, best.pen.rho};
  return result;
}

SolveResult solve(const NlpProblem& nlp, std::span<const double> z0, const SolveOptions& options,
                  const SolverState* warm) {
  return AugmentedLagrangianSolver{}.solve(nlp, z0, options, warm);
}

}  // namespace tanco::nlp
