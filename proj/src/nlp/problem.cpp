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

#include "tanco/nlp/problem.hpp"

#include <algorithm>
#include <cmath>
#include <random>

#include "tanco/ad/forward.hpp"
#include "tanco/errors.hpp"

namespace tanco::nlp {
namespace {

std::size_t kind_index(BlockKind k) { return static_cast<std::size_t>(k); }

bool all_finite(std::span<const double> v) {
  return std::all_of(v.begin(), v.end(), [](double x) { return std::isfinite(x); });
}

}  // namespace

const char* to_string(BlockKind kind) {
  switch (kind) {
    case BlockKind::objective: return "objective";
    case BlockKind::equality: return "equality";
    case BlockKind::inequality: return "inequality";
  }
  return "?";
}

void SparseMatrix::add_transpose_product(std::span<const double> y, std::span<double> out) const {
  for (const auto& t : entries) out[t.col] += t.value * y[t.row];
}

std::vector<double> SparseMatrix::product(std::span<const double> x) const {
  std::vector<double> out(rows, 0.0);
  for (const auto& t : entries) out[t.row] += t.value * x[t.col];
  return out;
}

NlpProblem::NlpProblem(std::size_t n_vars)
    : n_vars_(n_vars), lower_(n_vars, -kInf), upper_(n_vars, kInf) {}

std::size_t NlpProblem::add_block(std::string name, BlockKind kind, std::vector<std::size_t> vars,
                                  std::size_t rows, BlockFunction fn) {
  for (std::size_t v : vars) {
    if (v >= n_vars_) {
      throw ConstructionError("block '" + name + "' references variable " + std::to_string(v) +
                              " of " + std::to_string(n_vars_));
    }
  }
  Block b{std::move(name), kind, std::move(vars), rows, std::move(fn)};
  b.row_offset = n_rows_[kind_index(kind)];
  n_rows_[kind_index(kind)] += rows;
  blocks_.push_back(std::move(b));
  return blocks_.size() - 1;
}

void NlpProblem::set_bounds(std::size_t var, double lower, double upper) {
  if (var >= n_vars_) throw DimensionError("set_bounds: variable out of range");
  if (lower > upper) {
    throw ConstructionError("set_bounds: lower > upper for variable " + std::to_string(var));
  }
  lower_[var] = lower;
  upper_[var] = upper;
}

std::size_t NlpProblem::rows_with_prefix(BlockKind kind, const std::string& prefix) const {
  std::size_t n = 0;
  for (const auto& b : blocks_) {
    if (b.kind == kind && b.name.rfind(prefix, 0) == 0) n += b.rows;
  }
  return n;
}

std::vector<double> NlpProblem::project(std::span<const double> z) const {
  check_size(z, "project");
  std::vector<double> out(z.begin(), z.end());
  for (std::size_t i = 0; i < n_vars_; ++i) out[i] = std::clamp(out[i], lower_[i], upper_[i]);
  return out;
}

void NlpProblem::check_size(std::span<const double> z, const char* where) const {
  if (z.size() != n_vars_) {
    throw DimensionError(std::string(where) + ": expected " + std::to_string(n_vars_) +
                         " variables, got " + std::to_string(z.size()));
  }
}

Evaluation NlpProblem::evaluate(std::span<const double> z, bool with_derivatives) const {
  check_size(z, "evaluate");
  Evaluation ev;
  ev.equalities.assign(n_rows_[1], 0.0);
  ev.inequalities.assign(n_rows_[2], 0.0);
  if (with_derivatives) {
    ev.gradient.assign(n_vars_, 0.0);
    ev.jac_equalities.rows = n_rows_[1];
    ev.jac_equalities.cols = n_vars_;
    ev.jac_inequalities.rows = n_rows_[2];
    ev.jac_inequalities.cols = n_vars_;
  }
  std::vector<double> local, values, jac;
  for (const auto& b : blocks_) {
    local.resize(b.vars.size());
    for (std::size_t i = 0; i < b.vars.size(); ++i) local[i] = z[b.vars[i]];
    values.assign(b.rows, 0.0);
    if (with_derivatives) {
      jac.assign(b.rows * b.vars.size(), 0.0);
      ad::forward_jacobian_dense(
          [&b](std::span<const ad::Dual> in, std::span<ad::Dual> out) { b.fn(in, out); }, local,
          values, jac);
    } else {
      b.fn(std::span<const double>(local), std::span<double>(values));
    }
    if (ev.nonfinite_block.empty() && !all_finite(values)) ev.nonfinite_block = b.name;
    switch (b.kind) {
      case BlockKind::objective:
        for (double v : values) ev.objective += v;
        if (with_derivatives) {
          for (std::size_t r = 0; r < b.rows; ++r)
            for (std::size_t c = 0; c < b.vars.size(); ++c)
              ev.gradient[b.vars[c]] += jac[r * b.vars.size() + c];
        }
        break;
      case BlockKind::equality:
      case BlockKind::inequality: {
        auto& dst = b.kind == BlockKind::equality ? ev.equalities : ev.inequalities;
        std::copy(values.begin(), values.end(), dst.begin() + b.row_offset);
        if (with_derivatives) {
          auto& m = b.kind == BlockKind::equality ? ev.jac_equalities : ev.jac_inequalities;
          for (std::size_t r = 0; r < b.rows; ++r)
            for (std::size_t c = 0; c < b.vars.size(); ++c) {
              const double v = jac[r * b.vars.size() + c];
              if (v != 0.0) m.entries.push_back({b.row_offset + r, b.vars[c], v});
            }
        }
        break;
      }
    }
  }
  if (with_derivatives && ev.nonfinite_block.empty() && !all_finite(ev.gradient)) {
    ev.nonfinite_block = "gradient";
  }
  return ev;
}

double NlpProblem::objective(std::span<const double> z) const {
  return evaluate(z, false).objective;
}

DirectionalDerivative NlpProblem::jvp(std::span<const double> z, std::span<const double> v) const {
  check_size(z, "jvp");
  check_size(v, "jvp");
  DirectionalDerivative dd;
  dd.equalities.assign(n_rows_[1], 0.0);
  dd.inequalities.assign(n_rows_[2], 0.0);
  std::vector<ad::Dual> local, out;
  for (const auto& b : blocks_) {
    local.resize(b.vars.size());
    for (std::size_t i = 0; i < b.vars.size(); ++i) {
      local[i] = ad::Dual(z[b.vars[i]]);
      local[i].d[0] = v[b.vars[i]];
    }
    out.assign(b.rows, ad::Dual(0.0));
    b.fn(std::span<const ad::Dual>(local), std::span<ad::Dual>(out));
    for (std::size_t r = 0; r < b.rows; ++r) {
      switch (b.kind) {
        case BlockKind::objective: dd.objective += out[r].d[0]; break;
        case BlockKind::equality: dd.equalities[b.row_offset + r] = out[r].d[0]; break;
        case BlockKind::inequality: dd.inequalities[b.row_offset + r] = out[r].d[0]; break;
      }
    }
  }
  return dd;
}

std::vector<BlockSparsity> NlpProblem::sparsity() const {
  std::vector<BlockSparsity> out;
  out.reserve(blocks_.size());
  for (const auto& b : blocks_) {
    out.push_back({b.name, b.kind, b.rows, b.vars.size(), b.rows * b.vars.size()});
  }
  return out;
}

nlohmann::json NlpProblem::sparsity_json() const {
  nlohmann::json blocks = nlohmann::json::array();
  std::size_t totals[3] = {0, 0, 0};
  for (const auto& s : sparsity()) {
    blocks.push_back({{"name", s.name},
                      {"kind", to_string(s.kind)},
                      {"rows", s.rows},
                      {"cols", s.cols},
                      {"triplets", s.triplets}});
    totals[kind_index(s.kind)] += s.triplets;
  }
  return {{"n_vars", n_vars_},
          {"n_equalities", n_rows_[1]},
          {"n_inequalities", n_rows_[2]},
          {"triplets",
           {{"objective", totals[0]}, {"equality", totals[1]}, {"inequality", totals[2]}}},
          {"blocks", blocks}};
}

JacobianAudit audit_jacobians(const NlpProblem& nlp, std::span<const double> z,
                              std::size_t probes, double rel_tol, unsigned seed) {
  std::mt19937 rng(seed);
  std::normal_distribution<double> normal(0.0, 1.0);
  const std::size_t n = nlp.n_vars();
  const double eps = 1e-6;
  JacobianAudit audit;
  audit.probes = probes;

  // Row -> owning block, for reporting.
  std::vector<const Block*> eq_owner(nlp.n_equalities()), in_owner(nlp.n_inequalities());
  for (const auto& b : nlp.blocks()) {
    auto& owner = b.kind == BlockKind::equality ? eq_owner : in_owner;
    if (b.kind == BlockKind::objective) continue;
    for (std::size_t r = 0; r < b.rows; ++r) owner[b.row_offset + r] = &b;
  }
  auto compare = [&](double ad_value, double fd_value, const std::string& where) {
    const double err = std::abs(ad_value - fd_value) /
                       std::max({1.0, std::abs(ad_value), std::abs(fd_value)});
    if (err > audit.max_relative_error) {
      audit.max_relative_error = err;
      audit.worst_block = where;
    }
  };

  std::vector<double> point(n), dir(n), zp(n), zm(n);
  for (std::size_t p = 0; p < probes; ++p) {
    double dnorm = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      point[i] = z[i] + 1e-3 * normal(rng);
      dir[i] = normal(rng);
      dnorm += dir[i] * dir[i];
    }
    dnorm = std::sqrt(dnorm);
    for (double& d : dir) d /= dnorm;
    const auto ev = nlp.evaluate(point, true);
    const auto jv_eq = ev.jac_equalities.product(dir);
    const auto jv_in = ev.jac_inequalities.product(dir);
    double gv = 0.0;
    for (std::size_t i = 0; i < n; ++i) gv += ev.gradient[i] * dir[i];
    for (std::size_t i = 0; i < n; ++i) {
      zp[i] = point[i] + eps * dir[i];
      zm[i] = point[i] - eps * dir[i];
    }
    const auto ep = nlp.evaluate(zp, false);
    const auto em = nlp.evaluate(zm, false);
    compare(gv, (ep.objective - em.objective) / (2 * eps), "objective");
    for (std::size_t r = 0; r < jv_eq.size(); ++r) {
      compare(jv_eq[r], (ep.equalities[r] - em.equalities[r]) / (2 * eps), eq_owner[r]->name);
    }
    for (std::size_t r = 0; r < jv_in.size(); ++r) {
      compare(jv_in[r], (ep.inequalities[r] - em.inequalities[r]) / (2 * eps), in_owner[r]->name);
    }
  }
  audit.passed = audit.max_relative_error <= rel_tol;
  return audit;
}

}  // namespace tanco::nlp
