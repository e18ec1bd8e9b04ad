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

#include "tanco/cli/cli.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <limits>

#include "CLI11.hpp"
#include "tanco/collocation/collocation.hpp"
#include "tanco/errors.hpp"
#include "tanco/systems/systems.hpp"
#include "tanco/transcription/trajectory.hpp"

namespace tanco::cli {
namespace {

using transcription::Trajectory;

std::string fmt(double v) {
  if (std::isnan(v)) return "nan";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::string registered_names() {
  std::string s;
  for (const auto& n : systems::benchmark_names()) s += (s.empty() ? "" : ", ") + n;
  return s;
}

bool is_registered(const std::string& name) {
  for (const auto& n : systems::benchmark_names()) {
    if (n == name) return true;
  }
  return false;
}

double cost_error(const RunOutcome& o) {
  if (!o.oracle_cost) return std::numeric_limits<double>::quiet_NaN();
  return std::abs(o.result.report.objective - *o.oracle_cost);
}

std::ofstream open_output(const std::string& dir, const std::string& file) {
  std::filesystem::create_directories(dir);
  std::ofstream f(std::filesystem::path(dir) / file);
  if (!f) throw ParameterError("cannot write " + (std::filesystem::path(dir) / file).string());
  return f;
}

}  // namespace

void RunConfig::validate() const {
  if (!is_registered(problem)) {
    throw ParameterError("unknown problem '" + problem + "'; registered: " + registered_names());
  }
  if (segments && *segments < 1) throw ParameterError("segments must be positive");
  if (degree && *degree < 1) throw ParameterError("degree must be positive");
  if (control_degree && *control_degree < 0) throw ParameterError("control-degree must be non-negative");
  if (!(feas_tol > 0.0) || !(opt_tol > 0.0)) throw ParameterError("tolerances must be positive");
  if (samples_per_segment < 1) throw ParameterError("samples-per-segment must be positive");
  transcription::parse_variant(variant);
}

RunOutcome execute(const RunConfig& config) {
  config.validate();
  auto bench = systems::make_benchmark(config.problem);
  systems::apply_mesh(bench.problem, config.segments, config.degree, config.control_degree);

  const auto start = std::chrono::steady_clock::now();
  auto t = transcription::transcribe(bench.problem, transcription::parse_variant(config.variant));
  nlp::SolveOptions opt;
  opt.feas_tol = config.feas_tol;
  opt.opt_tol = config.opt_tol;
  opt.audit_jacobians = config.audit_jacobians;
  auto result = nlp::solve(t.nlp, t.initial_guess, opt);
  const double wall =
      std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start).count();

  RunOutcome o{std::move(bench.problem), std::move(t), std::move(result), 0.0, bench.oracle_cost, wall};
  o.defect_norm = transcription::defect_norm(Trajectory(o.transcription, o.result.z),
                                             config.samples_per_segment);
  return o;
}

nlohmann::json make_report(const RunConfig& config, const RunOutcome& o) {
  using nlohmann::json;
  const auto& p = o.problem;
  const auto variant = o.transcription.variant;
  json mesh = json::array();
  for (const auto& ph : p.phases) {
    mesh.push_back({{"segments", ph.segments},
                    {"state_degree", ph.state_degree},
                    {"control_degree", ph.effective_control_degree()},
                    {"duration", ph.duration}});
  }
  const auto& nlp = o.transcription.nlp;
  json counts = {
      {"variables", nlp.n_vars()},
      {"equalities", nlp.n_equalities()},
      {"inequalities", nlp.n_inequalities()},
      {"formula_variables", transcription::count_decision_variables(p, variant)},
      {"formula_equalities", transcription::count_equality_constraints(p, variant)},
      {"boundary_rows", p.boundary_dim},
      {"normalization_rows", o.transcription.normalization_rows},
      {"surplus_constraints", transcription::normalization_surplus(p)},
  };
  json j = {
      {"problem", config.problem},
      {"variant", transcription::to_string(variant)},
      {"mesh", mesh},
      {"counts", counts},
      {"solve", nlp::to_json(o.result.report)},
      {"defect_norm", o.defect_norm},
      {"samples_per_segment", config.samples_per_segment},
      {"feas_tol", config.feas_tol},
      {"opt_tol", config.opt_tol},
  };
  if (o.oracle_cost) {
    j["oracle_cost"] = *o.oracle_cost;
    j["cost_error"] = cost_error(o);
  } else {
    j["oracle_cost"] = nullptr;
    j["cost_error"] = nullptr;
  }
  return j;
}

void write_trajectory_csv(const RunOutcome& o, int samples, std::ostream& out) {
  const Trajectory traj(o.transcription, o.result.z);
  const auto xs = transcription::state_column_names(o.problem);
  const auto us = transcription::control_column_names(o.problem);
  out << "t,phase";
  for (const auto& n : xs) out << ',' << n;
  for (const auto& n : us) out << ',' << n;
  out << '\n';
  auto row = [&](double t, std::size_t p, const transcription::StateControl& sc) {
    out << fmt(t) << ',' << p;
    for (double v : sc.state) out << ',' << fmt(v);
    for (std::size_t i = 0; i < us.size(); ++i) {
      out << ',' << fmt(i < sc.control.size() ? sc.control[i] : std::numeric_limits<double>::quiet_NaN());
    }
    out << '\n';
  };
  for (std::size_t p = 0; p < traj.phases().size(); ++p) {
    const auto& ph = traj.phases()[p];
    for (std::size_t k = 0; k < ph.segments.size(); ++k) {
      for (int i = 0; i < samples; ++i) {
        const double tau = static_cast<double>(i) / samples;
        row(ph.t0 + ph.h * (static_cast<double>(k) + tau), p, traj.evaluate(p, k, tau));
      }
    }
    row(ph.tf(), p, traj.evaluate(p, ph.segments.size() - 1, 1.0));
  }
}

int run(const RunConfig& config, std::ostream& out, std::ostream& err) {
  RunOutcome o;
  try {
    o = execute(config);
  } catch (const ParameterError& e) {
    err << "error: " << e.what() << '\n';
    return kUsageError;
  } catch (const Error& e) {
    err << "error: " << e.what() << '\n';
    return kSolverFailure;
  }
  {
    auto f = open_output(config.out_dir, "trajectory.csv");
    write_trajectory_csv(o, config.samples_per_segment, f);
  }
  {
    auto f = open_output(config.out_dir, "report.json");
    f << make_report(config, o).dump(2) << '\n';
  }
  const auto& r = o.result.report;
  out << "defect_norm=" << fmt(o.defect_norm) << " status=" << nlp::to_string(r.status)
      << " objective=" << fmt(r.objective) << " cost_error=" << fmt(cost_error(o)) << '\n';
  return r.converged() ? kConverged : kSolverFailure;
}

int sweep(const RunConfig& config, const std::string& parameter, const std::vector<int>& values,
          std::ostream& out, std::ostream& err) {
  if (parameter != "degree" && parameter != "segments") {
    err << "error: sweep parameter must be 'degree' or 'segments', got '" << parameter << "'\n";
    return kUsageError;
  }
  try {
    config.validate();
  } catch (const ParameterError& e) {
    err << "error: " << e.what() << '\n';
    return kUsageError;
  }
  std::ostringstream table;
  table << "value,cost_error,defect_norm,iterations,wall_ms\n";
  int code = kConverged;
  for (int v : values) {
    RunConfig c = config;
    (parameter == "degree" ? c.degree : c.segments) = v;
    RunOutcome o;
    try {
      o = execute(c);
    } catch (const ParameterError& e) {
      err << "error: " << e.what() << '\n';
      return kUsageError;
    } catch (const Error& e) {
      err << "error: " << e.what() << '\n';
      return kSolverFailure;
    }
    if (!o.result.report.converged()) code = kSolverFailure;
    char wall[32];
    std::snprintf(wall, sizeof wall, "%.3f", o.wall_ms);
    table << v << ',' << fmt(cost_error(o)) << ',' << fmt(o.defect_norm) << ','
          << o.result.report.iterations << ',' << wall << '\n';
  }
  auto f = open_output(config.out_dir, "sweep.csv");
  f << table.str();
  out << table.str();
  return code;
}

int main_entry(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Tangent-space pseudospectral trajectory optimization"};
  app.require_subcommand(1);
  app.set_config("--config", "", "flat key=value file; every key mirrors a flag name");

  RunConfig cfg;
  int segments = 0, degree = 0, control_degree = -1;
  app.add_option("--problem", cfg.problem, "benchmark name")->capture_default_str();
  auto* seg_opt = app.add_option("--segments", segments, "knot segments per phase");
  auto* deg_opt = app.add_option("--degree", degree, "state polynomial degree");
  auto* cdeg_opt = app.add_option("--control-degree", control_degree, "control polynomial degree");
  app.add_option("--variant", cfg.variant, "tangent | normalization-baseline")->capture_default_str();
  app.add_option("--feas-tol", cfg.feas_tol, "constraint violation tolerance")->capture_default_str();
  app.add_option("--opt-tol", cfg.opt_tol, "stationarity tolerance")->capture_default_str();
  app.add_option("--out-dir", cfg.out_dir, "artifact directory")->capture_default_str();
  app.add_option("--samples-per-segment", cfg.samples_per_segment, "export and defect density")
      ->capture_default_str();
  app.add_flag("--audit-jacobians", cfg.audit_jacobians, "check derivatives before solving");

  auto* run_cmd = app.add_subcommand("run", "solve one configuration")->fallthrough();
  auto* sweep_cmd = app.add_subcommand("sweep", "solve over a list of degrees or segment counts")->fallthrough();
  std::string parameter = "degree";
  std::vector<std::string> value_text;
  sweep_cmd->add_option("--parameter", parameter, "degree | segments")->capture_default_str();
  sweep_cmd->add_option("--values", value_text, "comma-separated values")->delimiter(',');
  auto* scheme_cmd = app.add_subcommand("scheme", "print the collocation scheme for --degree")->fallthrough();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    out << app.help();
    return kConverged;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << '\n';
    return kUsageError;
  }
  if (seg_opt->count() > 0) cfg.segments = segments;
  if (deg_opt->count() > 0) cfg.degree = degree;
  if (cdeg_opt->count() > 0) cfg.control_degree = control_degree;

  if (*scheme_cmd) {
    try {
      out << collocation::format_scheme_table(collocation::CollocationScheme(cfg.degree.value_or(4)));
    } catch (const Error& e) {
      err << "error: " << e.what() << '\n';
      return kUsageError;
    }
    return kConverged;
  }
  if (*sweep_cmd) {
    std::vector<int> values;
    for (const auto& v : value_text) {
      if (v.empty()) continue;
      try {
        std::size_t used = 0;
        values.push_back(std::stoi(v, &used));
        if (used != v.size()) throw std::invalid_argument(v);
      } catch (const std::exception&) {
        err << "error: --values entry '" << v << "' is not an integer\n";
        return kUsageError;
      }
    }
    return sweep(cfg, parameter, values, out, err);
  }
  (void)run_cmd;
  return run(cfg, out, err);
}

}  // namespace tanco::cli
