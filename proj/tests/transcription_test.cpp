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

#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "tanco/errors.hpp"
#include "tanco/nlp/solver.hpp"
#include "tanco/systems/systems.hpp"
#include "tanco/transcription/transcribe.hpp"
#include "tanco/transcription/trajectory.hpp"

namespace tanco::transcription {
namespace {

using manifolds::ManifoldChart;

template <class Span>
using ScalarOf = std::remove_cv_t<typename Span::element_type>;

// Euclidean chart of size n; dynamics x' = (u padded with zeros), cost |u|^2.
PhaseSpec simple_phase(std::size_t n, std::size_t nu, int N, int d, int du) {
  PhaseSpec p;
  p.segments = N;
  p.state_degree = d;
  p.control_degree = du;
  p.control_dim = nu;
  p.duration = 1.0;
  p.dynamics = [n, nu](auto x, auto u, auto out) {
    for (std::size_t i = 0; i < n; ++i) out[i] = i < nu ? u[i] : 0.0 * x[i];
  };
  p.running_cost = [nu](auto x, auto u, auto out) {
    out[0] = 0.0 * x[0];
    for (std::size_t i = 0; i < nu; ++i) out[0] += u[i] * u[i];
  };
  return p;
}

ProblemSpec euclidean_problem(std::size_t n, std::size_t nu, int N, int d, int du, int phases = 1) {
  ProblemSpec s;
  s.chart = ManifoldChart::euclidean(n);
  for (int p = 0; p < phases; ++p) s.phases.push_back(simple_phase(n, nu, N, d, du));
  for (int p = 1; p < phases; ++p) {
    s.jump_maps.push_back(StateFn([n](auto x, auto out) {
      for (std::size_t i = 0; i < n; ++i) out[i] = x[i];
    }));
  }
  s.initial_state.assign(n, 0.0);
  return s;
}

TEST(Counts, ReferenceShapes) {
  const auto a = euclidean_problem(2, 2, 2, 3, 3);
  EXPECT_EQ(count_decision_variables(a), 36u);
  EXPECT_EQ(count_equality_constraints(a), 22u);
  const auto b = euclidean_problem(1, 1, 1, 1, 1);
  EXPECT_EQ(count_decision_variables(b), 6u);
  const auto two = euclidean_problem(2, 2, 2, 3, 3, 2);
  EXPECT_EQ(count_decision_variables(two), 72u);
  EXPECT_EQ(count_equality_constraints(two), 44u);
}

TEST(Counts, TranscribeEmitsFormulaCounts) {
  const auto a = euclidean_problem(2, 2, 2, 3, 3);
  const auto t = transcribe(a);
  EXPECT_EQ(t.nlp.n_vars(), 36u);
  EXPECT_EQ(t.nlp.n_equalities(), 22u);
  EXPECT_EQ(t.initial_guess.size(), 36u);
}

ManifoldChart random_chart(std::mt19937& rng) {
  std::uniform_int_distribution<int> kind(0, 3), dim(1, 3);
  switch (kind(rng)) {
    case 0: return ManifoldChart::euclidean(static_cast<std::size_t>(dim(rng)));
    case 1: return ManifoldChart::quaternion();
    case 2: return manifolds::product_chart({ManifoldChart::euclidean(static_cast<std::size_t>(dim(rng))),
                                             ManifoldChart::quaternion()});
    default: return manifolds::product_chart({ManifoldChart::pose(), ManifoldChart::euclidean(1)});
  }
}

TEST(Counts, RandomizedShapesMatchFormulas) {
  std::mt19937 rng(2024);
  std::uniform_int_distribution<int> P(1, 3), N(1, 6), D(1, 5), DU(0, 5), NU(0, 3);
  for (int trial = 0; trial < 200; ++trial) {
    ProblemSpec s;
    s.chart = random_chart(rng);
    const std::size_t n = s.chart.tangent_dim();
    const int phases = P(rng);
    for (int p = 0; p < phases; ++p) {
      PhaseSpec ph;
      ph.segments = N(rng);
      ph.state_degree = D(rng);
      ph.control_degree = DU(rng);
      ph.control_dim = static_cast<std::size_t>(NU(rng));
      ph.duration = 0.5 + 0.1 * p;
      ph.dynamics = [n](auto x, auto, auto out) {
        for (std::size_t i = 0; i < n; ++i) out[i] = 0.0 * x[0];
      };
      s.phases.push_back(std::move(ph));
    }
    const std::size_t na = s.chart.ambient_dim();
    for (int p = 1; p < phases; ++p) {
      s.jump_maps.push_back(StateFn([na](auto x, auto out) {
        for (std::size_t i = 0; i < na; ++i) out[i] = x[i];
      }));
    }
    s.initial_state = s.chart.neutral();
    const auto t = transcribe(s);
    ASSERT_EQ(t.nlp.n_vars(), count_decision_variables(s)) << "trial " << trial;
    ASSERT_EQ(t.nlp.n_equalities(), count_equality_constraints(s)) << "trial " << trial;
  }
}

TEST(Counts, BoundaryRowsAreAddedOnTop) {
  auto s = systems::make_double_integrator(3, 2);
  const auto t = transcribe(s);
  EXPECT_EQ(t.nlp.n_equalities(), count_equality_constraints(s) + s.boundary_dim);
  EXPECT_EQ(t.nlp.n_vars(), count_decision_variables(s));
}

TEST(Baseline, AttitudeSurplusIsFourRowsPerNode) {
  const auto s = systems::make_attitude_reorientation({0, 0, 1}, 0.7, 5, 3);
  const auto tangent = transcribe(s);
  const auto base = transcribe_normalization_baseline(s);
  EXPECT_EQ(normalization_surplus(s), 5u * 3u * 4u);
  EXPECT_EQ(base.normalization_rows, normalization_surplus(s));
  // Relative to the ambient-Euclidean formula for a chart of the same size.
  EXPECT_EQ(base.nlp.n_equalities(),
            count_equality_constraints(s, Variant::normalization_baseline) + s.boundary_dim +
                normalization_surplus(s));
  EXPECT_EQ(base.nlp.n_vars(), count_decision_variables(s, Variant::normalization_baseline));
  EXPECT_EQ(tangent.nlp.rows_with_prefix(nlp::BlockKind::equality, "membership"), 0u);
  EXPECT_EQ(base.nlp.rows_with_prefix(nlp::BlockKind::equality, "membership"), 60u);
}

TEST(Baseline, EuclideanChartIsPlainAmbientTranscription) {
  const auto s = systems::make_double_integrator(4, 3);
  const auto base = transcribe(s, Variant::normalization_baseline);
  const auto tangent = transcribe(s);
  EXPECT_EQ(base.normalization_rows, 0u);
  EXPECT_EQ(base.nlp.n_vars(), tangent.nlp.n_vars());
  EXPECT_EQ(base.nlp.n_equalities(), tangent.nlp.n_equalities());
  const auto rb = nlp::solve(base.nlp, base.initial_guess);
  const auto rt = nlp::solve(tangent.nlp, tangent.initial_guess);
  ASSERT_TRUE(rb.report.converged());
  ASSERT_TRUE(rt.report.converged());
  EXPECT_NEAR(rb.report.objective, rt.report.objective, 1e-6);
}

TEST(Baseline, VariantNames) {
  EXPECT_EQ(parse_variant("tangent"), Variant::tangent);
  EXPECT_EQ(parse_variant("normalization-baseline"), Variant::normalization_baseline);
  EXPECT_THROW(parse_variant("ambient"), ParameterError);
}

TEST(Transcribe, SingleNodeStructure) {
  // f = u, L = u^2, N = 1, d = 1: collocation row h u - dev_1, objective B_1 u^2 h.
  ProblemSpec s = euclidean_problem(1, 1, 1, 1, 1);
  s.phases[0].duration = 0.8;
  const auto t = transcribe(s);
  ASSERT_EQ(t.nlp.n_vars(), 6u);
  const PhaseLayout& L = t.phases[0];
  std::vector<double> z{0.0, 0.3, 0.5, 1.7, 0.5, 1.7};
  const auto ev = t.nlp.evaluate(z, false);
  const double u = z[L.control(0, 1)];
  const double dev = z[L.deviant(0, 1)];
  EXPECT_EQ(L.control(0, 1), 3u);
  EXPECT_EQ(L.deviant(0, 1), 2u);
  std::size_t row = 0;
  for (const auto& b : t.nlp.blocks()) {
    if (b.name == "collocation/0/0") row = b.row_offset;
  }
  EXPECT_NEAR(ev.equalities[row], 0.8 * u - dev, 1e-15);
  EXPECT_NEAR(ev.objective, 1.0 * u * u * 0.8, 1e-15);

  const auto r = nlp::solve(t.nlp, t.initial_guess);
  ASSERT_TRUE(r.report.converged());
  EXPECT_NEAR(r.z[L.deviant(0, 1)], 0.8 * r.z[L.control(0, 1)], 1e-8);
}

TEST(Transcribe, ZeroDynamicsForcesZeroDeviants) {
  ProblemSpec s = euclidean_problem(3, 0, 3, 4, 1);
  s.initial_state = {0.2, -0.1, 0.4};
  const auto t = transcribe(s);
  std::vector<double> z0(t.nlp.n_vars(), 0.37);
  const auto r = nlp::solve(t.nlp, z0);
  ASSERT_TRUE(r.report.converged());
  for (const auto& L : t.phases) {
    for (std::size_t k = 0; k < L.segments; ++k) {
      for (std::size_t j = 1; j <= L.degree; ++j) {
        for (std::size_t i = 0; i < L.n; ++i) EXPECT_NEAR(r.z[L.deviant(k, j) + i], 0.0, 1e-9);
      }
    }
  }
}

TEST(Transcribe, DoubleIntegratorCost) {
  const auto s = systems::make_double_integrator(8, 4);
  const auto t = transcribe(s);
  const auto r = nlp::solve(t.nlp, t.initial_guess);
  ASSERT_TRUE(r.report.converged());
  EXPECT_NEAR(r.report.objective, 12.0, 1e-6);
}

TEST(Transcribe, CollocationBlocksAreSegmentLocal) {
  const auto s = systems::make_double_integrator(4, 3);
  const auto t = transcribe(s);
  const PhaseLayout& L = t.phases[0];
  std::mt19937 rng(5);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  std::vector<double> z(t.nlp.n_vars());
  for (auto& v : z) v = u(rng);

  for (const auto& b : t.nlp.blocks()) {
    if (b.name.rfind("collocation/", 0) != 0) continue;
    const std::size_t k = std::stoul(b.name.substr(b.name.rfind('/') + 1));
    for (std::size_t var = 0; var < t.nlp.n_vars(); ++var) {
      std::vector<double> e(t.nlp.n_vars(), 0.0);
      e[var] = 1.0;
      const auto d = t.nlp.jvp(z, e);
      bool touches = false;
      for (std::size_t r = 0; r < b.rows; ++r) touches |= d.equalities[b.row_offset + r] != 0.0;
      const bool inside = var >= L.knot(k) && var < L.knot(k) + L.stride();
      if (!inside) EXPECT_FALSE(touches) << b.name << " depends on variable " << var;
    }
  }
}

TEST(Transcribe, SparsityReportListsBlocks) {
  const auto t = transcribe(systems::make_double_integrator(2, 2));
  const auto j = sparsity_report(t);
  EXPECT_EQ(j.at("variant"), "tangent");
  EXPECT_EQ(j.at("n_vars"), t.nlp.n_vars());
  EXPECT_FALSE(j.at("blocks").empty());
  EXPECT_EQ(j.at("blocks")[0].at("name"), "initial");
}

TEST(Transcribe, CallbackDimensionMismatchNamesPhase) {
  ProblemSpec s = euclidean_problem(2, 1, 2, 2, 1, 2);
  s.phases[1].dynamics = [](auto x, auto u, auto out) { out[0] = x[0] + u[0]; };
  try {
    transcribe(s);
    FAIL() << "expected ConstructionError";
  } catch (const ConstructionError& e) {
    EXPECT_NE(std::string(e.what()).find("phase 1"), std::string::npos) << e.what();
  }
  ProblemSpec wide = euclidean_problem(2, 1, 2, 2, 1);
  wide.phases[0].dynamics = [](auto x, auto u, auto out) {
    out[0] = x[0];
    out[1] = u[0];
    out[2] = x[1];
  };
  EXPECT_THROW(transcribe(wide), ConstructionError);
}

TEST(Transcribe, InvalidSpecsAreRejected) {
  ProblemSpec s = euclidean_problem(1, 1, 1, 1, 1);
  s.phases[0].segments = 0;
  EXPECT_THROW(transcribe(s), ConstructionError);
  s = euclidean_problem(1, 1, 1, 1, 1);
  s.phases[0].duration = 0.0;
  EXPECT_THROW(transcribe(s), ConstructionError);
  s = euclidean_problem(1, 1, 1, 1, 1, 2);
  s.jump_maps.clear();
  EXPECT_THROW(transcribe(s), ConstructionError);
  s = euclidean_problem(1, 1, 1, 1, 1);
  s.initial_state = {0.0, 0.0};
  EXPECT_THROW(transcribe(s), ConstructionError);
}

TEST(Transcribe, DefaultControlDegree) {
  PhaseSpec p;
  p.state_degree = 4;
  EXPECT_EQ(p.effective_control_degree(), 3);
  p.state_degree = 1;
  EXPECT_EQ(p.effective_control_degree(), 1);
  p.control_degree = 5;
  EXPECT_EQ(p.effective_control_degree(), 5);
}

TEST(Transcribe, PathConstraintsLimitControl) {
  auto s = systems::make_double_integrator(6, 3);
  s.phases[0].path_dim = 1;
  s.phases[0].path = [](auto, auto u, auto out) { out[0] = u[0]; };
  s.phases[0].path_upper = {4.0};
  s.phases[0].path_lower = {-nlp::kInf};
  const auto t = transcribe(s);
  EXPECT_EQ(t.nlp.n_inequalities(), 6u * 3u);
  const auto r = nlp::solve(t.nlp, t.initial_guess);
  ASSERT_TRUE(r.report.converged());
  Trajectory traj(t, r.z);
  for (const auto& L : t.phases) {
    for (std::size_t k = 0; k < L.segments; ++k) {
      for (double tau : traj.phases()[0].state_scheme->nodes) {
        EXPECT_LE(traj.evaluate(0, k, tau).control[0], 4.0 + 1e-6);
      }
    }
  }
  // Limiting the peak control can only raise the cost above 12.
  EXPECT_GT(r.report.objective, 12.0);
}

class SolvedAttitude : public ::testing::Test {
 protected:
  static void SetUpTestSuite() {
    problem_ = new ProblemSpec(systems::make_attitude_reorientation({1.0, 2.0, -0.5}, 1.1, 4, 4));
    t_ = new Transcription(transcribe(*problem_));
    const auto r = nlp::solve(t_->nlp, t_->initial_guess);
    converged_ = r.report.converged();
    traj_ = new Trajectory(*t_, r.z);
    z_ = new std::vector<double>(r.z);
  }
  static void TearDownTestSuite() {
    delete traj_;
    delete t_;
    delete problem_;
    delete z_;
  }
  static ProblemSpec* problem_;
  static Transcription* t_;
  static Trajectory* traj_;
  static std::vector<double>* z_;
  static bool converged_;
};
ProblemSpec* SolvedAttitude::problem_ = nullptr;
Transcription* SolvedAttitude::t_ = nullptr;
Trajectory* SolvedAttitude::traj_ = nullptr;
std::vector<double>* SolvedAttitude::z_ = nullptr;
bool SolvedAttitude::converged_ = false;

TEST_F(SolvedAttitude, Converged) { EXPECT_TRUE(converged_); }

TEST_F(SolvedAttitude, KnotTimesGiveKnotStates) {
  const auto& ph = traj_->phases()[0];
  for (std::size_t k = 0; k < ph.segments.size(); ++k) {
    const auto sc = traj_->reconstruct(ph.t0 + ph.h * static_cast<double>(k));
    for (std::size_t i = 0; i < sc.state.size(); ++i) EXPECT_NEAR(sc.state[i], ph.segments[k].base[i], 1e-15);
  }
}

TEST_F(SolvedAttitude, NodesGiveStoredDeviants) {
  const auto& ph = traj_->phases()[0];
  const auto& chart = traj_->chart();
  for (std::size_t k = 0; k < ph.segments.size(); ++k) {
    for (std::size_t j = 1; j <= ph.state_scheme->nodes.size(); ++j) {
      const double tau = ph.state_scheme->nodes[j - 1];
      const auto got = traj_->evaluate(0, k, tau).state;
      const auto want = chart.exp(ph.segments[k].base, ph.segments[k].deviants[j]);
      for (std::size_t i = 0; i < got.size(); ++i) EXPECT_NEAR(got[i], want[i], 1e-14);
    }
  }
}

TEST_F(SolvedAttitude, QuaternionStaysUnitEverywhere) {
  std::mt19937 rng(99);
  std::uniform_real_distribution<double> u(traj_->t0(), traj_->tf());
  double worst = 0.0;
  for (int i = 0; i < 1000; ++i) {
    const auto x = traj_->reconstruct(u(rng)).state;
    const double n = std::sqrt(x[3] * x[3] + x[4] * x[4] + x[5] * x[5] + x[6] * x[6]);
    worst = std::max(worst, std::abs(n - 1.0));
  }
  EXPECT_LT(worst, 1e-12);
  EXPECT_EQ(t_->nlp.rows_with_prefix(nlp::BlockKind::equality, "membership"), 0u);
}

TEST_F(SolvedAttitude, ContinuousAtKnots) {
  const auto& ph = traj_->phases()[0];
  for (std::size_t k = 0; k + 1 < ph.segments.size(); ++k) {
    const auto left = traj_->evaluate(0, k, 1.0).state;
    const auto right = traj_->evaluate(0, k + 1, 0.0).state;
    for (std::size_t i = 0; i < left.size(); ++i) EXPECT_NEAR(left[i], right[i], 1e-9);
  }
}

TEST_F(SolvedAttitude, OutOfRangeTimesThrow) {
  EXPECT_THROW(traj_->reconstruct(-0.1), OutOfRangeError);
  EXPECT_THROW(traj_->reconstruct(1.5), OutOfRangeError);
  EXPECT_NO_THROW(traj_->reconstruct(1.0));
}

TEST_F(SolvedAttitude, ReachesGoal) {
  const auto xf = traj_->reconstruct(traj_->tf()).state;
  const auto goal = *problem_->goal_hint;
  const auto err = problem_->chart.log(goal, xf);
  for (double e : err) EXPECT_NEAR(e, 0.0, 1e-7);
}

TEST(Trajectory, ZeroDynamicsDefectIsExactlyZero) {
  ProblemSpec s = euclidean_problem(2, 1, 3, 3, 2);
  s.phases[0].dynamics = [](auto x, auto, auto out) {
    out[0] = 0.0 * x[0];
    out[1] = 0.0 * x[0];
  };
  const auto t = transcribe(s);
  const Trajectory traj(t, t.initial_guess);
  EXPECT_EQ(defect_norm(traj, 25), 0.0);
  EXPECT_THROW(defect_norm(traj, 0), ParameterError);
}

TEST(Trajectory, PolynomialDynamicsHaveNoDefect) {
  const auto s = systems::make_bouncing_mass(0.5, 2, 1.0, 9.81, 2, 3);
  const auto t = transcribe(s);
  const auto r = nlp::solve(t.nlp, t.initial_guess);
  ASSERT_TRUE(r.report.converged());
  const Trajectory traj(t, r.z);
  EXPECT_LT(defect_norm(traj, 20), 1e-9);
}

TEST(Trajectory, JumpAtPhaseBoundaryEqualsJumpImage) {
  const double e = 0.5;
  const auto s = systems::make_bouncing_mass(e, 2);
  const auto t = transcribe(s);
  const auto r = nlp::solve(t.nlp, t.initial_guess);
  ASSERT_TRUE(r.report.converged());
  const Trajectory traj(t, r.z);
  for (std::size_t p = 0; p + 1 < traj.phases().size(); ++p) {
    const auto before = traj.phase_end_state(p);
    const auto after = traj.reconstruct(traj.phases()[p + 1].t0).state;
    EXPECT_NEAR(after[0], before[0], 1e-8);
    EXPECT_NEAR(after[1], -e * before[1], 1e-8);
    EXPECT_LT(before[1], -1.0);  // falling into the impact
  }
}

TEST(Trajectory, DimensionMismatchThrows) {
  const auto t = transcribe(systems::make_double_integrator(2, 2));
  EXPECT_THROW(Trajectory(t, std::vector<double>(3, 0.0)), DimensionError);
}

TEST(InitialGuess, OverrideHookIsUsed) {
  auto s = systems::make_double_integrator(2, 2);
  s.initial_guess = [](std::size_t, double t) { return GuessSample{{t, 1.0}, {6.0 - 12.0 * t}}; };
  const auto t = transcribe(s);
  const Trajectory traj(t, t.initial_guess);
  const auto sc = traj.reconstruct(0.5);
  EXPECT_NEAR(sc.state[0], 0.5, 1e-12);
  EXPECT_NEAR(sc.control[0], 0.0, 1e-12);
  s.initial_guess = [](std::size_t, double) { return GuessSample{{0.0}, {}}; };
  EXPECT_THROW(transcribe(s), ConstructionError);
}

}  // namespace
}  // namespace tanco::transcription
