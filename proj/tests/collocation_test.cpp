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

#include "tanco/collocation/collocation.hpp"

#include <cmath>
#include <random>
#include <vector>

#include <gtest/gtest.h>

#include "tanco/errors.hpp"

namespace tanco::collocation {
namespace {

// Explicit sum form of the Legendre polynomial, independent of the recurrence.
double legendre_explicit(int n, double x) {
  double sum = 0.0;
  for (int k = 0; k <= n; ++k) {
    const double c = std::tgamma(n + 1.0) / (std::tgamma(k + 1.0) * std::tgamma(n - k + 1.0));
    sum += c * c * std::pow((x - 1.0) / 2.0, n - k) * std::pow((x + 1.0) / 2.0, k);
  }
  return sum;
}

double radau_explicit(int d, double s) {
  return legendre_explicit(d - 1, s) - legendre_explicit(d, s);
}

// Plain bisection on a uniform grid of the explicit polynomial.
std::vector<double> oracle_nodes(int d) {
  std::vector<double> out;
  const int cells = 20000;
  for (int c = 0; c < cells - 1; ++c) {
    double a = -1.0 + 2.0 * c / cells;
    double b = -1.0 + 2.0 * (c + 1) / cells;
    if ((radau_explicit(d, a) < 0) == (radau_explicit(d, b) < 0)) continue;
    for (int it = 0; it < 100; ++it) {
      const double m = 0.5 * (a + b);
      if ((radau_explicit(d, a) < 0) == (radau_explicit(d, m) < 0)) a = m; else b = m;
    }
    out.push_back(0.5 * (0.5 * (a + b) + 1.0));
  }
  out.push_back(1.0);
  return out;
}

// Classical Radau weight formula, mirrored so the included endpoint is +1.
std::vector<double> oracle_weights(int d, const std::vector<double>& nodes) {
  std::vector<double> w;
  for (int j = 0; j < d; ++j) {
    const double s = 2.0 * nodes[j] - 1.0;
    if (j == d - 1) {
      w.push_back(0.5 * 2.0 / (d * d));
    } else {
      const double p = legendre_explicit(d - 1, s);
      w.push_back(0.5 * (1.0 + s) / (d * d * p * p));
    }
  }
  return w;
}

double quadrature_error(const CollocationScheme& s, int m) {
  double q = 0.0;
  for (std::size_t j = 0; j < s.nodes.size(); ++j) q += s.quad_weights[j] * std::pow(s.nodes[j], m);
  return std::abs(q - 1.0 / (m + 1.0));
}

TEST(LgrNodes, SmallDegreesMatchClosedForms) {
  EXPECT_EQ(compute_lgr_nodes(1), std::vector<double>{1.0});

  const auto n2 = compute_lgr_nodes(2);
  ASSERT_EQ(n2.size(), 2u);
  EXPECT_NEAR(n2[0], 1.0 / 3.0, 1e-15);
  EXPECT_EQ(n2[1], 1.0);

  const auto n3 = compute_lgr_nodes(3);
  ASSERT_EQ(n3.size(), 3u);
  EXPECT_NEAR(n3[0], (4.0 - std::sqrt(6.0)) / 10.0, 1e-15);
  EXPECT_NEAR(n3[1], (4.0 + std::sqrt(6.0)) / 10.0, 1e-15);
  EXPECT_EQ(n3[2], 1.0);
}

TEST(LgrNodes, MatchBisectionOracleAndAreConverged) {
  for (int d = 1; d <= 12; ++d) {
    const auto nodes = compute_lgr_nodes(d);
    const auto oracle = oracle_nodes(d);
    ASSERT_EQ(nodes.size(), oracle.size()) << "d=" << d;
    EXPECT_GT(nodes.front(), 0.0);
    EXPECT_EQ(nodes.back(), 1.0);
    for (std::size_t j = 0; j < nodes.size(); ++j) {
      EXPECT_NEAR(nodes[j], oracle[j], 1e-13) << "d=" << d << " j=" << j;
      if (j > 0) EXPECT_LT(nodes[j - 1], nodes[j]);
      EXPECT_LT(std::abs(flipped_radau_polynomial(d, 2.0 * nodes[j] - 1.0)), 1e-13);
    }
  }
}

TEST(LgrNodes, RejectsZeroDegree) {
  EXPECT_THROW(compute_lgr_nodes(0), InvalidDegreeError);
  EXPECT_THROW(CollocationScheme(0), InvalidDegreeError);
}

TEST(LgrNodes, HighDegreeStillConverges) {
  const auto nodes = compute_lgr_nodes(24);  // warns, does not throw
  ASSERT_EQ(nodes.size(), 24u);
  for (double t : nodes) EXPECT_LT(std::abs(flipped_radau_polynomial(24, 2 * t - 1)), 1e-12);
}

TEST(QuadratureWeights, SmallCases) {
  const std::vector<double> one{1.0};
  EXPECT_NEAR(compute_quadrature_weights(one)[0], 1.0, 1e-15);
  const std::vector<double> two{1.0 / 3.0, 1.0};
  const auto w = compute_quadrature_weights(two);
  EXPECT_NEAR(w[0], 0.75, 1e-15);
  EXPECT_NEAR(w[1], 0.25, 1e-15);
}

TEST(QuadratureWeights, MatchAnalyticRadauWeights) {
  for (int d = 1; d <= 10; ++d) {
    const CollocationScheme s(d);
    const auto oracle = oracle_weights(d, s.nodes);
    double sum = 0.0;
    for (int j = 0; j < d; ++j) {
      EXPECT_NEAR(s.quad_weights[j], oracle[j], 1e-14) << "d=" << d;
      EXPECT_GT(s.quad_weights[j], 0.0);
      sum += s.quad_weights[j];
    }
    EXPECT_NEAR(sum, 1.0, 1e-13);
  }
}

TEST(QuadratureWeights, ExactnessBoundIsSharp) {
  for (int d = 1; d <= 8; ++d) {
    const CollocationScheme s(d);
    for (int m = 0; m <= 2 * d - 2; ++m) EXPECT_LT(quadrature_error(s, m), 1e-12) << d << "," << m;
    // The true error at m = 2d - 1 is 1.509e-9 for d = 8 (high-precision check).
    EXPECT_GT(quadrature_error(s, 2 * d - 1), 1e-9) << "d=" << d;
  }
  const CollocationScheme s3(3);
  EXPECT_LT(quadrature_error(s3, 3), 1e-14);
  EXPECT_LT(quadrature_error(s3, 4), 1e-14);
  EXPECT_GT(quadrature_error(s3, 5), 1e-6);
}

TEST(QuadratureWeights, DuplicateNodesAreRejected) {
  const std::vector<double> dup{0.5, 0.5, 1.0};
  EXPECT_THROW(compute_quadrature_weights(dup), DegenerateNodesError);
}

TEST(DiffMatrix, LinearSegment) {
  const std::vector<double> support{0.0, 1.0};
  const auto D = compute_diff_matrix(support);
  ASSERT_EQ(D.rows, 1u);
  ASSERT_EQ(D.cols, 2u);
  EXPECT_DOUBLE_EQ(D(0, 0), -1.0);
  EXPECT_DOUBLE_EQ(D(0, 1), 1.0);
}

TEST(DiffMatrix, DifferentiatesQuadraticOnThirdPoint) {
  const std::vector<double> support{0.0, 1.0 / 3.0, 1.0};
  const auto D = compute_diff_matrix(support);
  for (std::size_t j = 0; j < 2; ++j) {
    double lin = 0.0, quad = 0.0;
    for (std::size_t i = 0; i < 3; ++i) {
      lin += D(j, i) * support[i];
      quad += D(j, i) * support[i] * support[i];
    }
    EXPECT_NEAR(lin, 1.0, 1e-14);
    EXPECT_NEAR(quad, 2.0 * support[j + 1], 1e-14);
  }
}

TEST(DiffMatrix, ExactOnMonomialsAndRowsSumToZero) {
  for (int d = 1; d <= 8; ++d) {
    const CollocationScheme s(d);
    for (std::size_t j = 0; j < s.nodes.size(); ++j) {
      double rowsum = 0.0;
      for (std::size_t i = 0; i < s.support.size(); ++i) rowsum += s.diff_matrix(j, i);
      EXPECT_LT(std::abs(rowsum), 1e-12);
      for (int m = 1; m <= d; ++m) {
        double deriv = 0.0;
        for (std::size_t i = 0; i < s.support.size(); ++i) {
          deriv += s.diff_matrix(j, i) * std::pow(s.support[i], m);
        }
        EXPECT_NEAR(deriv, m * std::pow(s.nodes[j], m - 1), 1e-11) << d << "," << m;
      }
    }
  }
}

TEST(DiffMatrix, RepeatedSupportIsRejected) {
  const std::vector<double> support{0.0, 1.0, 1.0};
  EXPECT_THROW(compute_diff_matrix(support), DegenerateNodesError);
}

TEST(Barycentric, ReproducesSamplesAtSupport) {
  const CollocationScheme s(4);
  std::vector<std::vector<double>> samples;
  for (std::size_t i = 0; i < s.support.size(); ++i) samples.push_back({1.0 + i, -2.0 * i});
  for (std::size_t k = 0; k < s.support.size(); ++k) {
    EXPECT_EQ(barycentric_interpolate(s.support, s.bary_weights, samples, s.support[k]), samples[k]);
  }
}

TEST(Barycentric, QuadraticAtMidpoint) {
  const std::vector<double> support{0.0, 1.0 / 3.0, 1.0};
  const auto w = barycentric_weights(support);
  std::vector<std::vector<double>> samples;
  for (double t : support) samples.push_back({t * t});
  EXPECT_NEAR(barycentric_interpolate(support, w, samples, 0.5)[0], 0.25, 1e-15);
}

TEST(Barycentric, RandomPolynomialsAgainstDirectEvaluation) {
  std::mt19937 rng(7);
  std::uniform_real_distribution<double> coef(-2.0, 2.0), unit(0.0, 1.0);
  for (int d = 1; d <= 8; ++d) {
    const CollocationScheme s(d);
    std::vector<double> c(d + 1);
    for (double& ci : c) ci = coef(rng);
    auto poly = [&](double t) {
      double v = 0.0;
      for (int k = d; k >= 0; --k) v = v * t + c[k];
      return v;
    };
    auto dpoly = [&](double t) {
      double v = 0.0;
      for (int k = d; k >= 1; --k) v = v * t + k * c[k];
      return v;
    };
    std::vector<std::vector<double>> samples;
    for (double t : s.support) samples.push_back({poly(t)});
    double max_err = 0.0, max_derr = 0.0;
    for (int q = 0; q < 100; ++q) {
      const double t = unit(rng);
      max_err = std::max(max_err, std::abs(barycentric_interpolate(s.support, s.bary_weights, samples, t)[0] - poly(t)));
      const auto dl = barycentric_derivative_basis(s.support, s.bary_weights, t);
      double dv = 0.0;
      for (std::size_t i = 0; i < dl.size(); ++i) dv += dl[i] * samples[i][0];
      max_derr = std::max(max_derr, std::abs(dv - dpoly(t)));
    }
    EXPECT_LT(max_err, 1e-12) << "d=" << d;
    EXPECT_LT(max_derr, 1e-9) << "d=" << d;
  }
}

TEST(Barycentric, MatchesNaiveLagrangeSum) {
  std::mt19937 rng(11);
  std::uniform_real_distribution<double> val(-5.0, 5.0), unit(0.0, 1.0);
  for (int trial = 0; trial < 50; ++trial) {
    const int d = 1 + trial % 8;
    const CollocationScheme s(d);
    std::vector<std::vector<double>> samples;
    for (std::size_t i = 0; i < s.support.size(); ++i) samples.push_back({val(rng)});
    const double t = unit(rng);
    double naive = 0.0;
    for (std::size_t i = 0; i < s.support.size(); ++i) {
      double li = 1.0;
      for (std::size_t k = 0; k < s.support.size(); ++k) {
        if (k != i) li *= (t - s.support[k]) / (s.support[i] - s.support[k]);
      }
      naive += li * samples[i][0];
    }
    EXPECT_NEAR(barycentric_interpolate(s.support, s.bary_weights, samples, t)[0], naive, 1e-11);
  }
}

TEST(Barycentric, DerivativeBasisAtNodesMatchesDiffMatrix) {
  const CollocationScheme s(5);
  for (std::size_t j = 0; j < s.nodes.size(); ++j) {
    const auto dl = barycentric_derivative_basis(s.support, s.bary_weights, s.nodes[j]);
    for (std::size_t i = 0; i < dl.size(); ++i) EXPECT_NEAR(dl[i], s.diff_matrix(j, i), 1e-12);
  }
}

TEST(Barycentric, SizeMismatchIsRejected) {
  const CollocationScheme s(2);
  std::vector<std::vector<double>> samples{{1.0}, {2.0}};
  EXPECT_THROW(barycentric_interpolate(s.support, s.bary_weights, samples, 0.5), DimensionError);
}

TEST(SchemeTable, PrintsSeventeenDigits) {
  const CollocationScheme s(2);
  const auto table = format_scheme_table(s);
  EXPECT_NE(table.find("0.33333333333333331"), std::string::npos) << table;
  EXPECT_NE(table.find("0.75"), std::string::npos);
}

TEST(SchemeCache, SharesInstances) {
  SchemeCache cache;
  auto a = cache.get(3);
  auto b = cache.get(3);
  EXPECT_EQ(a.get(), b.get());
  EXPECT_EQ(a->degree, 3);
}

}  // namespace
}  // namespace tanco::collocation
