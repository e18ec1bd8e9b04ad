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

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <iostream>
#include <numbers>
#include <sstream>
#include <stdexcept>

#include "tanco/errors.hpp"

namespace tanco::collocation {
namespace {

constexpr double kCoincidenceTol = 1e-14;

void check_distinct(std::span<const double> pts, const char* what) {
  for (std::size_t i = 0; i < pts.size(); ++i) {
    for (std::size_t k = i + 1; k < pts.size(); ++k) {
      if (std::abs(pts[i] - pts[k]) < kCoincidenceTol) {
        throw DegenerateNodesError(std::string(what) + ": points " + std::to_string(i) +
                                   " and " + std::to_string(k) + " coincide");
      }
    }
  }
}

// Gauss-Legendre rule with m points mapped to [0, 1].
void gauss_legendre_unit(int m, std::vector<double>& x, std::vector<double>& w) {
  x.resize(m);
  w.resize(m);
  for (int i = 0; i < m; ++i) {
    double s = std::cos(std::numbers::pi * (i + 0.75) / (m + 0.5));
    double dp = 0.0;
    for (int it = 0; it < 100; ++it) {
      const double p = legendre(m, s);
      const double pm1 = legendre(m - 1, s);
      dp = m * (s * p - pm1) / (s * s - 1.0);
      const double step = p / dp;
      s -= step;
      if (std::abs(step) < 1e-16) break;
    }
    const double p = legendre(m, s);
    const double pm1 = legendre(m - 1, s);
    dp = m * (s * p - pm1) / (s * s - 1.0);
    x[i] = 0.5 * (s + 1.0);
    w[i] = 1.0 / ((1.0 - s * s) * dp * dp);  // 2/((1-s^2)P'^2), halved by the map
  }
}

// Refines a bracketed sign change of the Radau polynomial to full precision.
double refine_root(int degree, double lo, double hi) {
  double flo = flipped_radau_polynomial(degree, lo);
  if (flo == 0.0) return lo;
  for (int it = 0; it < 200 && hi - lo > 1e-16; ++it) {
    const double mid = 0.5 * (lo + hi);
    if (mid <= lo || mid >= hi) break;
    const double fm = flipped_radau_polynomial(degree, mid);
    if (fm == 0.0) return mid;
    if ((fm < 0.0) == (flo < 0.0)) {
      lo = mid;
      flo = fm;
    } else {
      hi = mid;
    }
  }
  const double flo_abs = std::abs(flipped_radau_polynomial(degree, lo));
  const double fhi_abs = std::abs(flipped_radau_polynomial(degree, hi));
  return flo_abs <= fhi_abs ? lo : hi;
}

}  // namespace

double legendre(int n, double s) {
  if (n == 0) return 1.0;
  double p0 = 1.0;
  double p1 = s;
  for (int k = 2; k <= n; ++k) {
    const double p2 = ((2.0 * k - 1.0) * s * p1 - (k - 1.0) * p0) / k;
    p0 = p1;
    p1 = p2;
  }
  return p1;
}

double flipped_radau_polynomial(int degree, double s) {
  return legendre(degree - 1, s) - legendre(degree, s);
}

std::vector<double> compute_lgr_nodes(int degree) {
  if (degree < 1) {
    throw InvalidDegreeError("collocation degree must be >= 1, got " + std::to_string(degree));
  }
  if (degree > kMaxWellConditionedDegree) {
    std::cerr << "warning: collocation degree " << degree
              << " exceeds 20; differentiation matrices may be ill-conditioned\n";
  }
  std::vector<double> roots;
  roots.reserve(degree);
  if (degree > 1) {
    // Interior roots cluster like 1/d^2 near the ends; this grid resolves them.
    const int cells = 64 * degree * degree + 64;
    const double step = 2.0 / cells;
    double a = -1.0;
    double fa = flipped_radau_polynomial(degree, a);
    for (int c = 1; c < cells; ++c) {
      const double b = -1.0 + c * step;
      const double fb = flipped_radau_polynomial(degree, b);
      if (fa == 0.0) {
        roots.push_back(a);
      } else if ((fa < 0.0) != (fb < 0.0) && fb != 0.0) {
        roots.push_back(refine_root(degree, a, b));
      }
      a = b;
      fa = fb;
    }
    if (fa == 0.0) roots.push_back(a);
  }
  if (static_cast<int>(roots.size()) != degree - 1) {
    throw std::logic_error("compute_lgr_nodes: found " + std::to_string(roots.size()) +
                           " interior roots for degree " + std::to_string(degree));
  }
  std::vector<double> nodes;
  nodes.reserve(degree);
  for (double s : roots) nodes.push_back(0.5 * (s + 1.0));
  nodes.push_back(1.0);
  return nodes;
}

std::vector<double> barycentric_weights(std::span<const double> support) {
  check_distinct(support, "barycentric_weights");
  std::vector<double> w(support.size(), 1.0);
  for (std::size_t i = 0; i < support.size(); ++i) {
    for (std::size_t k = 0; k < support.size(); ++k) {
      if (k != i) w[i] /= (support[i] - support[k]);
    }
  }
  return w;
}

std::vector<double> compute_quadrature_weights(std::span<const double> nodes) {
  if (nodes.empty()) throw DimensionError("compute_quadrature_weights: no nodes");
  check_distinct(nodes, "compute_quadrature_weights");
  const auto bw = barycentric_weights(nodes);
  // Exact for the degree n-1 basis: 2m - 1 >= n - 1.
  const int m = static_cast<int>(nodes.size() / 2) + 1;
  std::vector<double> gx, gw;
  gauss_legendre_unit(m, gx, gw);
  std::vector<double> weights(nodes.size(), 0.0);
  for (int g = 0; g < m; ++g) {
    const auto basis = barycentric_basis(nodes, bw, gx[g]);
    for (std::size_t j = 0; j < nodes.size(); ++j) weights[j] += gw[g] * basis[j];
  }
  return weights;
}

DenseMatrix compute_diff_matrix(std::span<const double> support) {
  if (support.size() < 2) throw DimensionError("compute_diff_matrix: need at least two support points");
  const auto w = barycentric_weights(support);
  const std::size_t n = support.size();
  DenseMatrix D(n - 1, n);
  for (std::size_t j = 1; j < n; ++j) {
    double diag = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      if (i == j) continue;
      const double v = (w[i] / w[j]) / (support[j] - support[i]);
      D(j - 1, i) = v;
      diag -= v;
    }
    D(j - 1, j) = diag;
  }
  return D;
}

std::vector<double> barycentric_basis(std::span<const double> support,
                                      std::span<const double> weights, double t) {
  if (support.size() != weights.size()) {
    throw DimensionError("barycentric_basis: support and weights differ in size");
  }
  std::vector<double> l(support.size(), 0.0);
  for (std::size_t i = 0; i < support.size(); ++i) {
    if (std::abs(t - support[i]) < kCoincidenceTol) {
      l[i] = 1.0;
      return l;
    }
  }
  double sum = 0.0;
  for (std::size_t i = 0; i < support.size(); ++i) {
    l[i] = weights[i] / (t - support[i]);
    sum += l[i];
  }
  for (double& li : l) li /= sum;
  return l;
}

std::vector<double> barycentric_derivative_basis(std::span<const double> support,
                                                 std::span<const double> weights,
                                                 double t) {
  if (support.size() != weights.size()) {
    throw DimensionError("barycentric_derivative_basis: support and weights differ in size");
  }
  const std::size_t n = support.size();
  std::vector<double> dl(n, 0.0);
  for (std::size_t k = 0; k < n; ++k) {
    if (std::abs(t - support[k]) < kCoincidenceTol) {
      double diag = 0.0;
      for (std::size_t i = 0; i < n; ++i) {
        if (i == k) continue;
        dl[i] = (weights[i] / weights[k]) / (support[k] - support[i]);
        diag -= dl[i];
      }
      dl[k] = diag;
      return dl;
    }
  }
  std::vector<double> a(n);
  double s = 0.0;
  double ds = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    a[i] = weights[i] / (t - support[i]);
    s += a[i];
    ds -= a[i] / (t - support[i]);
  }
  for (std::size_t i = 0; i < n; ++i) {
    const double da = -a[i] / (t - support[i]);
    dl[i] = (da * s - a[i] * ds) / (s * s);
  }
  return dl;
}

std::vector<double> barycentric_interpolate(std::span<const double> support,
                                            std::span<const double> weights,
                                            const std::vector<std::vector<double>>& samples,
                                            double t) {
  if (samples.size() != support.size()) {
    throw DimensionError("barycentric_interpolate: expected " + std::to_string(support.size()) +
                         " samples, got " + std::to_string(samples.size()));
  }
  const std::size_t dim = samples.empty() ? 0 : samples.front().size();
  for (const auto& s : samples) {
    if (s.size() != dim) throw DimensionError("barycentric_interpolate: ragged samples");
  }
  const auto l = barycentric_basis(support, weights, t);
  std::vector<double> out(dim, 0.0);
  for (std::size_t i = 0; i < samples.size(); ++i) {
    if (l[i] == 0.0) continue;
    for (std::size_t c = 0; c < dim; ++c) out[c] += l[i] * samples[i][c];
  }
  return out;
}

DenseMatrix interpolation_matrix(const CollocationScheme& from, std::span<const double> queries) {
  DenseMatrix m(queries.size(), from.support.size());
  for (std::size_t r = 0; r < queries.size(); ++r) {
    const auto l = barycentric_basis(from.support, from.bary_weights, queries[r]);
    for (std::size_t c = 0; c < l.size(); ++c) m(r, c) = l[c];
  }
  return m;
}

CollocationScheme::CollocationScheme(int d)
    : degree(d), nodes(compute_lgr_nodes(d)) {
  support.reserve(nodes.size() + 1);
  support.push_back(0.0);
  support.insert(support.end(), nodes.begin(), nodes.end());
  quad_weights = compute_quadrature_weights(nodes);
  diff_matrix = compute_diff_matrix(support);
  bary_weights = barycentric_weights(support);
}

std::string format_scheme_table(const CollocationScheme& scheme) {
  std::ostringstream os;
  os << std::setprecision(17);
  os << "# flipped LGR scheme, degree " << scheme.degree << "\n";
  os << "j,node,quad_weight\n";
  for (std::size_t j = 0; j < scheme.nodes.size(); ++j) {
    os << j << ',' << scheme.nodes[j] << ',' << scheme.quad_weights[j] << '\n';
  }
  os << "i,support,bary_weight\n";
  for (std::size_t i = 0; i < scheme.support.size(); ++i) {
    os << i << ',' << scheme.support[i] << ',' << scheme.bary_weights[i] << '\n';
  }
  return os.str();
}

std::shared_ptr<const CollocationScheme> SchemeCache::get(int degree) {
  std::lock_guard<std::mutex> lock(mutex_);
  auto it = schemes_.find(degree);
  if (it != schemes_.end()) return it->second;
  auto scheme = std::make_shared<const CollocationScheme>(degree);
  schemes_.emplace(degree, scheme);
  return scheme;
}

}  // namespace tanco::collocation
