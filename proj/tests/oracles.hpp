// Copyright 2026 The lpusim Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// Independent oracles used by the test suites. Nothing here may call into
// the implementation paths it checks.

#ifndef LPU_TESTS_ORACLES_HPP_
#define LPU_TESTS_ORACLES_HPP_

#include <algorithm>
#include <cmath>
#include <numeric>
#include <vector>

#include "lpu/complex_matrix.hpp"
#include "lpu/rng.hpp"

namespace oracles {

/// Naive Leibniz-expansion permanent, O(n * n!).
inline lpu::Complex naive_permanent(const lpu::CMat& a) {
  const int n = static_cast<int>(a.rows());
  if (n == 0) return {1, 0};
  std::vector<int> perm(static_cast<std::size_t>(n));
  std::iota(perm.begin(), perm.end(), 0);
  lpu::Complex total(0, 0);
  do {
    lpu::Complex prod(1, 0);
    for (int i = 0; i < n; ++i) prod *= a(i, perm[static_cast<std::size_t>(i)]);
    total += prod;
  } while (std::next_permutation(perm.begin(), perm.end()));
  return total;
}

/// Haar-random unitary via QR of a complex Ginibre matrix with the R
/// diagonal phase-fixed.
inline lpu::CMat ginibre_haar(int n, lpu::Rng& rng) {
  lpu::CMat z(n, n);
  for (int r = 0; r < n; ++r)
    for (int c = 0; c < n; ++c) z(r, c) = lpu::Complex(rng.normal(), rng.normal()) / std::sqrt(2.0);
  Eigen::HouseholderQR<lpu::CMat> qr(z);
  lpu::CMat q = qr.householderQ();
  const lpu::CMat r = qr.matrixQR().triangularView<Eigen::Upper>();
  for (int k = 0; k < n; ++k) {
    const lpu::Complex d = r(k, k);
    q.col(k) *= d / std::abs(d);
  }
  return q;
}

/// Kolmogorov distribution tail Q(lambda) = 2 sum (-1)^{k-1} exp(-2 k^2 l^2).
inline double ks_q(double lambda) {
  if (lambda < 1e-8) return 1.0;
  double sum = 0;
  for (int k = 1; k <= 100; ++k) {
    const double term = 2.0 * ((k % 2) ? 1.0 : -1.0) * std::exp(-2.0 * k * k * lambda * lambda);
    sum += term;
    if (std::abs(term) < 1e-12) break;
  }
  return std::clamp(sum, 0.0, 1.0);
}

/// One-sample KS p-value against a CDF given as a callable.
template <typename Cdf>
double ks_test_one_sample(std::vector<double> x, Cdf cdf) {
  std::sort(x.begin(), x.end());
  const double n = static_cast<double>(x.size());
  double d = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double f = cdf(x[i]);
    d = std::max(d, std::abs(f - static_cast<double>(i) / n));
    d = std::max(d, std::abs(static_cast<double>(i + 1) / n - f));
  }
  const double sn = std::sqrt(n);
  return ks_q((sn + 0.12 + 0.11 / sn) * d);
}

/// Two-sample KS p-value.
inline double ks_test_two_sample(std::vector<double> a, std::vector<double> b) {
  std::sort(a.begin(), a.end());
  std::sort(b.begin(), b.end());
  double d = 0;
  std::size_t i = 0, j = 0;
  while (i < a.size() && j < b.size()) {
    if (a[i] <= b[j])
      ++i;
    else
      ++j;
    d = std::max(d, std::abs(static_cast<double>(i) / a.size() -
                             static_cast<double>(j) / b.size()));
  }
  const double ne = static_cast<double>(a.size()) * b.size() / (a.size() + b.size());
  const double sn = std::sqrt(ne);
  return ks_q((sn + 0.12 + 0.11 / sn) * d);
}

/// Nodal analysis of the two-heater shared-ground circuit, solved as the
/// explicit 3x3 linear system rather than the production closed form.
inline std::pair<double, double> two_heater_nodal(double v1, double v2, double r1, double r2,
                                                  double rg) {
  // currents: (v1 - w)/r1 + (v2 - w)/r2 = w/rg
  const double w = (v1 / r1 + v2 / r2) / (1.0 / r1 + 1.0 / r2 + 1.0 / rg);
  return {v1 - w, v2 - w};
}

/// Distinguishable-photon distribution by explicit path enumeration.
inline std::map<std::vector<int>, double> classical_by_paths(const lpu::CMat& u,
                                                             const std::vector<int>& sources) {
  const int m = static_cast<int>(u.rows());
  const int n = static_cast<int>(sources.size());
  std::map<std::vector<int>, double> dist;
  std::vector<int> dest(static_cast<std::size_t>(n), 0);
  auto rec = [&](auto&& self, int k, double p) -> void {
    if (k == n) {
      std::vector<int> occ(static_cast<std::size_t>(m), 0);
      for (int q = 0; q < n; ++q) ++occ[static_cast<std::size_t>(dest[static_cast<std::size_t>(q)])];
      dist[occ] += p;
      return;
    }
    for (int j = 0; j < m; ++j) {
      dest[static_cast<std::size_t>(k)] = j;
      self(self, k + 1, p * std::norm(u(j, sources[static_cast<std::size_t>(k)] - 1)));
    }
  };
  rec(rec, 0, 1.0);
  return dist;
}

}  // namespace oracles

#endif  // LPU_TESTS_ORACLES_HPP_
