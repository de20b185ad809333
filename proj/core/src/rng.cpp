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

#include "lpu/rng.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace lpu {

std::uint64_t Rng::derive(std::uint64_t master, std::uint64_t index) {
  // splitmix64 finalizer over master + golden-ratio stride.
  std::uint64_t z = master + 0x9e3779b97f4a7c15ULL * (index + 1);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

std::uint64_t Rng::uniform_int(std::uint64_t n) {
  if (n == 0) throw std::invalid_argument("uniform_int: n must be positive");
  // rejection sampling to avoid modulo bias
  const std::uint64_t limit = UINT64_MAX - UINT64_MAX % n;
  std::uint64_t x;
  do {
    x = engine_();
  } while (x >= limit);
  return x % n;
}

double Rng::normal(double mean, double sigma) {
  if (have_spare_normal_) {
    have_spare_normal_ = false;
    return mean + sigma * spare_normal_;
  }
  double u1, u2;
  do {
    u1 = uniform();
  } while (u1 <= 0.0);
  u2 = uniform();
  const double r = std::sqrt(-2.0 * std::log(u1));
  const double theta = 2.0 * M_PI * u2;
  spare_normal_ = r * std::sin(theta);
  have_spare_normal_ = true;
  return mean + sigma * r * std::cos(theta);
}

long long Rng::poisson(double mean) {
  if (mean < 0) throw std::invalid_argument("poisson: negative mean");
  if (mean == 0) return 0;
  if (mean < 50.0) {
    // Knuth product-of-uniforms
    const double l = std::exp(-mean);
    long long k = 0;
    double p = 1.0;
    do {
      ++k;
      p *= uniform();
    } while (p > l);
    return k - 1;
  }
  // Gaussian approximation with continuity correction; adequate for the
  // count magnitudes simulated here.
  const double x = normal(mean, std::sqrt(mean));
  return std::max(0LL, static_cast<long long>(std::llround(x)));
}

double Rng::beta_1_k(int k) {
  if (k < 1) throw std::invalid_argument("beta_1_k: k must be >= 1");
  // CDF of Beta(1,k) is 1-(1-x)^k
  double u;
  do {
    u = uniform();
  } while (u <= 0.0);
  return 1.0 - std::pow(u, 1.0 / static_cast<double>(k));
}

std::vector<long long> Rng::multinomial(long long shots, const std::vector<double>& p) {
  std::vector<double> cdf(p.size());
  double acc = 0.0;
  for (std::size_t i = 0; i < p.size(); ++i) {
    if (p[i] < 0) throw std::invalid_argument("multinomial: negative probability");
    acc += p[i];
    cdf[i] = acc;
  }
  if (acc <= 0) throw std::invalid_argument("multinomial: zero total mass");
  std::vector<long long> counts(p.size(), 0);
  for (long long s = 0; s < shots; ++s) {
    const double x = uniform() * acc;
    auto it = std::upper_bound(cdf.begin(), cdf.end(), x);
    std::size_t idx = static_cast<std::size_t>(it - cdf.begin());
    if (idx >= p.size()) idx = p.size() - 1;
    ++counts[idx];
  }
  return counts;
}

}  // namespace lpu
