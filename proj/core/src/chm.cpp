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

#include "lpu/chm.hpp"

#include <cmath>
#include <numeric>
#include <stdexcept>

namespace lpu::protocols {

namespace {

CMat fourier(int n) {
  CMat f(n, n);
  const double norm = 1.0 / std::sqrt(static_cast<double>(n));
  for (int j = 0; j < n; ++j)
    for (int k = 0; k < n; ++k)
      f(j, k) = norm * std::exp(Complex(0, 2.0 * M_PI * j * k / n));
  return f;
}

CMat f6_two_param(double t1, double t2) {
  // F6 entrywise-masked by exp(i (j mod 2) c_{k mod 3}) with c = (0, a, b),
  // a = theta1 - pi, b = theta2. Unitary for all parameters because the mask
  // respects the Cooley-Tukey factor structure of F6.
  const double a = t1 - M_PI, b = t2;
  CMat f = fourier(6);
  for (int j = 0; j < 6; ++j) {
    if (j % 2 == 0) continue;
    for (int k = 0; k < 6; ++k) {
      const int k2 = k % 3;
      if (k2 == 1) f(j, k) *= std::exp(Complex(0, a));
      if (k2 == 2) f(j, k) *= std::exp(Complex(0, b));
    }
  }
  return f;
}

CMat s6_isolated() {
  const Complex w = std::exp(Complex(0, 2.0 * M_PI / 3.0));
  const Complex w2 = w * w;
  CMat s(6, 6);
  const Complex tbl[6][6] = {
      {1, 1, 1, 1, 1, 1},
      {1, 1, w, w, w2, w2},
      {1, w, 1, w2, w2, w},
      {1, w, w2, 1, w, w2},
      {1, w2, w2, w, 1, w},
      {1, w2, w, w2, w, 1},
  };
  for (int r = 0; r < 6; ++r)
    for (int c = 0; c < 6; ++c) s(r, c) = tbl[r][c] / std::sqrt(6.0);
  return s;
}

CMat g6_instance() {
  // Published to three decimals; unitary only to that precision.
  const double u = 0.408;
  const Complex tbl[6][6] = {
      {u, u, u, u, u, u},
      {u, {-0.085, 0.399}, {-0.373, -0.165}, {-0.389, -0.124}, {0.137, -0.385}, {0.303, 0.274}},
      {u, {-0.121, -0.390}, {0.407, 0.028}, {-0.196, 0.358}, {-0.252, -0.321}, {-0.247, 0.325}},
      {u, {-0.333, -0.236}, {-0.408, 0.021}, {0.076, 0.401}, {0.349, 0.212}, {-0.093, -0.398}},
      {u, {-0.269, 0.308}, {0.370, 0.173}, {-0.198, -0.357}, {-0.293, 0.285}, {-0.019, -0.408}},
      {u, {0.400, -0.081}, {-0.404, -0.057}, {0.298, -0.279}, {-0.350, 0.210}, {-0.352, 0.206}},
  };
  CMat g(6, 6);
  for (int r = 0; r < 6; ++r)
    for (int c = 0; c < 6; ++c) g(r, c) = tbl[r][c];
  return g;
}

}  // namespace

ChmDescriptor ChmDescriptor::parse(const std::string& name) {
  if (name.rfind("fourier", 0) == 0) {
    const int n = name.size() > 7 ? std::stoi(name.substr(7)) : 6;
    if (n < 1) throw std::invalid_argument("fourier dimension must be positive");
    return ChmDescriptor{ChmFamily::kFourier, n, 0, 0};
  }
  if (name == "s6") return s6();
  if (name == "g6") return g6();
  throw std::invalid_argument("unknown CHM name: " + name);
}

CMat chm(const ChmDescriptor& d) {
  switch (d.family) {
    case ChmFamily::kFourier:
      if (d.dim < 1) throw std::invalid_argument("chm: dimension must be positive");
      return fourier(d.dim);
    case ChmFamily::kF6TwoParam: {
      const double lo = -1e-12, hi = 2.0 * M_PI + 1e-12;
      if (d.theta1 < lo || d.theta1 >= hi || d.theta2 < lo || d.theta2 >= hi)
        throw std::invalid_argument("chm: parameters outside [0, 2pi)");
      return f6_two_param(d.theta1, d.theta2);
    }
    case ChmFamily::kS6Isolated:
      return s6_isolated();
    case ChmFamily::kG6Instance:
      return g6_instance();
  }
  throw std::invalid_argument("chm: bad descriptor");
}

bool is_chm(const CMat& u, double tol) {
  if (u.rows() != u.cols()) return false;
  if (unitarity_deviation(u) > tol) return false;
  const double target = 1.0 / static_cast<double>(u.rows());
  for (int r = 0; r < u.rows(); ++r)
    for (int c = 0; c < u.cols(); ++c)
      if (std::abs(std::norm(u(r, c)) - target) > tol) return false;
  return true;
}

int input_period(const fock::FockState& input) {
  // proper period only: every state repeats at p = m trivially
  const int m = input.modes();
  for (int p = 1; p < m; ++p) {
    if (m % p != 0) continue;
    bool periodic = true;
    for (int k = 0; k < m && periodic; ++k)
      periodic = input.occupations[static_cast<std::size_t>(k)] ==
                 input.occupations[static_cast<std::size_t>((k + p) % m)];
    if (periodic) return p;
  }
  throw std::invalid_argument("ztl: input state is aperiodic");
}

bool ztl_suppressed(const fock::FockState& input, const fock::ModeAssignment& output) {
  const int period = input_period(input);
  const int n = input.total_photons();
  if (static_cast<int>(output.size()) != n)
    throw std::invalid_argument("ztl_suppressed: output photon number mismatch");
  const long long sum = std::accumulate(output.begin(), output.end(), 0LL);
  return (static_cast<long long>(period) * sum) % n != 0;
}

double ztl_violation(const std::map<fock::FockState, long long>& counts,
                     const fock::FockState& input) {
  long long total = 0, suppressed = 0;
  for (const auto& [state, c] : counts) {
    total += c;
    if (ztl_suppressed(input, fock::assignment_from_state(state))) suppressed += c;
  }
  if (total == 0) throw std::invalid_argument("ztl_violation: zero total events");
  return static_cast<double>(suppressed) / static_cast<double>(total);
}

double ztl_violation(const fock::OutcomeDistribution& dist, const fock::FockState& input) {
  double total = 0, suppressed = 0;
  for (const auto& [state, p] : dist.p) {
    total += p;
    if (ztl_suppressed(input, fock::assignment_from_state(state))) suppressed += p;
  }
  if (total <= 0) throw std::invalid_argument("ztl_violation: zero total mass");
  return suppressed / total;
}

}  // namespace lpu::protocols
