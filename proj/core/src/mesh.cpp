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

#include "lpu/mesh.hpp"

#include <cmath>
#include <sstream>
#include <stdexcept>

namespace lpu::mesh {

namespace {

constexpr double kTwoPi = 2.0 * M_PI;

double reduce_angle(double x) {
  double r = std::fmod(x, kTwoPi);
  if (r < 0) r += kTwoPi;
  return r;
}

// Right-multiply columns (j-1, j) of u (0-based) by t.
void apply_right(CMat& u, const Eigen::Matrix2cd& t, int j) {
  const int m = static_cast<int>(u.rows());
  for (int r = 0; r < m; ++r) {
    const Complex a = u(r, j - 1), b = u(r, j);
    u(r, j - 1) = a * t(0, 0) + b * t(1, 0);
    u(r, j) = a * t(0, 1) + b * t(1, 1);
  }
}

}  // namespace

MeshConfig::MeshConfig(int mode_count) : mode_count_(mode_count) {
  if (mode_count < 2) throw std::invalid_argument("MeshConfig: mode_count must be >= 2");
  for (int i = 1; i <= mode_count - 1; ++i)
    for (int j = i; j <= mode_count - 1; ++j) params_.push_back({i, j, 0.0, 0.0});
}

MeshConfig MeshConfig::all_bar(int mode_count) {
  MeshConfig c(mode_count);
  for (auto& p : c.params_) p.alpha = M_PI;
  return c;
}

int MeshConfig::position_index(int row, int diag) const {
  const int m = mode_count_;
  if (row < 1 || diag < row || diag > m - 1)
    throw std::out_of_range("MeshConfig: invalid MZI position");
  // row i starts after rows 1..i-1, whose lengths are (m-1), (m-2), ...
  int base = 0;
  for (int i = 1; i < row; ++i) base += m - i;
  return base + (diag - row);
}

const MziParams& MeshConfig::at(int row, int diag) const {
  return params_[static_cast<std::size_t>(position_index(row, diag))];
}

void MeshConfig::set(int row, int diag, double alpha, double phi) {
  auto& p = params_[static_cast<std::size_t>(position_index(row, diag))];
  p.alpha = reduce_angle(alpha);
  p.phi = reduce_angle(phi);
}

void MeshConfig::set_alpha(int row, int diag, double alpha) {
  params_[static_cast<std::size_t>(position_index(row, diag))].alpha = reduce_angle(alpha);
}

void MeshConfig::set_phi(int row, int diag, double phi) {
  params_[static_cast<std::size_t>(position_index(row, diag))].phi = reduce_angle(phi);
}

Eigen::Matrix2cd mzi_transfer(double alpha, double phi) {
  // coupler * diag(e^{i alpha}, 1) * coupler * diag(e^{i phi}, 1)
  // = i e^{i alpha/2} [[e^{i phi} sin(a/2), cos(a/2)],
  //                    [e^{i phi} cos(a/2), -sin(a/2)]]
  alpha = reduce_angle(alpha);
  phi = reduce_angle(phi);
  const double h = 0.5 * alpha;
  const Complex g = Complex(0, 1) * std::exp(Complex(0, h));
  const Complex e = std::exp(Complex(0, phi));
  const double s = std::sin(h), c = std::cos(h);
  Eigen::Matrix2cd t;
  t << g * e * s, g * c, g * e * c, -g * s;
  return t;
}

CMat compose(const MeshConfig& config) {
  const int m = config.mode_count();
  CMat u = CMat::Identity(m, m);
  // Light traverses row m-1 first; rightmost factor acts first, so build
  // U = R_1 R_2 ... R_{m-1} by right-multiplying in traversal order reversed.
  for (int i = 1; i <= m - 1; ++i) {
    for (int j = m - 1; j >= i; --j) {
      const MziParams& p = config.at(i, j);
      apply_right(u, mzi_transfer(p.alpha, p.phi), j);
    }
  }
  require_unitary(u, 1e-9);
  return u;
}

Decomposition decompose(const CMat& u) {
  require_unitary(u);
  const int m = static_cast<int>(u.rows());
  CMat v = u;
  MeshConfig config(m);
  // Null above-diagonal entries row by row, right to left. Entry (r, c)
  // [1-based, c > r] is nulled by the MZI at position (c-r, c-1) acting on
  // columns (c-1, c); alpha in [0, pi], with the bar point and phi = 0 at
  // zero-amplitude ties.
  for (int r = 1; r <= m - 1; ++r) {
    for (int c = m; c >= r + 1; --c) {
      const int i = c - r, j = c - 1;
      const Complex p = v(r - 1, c - 2);
      const Complex q = v(r - 1, c - 1);
      double alpha, phi;
      if (std::abs(q) < 1e-14) {
        alpha = M_PI;
        phi = 0.0;
      } else {
        phi = reduce_angle(std::arg(p) - std::arg(q));
        alpha = 2.0 * std::atan2(std::abs(p), std::abs(q));
      }
      config.set(i, j, alpha, phi);
      apply_right(v, mzi_transfer(alpha, phi).adjoint().eval(), c - 1);
      v(r - 1, c - 1) = 0.0;
    }
  }
  Decomposition d;
  d.config = config;
  d.residual_diag = v.diagonal();
  for (int k = 0; k < m; ++k) d.residual_diag(k) /= std::abs(d.residual_diag(k));
  return d;
}

MeshConfig haar_sample(int mode_count, Rng& rng) {
  if (mode_count < 2) throw std::invalid_argument("haar_sample: mode_count must be >= 2");
  MeshConfig c(mode_count);
  for (int i = 1; i <= mode_count - 1; ++i) {
    for (int j = i; j <= mode_count - 1; ++j) {
      const double r = rng.beta_1_k(mode_count - j);
      c.set(i, j, 2.0 * std::asin(std::sqrt(r)), rng.uniform(0.0, kTwoPi));
    }
  }
  return c;
}

double unitary_fidelity(const CMat& u, const CMat& v) {
  if (u.rows() != v.rows() || u.cols() != v.cols())
    throw std::invalid_argument("unitary_fidelity: dimension mismatch");
  const Complex tr = (u.adjoint() * v).trace();
  const double x = std::abs(tr) / static_cast<double>(u.rows());
  return x * x;
}

GaugeFixResult gauge_fix(const CMat& u, const CMat& ref) {
  if (u.rows() != ref.rows() || u.cols() != ref.cols())
    throw std::invalid_argument("gauge_fix: dimension mismatch");
  const int m = static_cast<int>(u.rows());

  auto solve = [&](Eigen::VectorXd th, Eigen::VectorXd ps, int iters) {
    for (int it = 0; it < iters; ++it) {
      for (int r = 0; r < m; ++r) {
        Complex s = 0;
        for (int c = 0; c < m; ++c)
          s += std::conj(ref(r, c)) * u(r, c) * std::exp(Complex(0, ps(c)));
        th(r) = std::abs(s) > 0 ? -std::arg(s) : 0.0;
      }
      for (int c = 0; c < m; ++c) {
        Complex s = 0;
        for (int r = 0; r < m; ++r)
          s += std::conj(ref(r, c)) * std::exp(Complex(0, th(r))) * u(r, c);
        ps(c) = std::abs(s) > 0 ? -std::arg(s) : 0.0;
      }
    }
    Complex tr = 0;
    for (int r = 0; r < m; ++r)
      for (int c = 0; c < m; ++c)
        tr += std::conj(ref(r, c)) * std::exp(Complex(0, th(r))) * u(r, c) *
              std::exp(Complex(0, ps(c)));
    return std::tuple<double, Eigen::VectorXd, Eigen::VectorXd>(tr.real(), th, ps);
  };

  auto [best_o, best_th, best_ps] =
      solve(Eigen::VectorXd::Zero(m), Eigen::VectorXd::Zero(m), 400);
  Rng restart_rng(0x9a4e1c2b5d3f7081ULL);
  for (int trial = 0; trial < 24; ++trial) {
    Eigen::VectorXd th(m), ps(m);
    for (int k = 0; k < m; ++k) {
      th(k) = restart_rng.uniform(0.0, kTwoPi);
      ps(k) = restart_rng.uniform(0.0, kTwoPi);
    }
    auto [o, t2, p2] = solve(th, ps, 400);
    if (o > best_o) {
      best_o = o;
      best_th = t2;
      best_ps = p2;
    }
  }

  GaugeFixResult res;
  res.left_phases = CVec(m);
  res.right_phases = CVec(m);
  for (int k = 0; k < m; ++k) {
    res.left_phases(k) = std::exp(Complex(0, best_th(k)));
    res.right_phases(k) = std::exp(Complex(0, best_ps(k)));
  }
  res.fixed = res.left_phases.asDiagonal() * u * res.right_phases.asDiagonal();
  res.overlap = best_o;
  return res;
}

}  // namespace lpu::mesh
