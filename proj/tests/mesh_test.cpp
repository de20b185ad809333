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

#include <doctest.h>

#include <cmath>

#include "lpu/gates.hpp"
#include "oracles.hpp"

using namespace lpu;

TEST_CASE("mzi_transfer bar and cross points") {
  // alpha = pi: diagonal up to global phase
  const Eigen::Matrix2cd bar = mesh::mzi_transfer(M_PI, 0.0);
  CHECK(std::abs(bar(0, 1)) < 1e-14);
  CHECK(std::abs(bar(1, 0)) < 1e-14);
  CHECK(std::abs(std::abs(bar(0, 0)) - 1.0) < 1e-14);

  // alpha = 0: full cross
  const Eigen::Matrix2cd cross = mesh::mzi_transfer(0.0, 0.0);
  CHECK(std::abs(cross(0, 0)) < 1e-14);
  CHECK(std::abs(cross(1, 1)) < 1e-14);
  CHECK(std::abs(std::abs(cross(0, 1)) - 1.0) < 1e-14);
}

TEST_CASE("mzi_transfer is unitary for arbitrary angles") {
  Rng rng(17);
  for (int k = 0; k < 200; ++k) {
    const Eigen::Matrix2cd t =
        mesh::mzi_transfer(rng.uniform(0, 2 * M_PI), rng.uniform(0, 2 * M_PI));
    const Eigen::Matrix2cd d = t.adjoint() * t - Eigen::Matrix2cd::Identity();
    CHECK(d.cwiseAbs().maxCoeff() < 1e-12);
  }
}

TEST_CASE("all-bar config composes to identity up to diagonal phases") {
  const CMat u = mesh::compose(mesh::MeshConfig::all_bar(6));
  for (int r = 0; r < 6; ++r)
    for (int c = 0; c < 6; ++c) {
      if (r == c)
        CHECK(std::abs(std::abs(u(r, c)) - 1.0) < 1e-12);
      else
        CHECK(std::abs(u(r, c)) < 1e-12);
    }
}

TEST_CASE("compose output passes the unitarity certificate") {
  Rng rng(3);
  for (int k = 0; k < 20; ++k) {
    const CMat u = mesh::compose(mesh::haar_sample(6, rng));
    CHECK(unitarity_deviation(u) <= 1e-9);
  }
}

TEST_CASE("decompose: identity gives the all-bar configuration") {
  const mesh::Decomposition d = mesh::decompose(CMat::Identity(6, 6));
  for (const auto& p : d.config.params()) {
    CHECK(p.alpha == doctest::Approx(M_PI).epsilon(1e-12));
    CHECK(p.phi == doctest::Approx(0.0).epsilon(1e-12));
  }
}

TEST_CASE("decompose rejects non-unitary input with a distance report") {
  CMat bad = CMat::Identity(6, 6);
  bad(0, 0) = 2.0;
  CHECK_THROWS_WITH_AS(mesh::decompose(bad),
                       doctest::Contains("unitarity certificate"), std::invalid_argument);
}

TEST_CASE("decompose round trip: Fourier and 1000 random unitaries") {
  Rng rng(11);
  {
    CMat f6(6, 6);
    for (int j = 0; j < 6; ++j)
      for (int k = 0; k < 6; ++k)
        f6(j, k) = std::exp(Complex(0, 2 * M_PI * j * k / 6.0)) / std::sqrt(6.0);
    const mesh::Decomposition d = mesh::decompose(f6);
    const CMat rebuilt = d.residual_diag.asDiagonal() * mesh::compose(d.config);
    CHECK(mesh::unitary_fidelity(rebuilt, f6) >= 1.0 - 1e-10);
  }
  double worst = 1.0;
  for (int k = 0; k < 1000; ++k) {
    const CMat u = oracles::ginibre_haar(6, rng);
    const mesh::Decomposition d = mesh::decompose(u);
    const CMat rebuilt = d.residual_diag.asDiagonal() * mesh::compose(d.config);
    worst = std::min(worst, mesh::unitary_fidelity(rebuilt, u));
  }
  CHECK(worst >= 1.0 - 1e-9);
}

TEST_CASE("decompose round trip holds for other mode counts") {
  Rng rng(13);
  for (int m : {2, 3, 4, 8}) {
    for (int k = 0; k < 25; ++k) {
      const CMat u = oracles::ginibre_haar(m, rng);
      const mesh::Decomposition d = mesh::decompose(u);
      const CMat rebuilt = d.residual_diag.asDiagonal() * mesh::compose(d.config);
      CHECK(mesh::unitary_fidelity(rebuilt, u) >= 1.0 - 1e-9);
    }
  }
}

TEST_CASE("haar_sample m=2: |U11|^2 uniform on [0,1]") {
  Rng rng(23);
  std::vector<double> xs;
  for (int k = 0; k < 10000; ++k) {
    const CMat u = mesh::compose(mesh::haar_sample(2, rng));
    xs.push_back(std::norm(u(0, 0)));
  }
  const double p = oracles::ks_test_one_sample(xs, [](double x) { return x; });
  CHECK(p > 0.01);
}

TEST_CASE("haar_sample m=6 matches the Ginibre-QR oracle") {
  Rng rng(29);
  std::vector<double> mesh_mod, gin_mod, mesh_arg, gin_arg;
  for (int k = 0; k < 10000; ++k) {
    const CMat u = mesh::compose(mesh::haar_sample(6, rng));
    mesh_mod.push_back(std::norm(u(0, 0)));
    mesh_arg.push_back(std::arg(u(0, 0)));
    const CMat g = oracles::ginibre_haar(6, rng);
    gin_mod.push_back(std::norm(g(0, 0)));
    gin_arg.push_back(std::arg(g(0, 0)));
  }
  CHECK(oracles::ks_test_two_sample(mesh_mod, gin_mod) > 0.01);
  CHECK(oracles::ks_test_two_sample(mesh_arg, gin_arg) > 0.01);
}

TEST_CASE("haar_sample per-entry squared-modulus mean is 1/m") {
  Rng rng(31);
  const int samples = 10000;
  Eigen::MatrixXd acc = Eigen::MatrixXd::Zero(6, 6);
  for (int k = 0; k < samples; ++k) acc += mesh::compose(mesh::haar_sample(6, rng)).cwiseAbs2();
  acc /= samples;
  // var(|U11|^2) = 5/252 under Haar; 3 sigma of the sample mean
  const double sigma = std::sqrt(5.0 / 252.0 / samples);
  for (int r = 0; r < 6; ++r)
    for (int c = 0; c < 6; ++c) CHECK(std::abs(acc(r, c) - 1.0 / 6.0) < 3 * sigma);
}

TEST_CASE("haar_sample is deterministic under a fixed seed") {
  Rng a(777), b(777);
  const mesh::MeshConfig ca = mesh::haar_sample(6, a);
  const mesh::MeshConfig cb = mesh::haar_sample(6, b);
  for (std::size_t k = 0; k < ca.params().size(); ++k) {
    CHECK(ca.params()[k].alpha == cb.params()[k].alpha);
    CHECK(ca.params()[k].phi == cb.params()[k].phi);
  }
}

TEST_CASE("unitary_fidelity basics") {
  Rng rng(5);
  const CMat u = oracles::ginibre_haar(6, rng);
  CHECK(mesh::unitary_fidelity(u, u) == doctest::Approx(1.0).epsilon(1e-12));

  CMat f6(6, 6);
  for (int j = 0; j < 6; ++j)
    for (int k = 0; k < 6; ++k)
      f6(j, k) = std::exp(Complex(0, 2 * M_PI * j * k / 6.0)) / std::sqrt(6.0);
  const double direct = std::norm(f6.trace() / 6.0);
  CHECK(mesh::unitary_fidelity(CMat::Identity(6, 6), f6) == doctest::Approx(direct).epsilon(1e-12));

  // global phase invariance
  CHECK(mesh::unitary_fidelity(u, std::exp(Complex(0, 1.234)) * u) ==
        doctest::Approx(1.0).epsilon(1e-12));

  // invariance under simultaneous left multiplication
  const CMat v = oracles::ginibre_haar(6, rng);
  const CMat w = oracles::ginibre_haar(6, rng);
  CHECK(mesh::unitary_fidelity(w * u, w * v) ==
        doctest::Approx(mesh::unitary_fidelity(u, v)).epsilon(1e-10));

  CHECK_THROWS_AS(mesh::unitary_fidelity(u, CMat::Identity(5, 5)), std::invalid_argument);
}

TEST_CASE("gauge_fix recovers a random diagonal") {
  Rng rng(7);
  const CMat u = oracles::ginibre_haar(6, rng);
  SUBCASE("identity case") {
    const mesh::GaugeFixResult g = mesh::gauge_fix(u, u);
    CHECK(max_abs_diff(g.fixed, u) < 1e-9);
  }
  SUBCASE("random diagonal round trip") {
    CVec d(6);
    for (int k = 0; k < 6; ++k) d(k) = std::exp(Complex(0, rng.uniform(0, 2 * M_PI)));
    const CMat du = d.asDiagonal() * u;
    const mesh::GaugeFixResult g = mesh::gauge_fix(du, u);
    CHECK(max_abs_diff(g.fixed, u) < 1e-10);
  }
}

TEST_CASE("gauge_fix aligns the composed BSG table with the published matrix") {
  const protocols::PublishedGateData d = protocols::published_gate_data("bsg");
  const CMat u = mesh::compose(d.printed_config);
  // entrywise moduli agree with the print directly
  CHECK((u.cwiseAbs() - d.printed_matrix.cwiseAbs()).cwiseAbs().maxCoeff() <= 2e-3);
  const mesh::GaugeFixResult g = mesh::gauge_fix(u, d.comparison_reference);
  CHECK(max_abs_diff(g.fixed, d.comparison_reference) <= 2e-3);
}
