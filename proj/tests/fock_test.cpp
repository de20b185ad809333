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

#include "lpu/fock.hpp"

#include <doctest.h>

#include <cmath>

#include "lpu/chm.hpp"
#include "oracles.hpp"

using namespace lpu;

namespace {

CMat coupler_5050() {
  CMat c(2, 2);
  const double r = 1.0 / std::sqrt(2.0);
  c << r, Complex(0, r), Complex(0, r), r;
  return c;
}

}  // namespace

TEST_CASE("permanent: closed-form cases") {
  CHECK(fock::permanent(CMat::Identity(4, 4)).real() == doctest::Approx(1.0));
  CHECK(fock::permanent(CMat::Ones(5, 5)).real() == doctest::Approx(120.0));
  CMat a(2, 2);
  a << Complex(1, 2), Complex(0, 1), Complex(3, -1), Complex(2, 2);
  const Complex expect = a(0, 0) * a(1, 1) + a(0, 1) * a(1, 0);
  CHECK(std::abs(fock::permanent(a) - expect) < 1e-14);
  CHECK(fock::permanent(CMat::Zero(0, 0)).real() == doctest::Approx(1.0));
  CHECK_THROWS_AS(fock::permanent(CMat::Zero(2, 3)), std::invalid_argument);
}

TEST_CASE("permanent equals the naive expansion oracle up to n = 6") {
  Rng rng(41);
  for (int n = 1; n <= 6; ++n) {
    for (int rep = 0; rep < 8; ++rep) {
      CMat a(n, n);
      for (int r = 0; r < n; ++r)
        for (int c = 0; c < n; ++c) a(r, c) = Complex(rng.normal(), rng.normal());
      const Complex fast = fock::permanent(a);
      const Complex slow = oracles::naive_permanent(a);
      CHECK(std::abs(fast - slow) <= 1e-12 * std::max(1.0, std::abs(slow)));
    }
  }
}

TEST_CASE("transition amplitudes: Hong-Ou-Mandel") {
  const CMat u = coupler_5050();
  const auto in = fock::FockState::parse("11");
  CHECK(std::abs(fock::transition_amplitude(u, in, fock::FockState::parse("11"))) < 1e-14);
  const Complex bunched = fock::transition_amplitude(u, in, fock::FockState::parse("20"));
  CHECK(std::norm(bunched) == doctest::Approx(0.5).epsilon(1e-12));
  CHECK_THROWS_AS(fock::transition_amplitude(u, in, fock::FockState::parse("10")),
                  std::invalid_argument);
}

TEST_CASE("suppressed Fourier outputs have vanishing amplitude") {
  const CMat f6 = protocols::chm(protocols::ChmDescriptor::fourier(6));
  const auto in = fock::FockState::parse("101010");
  for (const auto& out : fock::enumerate_outcomes(6, 3, fock::Subspace::kCollisionFree)) {
    if (!protocols::ztl_suppressed(in, fock::assignment_from_state(out))) continue;
    CHECK(std::abs(fock::transition_amplitude(f6, in, out)) <= 1e-12);
  }
}

TEST_CASE("enumerate_outcomes counts and ordering") {
  CHECK(fock::enumerate_outcomes(6, 3, fock::Subspace::kCollisionFree).size() == 20);
  CHECK(fock::enumerate_outcomes(2, 2, fock::Subspace::kFull).size() == 3);
  CHECK(fock::enumerate_outcomes(6, 6, fock::Subspace::kFull).size() == 462);
  CHECK_THROWS_AS(fock::enumerate_outcomes(3, 4, fock::Subspace::kCollisionFree),
                  std::invalid_argument);

  const auto full = fock::enumerate_outcomes(2, 2, fock::Subspace::kFull);
  CHECK(full[0].str() == "20");
  CHECK(full[1].str() == "11");
  CHECK(full[2].str() == "02");

  // strictly ordered, duplicate-free
  for (int m : {4, 6}) {
    const auto states = fock::enumerate_outcomes(m, 3, fock::Subspace::kFull);
    for (std::size_t k = 1; k < states.size(); ++k)
      CHECK(states[k] < states[k - 1]);
  }
}

TEST_CASE("output_distribution: single photon, quantum equals classical") {
  Rng rng(43);
  const CMat u = oracles::ginibre_haar(5, rng);
  std::vector<int> occ(5, 0);
  occ[2] = 1;
  const fock::FockState in(occ);
  const auto q =
      fock::output_distribution(u, in, fock::PhotonModel::kQuantum, fock::Subspace::kFull);
  const auto c =
      fock::output_distribution(u, in, fock::PhotonModel::kClassical, fock::Subspace::kFull);
  for (const auto& [state, p] : q.p) {
    const int mode =
        static_cast<int>(std::find(state.occupations.begin(), state.occupations.end(), 1) -
                         state.occupations.begin());
    CHECK(p == doctest::Approx(std::norm(u(mode, 2))).epsilon(1e-12));
    CHECK(c.p.at(state) == doctest::Approx(p).epsilon(1e-12));
  }
}

TEST_CASE("output_distribution: Fourier suppression pattern") {
  const CMat f6 = protocols::chm(protocols::ChmDescriptor::fourier(6));
  const auto in = fock::FockState::parse("101010");
  const auto q = fock::output_distribution(f6, in, fock::PhotonModel::kQuantum,
                                           fock::Subspace::kCollisionFree);
  int nonzero = 0;
  for (const auto& [s, p] : q.p) nonzero += p > 1e-12;
  CHECK(nonzero == 8);

  const auto c = fock::output_distribution(f6, in, fock::PhotonModel::kClassical,
                                           fock::Subspace::kCollisionFree);
  for (const auto& [s, p] : c.p) CHECK(p > 1e-12);
}

TEST_CASE("quantum full distribution is normalized for random unitaries") {
  Rng rng(47);
  for (int rep = 0; rep < 6; ++rep) {
    const int m = 4 + static_cast<int>(rng.uniform_int(5));  // 4..8
    const int n = 1 + static_cast<int>(rng.uniform_int(4));  // 1..4
    const CMat u = oracles::ginibre_haar(m, rng);
    std::vector<int> occ(static_cast<std::size_t>(m), 0);
    for (int k = 0; k < n; ++k) ++occ[rng.uniform_int(static_cast<std::uint64_t>(m))];
    const fock::FockState in(occ);
    const auto q =
        fock::output_distribution(u, in, fock::PhotonModel::kQuantum, fock::Subspace::kFull);
    CHECK(q.total_mass() == doctest::Approx(1.0).epsilon(1e-9));
    const auto c =
        fock::output_distribution(u, in, fock::PhotonModel::kClassical, fock::Subspace::kFull);
    CHECK(c.total_mass() == doctest::Approx(1.0).epsilon(1e-9));
  }
}

TEST_CASE("classical distribution ignores entrywise phases") {
  Rng rng(53);
  const CMat u = oracles::ginibre_haar(4, rng);
  CMat v = u;
  for (int r = 0; r < 4; ++r)
    for (int c = 0; c < 4; ++c) v(r, c) *= std::exp(Complex(0, rng.uniform(0, 2 * M_PI)));
  const auto in = fock::FockState::parse("1100");
  const auto cu =
      fock::output_distribution(u, in, fock::PhotonModel::kClassical, fock::Subspace::kFull);
  const auto cv =
      fock::output_distribution(v, in, fock::PhotonModel::kClassical, fock::Subspace::kFull);
  for (const auto& [s, p] : cu.p) CHECK(cv.p.at(s) == doctest::Approx(p).epsilon(1e-10));
}

TEST_CASE("classical distribution matches the path-enumeration oracle") {
  Rng rng(59);
  const CMat u = oracles::ginibre_haar(5, rng);
  const auto in = fock::FockState::parse("10110");
  const auto dist =
      fock::output_distribution(u, in, fock::PhotonModel::kClassical, fock::Subspace::kFull);
  const auto oracle = oracles::classical_by_paths(u, {1, 3, 4});
  for (const auto& [s, p] : dist.p)
    CHECK(p == doctest::Approx(oracle.at(s.occupations)).epsilon(1e-10));
}

TEST_CASE("sample_counts behaviour") {
  Rng rng(61);
  fock::OutcomeDistribution point;
  point.modes = 2;
  point.photons = 1;
  point.p[fock::FockState::parse("10")] = 1.0;
  point.p[fock::FockState::parse("01")] = 0.0;
  const auto counts = fock::sample_counts(point, 100, rng);
  CHECK(counts.at(fock::FockState::parse("10")) == 100);

  fock::OutcomeDistribution uniform;
  uniform.modes = 6;
  uniform.photons = 3;
  int k = 0;
  for (const auto& s : fock::enumerate_outcomes(6, 3, fock::Subspace::kCollisionFree)) {
    uniform.p[s] = 1.0 / 20.0;
    ++k;
  }
  const long long shots = 1000000;
  const auto uc = fock::sample_counts(uniform, shots, rng);
  const double sigma = std::sqrt(shots * 0.05 * 0.95);
  for (const auto& [s, c] : uc) CHECK(std::abs(c - shots / 20.0) < 5 * sigma);

  Rng r1(99), r2(99);
  CHECK(fock::sample_counts(uniform, 5000, r1) == fock::sample_counts(uniform, 5000, r2));

  fock::OutcomeDistribution bad = uniform;
  bad.p.begin()->second = 0.2;
  CHECK_THROWS_AS(fock::sample_counts(bad, 10, rng), std::invalid_argument);
}

TEST_CASE("statistical fidelity") {
  fock::OutcomeDistribution p, q;
  p.modes = q.modes = 2;
  p.photons = q.photons = 1;
  p.p[fock::FockState::parse("10")] = 0.5;
  p.p[fock::FockState::parse("01")] = 0.5;
  CHECK(fock::statistical_fidelity(p, p) == doctest::Approx(1.0));

  q.p[fock::FockState::parse("10")] = 1.0;
  q.p[fock::FockState::parse("01")] = 0.0;
  CHECK(fock::statistical_fidelity(p, q) == doctest::Approx(1.0 / std::sqrt(2.0)));

  fock::OutcomeDistribution r = q;
  r.p[fock::FockState::parse("10")] = 0.0;
  r.p[fock::FockState::parse("01")] = 1.0;
  fock::OutcomeDistribution s = q;
  CHECK(fock::statistical_fidelity(r, s) == doctest::Approx(0.0));

  fock::OutcomeDistribution other;
  other.modes = 3;
  other.photons = 1;
  CHECK_THROWS_AS(fock::statistical_fidelity(p, other), std::invalid_argument);
}
