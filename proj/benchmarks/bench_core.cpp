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

#include <benchmark/benchmark.h>

#include "lpu/fock.hpp"
#include "lpu/mesh.hpp"
#include "lpu/rng.hpp"
#include "lpu/tomography.hpp"

namespace {

using namespace lpu;

CMat random_complex(int n, Rng& rng) {
  CMat a(n, n);
  for (int r = 0; r < n; ++r)
    for (int c = 0; c < n; ++c) a(r, c) = Complex(rng.normal(), rng.normal());
  return a;
}

void BM_Permanent(benchmark::State& state) {
  Rng rng(1);
  const CMat a = random_complex(static_cast<int>(state.range(0)), rng);
  for (auto _ : state) benchmark::DoNotOptimize(fock::permanent(a));
}
BENCHMARK(BM_Permanent)->Arg(8)->Arg(12)->Arg(16)->Arg(20)->Unit(benchmark::kMillisecond);

void BM_Compose(benchmark::State& state) {
  Rng rng(2);
  const mesh::MeshConfig cfg = mesh::haar_sample(static_cast<int>(state.range(0)), rng);
  for (auto _ : state) benchmark::DoNotOptimize(mesh::compose(cfg));
}
BENCHMARK(BM_Compose)->Arg(6)->Arg(12)->Arg(24);

void BM_Decompose(benchmark::State& state) {
  Rng rng(3);
  const CMat u = mesh::compose(mesh::haar_sample(static_cast<int>(state.range(0)), rng));
  for (auto _ : state) benchmark::DoNotOptimize(mesh::decompose(u));
}
BENCHMARK(BM_Decompose)->Arg(6)->Arg(12)->Arg(24);

void BM_OutputDistribution(benchmark::State& state) {
  Rng rng(4);
  const CMat u = mesh::compose(mesh::haar_sample(6, rng));
  const fock::FockState in = fock::FockState::parse("111000");
  for (auto _ : state)
    benchmark::DoNotOptimize(fock::output_distribution(u, in, fock::PhotonModel::kQuantum,
                                                       fock::Subspace::kCollisionFree));
}
BENCHMARK(BM_OutputDistribution);

void BM_MleReconstruct(benchmark::State& state) {
  Rng rng(5);
  CMat cnot = CMat::Zero(4, 4);
  cnot(0, 0) = cnot(1, 1) = cnot(2, 3) = cnot(3, 2) = 1;
  const auto settings = tomo::generate_settings(2);
  const auto records = tomo::simulate_counts(tomo::choi_of_unitary(cnot), settings, 10000, rng);
  for (auto _ : state) benchmark::DoNotOptimize(tomo::mle_reconstruct(records, 2));
}
BENCHMARK(BM_MleReconstruct)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
