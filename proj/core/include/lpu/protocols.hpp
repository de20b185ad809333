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

#ifndef LPU_PROTOCOLS_HPP_
#define LPU_PROTOCOLS_HPP_

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "lpu/chip.hpp"
#include "lpu/chm.hpp"
#include "lpu/complex_matrix.hpp"
#include "lpu/fock.hpp"
#include "lpu/gates.hpp"
#include "lpu/mesh.hpp"
#include "lpu/rng.hpp"

namespace lpu::protocols {

enum class Backend { kExact, kChip };

struct BosonSamplingOptions {
  int n_unitaries = 100;
  fock::FockState input = fock::FockState::parse("111000");
  long long shots = 10000;
  Backend backend = Backend::kExact;
  /// Extra Gaussian phase error applied per heater on the chip backend.
  double phase_noise = 0.0;
  int workers = 1;
};

struct BosonSamplingResult {
  std::vector<double> fidelities;  // per unitary, collision-free statistical fidelity
  double mean = 0;
  double stddev = 0;
};

/// Haar-samples mesh settings, draws counts, and compares empirical vs exact
/// collision-free distributions. Campaign members get seeds derived from the
/// master seed, so the worker count never changes results.
BosonSamplingResult boson_sampling_campaign(const BosonSamplingOptions& opt,
                                            std::uint64_t master_seed,
                                            const chip::ChipModel* chip_model = nullptr);

struct BayesianTrace {
  std::vector<double> confidence;  // running posterior for the quantum model
  int events_to_099 = -1;          // -1 when never reached
};

/// Sequential Bayesian model comparison between two distributions over the
/// same outcome set; posterior after each event, starting from `prior`.
BayesianTrace bayesian_verify(const std::vector<fock::FockState>& events,
                              const fock::OutcomeDistribution& p_quantum,
                              const fock::OutcomeDistribution& p_classical,
                              double prior = 0.5);

struct ManifoldPoint {
  double theta1, theta2;
  double value;
};

/// Two-photon coincidence probability surface over the F6 two-parameter
/// family grid (exact backend).
std::vector<ManifoldPoint> two_photon_manifold(int grid_points, int in_a, int in_b, int out_a,
                                               int out_b);

/// Quantum ZTL-violation surface for a periodic input, suppression predicate
/// fixed at the Fourier point.
std::vector<ManifoldPoint> ztl_violation_manifold(int grid_points, const fock::FockState& input);

// --- Bell-state generator measurement machinery -------------------------

struct BsgCorrelations {
  double zz, xx, zx, zy;
};

/// Exact correlations of the heralded state.
BsgCorrelations bsg_exact_correlations(const GateSpec& gate);

/// Two-stage Sagnac record for the sigma_x measurement on qubit a. Stage 1
/// injects via mode 1 and observes the E- outcome; stage 2 injects via mode
/// 2 with the phi(3,5) offset and observes E+. Counts are split by the
/// qubit-b x-basis outcome.
struct SagnacCounts {
  std::array<long long, 2> stage1_by_b{};  // E- events, b in {+,-}
  std::array<long long, 2> stage2_by_b{};  // E+ events
  long long stage1_total = 0;              // heralded events in each stage
  long long stage2_total = 0;
};

/// POVM elements {E+, E-, E1} realized by the backward pass through the 1/3
/// and 1/2 MZIs at the input facet.
std::array<Eigen::Matrix2cd, 3> sagnac_povm();

SagnacCounts simulate_sagnac(const GateSpec& gate, long long events_per_stage, Rng& rng);

/// <sigma_x> on qubit a from the Sagnac record and the sigma_z marginal,
/// via <sigma_x~> = (1/sqrt3) <sigma_x> / ((1/3) p1 + p0).
double sagnac_x_expectation(const std::array<double, 2>& z_marginal_a, const SagnacCounts& counts);

/// <sigma_x (x) sigma_x> combining the per-b splits.
double sagnac_xx_correlation(const std::array<double, 2>& z_marginal_a, const SagnacCounts& counts);

/// Heralded run on the virtual chip: herald modes must register exactly one
/// click each and the computational filter keeps one click per qubit pair,
/// which also strips the |2200>/|0022> source terms.
struct ChipGateRun {
  std::map<std::string, long long> logical_counts;
  long long heralded_events = 0;
  long long shots = 0;
};
ChipGateRun run_bsg_on_chip(const GateSpec& gate, const chip::ChipModel& chip_model,
                            const chip::SourceModel& source, long long shots, Rng& rng);

}  // namespace lpu::protocols

#endif  // LPU_PROTOCOLS_HPP_
