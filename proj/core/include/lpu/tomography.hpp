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

#ifndef LPU_TOMOGRAPHY_HPP_
#define LPU_TOMOGRAPHY_HPP_

#include <functional>
#include <vector>

#include "lpu/complex_matrix.hpp"
#include "lpu/qubits.hpp"
#include "lpu/rng.hpp"

namespace lpu::tomo {

struct Setting {
  std::vector<qubits::StateLabel> prep;  // per qubit, control first
  std::vector<qubits::PauliBasis> meas;
};

/// All six preparations per qubit against all three Pauli bases per qubit:
/// 18 settings for one qubit, 324 truth tables for two.
std::vector<Setting> generate_settings(int n_qubits);

/// Counts for one (preparation, basis) table: n[k] events for projective
/// outcome k (bit per qubit, +1 eigenvector first).
struct CountsRecord {
  Setting setting;
  std::vector<long long> n;
  long long total = 0;
};

/// Hedged frequency (n + beta) / (N + K beta).
double hedged_frequency(long long n, long long total, int outcomes, double beta = 0.1);

/// Choi state of a channel on d-dimensional systems, input slot first,
/// normalized to unit trace; trace preservation reads Tr_out(rho) = I/d.
struct ChoiState {
  CMat rho;
  double min_eigenvalue = 0;
  double ptrace_residual = 0;
  double objective = 0;
  int iterations = 0;
  bool converged = false;
};

CMat choi_of_unitary(const CMat& u);

struct MleOptions {
  double beta = 0.1;            // hedging
  double weight_floor = 1e-8;   // clamp for p(1-p)
  double tol = 1e-10;           // relative objective change
  int max_iterations = 20000;
  const CMat* warm_start = nullptr;
};

/// Weighted least-squares MLE approximation, minimized by FISTA-accelerated
/// projected gradient; projections alternate the positive cone and the
/// partial-trace affine constraint.
ChoiState mle_reconstruct(const std::vector<CountsRecord>& records, int n_qubits,
                          const MleOptions& opt = {});

/// (F_p, F_g) with F_p = Tr(rho ChoiNorm(U)) and F_g = (d F_p + 1)/(d + 1).
std::pair<double, double> process_and_gate_fidelity(const ChoiState& rho, const CMat& ideal);

/// Exact outcome probabilities of a channel given by its (trace-1) Choi
/// state, for synthetic-data generation and tests.
std::vector<double> setting_probabilities(const CMat& choi, const Setting& s);

std::vector<CountsRecord> simulate_counts(const CMat& choi,
                                          const std::vector<Setting>& settings,
                                          long long shots_per_setting, Rng& rng);

struct BootstrapResult {
  double fp_point = 0, fp_sigma = 0;
  double fg_point = 0, fg_sigma = 0;
  std::vector<double> fp_samples;
};

/// Poisson-resamples the counts and reruns reconstruction; point estimates
/// from the original records, error bars from the resample spread.
BootstrapResult bootstrap_errors(const std::vector<CountsRecord>& records, int n_qubits,
                                 const CMat& ideal, int resamples, Rng& rng,
                                 const MleOptions& opt = {});

}  // namespace lpu::tomo

#endif  // LPU_TOMOGRAPHY_HPP_
