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

#ifndef LPU_CHM_HPP_
#define LPU_CHM_HPP_

#include <string>

#include "lpu/complex_matrix.hpp"
#include "lpu/fock.hpp"

namespace lpu::protocols {

enum class ChmFamily { kFourier, kF6TwoParam, kS6Isolated, kG6Instance };

struct ChmDescriptor {
  ChmFamily family = ChmFamily::kFourier;
  int dim = 6;
  double theta1 = 0.0;  // F6TwoParam only
  double theta2 = 0.0;

  static ChmDescriptor fourier(int n) { return {ChmFamily::kFourier, n, 0, 0}; }
  static ChmDescriptor f6_two_param(double t1, double t2) {
    return {ChmFamily::kF6TwoParam, 6, t1, t2};
  }
  static ChmDescriptor s6() { return {ChmFamily::kS6Isolated, 6, 0, 0}; }
  static ChmDescriptor g6() { return {ChmFamily::kG6Instance, 6, 0, 0}; }
  static ChmDescriptor parse(const std::string& name);
};

/// Realizes the descriptor. The two-parameter family applies an entrywise
/// phase mask affine in (theta1, theta2) to F6 and reduces to F6 exactly at
/// (pi, 0); S6 and the G6 instance are the published matrices.
CMat chm(const ChmDescriptor& d);

/// Unitary within tol and every |U_ij|^2 within tol of 1/N.
bool is_chm(const CMat& u, double tol = 1e-9);

/// Zero-transmission law for a periodic input to the Fourier matrix:
/// the output is suppressed when mod(period * sum d_i, n) != 0.
bool ztl_suppressed(const fock::FockState& input, const fock::ModeAssignment& output);

/// Input period; throws for aperiodic inputs.
int input_period(const fock::FockState& input);

/// nu = (events on suppressed outcomes) / (total events), with the
/// suppression predicate evaluated for `input` at the Fourier point.
double ztl_violation(const std::map<fock::FockState, long long>& counts,
                     const fock::FockState& input);

/// Same ratio on an exact distribution instead of counts.
double ztl_violation(const fock::OutcomeDistribution& dist, const fock::FockState& input);

}  // namespace lpu::protocols

#endif  // LPU_CHM_HPP_
