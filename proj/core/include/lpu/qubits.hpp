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

#ifndef LPU_QUBITS_HPP_
#define LPU_QUBITS_HPP_

#include <string>

#include "lpu/complex_matrix.hpp"

namespace lpu::qubits {

enum class StateLabel { kZero, kOne, kPlus, kMinus, kPlusI, kMinusI };
enum class PauliBasis { kZ, kX, kY };

StateLabel parse_state(const std::string& s);
std::string state_name(StateLabel s);
PauliBasis parse_basis(const std::string& s);
std::string basis_name(PauliBasis b);

Eigen::Vector2cd state_vector(StateLabel s);
Eigen::Matrix2cd density(StateLabel s);
Eigen::Matrix2cd pauli(PauliBasis b);

/// Eigenvector of `b` with eigenvalue +1 (outcome 0) or -1 (outcome 1).
Eigen::Vector2cd basis_eigenvector(PauliBasis b, int outcome);

Eigen::Matrix2cd gate_matrix(char name);  // 'I','X','Y','Z','H','T'

CMat kron(const CMat& a, const CMat& b);

/// Chip phases preparing a state on a dual-rail pair (lower mode = |0>):
/// alpha on the preparation MZI, phi added on the following MZI's external
/// shifter.
void preparation_phases(StateLabel s, double* alpha, double* phi);

/// Chip phases rotating a Pauli observable into the computational basis at a
/// measurement MZI.
void measurement_phases(PauliBasis b, double* alpha, double* phi);

}  // namespace lpu::qubits

#endif  // LPU_QUBITS_HPP_
