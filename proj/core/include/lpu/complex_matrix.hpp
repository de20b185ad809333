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

#ifndef LPU_COMPLEX_MATRIX_HPP_
#define LPU_COMPLEX_MATRIX_HPP_

#include <Eigen/Dense>
#include <complex>

namespace lpu {

using Complex = std::complex<double>;
using CMat = Eigen::MatrixXcd;
using CVec = Eigen::VectorXcd;

inline constexpr double kUnitaryTol = 1e-9;

/// max-norm of U†U - I
double unitarity_deviation(const CMat& u);

bool is_unitary(const CMat& u, double tol = kUnitaryTol);

/// Throws std::invalid_argument with the measured distance when the
/// certificate fails.
void require_unitary(const CMat& u, double tol = kUnitaryTol);

/// Entrywise max |a - b|; dimensions must agree.
double max_abs_diff(const CMat& a, const CMat& b);

}  // namespace lpu

#endif  // LPU_COMPLEX_MATRIX_HPP_
