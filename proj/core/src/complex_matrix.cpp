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

#include "lpu/complex_matrix.hpp"

#include <sstream>
#include <stdexcept>

namespace lpu {

double unitarity_deviation(const CMat& u) {
  if (u.rows() != u.cols()) return 1.0;
  CMat d = u.adjoint() * u - CMat::Identity(u.rows(), u.cols());
  return d.cwiseAbs().maxCoeff();
}

bool is_unitary(const CMat& u, double tol) { return unitarity_deviation(u) <= tol; }

void require_unitary(const CMat& u, double tol) {
  const double dev = unitarity_deviation(u);
  if (dev > tol) {
    std::ostringstream os;
    os << "matrix failed unitarity certificate: max|U'U - I| = " << dev
       << " exceeds tolerance " << tol;
    throw std::invalid_argument(os.str());
  }
}

double max_abs_diff(const CMat& a, const CMat& b) {
  if (a.rows() != b.rows() || a.cols() != b.cols())
    throw std::invalid_argument("max_abs_diff: dimension mismatch");
  return (a - b).cwiseAbs().maxCoeff();
}

}  // namespace lpu
