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

#ifndef LPU_MESH_HPP_
#define LPU_MESH_HPP_

#include <cstdint>
#include <vector>

#include "lpu/complex_matrix.hpp"
#include "lpu/rng.hpp"

namespace lpu::mesh {

// Triangular m-mode mesh. Position (i, j), 1 <= i <= j <= m-1, is the MZI at
// depth i on the rail pair (j, j+1); sub-unitary D_{m+1-i} is the staircase
// row i = { (i,i), (i,i+1), ..., (i,m-1) }. Light traverses rows m-1 down to
// 1, and row 1 forms the output-side edge of the triangle. See
// docs/mesh-conventions.md for how this indexing was pinned down.

/// One MZI: external phase phi on the top input, 50:50 coupler, internal
/// phase alpha on the top arm, 50:50 coupler. alpha = pi is the bar state.
struct MziParams {
  int row = 0;   // i
  int diag = 0;  // j; couples rails (j, j+1)
  double alpha = 0.0;
  double phi = 0.0;
};

class MeshConfig {
 public:
  MeshConfig() = default;
  explicit MeshConfig(int mode_count);

  static MeshConfig all_bar(int mode_count);

  int mode_count() const { return mode_count_; }
  int mzi_count() const { return static_cast<int>(params_.size()); }

  const std::vector<MziParams>& params() const { return params_; }

  const MziParams& at(int row, int diag) const;
  void set(int row, int diag, double alpha, double phi);
  void set_alpha(int row, int diag, double alpha);
  void set_phi(int row, int diag, double phi);

  /// Flat index of a position in the canonical order (1,1)..(1,m-1),
  /// (2,2)..(2,m-1), ..., (m-1,m-1), i.e. the D_m..D_1 cascade.
  int position_index(int row, int diag) const;

 private:
  int mode_count_ = 0;
  std::vector<MziParams> params_;
};

/// The 2x2 transfer matrix of one MZI under the fixed convention.
Eigen::Matrix2cd mzi_transfer(double alpha, double phi);

/// Full mesh unitary; the result always passes the unitarity certificate.
CMat compose(const MeshConfig& config);

struct Decomposition {
  MeshConfig config;
  CVec residual_diag;  // u = diag(residual_diag) * compose(config)
};

/// Reck-style nulling. Rejects non-unitary input with a distance report.
/// The residual diagonal carries the output-side phases the triangle cannot
/// realize; comparisons should go through gauge_fix.
Decomposition decompose(const CMat& u);

/// Phases drawn so compose(result) is Haar-distributed in every
/// photon-counting observable: phi uniform on [0, 2pi), each alpha by
/// stick-breaking with sin^2(alpha/2) ~ Beta(1, m-j).
MeshConfig haar_sample(int mode_count, Rng& rng);

/// |Tr(U†V)/m|^2
double unitary_fidelity(const CMat& u, const CMat& v);

struct GaugeFixResult {
  CMat fixed;        // D_L * u * D_R
  CVec left_phases;  // diagonal of D_L
  CVec right_phases;
  double overlap;  // Re Tr(ref† * fixed)
};

/// Chooses diagonal phase matrices maximizing Re Tr(ref† D_L u D_R) by
/// alternating closed-form updates (monotone; multi-start keeps it off the
/// rare saddle).
GaugeFixResult gauge_fix(const CMat& u, const CMat& ref);

}  // namespace lpu::mesh

#endif  // LPU_MESH_HPP_
