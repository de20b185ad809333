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

#ifndef LPU_FOCK_HPP_
#define LPU_FOCK_HPP_

#include <map>
#include <string>
#include <vector>

#include "lpu/complex_matrix.hpp"
#include "lpu/rng.hpp"

namespace lpu::fock {

/// Photon occupation pattern over modes.
struct FockState {
  std::vector<int> occupations;

  FockState() = default;
  explicit FockState(std::vector<int> occ);
  /// Parses a digit string such as "101010".
  static FockState parse(const std::string& digits);

  int modes() const { return static_cast<int>(occupations.size()); }
  int total_photons() const;
  bool collision_free() const;
  std::string str() const;

  bool operator==(const FockState& o) const { return occupations == o.occupations; }
  bool operator<(const FockState& o) const { return occupations < o.occupations; }
};

/// Non-decreasing 1-based mode positions d_1 <= ... <= d_n; bijective with
/// FockState at fixed (m, n).
using ModeAssignment = std::vector<int>;

ModeAssignment assignment_from_state(const FockState& s);
FockState state_from_assignment(const ModeAssignment& d, int modes);

enum class Subspace { kFull, kCollisionFree, kPostSelected };
enum class PhotonModel { kQuantum, kClassical };

std::string subspace_name(Subspace s);

struct OutcomeDistribution {
  int modes = 0;
  int photons = 0;
  Subspace subspace = Subspace::kFull;
  /// Probability table; for post-selected tables the entries are normalized
  /// within the subspace and success_probability carries the rest.
  std::map<FockState, double> p;
  double success_probability = 1.0;

  double total_mass() const;
  bool normalized(double tol = 1e-9) const;
};

/// Exact permanent, Ryser's formula with Gray-code subset updates, O(2^n n).
Complex permanent(const CMat& a);

/// Per(U_{S,T}) / sqrt(prod s_i! prod t_j!) with columns repeated by input
/// occupations and rows by output occupations.
Complex transition_amplitude(const CMat& u, const FockState& in, const FockState& out);

/// Deterministic enumeration, descending lexicographic in occupation
/// vectors (all photons in mode 1 first).
std::vector<FockState> enumerate_outcomes(int modes, int photons, Subspace subspace);

OutcomeDistribution output_distribution(const CMat& u, const FockState& in,
                                        PhotonModel model, Subspace subspace);

std::map<FockState, long long> sample_counts(const OutcomeDistribution& dist,
                                             long long shots, Rng& rng);

/// Bhattacharyya coefficient between two normalized distributions over the
/// same outcome space.
double statistical_fidelity(const OutcomeDistribution& p, const OutcomeDistribution& q);

/// Counts-vs-model variant: counts are normalized first.
double statistical_fidelity(const std::map<FockState, long long>& counts,
                            const OutcomeDistribution& q);

long long factorial(int n);
long long binomial(int n, int k);

}  // namespace lpu::fock

#endif  // LPU_FOCK_HPP_
