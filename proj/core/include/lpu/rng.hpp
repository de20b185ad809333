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

#ifndef LPU_RNG_HPP_
#define LPU_RNG_HPP_

#include <cstdint>
#include <random>
#include <vector>

namespace lpu {

/// Seeded generator with self-contained sampling routines.
///
/// Standard-library distribution objects are implementation-defined, so all
/// variates are derived here from raw mt19937_64 output. A fixed seed gives
/// a bit-identical stream on every platform and build.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  /// Counter-based seed derivation for parallel tasks: task k of a campaign
  /// uses derive(master, k), so worker scheduling never changes results.
  static std::uint64_t derive(std::uint64_t master, std::uint64_t index);

  std::uint64_t next_u64() { return engine_(); }

  /// Uniform on [0, 1) with 53-bit resolution.
  double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

  /// Uniform integer in [0, n).
  std::uint64_t uniform_int(std::uint64_t n);

  double normal(double mean = 0.0, double sigma = 1.0);

  long long poisson(double mean);

  /// Beta(1, k) variate; the marginal of a uniform stick-breaking split
  /// over k+1 remaining pieces.
  double beta_1_k(int k);

  /// Multinomial draw over `p` (need not be normalized); returns counts.
  std::vector<long long> multinomial(long long shots, const std::vector<double>& p);

 private:
  std::mt19937_64 engine_;
  bool have_spare_normal_ = false;
  double spare_normal_ = 0.0;
};

}  // namespace lpu

#endif  // LPU_RNG_HPP_
