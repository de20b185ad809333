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

#include "lpu/fock.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

namespace lpu::fock {

FockState::FockState(std::vector<int> occ) : occupations(std::move(occ)) {
  for (int n : occupations)
    if (n < 0) throw std::invalid_argument("FockState: negative occupation");
}

FockState FockState::parse(const std::string& digits) {
  std::vector<int> occ;
  occ.reserve(digits.size());
  for (char ch : digits) {
    if (ch < '0' || ch > '9') throw std::invalid_argument("FockState::parse: not a digit string");
    occ.push_back(ch - '0');
  }
  return FockState(std::move(occ));
}

int FockState::total_photons() const {
  return std::accumulate(occupations.begin(), occupations.end(), 0);
}

bool FockState::collision_free() const {
  return std::all_of(occupations.begin(), occupations.end(), [](int n) { return n <= 1; });
}

std::string FockState::str() const {
  std::string s;
  s.reserve(occupations.size());
  for (int n : occupations) {
    if (n > 9) throw std::domain_error("FockState::str: occupation > 9 has no digit form");
    s.push_back(static_cast<char>('0' + n));
  }
  return s;
}

ModeAssignment assignment_from_state(const FockState& s) {
  ModeAssignment d;
  for (int m = 0; m < s.modes(); ++m)
    for (int k = 0; k < s.occupations[static_cast<std::size_t>(m)]; ++k) d.push_back(m + 1);
  return d;
}

FockState state_from_assignment(const ModeAssignment& d, int modes) {
  std::vector<int> occ(static_cast<std::size_t>(modes), 0);
  for (int pos : d) {
    if (pos < 1 || pos > modes) throw std::invalid_argument("assignment position out of range");
    ++occ[static_cast<std::size_t>(pos - 1)];
  }
  return FockState(std::move(occ));
}

std::string subspace_name(Subspace s) {
  switch (s) {
    case Subspace::kFull: return "full";
    case Subspace::kCollisionFree: return "collision_free";
    case Subspace::kPostSelected: return "post_selected";
  }
  return "?";
}

double OutcomeDistribution::total_mass() const {
  double t = 0;
  for (const auto& [k, v] : p) t += v;
  return t;
}

bool OutcomeDistribution::normalized(double tol) const {
  return std::abs(total_mass() - 1.0) <= tol;
}

long long factorial(int n) {
  if (n < 0) throw std::invalid_argument("factorial of negative");
  long long f = 1;
  for (int k = 2; k <= n; ++k) f *= k;
  return f;
}

long long binomial(int n, int k) {
  if (k < 0 || k > n) return 0;
  long long r = 1;
  for (int i = 0; i < k; ++i) r = r * (n - i) / (i + 1);
  return r;
}

Complex permanent(const CMat& a) {
  if (a.rows() != a.cols()) throw std::invalid_argument("permanent: matrix not square");
  const int n = static_cast<int>(a.rows());
  if (n == 0) return Complex(1, 0);
  if (n == 1) return a(0, 0);
  if (n > 62) throw std::invalid_argument("permanent: dimension too large");

  // Ryser with Gray-code subset updates:
  //   Per(A) = (-1)^n sum_{S != 0} (-1)^{|S|} prod_i sum_{j in S} a_ij
  std::vector<Complex> row_sum(static_cast<std::size_t>(n), Complex(0, 0));
  Complex total(0, 0);
  std::uint64_t gray = 0;
  double sign = 1.0;  // (-1)^{|S|} tracked incrementally
  const std::uint64_t count = 1ULL << n;
  for (std::uint64_t k = 1; k < count; ++k) {
    const std::uint64_t next = k ^ (k >> 1);
    const std::uint64_t changed = next ^ gray;
    const int j = std::countr_zero(changed);
    const bool added = next & changed;
    for (int i = 0; i < n; ++i) {
      if (added)
        row_sum[static_cast<std::size_t>(i)] += a(i, j);
      else
        row_sum[static_cast<std::size_t>(i)] -= a(i, j);
    }
    sign = -sign;  // |S| changes by one either way
    Complex prod(1, 0);
    for (int i = 0; i < n; ++i) prod *= row_sum[static_cast<std::size_t>(i)];
    total += sign * prod;
    gray = next;
  }
  const double outer = (n % 2 == 0) ? 1.0 : -1.0;
  return outer * total;
}

namespace {

CMat scattering_submatrix(const CMat& u, const FockState& in, const FockState& out) {
  const ModeAssignment cols = assignment_from_state(in);
  const ModeAssignment rows = assignment_from_state(out);
  const int n = static_cast<int>(cols.size());
  CMat sub(n, n);
  for (int r = 0; r < n; ++r)
    for (int c = 0; c < n; ++c) sub(r, c) = u(rows[static_cast<std::size_t>(r)] - 1,
                                              cols[static_cast<std::size_t>(c)] - 1);
  return sub;
}

double occupation_factorials(const FockState& s) {
  double f = 1;
  for (int n : s.occupations) f *= static_cast<double>(factorial(n));
  return f;
}

}  // namespace

Complex transition_amplitude(const CMat& u, const FockState& in, const FockState& out) {
  if (in.modes() != static_cast<int>(u.rows()) || out.modes() != static_cast<int>(u.rows()))
    throw std::invalid_argument("transition_amplitude: mode count mismatch with matrix");
  if (in.total_photons() != out.total_photons())
    throw std::invalid_argument("transition_amplitude: photon number mismatch");
  if (in.total_photons() == 0) return Complex(1, 0);
  const CMat sub = scattering_submatrix(u, in, out);
  const double norm = std::sqrt(occupation_factorials(in) * occupation_factorials(out));
  return permanent(sub) / norm;
}

std::vector<FockState> enumerate_outcomes(int modes, int photons, Subspace subspace) {
  if (modes < 1 || photons < 1)
    throw std::invalid_argument("enumerate_outcomes: need modes >= 1 and photons >= 1");
  if (subspace == Subspace::kCollisionFree && photons > modes)
    throw std::invalid_argument("enumerate_outcomes: collision-free requires photons <= modes");

  std::vector<FockState> out;
  std::vector<int> occ(static_cast<std::size_t>(modes), 0);
  // Descending lexicographic: recurse placing the largest count first.
  auto rec = [&](auto&& self, int mode, int remaining) -> void {
    if (mode == modes - 1) {
      if (subspace == Subspace::kCollisionFree && remaining > 1) return;
      occ[static_cast<std::size_t>(mode)] = remaining;
      out.emplace_back(occ);
      return;
    }
    const int hi = subspace == Subspace::kCollisionFree ? std::min(1, remaining) : remaining;
    for (int k = hi; k >= 0; --k) {
      if (subspace == Subspace::kCollisionFree && remaining - k > modes - mode - 1) continue;
      occ[static_cast<std::size_t>(mode)] = k;
      self(self, mode + 1, remaining - k);
    }
    occ[static_cast<std::size_t>(mode)] = 0;
  };
  rec(rec, 0, photons);
  return out;
}

OutcomeDistribution output_distribution(const CMat& u, const FockState& in,
                                        PhotonModel model, Subspace subspace) {
  if (subspace == Subspace::kPostSelected)
    throw std::invalid_argument("output_distribution: post-selection belongs to protocols");
  const int m = static_cast<int>(u.rows());
  if (in.modes() != m) throw std::invalid_argument("output_distribution: mode count mismatch");
  const int n = in.total_photons();

  CMat usq;
  if (model == PhotonModel::kClassical) usq = u.cwiseAbs2().cast<Complex>();

  OutcomeDistribution dist;
  dist.modes = m;
  dist.photons = n;
  dist.subspace = subspace;
  for (const FockState& out : enumerate_outcomes(m, n, subspace)) {
    double prob;
    if (model == PhotonModel::kQuantum) {
      prob = std::norm(transition_amplitude(u, in, out));
    } else {
      // Distinguishable photons: P(T) = Per(|U|^2_{S,T}) / prod_j t_j!,
      // which sums to 1 over the full space by the multinomial theorem.
      const CMat sub = scattering_submatrix(usq, in, out);
      prob = permanent(sub).real() / occupation_factorials(out);
    }
    dist.p[out] = prob;
  }
  return dist;
}

std::map<FockState, long long> sample_counts(const OutcomeDistribution& dist,
                                             long long shots, Rng& rng) {
  const double mass = dist.total_mass();
  if (std::abs(mass - 1.0) > 1e-9)
    throw std::invalid_argument("sample_counts: distribution not normalized");
  std::vector<const FockState*> keys;
  std::vector<double> probs;
  keys.reserve(dist.p.size());
  for (const auto& [k, v] : dist.p) {
    keys.push_back(&k);
    probs.push_back(v);
  }
  const std::vector<long long> c = rng.multinomial(shots, probs);
  std::map<FockState, long long> counts;
  for (std::size_t i = 0; i < keys.size(); ++i)
    if (c[i] > 0) counts[*keys[i]] = c[i];
  return counts;
}

double statistical_fidelity(const OutcomeDistribution& p, const OutcomeDistribution& q) {
  if (p.modes != q.modes || p.photons != q.photons || p.subspace != q.subspace)
    throw std::invalid_argument("statistical_fidelity: mismatched outcome sets");
  double f = 0;
  for (const auto& [k, pv] : p.p) {
    auto it = q.p.find(k);
    if (it == q.p.end()) continue;
    f += std::sqrt(pv * it->second);
  }
  return f;
}

double statistical_fidelity(const std::map<FockState, long long>& counts,
                            const OutcomeDistribution& q) {
  long long total = 0;
  for (const auto& [k, v] : counts) total += v;
  if (total == 0) throw std::invalid_argument("statistical_fidelity: empty counts");
  double f = 0;
  for (const auto& [k, v] : counts) {
    auto it = q.p.find(k);
    if (it == q.p.end()) continue;
    f += std::sqrt(static_cast<double>(v) / static_cast<double>(total) * it->second);
  }
  return f;
}

}  // namespace lpu::fock
