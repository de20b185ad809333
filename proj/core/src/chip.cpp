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

#include "lpu/chip.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>
#include <stdexcept>

namespace lpu::chip {

namespace {
constexpr double kTwoPi = 2.0 * M_PI;
}

double HeaterModel::phase(double v) const {
  return alpha0 + beta * v * v + gamma * v * v * v;
}

double phase_voltage_map(const HeaterModel& h, double v) { return h.phase(v); }

double voltage_for_phase(const HeaterModel& h, double target) {
  const double lo = h.phase(h.v_min), hi = h.phase(h.v_max);
  // smallest lift target + 2*pi*k inside [lo, hi]
  double lifted = target + kTwoPi * std::ceil((lo - target) / kTwoPi);
  if (lifted > hi + 1e-12) {
    std::ostringstream os;
    os << "voltage_for_phase: target " << target << " rad unreachable on ["
       << h.v_min << ", " << h.v_max << "] V (phase range [" << lo << ", " << hi << "])";
    throw std::domain_error(os.str());
  }
  // monotone cubic: bisection then Newton polish
  double a = h.v_min, b = h.v_max;
  for (int it = 0; it < 80; ++it) {
    const double mid = 0.5 * (a + b);
    if (h.phase(mid) < lifted)
      a = mid;
    else
      b = mid;
  }
  double v = 0.5 * (a + b);
  for (int it = 0; it < 8; ++it) {
    const double f = h.phase(v) - lifted;
    const double df = 2 * h.beta * v + 3 * h.gamma * v * v;
    if (std::abs(df) < 1e-12) break;
    v -= f / df;
    v = std::clamp(v, h.v_min, h.v_max);
  }
  if (std::abs(h.phase(v) - lifted) > 1e-6)
    throw std::runtime_error("voltage_for_phase: did not converge to 1e-6 rad");
  return v;
}

std::vector<double> apply_crosstalk(const CrosstalkModel& m, const std::vector<double>& set_v) {
  std::vector<double> actual = set_v;
  for (const auto& g : m.groups) {
    if (g.heaters.size() != g.heater_resistance.size())
      throw std::invalid_argument("crosstalk group: resistance list size mismatch");
    // node potential W = Rg * sum(V'_i / R_i) / (Rg * sum(1/R_i) + 1)
    double num = 0, den = 1.0 / std::max(g.ground_resistance, 1e-12);
    if (g.ground_resistance <= 0) continue;  // ideal ground, no coupling
    for (std::size_t k = 0; k < g.heaters.size(); ++k) {
      num += set_v[static_cast<std::size_t>(g.heaters[k])] / g.heater_resistance[k];
      den += 1.0 / g.heater_resistance[k];
    }
    const double node = num / den;
    for (std::size_t k = 0; k < g.heaters.size(); ++k)
      actual[static_cast<std::size_t>(g.heaters[k])] =
          set_v[static_cast<std::size_t>(g.heaters[k])] - node;
  }
  return actual;
}

std::vector<double> precorrect(const CrosstalkModel& m, const std::vector<double>& actual_v) {
  std::vector<double> set = actual_v;
  for (const auto& g : m.groups) {
    if (g.ground_resistance <= 0) continue;
    // With V'_i = V_i + W, KCL gives W = Rg * sum(V_j / R_j) directly.
    double node = 0;
    for (std::size_t k = 0; k < g.heaters.size(); ++k)
      node += actual_v[static_cast<std::size_t>(g.heaters[k])] / g.heater_resistance[k];
    node *= g.ground_resistance;
    for (std::size_t k = 0; k < g.heaters.size(); ++k)
      set[static_cast<std::size_t>(g.heaters[k])] =
          actual_v[static_cast<std::size_t>(g.heaters[k])] + node;
  }
  return set;
}

int heater_index(const mesh::MeshConfig& layout, int row, int diag, bool phi) {
  return 2 * layout.position_index(row, diag) + (phi ? 1 : 0);
}

ChipModel ChipModel::ideal(int mode_count) {
  ChipModel c;
  c.mode_count = mode_count;
  const int mzis = mode_count * (mode_count - 1) / 2;
  c.heaters.assign(static_cast<std::size_t>(2 * mzis), HeaterModel{});
  c.calibrated = c.heaters;
  c.mode_transmission.assign(static_cast<std::size_t>(mode_count), 1.0);
  c.coupler_reflectivity.assign(static_cast<std::size_t>(2 * mzis), 0.5);
  c.detector_efficiency.assign(static_cast<std::size_t>(2 * mode_count), 1.0);
  c.mode_splitter.assign(static_cast<std::size_t>(mode_count), true);
  return c;
}

ChipModel ChipModel::randomized(int mode_count, Rng& rng, bool with_crosstalk) {
  ChipModel c = ideal(mode_count);
  const double p_2pi = 0.8;  // W for a 2*pi shift
  for (auto& h : c.heaters) {
    const double resistance = 50.0 * (1.0 + 0.1 * rng.normal());
    h.alpha0 = rng.uniform(0.0, kTwoPi);
    h.beta = kTwoPi / (p_2pi * resistance) * (1.0 + 0.05 * rng.normal());
    h.gamma = rng.uniform(1e-4, 6e-4);
    h.v_min = 0.0;
    h.v_max = 20.0;
  }
  // The controller starts from the truth unless a calibration experiment
  // replaces these estimates.
  c.calibrated = c.heaters;
  if (with_crosstalk) {
    const int n = static_cast<int>(c.heaters.size());
    for (int base = 0; base + 3 < n; base += 4) {
      CrosstalkModel::Group g;
      for (int k = 0; k < 4; ++k) {
        g.heaters.push_back(base + k);
        g.heater_resistance.push_back(50.0 * (1.0 + 0.1 * rng.normal()));
      }
      g.ground_resistance = rng.uniform(1.0, 4.0);
      c.crosstalk.groups.push_back(std::move(g));
    }
  }
  // published figures: 0.4 dB/facet, 2.4 dB mean fibre-to-fibre
  c.input_transmission = std::pow(10.0, -0.4 / 10.0);
  for (auto& t : c.mode_transmission) {
    const double db = 2.0 + rng.uniform(-0.3, 0.5);  // total minus input facet
    t = std::pow(10.0, -db / 10.0);
  }
  // Silica PLC directional couplers hold their ratio to a few tenths of a
  // percent; the phi-offset errors compound column over column through the
  // calibration sequence, so anything looser is incompatible with the
  // achieved 0.035 rad effective accuracy.
  for (auto& r : c.coupler_reflectivity) r = 0.5 + 0.002 * rng.normal();
  for (auto& e : c.detector_efficiency) e = std::clamp(0.6 + 0.05 * rng.normal(), 0.0, 1.0);
  return c;
}

std::vector<double> ChipModel::voltages_for_config(const mesh::MeshConfig& target) const {
  mesh::MeshConfig layout(mode_count);
  std::vector<double> actual(static_cast<std::size_t>(heater_count()), 0.0);
  for (const auto& p : target.params()) {
    const int ia = heater_index(layout, p.row, p.diag, false);
    const int ip = heater_index(layout, p.row, p.diag, true);
    actual[static_cast<std::size_t>(ia)] =
        voltage_for_phase(calibrated[static_cast<std::size_t>(ia)], p.alpha);
    actual[static_cast<std::size_t>(ip)] =
        voltage_for_phase(calibrated[static_cast<std::size_t>(ip)], p.phi);
  }
  std::vector<double> set_v =
      precorrect_crosstalk ? precorrect(crosstalk, actual) : actual;
  if (voltage_resolution > 0)
    for (auto& v : set_v) v = std::round(v / voltage_resolution) * voltage_resolution;
  return set_v;
}

std::vector<double> ChipModel::phases_for_voltages(const std::vector<double>& set_v) const {
  const std::vector<double> actual = apply_crosstalk(crosstalk, set_v);
  std::vector<double> phases(actual.size());
  for (std::size_t h = 0; h < actual.size(); ++h) phases[h] = heaters[h].phase(actual[h]);
  return phases;
}

CMat ChipModel::unitary_from_phases(const std::vector<double>& phases) const {
  mesh::MeshConfig layout(mode_count);
  CMat u = CMat::Identity(mode_count, mode_count);
  auto coupler = [&](double r) {
    Eigen::Matrix2cd c;
    const double t = std::sqrt(1.0 - r);
    c << std::sqrt(r), Complex(0, t), Complex(0, t), std::sqrt(r);
    return c;
  };
  for (int i = 1; i <= mode_count - 1; ++i) {
    for (int j = mode_count - 1; j >= i; --j) {
      const int pos = layout.position_index(i, j);
      const double alpha = phases[static_cast<std::size_t>(2 * pos)];
      const double phi = phases[static_cast<std::size_t>(2 * pos + 1)];
      Eigen::Matrix2cd pa = Eigen::Matrix2cd::Identity(), pp = Eigen::Matrix2cd::Identity();
      pa(0, 0) = std::exp(Complex(0, alpha));
      pp(0, 0) = std::exp(Complex(0, phi));
      const Eigen::Matrix2cd t = coupler(coupler_reflectivity[static_cast<std::size_t>(2 * pos + 1)]) *
                                 pa *
                                 coupler(coupler_reflectivity[static_cast<std::size_t>(2 * pos)]) *
                                 pp;
      for (int r = 0; r < mode_count; ++r) {
        const Complex a = u(r, j - 1), b = u(r, j);
        u(r, j - 1) = a * t(0, 0) + b * t(1, 0);
        u(r, j) = a * t(0, 1) + b * t(1, 1);
      }
    }
  }
  return u;
}

CMat ChipModel::realized_unitary(const mesh::MeshConfig& target, Rng& rng) const {
  std::vector<double> phases = phases_for_voltages(voltages_for_config(target));
  if (phase_setting_noise > 0)
    for (auto& p : phases) p += rng.normal(0.0, phase_setting_noise);
  return unitary_from_phases(phases);
}

namespace {

// Per-mode detection channel: distribution of click count (0, 1, 2) given
// arrival count, through the optional 2-way splitter and two detectors.
std::array<double, 3> click_distribution_for_mode(const ChipModel& chip, int mode, int arrived) {
  const double ea = chip.detector_efficiency[static_cast<std::size_t>(2 * mode)];
  const double eb = chip.detector_efficiency[static_cast<std::size_t>(2 * mode + 1)];
  std::array<double, 3> out{0, 0, 0};
  if (arrived == 0) {
    out[0] = 1;
    return out;
  }
  if (!chip.mode_splitter[static_cast<std::size_t>(mode)]) {
    const double miss = std::pow(1.0 - ea, arrived);
    out[0] = miss;
    out[1] = 1 - miss;
    return out;
  }
  // photons choose arms independently (binomial 1/2)
  for (int k = 0; k <= arrived; ++k) {
    const double w = fock::binomial(arrived, k) * std::pow(0.5, arrived);
    const double pa = 1.0 - std::pow(1.0 - ea, k);
    const double pb = 1.0 - std::pow(1.0 - eb, arrived - k);
    out[0] += w * (1 - pa) * (1 - pb);
    out[1] += w * (pa * (1 - pb) + (1 - pa) * pb);
    out[2] += w * pa * pb;
  }
  return out;
}

}  // namespace

std::map<fock::FockState, double> efficiency_corrected(const ClickCounts& counts,
                                                       const ChipModel& chip) {
  std::map<fock::FockState, double> out;
  for (const auto& [pattern, c] : counts) {
    if (!pattern.collision_free()) continue;
    double weight = 1.0;
    for (int m = 0; m < pattern.modes(); ++m) {
      if (pattern.occupations[static_cast<std::size_t>(m)] != 1) continue;
      const double ea = chip.detector_efficiency[static_cast<std::size_t>(2 * m)];
      const double eb = chip.detector_efficiency[static_cast<std::size_t>(2 * m + 1)];
      const double p1 = chip.mode_splitter[static_cast<std::size_t>(m)] ? 0.5 * (ea + eb) : ea;
      weight *= p1;
    }
    out[pattern] = static_cast<double>(c) / weight;
  }
  return out;
}

ExperimentResult run_experiment(const ChipModel& chip, const mesh::MeshConfig& config,
                                const SourceModel& source, const fock::FockState& ideal_input,
                                const std::vector<int>& source_fibres, long long shots,
                                Rng& rng) {
  if (ideal_input.modes() != chip.mode_count)
    throw std::invalid_argument("run_experiment: input mode count mismatch");

  const CMat u = chip.realized_unitary(config, rng);

  // Input terms: coherent superposition of the SPDC four-photon terms when
  // enabled, else the ideal input alone.
  struct Term {
    fock::FockState state;
    Complex amp;
  };
  std::vector<Term> terms;
  const bool spdc_terms = !source_fibres.empty() &&
                          (source.amp_2200 != 0.0 || source.amp_0022 != 0.0);
  if (spdc_terms) {
    if (source_fibres.size() != 4)
      throw std::invalid_argument("run_experiment: four source fibres required");
    auto fibre_state = [&](std::array<int, 4> occ) {
      std::vector<int> s(static_cast<std::size_t>(chip.mode_count), 0);
      for (int f = 0; f < 4; ++f)
        s[static_cast<std::size_t>(source_fibres[static_cast<std::size_t>(f)] - 1)] += occ[static_cast<std::size_t>(f)];
      return fock::FockState(s);
    };
    const double norm = std::sqrt(source.amp_1111 * source.amp_1111 +
                                  source.amp_2200 * source.amp_2200 +
                                  source.amp_0022 * source.amp_0022);
    terms.push_back({fibre_state({1, 1, 1, 1}), source.amp_1111 / norm});
    if (source.amp_2200 != 0) terms.push_back({fibre_state({2, 2, 0, 0}), source.amp_2200 / norm});
    if (source.amp_0022 != 0) terms.push_back({fibre_state({0, 0, 2, 2}), source.amp_0022 / norm});
  } else {
    terms.push_back({ideal_input, Complex(1, 0)});
  }
  const int n_photons = terms.front().state.total_photons();

  // Exact arrival distribution before losses: coherent quantum part mixed
  // with the distinguishable-photon part by the interference visibility.
  std::map<fock::FockState, double> arrival;
  {
    const double v = chip.interference_visibility;
    std::vector<fock::OutcomeDistribution> classical;
    if (v < 1.0)
      for (const Term& t : terms)
        classical.push_back(fock::output_distribution(u, t.state, fock::PhotonModel::kClassical,
                                                      fock::Subspace::kFull));
    for (const fock::FockState& out :
         fock::enumerate_outcomes(chip.mode_count, n_photons, fock::Subspace::kFull)) {
      Complex amp(0, 0);
      for (const Term& t : terms) amp += t.amp * fock::transition_amplitude(u, t.state, out);
      double p = v * std::norm(amp);
      if (v < 1.0) {
        double pc = 0;
        for (std::size_t ti = 0; ti < terms.size(); ++ti) {
          auto it = classical[ti].p.find(out);
          if (it != classical[ti].p.end()) pc += std::norm(terms[ti].amp) * it->second;
        }
        p += (1 - v) * pc;
      }
      if (p > 1e-15) arrival[out] = p;
    }
  }

  // Per-mode transmission (uniform input factor commutes with the mesh and
  // is folded in here).
  std::map<fock::FockState, double> surviving;
  for (const auto& [state, p] : arrival) {
    // enumerate per-mode binomial survivals
    std::vector<std::map<int, double>> mode_surv(static_cast<std::size_t>(chip.mode_count));
    for (int m = 0; m < chip.mode_count; ++m) {
      const double t =
          chip.input_transmission * chip.mode_transmission[static_cast<std::size_t>(m)];
      const int n = state.occupations[static_cast<std::size_t>(m)];
      for (int k = 0; k <= n; ++k)
        mode_surv[static_cast<std::size_t>(m)][k] =
            fock::binomial(n, k) * std::pow(t, k) * std::pow(1 - t, n - k);
    }
    std::vector<std::pair<fock::FockState, double>> partial{{fock::FockState(std::vector<int>()), p}};
    for (int m = 0; m < chip.mode_count; ++m) {
      std::vector<std::pair<fock::FockState, double>> next;
      for (const auto& [st, pp] : partial) {
        for (const auto& [k, w] : mode_surv[static_cast<std::size_t>(m)]) {
          if (pp * w < 1e-16) continue;
          fock::FockState ns = st;
          ns.occupations.push_back(k);
          next.emplace_back(std::move(ns), pp * w);
        }
      }
      partial = std::move(next);
    }
    for (auto& [st, pp] : partial) surviving[st] += pp;
  }

  // Detector channel: click-count patterns per mode.
  std::map<fock::FockState, double> clicks;
  for (const auto& [state, p] : surviving) {
    std::vector<std::pair<fock::FockState, double>> partial{{fock::FockState(std::vector<int>()), p}};
    for (int m = 0; m < chip.mode_count; ++m) {
      const std::array<double, 3> cd =
          click_distribution_for_mode(chip, m, state.occupations[static_cast<std::size_t>(m)]);
      std::vector<std::pair<fock::FockState, double>> next;
      for (const auto& [st, pp] : partial) {
        for (int c = 0; c < 3; ++c) {
          if (pp * cd[static_cast<std::size_t>(c)] < 1e-16) continue;
          fock::FockState ns = st;
          ns.occupations.push_back(c);
          next.emplace_back(std::move(ns), pp * cd[static_cast<std::size_t>(c)]);
        }
      }
      partial = std::move(next);
    }
    for (auto& [st, pp] : partial) clicks[st] += pp;
  }

  ExperimentResult res;
  res.shots = shots;
  res.click_distribution = clicks;
  std::vector<const fock::FockState*> keys;
  std::vector<double> probs;
  for (const auto& [k, v] : clicks) {
    keys.push_back(&k);
    probs.push_back(v);
  }
  const std::vector<long long> drawn = rng.multinomial(shots, probs);
  for (std::size_t i = 0; i < keys.size(); ++i)
    if (drawn[i] > 0) res.counts[*keys[i]] = drawn[i];
  return res;
}

}  // namespace lpu::chip
