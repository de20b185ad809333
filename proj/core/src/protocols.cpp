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

#include "lpu/protocols.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <stdexcept>
#include <thread>

namespace lpu::protocols {

namespace {
constexpr double kTwoPi = 2.0 * M_PI;
}

BosonSamplingResult boson_sampling_campaign(const BosonSamplingOptions& opt,
                                            std::uint64_t master_seed,
                                            const chip::ChipModel* chip_model) {
  if (opt.backend == Backend::kChip && chip_model == nullptr)
    throw std::invalid_argument("boson_sampling_campaign: chip backend needs a chip model");
  const int n = opt.n_unitaries;
  std::vector<double> fid(static_cast<std::size_t>(n), 0.0);

  auto member = [&](int k) {
    Rng rng(Rng::derive(master_seed, static_cast<std::uint64_t>(k)));
    const mesh::MeshConfig cfg = mesh::haar_sample(opt.input.modes(), rng);
    const CMat target = mesh::compose(cfg);
    fock::OutcomeDistribution exact = fock::output_distribution(
        target, opt.input, fock::PhotonModel::kQuantum, fock::Subspace::kCollisionFree);
    const double cf_mass = exact.total_mass();
    for (auto& [s, p] : exact.p) p /= cf_mass;  // counted within the subspace
    exact.success_probability = cf_mass;

    std::map<fock::FockState, long long> counts;
    if (opt.backend == Backend::kExact) {
      counts = fock::sample_counts(exact, opt.shots, rng);
    } else {
      chip::ChipModel noisy = *chip_model;
      noisy.phase_setting_noise = std::max(noisy.phase_setting_noise, opt.phase_noise);
      const chip::ExperimentResult res =
          chip::run_experiment(noisy, cfg, chip::SourceModel::ideal(), opt.input, {}, opt.shots, rng);
      // keep collision-free n-fold click patterns
      const int np = opt.input.total_photons();
      for (const auto& [pattern, c] : res.counts) {
        if (pattern.total_photons() != np || !pattern.collision_free()) continue;
        counts[pattern] += c;
      }
      if (counts.empty()) {
        fid[static_cast<std::size_t>(k)] = 0.0;
        return;
      }
    }
    fid[static_cast<std::size_t>(k)] = fock::statistical_fidelity(counts, exact);
  };

  if (opt.workers <= 1) {
    for (int k = 0; k < n; ++k) member(k);
  } else {
    std::atomic<int> next{0};
    std::vector<std::thread> pool;
    const int workers = std::min(opt.workers, n);
    pool.reserve(static_cast<std::size_t>(workers));
    for (int w = 0; w < workers; ++w)
      pool.emplace_back([&] {
        for (int k = next.fetch_add(1); k < n; k = next.fetch_add(1)) member(k);
      });
    for (auto& t : pool) t.join();
  }

  BosonSamplingResult res;
  res.fidelities = fid;
  double mean = 0;
  for (double f : fid) mean += f;
  mean /= n;
  double var = 0;
  for (double f : fid) var += (f - mean) * (f - mean);
  res.mean = mean;
  res.stddev = n > 1 ? std::sqrt(var / (n - 1)) : 0.0;
  return res;
}

BayesianTrace bayesian_verify(const std::vector<fock::FockState>& events,
                              const fock::OutcomeDistribution& p_quantum,
                              const fock::OutcomeDistribution& p_classical, double prior) {
  if (prior <= 0 || prior >= 1) throw std::invalid_argument("bayesian_verify: prior in (0,1)");
  BayesianTrace trace;
  double p = prior;
  for (const auto& x : events) {
    auto qi = p_quantum.p.find(x);
    auto ci = p_classical.p.find(x);
    const double q = qi == p_quantum.p.end() ? 0.0 : qi->second;
    const double c = ci == p_classical.p.end() ? 0.0 : ci->second;
    if (q <= 0 && c <= 0)
      throw std::invalid_argument("bayesian_verify: event " + x.str() +
                                  " impossible under both models");
    const double num = p * q;
    const double den = num + (1 - p) * c;
    p = den > 0 ? num / den : 0.0;
    trace.confidence.push_back(p);
    if (trace.events_to_099 < 0 && p > 0.99)
      trace.events_to_099 = static_cast<int>(trace.confidence.size());
  }
  return trace;
}

std::vector<ManifoldPoint> two_photon_manifold(int grid_points, int in_a, int in_b, int out_a,
                                               int out_b) {
  if (grid_points < 2) throw std::invalid_argument("two_photon_manifold: grid too small");
  std::vector<ManifoldPoint> pts;
  std::vector<int> in_occ(6, 0), out_occ(6, 0);
  in_occ[static_cast<std::size_t>(in_a - 1)] += 1;
  in_occ[static_cast<std::size_t>(in_b - 1)] += 1;
  out_occ[static_cast<std::size_t>(out_a - 1)] += 1;
  out_occ[static_cast<std::size_t>(out_b - 1)] += 1;
  const fock::FockState in(in_occ), out(out_occ);
  for (int i = 0; i < grid_points; ++i) {
    for (int j = 0; j < grid_points; ++j) {
      const double t1 = kTwoPi * i / grid_points;
      const double t2 = kTwoPi * j / grid_points;
      const CMat u = chm(ChmDescriptor::f6_two_param(t1, t2));
      const double p = std::norm(fock::transition_amplitude(u, in, out));
      pts.push_back({t1, t2, p});
    }
  }
  return pts;
}

std::vector<ManifoldPoint> ztl_violation_manifold(int grid_points, const fock::FockState& input) {
  std::vector<ManifoldPoint> pts;
  for (int i = 0; i < grid_points; ++i) {
    for (int j = 0; j < grid_points; ++j) {
      const double t1 = kTwoPi * i / grid_points;
      const double t2 = kTwoPi * j / grid_points;
      const CMat u = chm(ChmDescriptor::f6_two_param(t1, t2));
      const fock::OutcomeDistribution dist = fock::output_distribution(
          u, input, fock::PhotonModel::kQuantum, fock::Subspace::kCollisionFree);
      pts.push_back({t1, t2, ztl_violation(dist, input)});
    }
  }
  return pts;
}

namespace {

Eigen::Vector4cd pauli_kron(const Eigen::Matrix2cd& a, const Eigen::Matrix2cd& b,
                            const Eigen::Vector4cd& v) {
  Eigen::Vector4cd out = Eigen::Vector4cd::Zero();
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j)
      for (int k = 0; k < 2; ++k)
        for (int l = 0; l < 2; ++l) out(i * 2 + j) += a(i, k) * b(j, l) * v(k * 2 + l);
  return out;
}

double expectation(const Eigen::Vector4cd& psi, const Eigen::Matrix2cd& a,
                   const Eigen::Matrix2cd& b) {
  return std::real(psi.dot(pauli_kron(a, b, psi)));
}

}  // namespace

BsgCorrelations bsg_exact_correlations(const GateSpec& gate) {
  const HeraldedRunResult r = run_bsg_exact(gate);
  const Eigen::Vector4cd psi = r.logical_amplitudes;
  using qubits::pauli;
  using qubits::PauliBasis;
  BsgCorrelations c;
  c.zz = expectation(psi, pauli(PauliBasis::kZ), pauli(PauliBasis::kZ));
  c.xx = expectation(psi, pauli(PauliBasis::kX), pauli(PauliBasis::kX));
  c.zx = expectation(psi, pauli(PauliBasis::kZ), pauli(PauliBasis::kX));
  c.zy = expectation(psi, pauli(PauliBasis::kZ), pauli(PauliBasis::kY));
  return c;
}

std::array<Eigen::Matrix2cd, 3> sagnac_povm() {
  Eigen::Matrix2cd ep, em, e1;
  const double s3 = std::sqrt(3.0);
  ep << 0.5, 1 / (2 * s3), 1 / (2 * s3), 1.0 / 6.0;
  em << 0.5, -1 / (2 * s3), -1 / (2 * s3), 1.0 / 6.0;
  e1 << 0, 0, 0, 2.0 / 3.0;
  return {ep, em, e1};
}

SagnacCounts simulate_sagnac(const GateSpec& gate, long long events_per_stage, Rng& rng) {
  if (gate.name != "bsg") throw std::invalid_argument("simulate_sagnac: bsg only");
  const double alpha_third = 2.0 * std::asin(1.0 / std::sqrt(3.0));

  // Backward (reciprocal) pass through the 1/3 MZI on rails (2,3), then the
  // 1/2 MZI on rails (1,2): transfer matrices transpose under reversal.
  Eigen::Matrix3cd w = Eigen::Matrix3cd::Identity();
  {
    Eigen::Matrix3cd m23 = Eigen::Matrix3cd::Identity();
    m23.block<2, 2>(1, 1) = mesh::mzi_transfer(alpha_third, 0.0).transpose();
    Eigen::Matrix3cd m12 = Eigen::Matrix3cd::Identity();
    m12.block<2, 2>(0, 0) = mesh::mzi_transfer(M_PI / 2, 0.0).transpose();
    w = m12 * m23;
  }

  SagnacCounts out;
  for (int stage = 1; stage <= 2; ++stage) {
    mesh::MeshConfig cfg = gate.config;
    // qubit b measured in the x basis at the last MZI on its rail pair
    double ma, mp;
    qubits::measurement_phases(qubits::PauliBasis::kX, &ma, &mp);
    cfg.set(1, 5, ma, mp);
    if (stage == 2) cfg.set_phi(3, 5, 3 * M_PI / 2);  // offsets the input move
    const CMat u = mesh::compose(cfg);

    const fock::FockState input = stage == 1 ? fock::FockState::parse("101110")
                                             : fock::FockState::parse("011110");

    // Joint amplitudes: a-photon at mode mu (1,2), heralds at 3,4, b outcome
    // at mode 5 (+) or 6 (-).
    double p_herald = 0;
    std::array<double, 2> p_det{0, 0};  // by b outcome, detected backward port
    const int detect_port = stage == 1 ? 2 : 1;
    for (int b = 0; b < 2; ++b) {
      Eigen::Vector3cd a_amp = Eigen::Vector3cd::Zero();
      for (int mu = 1; mu <= 2; ++mu) {
        std::vector<int> occ(6, 0);
        occ[static_cast<std::size_t>(mu - 1)] = 1;
        occ[2] = occ[3] = 1;
        occ[static_cast<std::size_t>(4 + b)] = 1;
        a_amp(mu - 1) = fock::transition_amplitude(u, input, fock::FockState(occ));
      }
      const Eigen::Vector3cd v = w * a_amp;
      p_herald += a_amp.squaredNorm();
      p_det[static_cast<std::size_t>(b)] = std::norm(v(detect_port - 1));
    }
    // Conditional on a heralded event, outcomes: (detected, b), else lost.
    std::vector<double> probs = {p_det[0] / p_herald, p_det[1] / p_herald, 0.0};
    probs[2] = std::max(0.0, 1.0 - probs[0] - probs[1]);
    const std::vector<long long> c = rng.multinomial(events_per_stage, probs);
    if (stage == 1) {
      out.stage1_by_b = {c[0], c[1]};
      out.stage1_total = events_per_stage;
    } else {
      out.stage2_by_b = {c[0], c[1]};
      out.stage2_total = events_per_stage;
    }
  }
  return out;
}

namespace {

double sagnac_scale(const std::array<double, 2>& z_marginal_a) {
  const double p0 = z_marginal_a[0], p1 = z_marginal_a[1];
  const double denom = p1 / 3.0 + p0;
  if (denom <= 0) throw std::invalid_argument("sagnac: vanishing POVM denominator");
  return std::sqrt(3.0) * denom;
}

}  // namespace

double sagnac_x_expectation(const std::array<double, 2>& z_marginal_a,
                            const SagnacCounts& counts) {
  const double rp = static_cast<double>(counts.stage2_by_b[0] + counts.stage2_by_b[1]) /
                    static_cast<double>(counts.stage2_total);
  const double rm = static_cast<double>(counts.stage1_by_b[0] + counts.stage1_by_b[1]) /
                    static_cast<double>(counts.stage1_total);
  if (rp + rm <= 0) throw std::invalid_argument("sagnac: no accepted events");
  const double x_tilde = (rp - rm) / (rp + rm);
  return sagnac_scale(z_marginal_a) * x_tilde;
}

double sagnac_xx_correlation(const std::array<double, 2>& z_marginal_a,
                             const SagnacCounts& counts) {
  const double s1 = 1.0 / static_cast<double>(counts.stage1_total);
  const double s2 = 1.0 / static_cast<double>(counts.stage2_total);
  const double num = (counts.stage2_by_b[0] - counts.stage2_by_b[1]) * s2 -
                     (counts.stage1_by_b[0] - counts.stage1_by_b[1]) * s1;
  const double den = (counts.stage2_by_b[0] + counts.stage2_by_b[1]) * s2 +
                     (counts.stage1_by_b[0] + counts.stage1_by_b[1]) * s1;
  if (den <= 0) throw std::invalid_argument("sagnac: no accepted events");
  return sagnac_scale(z_marginal_a) * num / den;
}

ChipGateRun run_bsg_on_chip(const GateSpec& gate, const chip::ChipModel& chip_model,
                            const chip::SourceModel& source, long long shots, Rng& rng) {
  if (gate.name != "bsg") throw std::invalid_argument("run_bsg_on_chip: bsg only");
  // SPDC fibre pairs (a,b) and (c,d) feed the four input modes in order.
  const std::vector<int> fibres = {1, 3, 4, 5};
  const chip::ExperimentResult res = chip::run_experiment(
      chip_model, gate.config, source, gate.source_input, fibres, shots, rng);

  ChipGateRun out;
  out.shots = shots;
  const auto& qa = gate.encoding.qubits[0];
  const auto& qb = gate.encoding.qubits[1];
  for (const auto& [pattern, count] : res.counts) {
    bool herald_ok = true;
    for (int h : gate.heralding.herald_modes)
      herald_ok = herald_ok && pattern.occupations[static_cast<std::size_t>(h - 1)] == 1;
    if (!herald_ok) continue;
    const int a0 = pattern.occupations[static_cast<std::size_t>(qa.zero_mode - 1)];
    const int a1 = pattern.occupations[static_cast<std::size_t>(qa.one_mode - 1)];
    const int b0 = pattern.occupations[static_cast<std::size_t>(qb.zero_mode - 1)];
    const int b1 = pattern.occupations[static_cast<std::size_t>(qb.one_mode - 1)];
    if (gate.heralding.computational_filter && (a0 + a1 != 1 || b0 + b1 != 1)) continue;
    const std::string key = {char('0' + (a1 == 1)), char('0' + (b1 == 1))};
    out.logical_counts[key] += count;
    out.heralded_events += count;
  }
  return out;
}

}  // namespace lpu::protocols
