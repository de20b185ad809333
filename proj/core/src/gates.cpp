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

#include "lpu/gates.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace lpu::qubits {

StateLabel parse_state(const std::string& s) {
  if (s == "0") return StateLabel::kZero;
  if (s == "1") return StateLabel::kOne;
  if (s == "+") return StateLabel::kPlus;
  if (s == "-") return StateLabel::kMinus;
  if (s == "+i") return StateLabel::kPlusI;
  if (s == "-i") return StateLabel::kMinusI;
  throw std::invalid_argument("unknown state label: " + s);
}

std::string state_name(StateLabel s) {
  switch (s) {
    case StateLabel::kZero: return "0";
    case StateLabel::kOne: return "1";
    case StateLabel::kPlus: return "+";
    case StateLabel::kMinus: return "-";
    case StateLabel::kPlusI: return "+i";
    case StateLabel::kMinusI: return "-i";
  }
  return "?";
}

PauliBasis parse_basis(const std::string& s) {
  if (s == "z" || s == "Z") return PauliBasis::kZ;
  if (s == "x" || s == "X") return PauliBasis::kX;
  if (s == "y" || s == "Y") return PauliBasis::kY;
  throw std::invalid_argument("unknown basis: " + s);
}

std::string basis_name(PauliBasis b) {
  switch (b) {
    case PauliBasis::kZ: return "z";
    case PauliBasis::kX: return "x";
    case PauliBasis::kY: return "y";
  }
  return "?";
}

Eigen::Vector2cd state_vector(StateLabel s) {
  const double r = 1.0 / std::sqrt(2.0);
  Eigen::Vector2cd v;
  switch (s) {
    case StateLabel::kZero: v << 1, 0; break;
    case StateLabel::kOne: v << 0, 1; break;
    case StateLabel::kPlus: v << r, r; break;
    case StateLabel::kMinus: v << r, -r; break;
    case StateLabel::kPlusI: v << r, Complex(0, r); break;
    case StateLabel::kMinusI: v << r, Complex(0, -r); break;
  }
  return v;
}

Eigen::Matrix2cd density(StateLabel s) {
  const Eigen::Vector2cd v = state_vector(s);
  return v * v.adjoint();
}

Eigen::Matrix2cd pauli(PauliBasis b) {
  Eigen::Matrix2cd m;
  switch (b) {
    case PauliBasis::kZ: m << 1, 0, 0, -1; break;
    case PauliBasis::kX: m << 0, 1, 1, 0; break;
    case PauliBasis::kY: m << 0, Complex(0, -1), Complex(0, 1), 0; break;
  }
  return m;
}

Eigen::Vector2cd basis_eigenvector(PauliBasis b, int outcome) {
  const double r = 1.0 / std::sqrt(2.0);
  const double sign = outcome == 0 ? 1.0 : -1.0;
  Eigen::Vector2cd v;
  switch (b) {
    case PauliBasis::kZ: return state_vector(outcome == 0 ? StateLabel::kZero : StateLabel::kOne);
    case PauliBasis::kX: v << r, sign * r; break;
    case PauliBasis::kY: v << r, Complex(0, sign * r); break;
  }
  return v;
}

Eigen::Matrix2cd gate_matrix(char name) {
  Eigen::Matrix2cd m;
  const double r = 1.0 / std::sqrt(2.0);
  switch (name) {
    case 'I': m << 1, 0, 0, 1; break;
    case 'X': m << 0, 1, 1, 0; break;
    case 'Y': m << 0, Complex(0, -1), Complex(0, 1), 0; break;
    case 'Z': m << 1, 0, 0, -1; break;
    case 'H': m << r, r, r, -r; break;
    case 'T': m << 1, 0, 0, std::exp(Complex(0, M_PI / 4)); break;
    default: throw std::invalid_argument(std::string("unknown gate: ") + name);
  }
  return m;
}

CMat kron(const CMat& a, const CMat& b) {
  CMat out(a.rows() * b.rows(), a.cols() * b.cols());
  for (int i = 0; i < a.rows(); ++i)
    for (int j = 0; j < a.cols(); ++j)
      out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
  return out;
}

void preparation_phases(StateLabel s, double* alpha, double* phi) {
  switch (s) {
    case StateLabel::kZero: *alpha = M_PI; *phi = 0; break;
    case StateLabel::kOne: *alpha = 0; *phi = 0; break;
    case StateLabel::kPlus: *alpha = M_PI / 2; *phi = 0; break;
    case StateLabel::kMinus: *alpha = M_PI / 2; *phi = M_PI; break;
    case StateLabel::kPlusI: *alpha = M_PI / 2; *phi = M_PI / 2; break;
    case StateLabel::kMinusI: *alpha = M_PI / 2; *phi = 3 * M_PI / 2; break;
  }
}

void measurement_phases(PauliBasis b, double* alpha, double* phi) {
  switch (b) {
    case PauliBasis::kZ: *alpha = M_PI; *phi = 0; break;
    case PauliBasis::kX: *alpha = M_PI / 2; *phi = 0; break;
    case PauliBasis::kY: *alpha = M_PI / 2; *phi = M_PI / 2; break;
  }
}

}  // namespace lpu::qubits

namespace lpu::protocols {

namespace {

constexpr double kPi = M_PI;
const double kAlphaThird = 2.0 * std::asin(1.0 / std::sqrt(3.0));  // 1/3 splitter

mesh::MeshConfig bsg_printed_config() {
  mesh::MeshConfig c(6);
  c.set(1, 1, 1.571, 0.000);
  c.set(1, 2, 1.231, 0.000);
  c.set(1, 3, 1.571, 0.000);
  c.set(1, 4, 3.141, 0.000);
  c.set(1, 5, 3.142, 0.000);
  c.set(2, 2, 3.142, 0.000);
  c.set(2, 3, 1.571, 0.000);
  c.set(2, 4, 1.231, 1.571);
  c.set(2, 5, 3.142, 0.000);
  c.set(3, 3, 3.142, 0.000);
  c.set(3, 4, 3.142, 0.000);
  c.set(3, 5, 1.571, 0.000);
  c.set(4, 4, 3.142, 0.000);
  c.set(4, 5, 3.142, 0.000);
  c.set(5, 5, 3.142, 0.000);
  return c;
}

mesh::MeshConfig bsg_exact_config() {
  mesh::MeshConfig c(6);
  c.set(1, 1, kPi / 2, 0);
  c.set(1, 2, kAlphaThird, 0);
  c.set(1, 3, kPi / 2, 0);
  c.set(1, 4, kPi, 0);
  c.set(1, 5, kPi, 0);
  c.set(2, 2, kPi, 0);
  c.set(2, 3, kPi / 2, 0);
  c.set(2, 4, kAlphaThird, kPi / 2);
  c.set(2, 5, kPi, 0);
  c.set(3, 3, kPi, 0);
  c.set(3, 4, kPi, 0);
  c.set(3, 5, kPi / 2, 0);
  c.set(4, 4, kPi, 0);
  c.set(4, 5, kPi, 0);
  c.set(5, 5, kPi, 0);
  return c;
}

mesh::MeshConfig heralded_cnot_printed_config() {
  mesh::MeshConfig c(6);
  c.set(1, 1, 0.992, 0.000);
  c.set(1, 2, 1.571, 4.712);
  c.set(1, 3, 4.957, 4.544);
  c.set(1, 4, 1.792, 5.375);
  c.set(1, 5, 0.000, 3.816);
  c.set(2, 2, 1.571, 0.000);
  c.set(2, 3, 0.992, 1.571);
  c.set(2, 4, 0.000, 2.188);
  c.set(2, 5, 0.000, 4.712);
  c.set(3, 3, 1.571, 0.000);
  c.set(3, 4, 0.000, 5.498);
  c.set(3, 5, 2.226, 1.571);
  c.set(4, 4, 3.142, 0.000);
  c.set(4, 5, 0.000, 3.142);
  c.set(5, 5, 0.000, 0.000);
  return c;
}

CMat bsg_printed_matrix() {
  CMat u(6, 6);
  const Complex i(0, 1);
  u.row(0) << 0.707, 0.707, 0, 0, 0, 0;
  u.row(1) << 0.408, -0.408, -0.577, 0.577, 0, 0;
  u.row(2) << 0.408, -0.408, Complex(0.289, 0.289), Complex(-0.289, 0.289), -0.408 * i, -0.408 * i;
  u.row(3) << 0.408, -0.408, Complex(0.289, -0.289), Complex(-0.289, -0.289), 0.408 * i, 0.408 * i;
  u.row(4) << 0, 0, Complex(0.333, -0.471), Complex(0.333, -0.471), Complex(0.236, -0.333),
      Complex(0.236, -0.333);
  u.row(5) << 0, 0, 0, 0, 0.707, 0.707;
  return u;
}

CMat heralded_cnot_printed_matrix() {
  CMat u(6, 6);
  u.row(0) << 0.476, -0.622, -0.440, 0.440, 0, 0;
  u.row(1) << -0.622, -0.476, 0, 0, 0.622, 0;
  u.row(2) << -0.383, 0, 0.293, 0.707, -0.383, -0.348;
  u.row(3) << 0.383, 0, 0.707, 0.293, 0.383, 0.348;
  u.row(4) << 0, 0.622, -0.440, 0.440, 0.476, 0;
  u.row(5) << 0.306, 0, 0.166, -0.166, 0.306, -0.870;
  return u;
}

CMat heralded_cnot_exact_matrix() {
  // Entries in closed form over Q(sqrt 2); reproduces the published matrix
  // to its printed precision and is unitary to machine precision.
  const double s2 = std::sqrt(2.0);
  const double y = std::sqrt((3 - s2) / 7);
  const double z = std::sqrt((4 + s2) / 14);
  const double x = z / s2;
  const double b = 1 - 1 / s2;
  const double c = 1 / s2;
  const double a = std::sqrt(2 - s2) / 2;
  const double d = std::sqrt(3 / s2 - 2);
  const double f = 1 / std::sqrt(2 * (2 + s2) + 2 + (2 * s2 - 1) * (2 * s2 - 1) / (3 / s2 - 2));
  const double e = f * std::sqrt(2 + s2);
  const double g = f * (2 * s2 - 1) / d;
  CMat u(6, 6);
  u.row(0) << y, -z, -x, x, 0, 0;
  u.row(1) << -z, -y, 0, 0, z, 0;
  u.row(2) << -a, 0, b, c, -a, -d;
  u.row(3) << a, 0, c, b, a, d;
  u.row(4) << 0, z, -x, x, y, 0;
  u.row(5) << e, 0, f, -f, e, -g;
  return u;
}

mesh::MeshConfig postselected_core_config() {
  mesh::MeshConfig c(6);
  c.set(1, 1, kAlphaThird, 0);
  c.set(1, 2, kPi, 0);  // measurement slot, default sigma_z
  c.set(1, 3, kPi, 0);
  c.set(1, 4, kPi, 0);  // measurement slot, default sigma_z
  c.set(1, 5, kPi, 0);
  c.set(2, 2, kPi, 0);  // preparation slot, default |0>
  c.set(2, 3, kAlphaThird, 0);
  c.set(2, 4, kPi / 2, 0);
  c.set(2, 5, kPi, kPi);
  c.set(3, 3, kPi, 0);
  c.set(3, 4, kPi / 2, kPi);
  c.set(3, 5, kAlphaThird, 0);
  c.set(4, 4, kPi, 0);  // preparation slot, default |0>
  c.set(4, 5, kPi, 0);
  c.set(5, 5, kPi, 0);
  return c;
}

int logical_index(const std::string& bits) {
  if (bits.size() != 2 || (bits[0] != '0' && bits[0] != '1') || (bits[1] != '0' && bits[1] != '1'))
    throw std::invalid_argument("logical input must be two bits, e.g. \"01\"");
  return (bits[0] - '0') * 2 + (bits[1] - '0');
}

}  // namespace

GateSpec gate_library(const std::string& name) {
  GateSpec g;
  g.name = name;
  if (name == "bsg") {
    g.printed_config = bsg_printed_config();
    g.config = bsg_exact_config();
    g.matrix = mesh::compose(g.config);
    g.encoding.qubits = {{1, 2}, {5, 6}};
    g.heralding.herald_modes = {3, 4};
    g.heralding.computational_filter = true;
    g.source_input = fock::FockState::parse("101110");
    return g;
  }
  if (name == "heralded_cnot") {
    g.printed_config = heralded_cnot_printed_config();
    g.config = g.printed_config;
    g.matrix = heralded_cnot_exact_matrix();
    // Matrix modes: (h, c1, t0, t1, h, balance); c0 rides the auxiliary
    // off-mesh waveguide. Logical zero of the control is the bypass.
    g.encoding.qubits = {{0, 2}, {3, 4}};
    g.encoding.control_zero_bypass = true;
    g.heralding.herald_modes = {1, 5};
    g.heralding.vacuum_modes = {6};
    g.heralding.computational_filter = true;
    // The published network realizes the CNOT with control-dependent herald
    // probabilities A0^2 and A1^2 (A0 = (3-sqrt2)/7 = g*A1). The balancing
    // the hardware applied as a herald-efficiency correction is represented
    // by these class factors, which bring both classes to the scheme's
    // nominal p = 1/16.
    const double s2 = std::sqrt(2.0);
    const double a0 = (3 - s2) / 7;
    const double gg = std::abs(g.matrix(5, 5));
    const double a1 = a0 / gg;
    g.class_balance = {1.0 / (16.0 * a0 * a0), 1.0 / (16.0 * a1 * a1)};
    return g;
  }
  if (name == "postselected_cnot") {
    g.config = postselected_core_config();
    g.printed_config = g.config;
    g.matrix = mesh::compose(g.config);
    g.encoding.qubits = {{2, 3}, {4, 5}};
    g.heralding.herald_modes = {};
    g.heralding.computational_filter = true;
    g.source_input = fock::FockState::parse("010100");
    return g;
  }
  throw std::invalid_argument("gate_library: unknown gate " + name);
}

PublishedGateData published_gate_data(const std::string& name) {
  PublishedGateData d;
  if (name == "bsg") {
    d.printed_config = bsg_printed_config();
    d.printed_matrix = bsg_printed_matrix();
    // As printed, columns 5 and 6 coincide, so no unitary is entrywise close
    // to the matrix; restoring unitarity forces a sign on the (6,6) entry
    // (unique up to global phase), and the composed mesh matches the complex
    // conjugate of the repaired matrix. Both repairs are documented in
    // docs/published-matrix-errata.md.
    CMat fixed = d.printed_matrix;
    fixed(5, 5) = -0.707;
    d.comparison_reference = fixed.conjugate();
    return d;
  }
  if (name == "heralded_cnot") {
    d.printed_config = heralded_cnot_printed_config();
    d.printed_matrix = heralded_cnot_printed_matrix();
    d.comparison_reference = d.printed_matrix;
    return d;
  }
  throw std::invalid_argument("published_gate_data: unknown gate " + name);
}

namespace {

// The published phase table realizes the CNOT with an active-low control
// under the global lower-mode-is-|0> convention (pinned by composing the
// table; see docs/mesh-conventions.md). The standard gate is recovered by
// conjugating the control with X at preparation and readout, which the
// prep and measurement MZIs provide for free.
qubits::StateLabel conjugate_by_x(qubits::StateLabel s) {
  using qubits::StateLabel;
  switch (s) {
    case StateLabel::kZero: return StateLabel::kOne;
    case StateLabel::kOne: return StateLabel::kZero;
    case StateLabel::kPlusI: return StateLabel::kMinusI;
    case StateLabel::kMinusI: return StateLabel::kPlusI;
    default: return s;
  }
}

}  // namespace

mesh::MeshConfig postselected_cnot_config(qubits::StateLabel prep_c, qubits::StateLabel prep_t,
                                          qubits::PauliBasis meas_c, qubits::PauliBasis meas_t) {
  mesh::MeshConfig c = postselected_core_config();
  double a, p;
  qubits::preparation_phases(conjugate_by_x(prep_c), &a, &p);
  c.set_alpha(2, 2, a);
  c.set_phi(2, 3, p);  // preparation phase rides the next MZI's shifter
  qubits::preparation_phases(prep_t, &a, &p);
  c.set_alpha(4, 4, a);
  c.set_phi(4, 5, p);
  qubits::measurement_phases(meas_c, &a, &p);
  c.set(1, 2, a, p);
  qubits::measurement_phases(meas_t, &a, &p);
  c.set(1, 4, a, p);
  return c;
}

HeraldedRunResult run_bsg_exact(const GateSpec& g) {
  HeraldedRunResult r;
  r.logical_amplitudes = CVec::Zero(4);
  const auto& qa = g.encoding.qubits[0];
  const auto& qb = g.encoding.qubits[1];
  double p_success = 0;
  for (int a = 0; a < 2; ++a) {
    for (int b = 0; b < 2; ++b) {
      std::vector<int> occ(6, 0);
      occ[static_cast<std::size_t>((a == 0 ? qa.zero_mode : qa.one_mode) - 1)] = 1;
      occ[static_cast<std::size_t>((b == 0 ? qb.zero_mode : qb.one_mode) - 1)] = 1;
      for (int h : g.heralding.herald_modes) occ[static_cast<std::size_t>(h - 1)] = 1;
      const Complex amp =
          fock::transition_amplitude(g.matrix, g.source_input, fock::FockState(occ));
      r.logical_amplitudes(a * 2 + b) = amp;
      p_success += std::norm(amp);
    }
  }
  r.success_probability = p_success;
  for (int k = 0; k < 4; ++k) {
    const std::string key = {char('0' + k / 2), char('0' + k % 2)};
    r.logical_distribution[key] = std::norm(r.logical_amplitudes(k)) / p_success;
  }
  r.logical_amplitudes /= std::sqrt(p_success);
  return r;
}

HeraldedRunResult run_heralded_cnot_exact(const GateSpec& g, const std::string& logical_input) {
  const int in_idx = logical_index(logical_input);
  const int ci = in_idx / 2, ti = in_idx % 2;
  const auto& qc = g.encoding.qubits[0];
  const auto& qt = g.encoding.qubits[1];

  auto occupation = [&](int cv, int tv) {
    std::vector<int> occ(6, 0);
    if (cv == 1) occ[static_cast<std::size_t>(qc.one_mode - 1)] = 1;
    // cv == 0 rides the off-mesh bypass and never enters the matrix
    occ[static_cast<std::size_t>((tv == 0 ? qt.zero_mode : qt.one_mode) - 1)] = 1;
    for (int h : g.heralding.herald_modes) occ[static_cast<std::size_t>(h - 1)] = 1;
    return fock::FockState(occ);
  };

  HeraldedRunResult r;
  r.logical_amplitudes = CVec::Zero(4);
  const fock::FockState in = occupation(ci, ti);
  const double balance = g.class_balance[static_cast<std::size_t>(ci)];
  double p_success = 0;
  for (int to = 0; to < 2; ++to) {
    // control photon number inside the matrix is conserved, so only co == ci
    // contributes
    const fock::FockState out = occupation(ci, to);
    Complex amp = fock::transition_amplitude(g.matrix, in, out);
    amp *= std::sqrt(balance);
    r.logical_amplitudes(ci * 2 + to) = amp;
    p_success += std::norm(amp);
  }
  r.success_probability = p_success;
  for (int k = 0; k < 4; ++k) {
    const std::string key = {char('0' + k / 2), char('0' + k % 2)};
    r.logical_distribution[key] = std::norm(r.logical_amplitudes(k)) / p_success;
  }
  r.logical_amplitudes /= std::sqrt(p_success);
  return r;
}

HeraldedRunResult run_postselected_cnot_exact(qubits::StateLabel prep_c,
                                              qubits::StateLabel prep_t,
                                              qubits::PauliBasis meas_c,
                                              qubits::PauliBasis meas_t) {
  const mesh::MeshConfig cfg = postselected_cnot_config(prep_c, prep_t, meas_c, meas_t);
  const CMat u = mesh::compose(cfg);
  const fock::FockState in = fock::FockState::parse("010100");

  HeraldedRunResult r;
  r.logical_amplitudes = CVec::Zero(4);
  double p_success = 0;
  const int qa_modes[2] = {2, 3}, qb_modes[2] = {4, 5};
  for (int a = 0; a < 2; ++a) {
    for (int b = 0; b < 2; ++b) {
      std::vector<int> occ(6, 0);
      occ[static_cast<std::size_t>(qa_modes[a] - 1)] = 1;
      occ[static_cast<std::size_t>(qb_modes[b] - 1)] = 1;
      const Complex amp = fock::transition_amplitude(u, in, fock::FockState(occ));
      // control readout carries the X conjugation: z and y outcomes flip
      const int a_logical = meas_c == qubits::PauliBasis::kX ? a : 1 - a;
      r.logical_amplitudes(a_logical * 2 + b) = amp;
      p_success += std::norm(amp);
    }
  }
  r.success_probability = p_success;
  for (int k = 0; k < 4; ++k) {
    const std::string key = {char('0' + k / 2), char('0' + k % 2)};
    r.logical_distribution[key] = std::norm(r.logical_amplitudes(k)) / p_success;
  }
  r.logical_amplitudes /= std::sqrt(p_success);
  return r;
}

TruthTable heralded_cnot_truth_table(const GateSpec& g) {
  TruthTable t;
  t.probabilities = Eigen::Matrix4d::Zero();
  for (int in = 0; in < 4; ++in) {
    const std::string bits = {char('0' + in / 2), char('0' + in % 2)};
    const HeraldedRunResult r = run_heralded_cnot_exact(g, bits);
    for (int out = 0; out < 4; ++out) {
      const std::string key = {char('0' + out / 2), char('0' + out % 2)};
      auto it = r.logical_distribution.find(key);
      t.probabilities(out, in) = it == r.logical_distribution.end() ? 0.0 : it->second;
    }
    t.success_probability[static_cast<std::size_t>(in)] = r.success_probability;
  }
  return t;
}

TruthTable postselected_cnot_truth_table() {
  TruthTable t;
  t.probabilities = Eigen::Matrix4d::Zero();
  using qubits::StateLabel;
  const StateLabel bits[2] = {StateLabel::kZero, StateLabel::kOne};
  for (int in = 0; in < 4; ++in) {
    const HeraldedRunResult r = run_postselected_cnot_exact(
        bits[in / 2], bits[in % 2], qubits::PauliBasis::kZ, qubits::PauliBasis::kZ);
    for (int out = 0; out < 4; ++out) {
      const std::string key = {char('0' + out / 2), char('0' + out % 2)};
      auto it = r.logical_distribution.find(key);
      t.probabilities(out, in) = it == r.logical_distribution.end() ? 0.0 : it->second;
    }
    t.success_probability[static_cast<std::size_t>(in)] = r.success_probability;
  }
  return t;
}

SingleQubitGateConfig single_qubit_gate_config(char name) {
  SingleQubitGateConfig c;
  switch (name) {
    case 'X': c.gate_alpha = 0; c.gate_phi = 0; break;
    case 'Y': c.gate_alpha = 0; c.gate_phi = kPi; break;
    case 'Z': c.gate_alpha = kPi; c.gate_phi = 0; break;
    case 'H': c.gate_alpha = kPi / 2; c.gate_phi = 0; break;
    case 'T': c.gate_alpha = kPi; c.gate_phi = 3 * kPi / 4; break;
    case 'I': c.gate_alpha = kPi; c.gate_phi = kPi; break;
    default: throw std::invalid_argument(std::string("unknown single-qubit gate: ") + name);
  }
  return c;
}

Eigen::Matrix2cd SingleQubitGateConfig::logical_unitary() const {
  return mesh::mzi_transfer(meas_alpha, meas_phi) * mesh::mzi_transfer(gate_alpha, gate_phi) *
         mesh::mzi_transfer(prep_alpha, prep_phi);
}

mesh::MeshConfig SingleQubitGateConfig::embed(int mode_count) const {
  if (mode_count < 4)
    throw std::invalid_argument("single-qubit fragment needs at least 4 modes");
  mesh::MeshConfig c(mode_count);
  // T(pi, pi) is the exact identity, so untouched positions drop out.
  for (const auto& p : c.params()) c.set(p.row, p.diag, kPi, kPi);
  c.set(3, 3, prep_alpha, prep_phi);
  c.set(2, 3, gate_alpha, gate_phi);
  c.set(1, 3, meas_alpha, meas_phi);
  return c;
}

double entanglement_witness(double xx, double zz) {
  if (std::abs(xx) > 1 + 1e-12 || std::abs(zz) > 1 + 1e-12)
    throw std::invalid_argument("entanglement_witness: correlations must lie in [-1, 1]");
  return 0.5 * (xx + zz);
}

}  // namespace lpu::protocols
