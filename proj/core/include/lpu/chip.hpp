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

#ifndef LPU_CHIP_HPP_
#define LPU_CHIP_HPP_

#include <array>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "lpu/complex_matrix.hpp"
#include "lpu/fock.hpp"
#include "lpu/mesh.hpp"
#include "lpu/rng.hpp"

namespace lpu::chip {

/// Thermo-optic phase-voltage law Phi(V) = alpha0 + beta V^2 + gamma V^3,
/// strictly increasing on [v_min, v_max].
struct HeaterModel {
  double alpha0 = 0.0;  // rad
  double beta = 0.157;  // rad / V^2
  double gamma = 0.0;   // rad / V^3
  double v_min = 0.0;
  double v_max = 20.0;

  double phase(double v) const;
};

double phase_voltage_map(const HeaterModel& h, double v);

/// Solves Phi(V) = target + 2*pi*k for the smallest admissible lift;
/// |Phi(V) - lifted target| <= 1e-6 rad. Throws when no lift is reachable.
double voltage_for_phase(const HeaterModel& h, double target);

/// Heaters in a group share a ground return: each heater has its own
/// resistance to a common node, and the node sees ground through a shared
/// resistance. Nodal analysis gives the set->actual voltage map in closed
/// form, and its inverse.
struct CrosstalkModel {
  struct Group {
    std::vector<int> heaters;  // flat heater indices
    std::vector<double> heater_resistance;
    double ground_resistance = 0.0;
  };
  std::vector<Group> groups;

  bool empty() const { return groups.empty(); }
};

std::vector<double> apply_crosstalk(const CrosstalkModel& m, const std::vector<double>& set_v);
std::vector<double> precorrect(const CrosstalkModel& m, const std::vector<double>& actual_v);

/// Four-photon SPDC input: |1111> + a|2200> + a|0022> over four source
/// fibres (normalized internally), mapped onto chip modes per experiment.
struct SourceModel {
  double pair_amplitude = 0.0;  // eta; also the weight of the extra terms
  double amp_1111 = 1.0;
  double amp_2200 = 0.0;
  double amp_0022 = 0.0;

  static SourceModel ideal() { return {}; }
  static SourceModel spdc(double eta) { return {eta, 1.0, eta, eta}; }
};

/// Flat heater index: 2 * position + (0 for alpha, 1 for phi), positions in
/// the canonical (1,1)..(m-1,m-1) order.
int heater_index(const mesh::MeshConfig& layout, int row, int diag, bool phi);

struct ChipModel {
  int mode_count = 6;
  std::vector<HeaterModel> heaters;     // physical truth, 2 per MZI
  std::vector<HeaterModel> calibrated;  // controller's belief
  CrosstalkModel crosstalk;
  bool precorrect_crosstalk = true;

  double input_transmission = 1.0;          // uniform facet/coupling factor
  std::vector<double> mode_transmission;    // per-mode propagation + out facet
  std::vector<double> coupler_reflectivity;  // per coupler, 2 per MZI, near 0.5
  std::vector<double> detector_efficiency;  // 2 per mode (a then b arm)
  std::vector<bool> mode_splitter;          // 2-way splitter before detection
  double interference_visibility = 1.0;
  double phase_setting_noise = 0.0;  // rad, fresh Gaussian per configuration
  double voltage_resolution = 0.0;   // V; 0 disables quantization

  static ChipModel ideal(int mode_count);
  /// Fabrication-style randomized chip: heater coefficients scaled so a
  /// 2*pi shift costs about 0.8 W into a nominal 50-ohm element, shared
  /// grounds in groups of four, published loss figures.
  static ChipModel randomized(int mode_count, Rng& rng, bool with_crosstalk = true);

  int heater_count() const { return static_cast<int>(heaters.size()); }

  /// Voltages the controller would apply for target phases (calibrated
  /// curves, optional quantization and crosstalk precorrection).
  std::vector<double> voltages_for_config(const mesh::MeshConfig& target) const;

  /// Phases physically realized for applied set voltages.
  std::vector<double> phases_for_voltages(const std::vector<double>& set_v) const;

  /// Unitary realized when the controller dials `target`; `rng` draws the
  /// per-configuration setting noise.
  CMat realized_unitary(const mesh::MeshConfig& target, Rng& rng) const;

  /// Mesh unitary for explicit per-heater phases, including the coupler
  /// reflectivity imperfections.
  CMat unitary_from_phases(const std::vector<double>& phases) const;
};

/// Counts over per-mode detector click patterns (0, 1 or 2 clicks/mode).
using ClickCounts = std::map<fock::FockState, long long>;

struct ExperimentResult {
  ClickCounts counts;
  long long shots = 0;
  /// Exact click-pattern distribution the counts were drawn from.
  std::map<fock::FockState, double> click_distribution;
};

/// End-to-end run: source state -> lossy noisy mesh -> per-mode splitters
/// and detectors -> multinomial counts. `source_fibres` maps the four SPDC
/// fibres onto chip modes when the four-photon terms are enabled; otherwise
/// the ideal input alone is used.
ExperimentResult run_experiment(const ChipModel& chip, const mesh::MeshConfig& config,
                                const SourceModel& source, const fock::FockState& ideal_input,
                                const std::vector<int>& source_fibres, long long shots,
                                Rng& rng);

/// Interference fringe on one heater: counts vs voltage at a fixed output.
struct FringeData {
  int heater = -1;
  int detect_mode = 0;  // 1-based
  std::vector<double> voltage;
  std::vector<long long> counts;
  double shots_per_point = 0;
};

/// Sweeps the target heater's (actual) voltage with every other heater held
/// at the routing config; Poisson counting statistics. Throws when the
/// routing leaves the detected intensity insensitive to the target.
FringeData simulate_fringe(const ChipModel& chip, int heater, const mesh::MeshConfig& routing,
                           int input_mode, int detect_mode, const std::vector<double>& sweep,
                           double shots_per_point, Rng& rng);

/// Both output ports of the measured interferometer from one sweep; all
/// twelve detectors are available, so the complementary port costs nothing.
std::array<FringeData, 2> simulate_fringe_pair(const ChipModel& chip, int heater,
                                               const mesh::MeshConfig& routing, int input_mode,
                                               int detect_a, int detect_b,
                                               const std::vector<double>& sweep,
                                               double shots_per_point, Rng& rng);

struct FringeFit {
  double a = 0, b = 0;  // counts offset / amplitude, b >= 0
  double alpha = 0, beta = 0, gamma = 0;
  std::array<double, 5> std_error{};
  int iterations = 0;
  bool converged = false;
  double rms_residual = 0;
};

/// Weighted nonlinear least squares of C = A - B cos(alpha + beta V^2 +
/// gamma V^3); coarse (alpha, beta) grid then Levenberg-Marquardt with
/// bounded restarts. Throws when the fringe amplitude is not identifiable.
FringeFit fit_fringe(const FringeData& data);

struct CalibrationResult {
  std::vector<HeaterModel> estimated;   // full heater table
  std::vector<bool> characterized;      // false for the five gauge phases
  std::vector<double> fit_rms;          // per heater, fitted-curve residual
  int fringes_measured = 0;
};

/// The full alpha-then-phi sequence: walk each staircase row with upstream
/// crossings at the lifted 2*pi point, rows above at bar; then the phi
/// interferometers column by column with the stated pi/2 pairs. The five
/// input-side phases (k,k) have no observable effect on photon counting and
/// are flagged rather than fitted.
CalibrationResult run_calibration(const ChipModel& chip, long long shots_per_fringe, Rng& rng);

/// RMS over the voltage sweep of the phase error between estimated and true
/// curves, averaged over characterized heaters.
double calibration_rms_error(const ChipModel& chip, const CalibrationResult& cal);

struct PhaseAccuracyResult {
  double mean_fidelity = 0;          // experimental F over Haar first-row settings
  double delta_phi = 0;              // solved from the Monte-Carlo noise curve
  std::vector<double> curve_noise;   // the F^m(delta_phi) samples
  std::vector<double> curve_fidelity;
};

/// Randomized-benchmarking style estimate of the effective phase-setting
/// accuracy: mean single-photon fidelity over Haar-random first-row alpha
/// vectors, inverted through a Monte-Carlo noise curve.
PhaseAccuracyResult benchmark_phase_accuracy(const ChipModel& chip, int n_configs,
                                             long long shots_per_config, Rng& rng);

/// Efficiency-corrected statistics: each collision-free click pattern's
/// count divided by the product of its modes' single-photon registration
/// probabilities.
std::map<fock::FockState, double> efficiency_corrected(const ClickCounts& counts,
                                                       const ChipModel& chip);

}  // namespace lpu::chip

#endif  // LPU_CHIP_HPP_
