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

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>
#include <stdexcept>

#include "lpu/chip.hpp"
#include "lpu/fock.hpp"

namespace lpu::chip {

namespace {

constexpr double kTwoPi = 2.0 * M_PI;

double wrap(double x) {
  double r = std::fmod(x, kTwoPi);
  if (r < 0) r += kTwoPi;
  return r;
}

double wrap_pm(double x) {  // to (-pi, pi]
  double r = wrap(x);
  if (r > M_PI) r -= kTwoPi;
  return r;
}

// Single-photon amplitude at `detect` (1-based) for a photon injected into
// `input`, with heater `h` forced to phase x and the rest at `phases`.
Complex probe_amplitude(const ChipModel& chip, std::vector<double> phases, int h, double x,
                        int input, int detect) {
  phases[static_cast<std::size_t>(h)] = x;
  const CMat u = chip.unitary_from_phases(phases);
  return u(detect - 1, input - 1);
}

}  // namespace

std::array<FringeData, 2> simulate_fringe_pair(const ChipModel& chip, int heater,
                                               const mesh::MeshConfig& routing, int input_mode,
                                               int detect_a, int detect_b,
                                               const std::vector<double>& sweep,
                                               double shots_per_point, Rng& rng) {
  if (heater < 0 || heater >= chip.heater_count())
    throw std::invalid_argument("simulate_fringe: heater index out of range");

  // Set voltages realizing the routing for every heater but the target. A
  // precorrecting controller sweeps the target's actual voltage (recomputing
  // all set voltages each point); without precorrection the raw set voltage
  // is swept.
  std::vector<double> routing_set = chip.voltages_for_config(routing);
  std::vector<double> routing_actual = apply_crosstalk(chip.crosstalk, routing_set);

  // Sensitivity check: the detected intensity must move with the target
  // phase, otherwise the routing does not isolate it.
  {
    std::vector<double> phases(static_cast<std::size_t>(chip.heater_count()));
    for (int h = 0; h < chip.heater_count(); ++h)
      phases[static_cast<std::size_t>(h)] =
          chip.heaters[static_cast<std::size_t>(h)].phase(routing_actual[static_cast<std::size_t>(h)]);
    double lo = 1, hi = 0;
    for (int k = 0; k < 8; ++k) {
      const double p =
          std::norm(probe_amplitude(chip, phases, heater, k * kTwoPi / 8, input_mode, detect_a));
      lo = std::min(lo, p);
      hi = std::max(hi, p);
    }
    if (hi - lo < 1e-6) {
      std::ostringstream os;
      os << "simulate_fringe: routing does not isolate heater " << heater
         << " (intensity swing " << hi - lo << ")";
      throw std::invalid_argument(os.str());
    }
  }

  auto channel = [&](int mode) {
    return chip.input_transmission * chip.mode_transmission[static_cast<std::size_t>(mode - 1)] *
           0.5 *
           (chip.detector_efficiency[static_cast<std::size_t>(2 * (mode - 1))] +
            chip.detector_efficiency[static_cast<std::size_t>(2 * (mode - 1) + 1)]);
  };

  std::array<FringeData, 2> out;
  const int detect[2] = {detect_a, detect_b};
  for (int k = 0; k < 2; ++k) {
    out[static_cast<std::size_t>(k)].heater = heater;
    out[static_cast<std::size_t>(k)].detect_mode = detect[k];
    out[static_cast<std::size_t>(k)].shots_per_point = shots_per_point;
  }
  for (double v : sweep) {
    std::vector<double> set_v;
    if (chip.precorrect_crosstalk) {
      std::vector<double> actual = routing_actual;
      actual[static_cast<std::size_t>(heater)] = v;
      set_v = precorrect(chip.crosstalk, actual);
    } else {
      set_v = routing_set;
      set_v[static_cast<std::size_t>(heater)] = v;
    }
    if (chip.voltage_resolution > 0)
      for (auto& sv : set_v) sv = std::round(sv / chip.voltage_resolution) * chip.voltage_resolution;
    std::vector<double> phases = chip.phases_for_voltages(set_v);
    if (chip.phase_setting_noise > 0)
      for (auto& p : phases) p += rng.normal(0.0, chip.phase_setting_noise);
    const CMat u = chip.unitary_from_phases(phases);
    for (int k = 0; k < 2; ++k) {
      if (detect[k] <= 0) continue;
      const double p = std::norm(u(detect[k] - 1, input_mode - 1)) * channel(detect[k]);
      out[static_cast<std::size_t>(k)].voltage.push_back(v);
      out[static_cast<std::size_t>(k)].counts.push_back(rng.poisson(shots_per_point * p));
    }
  }
  return out;
}

FringeData simulate_fringe(const ChipModel& chip, int heater, const mesh::MeshConfig& routing,
                           int input_mode, int detect_mode, const std::vector<double>& sweep,
                           double shots_per_point, Rng& rng) {
  return simulate_fringe_pair(chip, heater, routing, input_mode, detect_mode, 0, sweep,
                              shots_per_point, rng)[0];
}

FringeFit fit_fringe(const FringeData& data) {
  const std::size_t n = data.voltage.size();
  if (n < 10) throw std::invalid_argument("fit_fringe: need at least 10 sweep points");

  std::vector<double> c(n), v2(n), v3(n), w(n);
  double cmax = 0, cmin = 1e300;
  for (std::size_t i = 0; i < n; ++i) {
    c[i] = static_cast<double>(data.counts[i]);
    v2[i] = data.voltage[i] * data.voltage[i];
    v3[i] = v2[i] * data.voltage[i];
    w[i] = 1.0 / std::max(c[i], 1.0);  // Poisson weights
    cmax = std::max(cmax, c[i]);
    cmin = std::min(cmin, c[i]);
  }
  const double mean = std::accumulate(c.begin(), c.end(), 0.0) / static_cast<double>(n);
  if (cmax - cmin < 5.0 * std::sqrt(std::max(mean, 1.0)))
    throw std::runtime_error("fit_fringe: fringe amplitude not identifiable (constant data)");

  struct Params {
    double a, b, alpha, beta, gamma;
  };
  auto sse = [&](const Params& p) {
    double s = 0;
    for (std::size_t i = 0; i < n; ++i) {
      const double model = p.a - p.b * std::cos(p.alpha + p.beta * v2[i] + p.gamma * v3[i]);
      s += w[i] * (model - c[i]) * (model - c[i]);
    }
    return s;
  };

  // Coarse grid on (alpha, beta) with (a, b) solved linearly.
  Params best{mean, (cmax - cmin) / 2, 0, 0.15, 0};
  double best_sse = 1e300;
  const double vmax2 = *std::max_element(v2.begin(), v2.end());
  for (int bi = 0; bi <= 80; ++bi) {
    // beta spanning 0.5 to 6 fringes over the sweep
    const double beta = (0.5 + 5.5 * bi / 80.0) * kTwoPi / vmax2;
    for (int ai = 0; ai < 32; ++ai) {
      const double alpha = ai * kTwoPi / 32;
      // linear solve for a, b
      double sw = 0, swx = 0, swy = 0, swxx = 0, swxy = 0;
      for (std::size_t i = 0; i < n; ++i) {
        const double x = -std::cos(alpha + beta * v2[i]);
        sw += w[i];
        swx += w[i] * x;
        swy += w[i] * c[i];
        swxx += w[i] * x * x;
        swxy += w[i] * x * c[i];
      }
      const double det = sw * swxx - swx * swx;
      if (std::abs(det) < 1e-12) continue;
      const double a = (swxx * swy - swx * swxy) / det;
      const double b = (sw * swxy - swx * swy) / det;
      Params p{a, b, alpha, beta, 0};
      const double s = sse(p);
      if (s < best_sse) {
        best_sse = s;
        best = p;
      }
    }
  }

  // Levenberg-Marquardt refinement, restarted over gamma seeds.
  auto refine = [&](Params p, int max_iter, int* iters_out) {
    double lambda = 1e-3;
    double s = sse(p);
    int it = 0;
    for (; it < max_iter; ++it) {
      Eigen::Matrix<double, 5, 5> jtj = Eigen::Matrix<double, 5, 5>::Zero();
      Eigen::Matrix<double, 5, 1> jtr = Eigen::Matrix<double, 5, 1>::Zero();
      for (std::size_t i = 0; i < n; ++i) {
        const double ph = p.alpha + p.beta * v2[i] + p.gamma * v3[i];
        const double model = p.a - p.b * std::cos(ph);
        const double r = model - c[i];
        Eigen::Matrix<double, 5, 1> j;
        j << 1.0, -std::cos(ph), p.b * std::sin(ph), p.b * std::sin(ph) * v2[i],
            p.b * std::sin(ph) * v3[i];
        jtj += w[i] * j * j.transpose();
        jtr += w[i] * j * r;
      }
      bool stepped = false;
      for (int tries = 0; tries < 12; ++tries) {
        Eigen::Matrix<double, 5, 5> m = jtj;
        for (int d = 0; d < 5; ++d) m(d, d) *= 1.0 + lambda;
        const Eigen::Matrix<double, 5, 1> step = m.ldlt().solve(jtr);
        Params q{p.a - step(0), p.b - step(1), p.alpha - step(2), p.beta - step(3),
                 p.gamma - step(4)};
        const double sq = sse(q);
        if (sq < s) {
          const double rel = (s - sq) / std::max(s, 1e-300);
          p = q;
          s = sq;
          lambda = std::max(lambda * 0.3, 1e-12);
          stepped = true;
          if (rel < 1e-12) it = max_iter;
          break;
        }
        lambda *= 10;
      }
      if (!stepped) break;
    }
    if (iters_out) *iters_out = it;
    return std::pair<Params, double>(p, s);
  };

  int iters = 0;
  auto [p0, s0] = refine(best, 400, &iters);
  Params p = p0;
  double s = s0;
  for (double gseed : {2e-4, 5e-4, -2e-4}) {
    Params start = best;
    start.gamma = gseed;
    auto [pg, sg] = refine(start, 400, nullptr);
    if (sg < s) {
      p = pg;
      s = sg;
    }
  }

  // canonicalize: b >= 0, alpha in [0, 2pi)
  if (p.b < 0) {
    p.b = -p.b;
    p.alpha += M_PI;
  }
  p.alpha = wrap(p.alpha);

  FringeFit fit;
  fit.a = p.a;
  fit.b = p.b;
  fit.alpha = p.alpha;
  fit.beta = p.beta;
  fit.gamma = p.gamma;
  fit.iterations = iters;
  fit.converged = true;
  fit.rms_residual = std::sqrt(s / static_cast<double>(n));
  {
    Eigen::Matrix<double, 5, 5> jtj = Eigen::Matrix<double, 5, 5>::Zero();
    for (std::size_t i = 0; i < n; ++i) {
      const double ph = p.alpha + p.beta * v2[i] + p.gamma * v3[i];
      Eigen::Matrix<double, 5, 1> j;
      j << 1.0, -std::cos(ph), p.b * std::sin(ph), p.b * std::sin(ph) * v2[i],
          p.b * std::sin(ph) * v3[i];
      jtj += w[i] * j * j.transpose();
    }
    const Eigen::Matrix<double, 5, 5> cov =
        jtj.ldlt().solve(Eigen::Matrix<double, 5, 5>::Identity());
    for (int d = 0; d < 5; ++d) fit.std_error[static_cast<std::size_t>(d)] = std::sqrt(std::max(cov(d, d), 0.0));
  }
  return fit;
}

namespace {

// Model-predicted fringe offset: intensity at the detector as a function of
// the swept heater's phase x is |a + b e^{ix}|^2 = A - B cos(x + delta) with
// delta = arg(b/a) - pi. Computed from the controller's current estimates so
// upstream calibration error propagates realistically.
double predicted_offset(const ChipModel& believed, const std::vector<double>& phases, int heater,
                        int input, int detect) {
  const Complex a0 = probe_amplitude(believed, phases, heater, 0.0, input, detect);
  const Complex api = probe_amplitude(believed, phases, heater, M_PI, input, detect);
  const Complex a = 0.5 * (a0 + api);
  const Complex b = 0.5 * (a0 - api);
  if (std::abs(a) < 1e-9 || std::abs(b) < 1e-9) return M_PI;  // pure (1 - cos)/2 port
  return std::arg(b / a) - M_PI;
}

struct FringeTask {
  int row, diag;
  bool phi;
  int input_mode, detect_mode;
  mesh::MeshConfig routing;
};

}  // namespace

CalibrationResult run_calibration(const ChipModel& chip, long long shots_per_fringe, Rng& rng) {
  const int m = chip.mode_count;
  mesh::MeshConfig layout(m);

  // Estimates start blank; routing always uses the estimates gathered so far,
  // exactly as the hardware procedure must. Offset predictions assume nominal
  // couplers; coupler imperfections then land in the final residual.
  ChipModel believed = chip;
  believed.calibrated.assign(static_cast<std::size_t>(chip.heater_count()), HeaterModel{});
  believed.coupler_reflectivity.assign(believed.coupler_reflectivity.size(), 0.5);
  std::vector<bool> characterized(static_cast<std::size_t>(chip.heater_count()), false);
  std::vector<double> fit_rms(static_cast<std::size_t>(chip.heater_count()), 0.0);

  const int sweep_points = 80;
  std::vector<double> sweep(sweep_points);
  for (int k = 0; k < sweep_points; ++k)
    sweep[static_cast<std::size_t>(k)] = 1.8 + (10.0 - 1.8) * k / (sweep_points - 1);
  const double shots_per_point =
      static_cast<double>(shots_per_fringe) / static_cast<double>(sweep_points);
  int fringes = 0;

  auto measure = [&](const FringeTask& task) {
    const int h = heater_index(layout, task.row, task.diag, task.phi);
    // The physical chip dialed with the controller's current estimates.
    ChipModel rig = chip;
    rig.calibrated = believed.calibrated;
    const auto data = simulate_fringe_pair(rig, h, task.routing, task.input_mode,
                                           task.detect_mode, task.detect_mode + 1, sweep,
                                           shots_per_point, rng);
    ++fringes;

    // Circuit-induced offsets predicted at the nominal settings.
    std::vector<double> nominal(static_cast<std::size_t>(chip.heater_count()));
    for (const auto& p : task.routing.params()) {
      nominal[static_cast<std::size_t>(heater_index(layout, p.row, p.diag, false))] = p.alpha;
      nominal[static_cast<std::size_t>(heater_index(layout, p.row, p.diag, true))] = p.phi;
    }

    // Fit both output ports independently and combine by inverse variance;
    // the phase offset estimate is averaged circularly. The complementary
    // port is opportunistic: when it carries no usable fringe only the
    // primary is kept, but a primary-port failure aborts the run.
    double acc_sin = 0, acc_cos = 0, acc_beta = 0, acc_gamma = 0, acc_wb = 0;
    double rms = 0;
    for (int port = 0; port < 2; ++port) {
      FringeFit fit;
      try {
        fit = fit_fringe(data[static_cast<std::size_t>(port)]);
      } catch (const std::exception& e) {
        if (port == 0) {
          std::ostringstream os;
          os << "calibration aborted at " << (task.phi ? "phi" : "alpha") << "(" << task.row
             << "," << task.diag << "): " << e.what();
          throw std::runtime_error(os.str());
        }
        continue;
      }
      const double delta = predicted_offset(believed, nominal, h, task.input_mode,
                                            data[static_cast<std::size_t>(port)].detect_mode);
      const double a0 = fit.alpha - delta;
      const double w_off = 1.0 / std::max(fit.std_error[2] * fit.std_error[2], 1e-12);
      const double w_curve = 1.0 / std::max(fit.std_error[3] * fit.std_error[3], 1e-16);
      acc_sin += w_off * std::sin(a0);
      acc_cos += w_off * std::cos(a0);
      acc_beta += w_curve * fit.beta;
      acc_gamma += w_curve * fit.gamma;
      acc_wb += w_curve;
      rms = std::max(rms, fit.rms_residual);
    }

    HeaterModel est;
    est.alpha0 = wrap(std::atan2(acc_sin, acc_cos));
    est.beta = acc_beta / acc_wb;
    est.gamma = acc_gamma / acc_wb;
    est.v_min = chip.heaters[static_cast<std::size_t>(h)].v_min;
    est.v_max = chip.heaters[static_cast<std::size_t>(h)].v_max;
    believed.calibrated[static_cast<std::size_t>(h)] = est;
    characterized[static_cast<std::size_t>(h)] = true;
    fit_rms[static_cast<std::size_t>(h)] = rms;
  };

  // Alpha staircases: inject into mode i, upstream crossings at the lifted
  // 2*pi point, rows above at bar.
  for (int i = 1; i <= m - 1; ++i) {
    for (int j = i; j <= m - 1; ++j) {
      FringeTask task;
      task.row = i;
      task.diag = j;
      task.phi = false;
      task.input_mode = i;
      task.detect_mode = j;  // the (1 - cos)/2 port of (i, j)
      mesh::MeshConfig routing(m);
      for (const auto& p : routing.params()) {
        // bar by default: uncharacterized rows are only ever downstream of
        // the probe light, and both exit ports stay on their rails
        double alpha = M_PI;
        if (p.row == i && p.diag < j) alpha = kTwoPi;  // walked crossings
        routing.set(p.row, p.diag, alpha, 0.0);
      }
      task.routing = routing;
      measure(task);
    }
  }

  // Phi interferometers: column j from m-1 down to 2, pairs (i+1, j)
  // splitter and (i, j) recombiner at pi/2, everything else bar. The fringe
  // offset of (i, j) rides on the phase realized at (i+1, j+1) inside the
  // interferometer arm, so offset errors chain column over column; a second
  // pass with the completed estimate table breaks the chain.
  for (int pass = 0; pass < 2; ++pass) {
    for (int j = m - 1; j >= 2; --j) {
      for (int i = j - 1; i >= 1; --i) {
        FringeTask task;
        task.row = i;
        task.diag = j;
        task.phi = true;
        task.input_mode = j;
        task.detect_mode = j;
        mesh::MeshConfig routing(m);
        for (const auto& p : routing.params()) {
          double alpha = M_PI;
          if (p.row == i && p.diag == j) alpha = M_PI / 2;
          if (p.row == i + 1 && p.diag == j) alpha = M_PI / 2;
          routing.set(p.row, p.diag, alpha, 0.0);
        }
        task.routing = routing;
        measure(task);
      }
    }
  }

  CalibrationResult result;
  result.estimated = believed.calibrated;
  // The five input-side phases (k,k) never produce interference with Fock
  // inputs; give them the physical truth flag of "gauge, not characterized".
  for (int k = 1; k <= m - 1; ++k) {
    const int h = heater_index(layout, k, k, true);
    characterized[static_cast<std::size_t>(h)] = false;
    result.estimated[static_cast<std::size_t>(h)] = HeaterModel{};
  }
  result.characterized = characterized;
  result.fit_rms = fit_rms;
  result.fringes_measured = fringes;
  return result;
}

double calibration_rms_error(const ChipModel& chip, const CalibrationResult& cal) {
  double acc = 0;
  int count = 0;
  for (int h = 0; h < chip.heater_count(); ++h) {
    if (!cal.characterized[static_cast<std::size_t>(h)]) continue;
    const HeaterModel& truth = chip.heaters[static_cast<std::size_t>(h)];
    const HeaterModel& est = cal.estimated[static_cast<std::size_t>(h)];
    for (int k = 0; k <= 40; ++k) {
      const double v = 1.8 + (10.0 - 1.8) * k / 40.0;
      const double d = wrap_pm(est.phase(v) - truth.phase(v));
      acc += d * d;
      ++count;
    }
  }
  return std::sqrt(acc / std::max(count, 1));
}

PhaseAccuracyResult benchmark_phase_accuracy(const ChipModel& chip, int n_configs,
                                             long long shots_per_config, Rng& rng) {
  const int m = chip.mode_count;
  mesh::MeshConfig layout(m);

  // Haar-random first-row alpha vectors; the rest of the mesh at bar.
  std::vector<std::vector<double>> alphas(static_cast<std::size_t>(n_configs));
  for (auto& v : alphas) {
    v.resize(static_cast<std::size_t>(m - 1));
    for (int j = 1; j <= m - 1; ++j)
      v[static_cast<std::size_t>(j - 1)] = 2.0 * std::asin(std::sqrt(rng.beta_1_k(m - j)));
  }

  auto config_for = [&](const std::vector<double>& a) {
    mesh::MeshConfig c = mesh::MeshConfig::all_bar(m);
    for (int j = 1; j <= m - 1; ++j) c.set(1, j, a[static_cast<std::size_t>(j - 1)], 0.0);
    return c;
  };

  auto theory_dist = [&](const std::vector<double>& a) {
    const CMat u = mesh::compose(config_for(a));
    std::vector<double> p(static_cast<std::size_t>(m));
    for (int k = 0; k < m; ++k) p[static_cast<std::size_t>(k)] = std::norm(u(k, 0));
    return p;
  };

  auto fidelity = [&](const std::vector<double>& counts, const std::vector<double>& theory) {
    double tot = std::accumulate(counts.begin(), counts.end(), 0.0);
    double f = 0;
    for (std::size_t k = 0; k < counts.size(); ++k)
      f += std::sqrt(counts[k] / tot * theory[k]);
    return f;
  };

  // Experimental mean fidelity on the virtual chip.
  double f_exp = 0;
  for (const auto& a : alphas) {
    const CMat u = chip.realized_unitary(config_for(a), rng);
    std::vector<double> p(static_cast<std::size_t>(m));
    for (int k = 0; k < m; ++k) p[static_cast<std::size_t>(k)] = std::norm(u(k, 0));
    const std::vector<long long> counts = rng.multinomial(shots_per_config, p);
    std::vector<double> cd(counts.begin(), counts.end());
    f_exp += fidelity(cd, theory_dist(a));
  }
  f_exp /= n_configs;

  // Monte-Carlo noise curve F^m(delta) on the same configurations.
  PhaseAccuracyResult res;
  res.mean_fidelity = f_exp;
  for (double delta = 0.0; delta <= 0.26; delta += 0.02) {
    double fm = 0;
    for (const auto& a : alphas) {
      mesh::MeshConfig noisy = config_for(a);
      for (const auto& p : noisy.params())
        noisy.set(p.row, p.diag, p.alpha + rng.normal(0, delta), p.phi + rng.normal(0, delta));
      const CMat u = mesh::compose(noisy);
      std::vector<double> pd(static_cast<std::size_t>(m));
      for (int k = 0; k < m; ++k) pd[static_cast<std::size_t>(k)] = std::norm(u(k, 0));
      const std::vector<long long> counts = rng.multinomial(shots_per_config, pd);
      std::vector<double> cd(counts.begin(), counts.end());
      fm += fidelity(cd, theory_dist(a));
    }
    res.curve_noise.push_back(delta);
    res.curve_fidelity.push_back(fm / n_configs);
  }

  // Invert the (monotone-decreasing, noisy) curve by linear interpolation on
  // its running minimum envelope.
  std::vector<double> env = res.curve_fidelity;
  for (std::size_t k = 1; k < env.size(); ++k) env[k] = std::min(env[k], env[k - 1]);
  double delta_est = res.curve_noise.back();
  if (f_exp >= env.front()) {
    delta_est = res.curve_noise.front();
  } else {
    for (std::size_t k = 1; k < env.size(); ++k) {
      if (f_exp >= env[k]) {
        const double t = (env[k - 1] - f_exp) / std::max(env[k - 1] - env[k], 1e-15);
        delta_est = res.curve_noise[k - 1] + t * (res.curve_noise[k] - res.curve_noise[k - 1]);
        break;
      }
    }
  }
  res.delta_phi = delta_est;
  return res;
}

}  // namespace lpu::chip
