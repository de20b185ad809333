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

// Batch experiment runner: every protocol as a subcommand with seeded,
// file-based inputs and outputs. Exit codes: 0 success, 1 usage error,
// 2 runtime failure.

#include <chrono>
#include <cstdint>
#include <filesystem>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "lpu/chip.hpp"
#include "lpu/chm.hpp"
#include "lpu/fock.hpp"
#include "lpu/gates.hpp"
#include "lpu/io.hpp"
#include "lpu/mesh.hpp"
#include "lpu/protocols.hpp"
#include "lpu/rng.hpp"
#include "lpu/tomography.hpp"

namespace {

namespace fs = std::filesystem;
using nlohmann::json;
using namespace lpu;

struct RunContext {
  std::string protocol;
  fs::path out_dir = ".";
  std::uint64_t seed = 0;
  json config = json::object();
  json metrics = json::object();
  json provenance = json::object();
  std::vector<std::string> data_files;
  std::vector<fs::path> written;
  std::chrono::steady_clock::time_point t0 = std::chrono::steady_clock::now();

  fs::path emit(const std::string& name, const std::string& contents) {
    const fs::path p = out_dir / name;
    io::atomic_write(p, contents);
    written.push_back(p);
    data_files.push_back(name);
    return p;
  }

  void finish() {
    json report;
    report["schema"] = io::kReportSchema;
    report["protocol"] = protocol;
    report["config"] = config;
    report["seed"] = seed;
    report["metrics"] = metrics;
    report["data_files"] = data_files;
    provenance["version"] = LPUSIM_VERSION;
    report["provenance"] = provenance;
    report["wall_clock_seconds"] =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    io::atomic_write(out_dir / "report.json", report.dump(2) + "\n");
    std::cout << "report: " << (out_dir / "report.json").string() << "\n";
  }

  void discard_partial() {
    for (const auto& p : written) {
      std::error_code ec;
      fs::remove(p, ec);
    }
  }
};

std::string format_hash(std::uint64_t h) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "0x%016llx", static_cast<unsigned long long>(h));
  return buf;
}

chip::ChipModel load_or_default_chip(const std::string& chip_file, std::uint64_t seed,
                                     RunContext& ctx) {
  if (!chip_file.empty()) {
    const std::string bytes = io::read_file(chip_file);
    ctx.provenance["chip_file_hash"] = format_hash(io::fnv1a64(bytes));
    return io::chip_from_json(bytes);
  }
  Rng rng(Rng::derive(seed, 0xc41b));
  return chip::ChipModel::randomized(6, rng);
}

json fidelity_histogram(const std::vector<double>& f, int bins, double lo, double hi) {
  std::vector<int> h(static_cast<std::size_t>(bins), 0);
  for (double x : f) {
    int b = static_cast<int>((x - lo) / (hi - lo) * bins);
    b = std::clamp(b, 0, bins - 1);
    ++h[static_cast<std::size_t>(b)];
  }
  json out = json::array();
  for (int b = 0; b < bins; ++b)
    out.push_back({{"lo", lo + (hi - lo) * b / bins},
                   {"hi", lo + (hi - lo) * (b + 1) / bins},
                   {"count", h[static_cast<std::size_t>(b)]}});
  return out;
}

// ----------------------------------------------------------------------
// subcommand bodies

void cmd_compose(RunContext& ctx, const std::string& config_file) {
  const mesh::MeshConfig cfg = io::load_mesh_config(config_file);
  const CMat u = mesh::compose(cfg);
  ctx.emit("matrix.json", io::matrix_to_json(u));
  ctx.metrics["unitarity_deviation"] = unitarity_deviation(u);
  ctx.metrics["mode_count"] = cfg.mode_count();
}

void cmd_decompose(RunContext& ctx, const std::string& matrix_file) {
  const CMat u = io::load_matrix(matrix_file);
  const mesh::Decomposition d = mesh::decompose(u);
  ctx.emit("mesh-config.json", io::mesh_config_to_json(d.config));
  json residual = json::array();
  for (int k = 0; k < d.residual_diag.size(); ++k)
    residual.push_back({d.residual_diag(k).real(), d.residual_diag(k).imag()});
  ctx.metrics["residual_diag"] = residual;
  const CMat rebuilt = d.residual_diag.asDiagonal() * mesh::compose(d.config);
  ctx.metrics["roundtrip_fidelity"] = mesh::unitary_fidelity(rebuilt, u);
}

void cmd_haar(RunContext& ctx, int modes) {
  Rng rng(ctx.seed);
  const mesh::MeshConfig cfg = mesh::haar_sample(modes, rng);
  ctx.emit("mesh-config.json", io::mesh_config_to_json(cfg));
  ctx.emit("matrix.json", io::matrix_to_json(mesh::compose(cfg)));
  ctx.metrics["mode_count"] = modes;
}

void cmd_simulate(RunContext& ctx, const std::string& config_file, const std::string& input,
                  const std::string& backend, const std::string& chip_file,
                  const std::string& model, const std::string& subspace, long long shots) {
  const mesh::MeshConfig cfg = io::load_mesh_config(config_file);
  const fock::FockState in = fock::FockState::parse(input);
  const fock::Subspace sub = subspace == "full" ? fock::Subspace::kFull
                                                : fock::Subspace::kCollisionFree;
  Rng rng(ctx.seed);
  if (backend == "exact") {
    const CMat u = mesh::compose(cfg);
    const fock::PhotonModel pm =
        model == "classical" ? fock::PhotonModel::kClassical : fock::PhotonModel::kQuantum;
    fock::OutcomeDistribution dist = fock::output_distribution(u, in, pm, sub);
    if (sub == fock::Subspace::kCollisionFree) {
      const double mass = dist.total_mass();
      ctx.metrics["subspace_mass"] = mass;
      for (auto& [k, v] : dist.p) v /= mass;
    }
    ctx.emit("distribution.txt", io::distribution_table(dist, ctx.seed));
    if (shots > 0) {
      const auto counts = fock::sample_counts(dist, shots, rng);
      ctx.emit("counts.txt",
               io::counts_table(counts, in.modes(), in.total_photons(),
                                fock::subspace_name(sub), ctx.seed));
      ctx.metrics["statistical_fidelity"] = fock::statistical_fidelity(counts, dist);
    }
  } else {
    const chip::ChipModel cm = load_or_default_chip(chip_file, ctx.seed, ctx);
    const chip::ExperimentResult res =
        chip::run_experiment(cm, cfg, chip::SourceModel::ideal(), in, {}, shots, rng);
    ctx.emit("counts.txt", io::counts_table(res.counts, in.modes(), in.total_photons(),
                                            "clicks", ctx.seed));
    ctx.metrics["shots"] = shots;
  }
}

void cmd_boson_sample(RunContext& ctx, int unitaries, const std::string& input, long long shots,
                      const std::string& backend, const std::string& chip_file,
                      double phase_noise, int workers) {
  protocols::BosonSamplingOptions opt;
  opt.n_unitaries = unitaries;
  opt.input = fock::FockState::parse(input);
  opt.shots = shots;
  opt.backend = backend == "chip" ? protocols::Backend::kChip : protocols::Backend::kExact;
  opt.phase_noise = phase_noise;
  opt.workers = workers;
  chip::ChipModel cm;
  const chip::ChipModel* cmp = nullptr;
  if (opt.backend == protocols::Backend::kChip) {
    cm = load_or_default_chip(chip_file, ctx.seed, ctx);
    cmp = &cm;
  }
  const protocols::BosonSamplingResult res =
      protocols::boson_sampling_campaign(opt, ctx.seed, cmp);
  std::string table = "# unitary statistical_fidelity\n";
  for (std::size_t k = 0; k < res.fidelities.size(); ++k) {
    char buf[48];
    std::snprintf(buf, sizeof buf, "%zu %.12f\n", k, res.fidelities[k]);
    table += buf;
  }
  ctx.emit("fidelities.txt", table);
  ctx.metrics["mean_fidelity"] = res.mean;
  ctx.metrics["stddev_fidelity"] = res.stddev;
  ctx.metrics["histogram"] = fidelity_histogram(res.fidelities, 40, 0.9, 1.0);
}

void cmd_ztl(RunContext& ctx, const std::string& photons, const std::string& matrix_name,
             long long shots) {
  const fock::FockState in = fock::FockState::parse(photons);
  CMat u;
  if (matrix_name.rfind("fourier", 0) == 0 || matrix_name == "s6" || matrix_name == "g6")
    u = protocols::chm(protocols::ChmDescriptor::parse(matrix_name));
  else
    u = io::load_matrix(matrix_name);

  fock::OutcomeDistribution q = fock::output_distribution(u, in, fock::PhotonModel::kQuantum,
                                                          fock::Subspace::kCollisionFree);
  const fock::OutcomeDistribution c = fock::output_distribution(
      u, in, fock::PhotonModel::kClassical, fock::Subspace::kCollisionFree);
  ctx.metrics["nu_quantum"] = protocols::ztl_violation(q, in);
  ctx.metrics["nu_classical"] = protocols::ztl_violation(c, in);

  std::string table = "# outcome probability suppressed\n";
  int suppressed = 0;
  for (const auto& [state, p] : q.p) {
    const bool s = protocols::ztl_suppressed(in, fock::assignment_from_state(state));
    suppressed += s;
    char buf[64];
    std::snprintf(buf, sizeof buf, "%s %.17g %d\n", state.str().c_str(), p, s ? 1 : 0);
    table += buf;
  }
  ctx.emit("outcomes.txt", table);
  ctx.metrics["suppressed_outcomes"] = suppressed;
  ctx.metrics["total_outcomes"] = static_cast<int>(q.p.size());

  if (shots > 0) {
    Rng rng(ctx.seed);
    const double mass = q.total_mass();
    for (auto& [k, v] : q.p) v /= mass;
    const auto counts = fock::sample_counts(q, shots, rng);
    ctx.emit("counts.txt", io::counts_table(counts, in.modes(), in.total_photons(),
                                            "collision_free", ctx.seed));
    ctx.metrics["nu_sampled"] = protocols::ztl_violation(counts, in);
  }
}

void cmd_bayes_verify(RunContext& ctx, long long events, int trials,
                      const std::string& sample_from) {
  const CMat f6 = protocols::chm(protocols::ChmDescriptor::fourier(6));
  const fock::FockState in = fock::FockState::parse("101010");
  auto normalized = [&](fock::PhotonModel m) {
    fock::OutcomeDistribution d =
        fock::output_distribution(f6, in, m, fock::Subspace::kCollisionFree);
    const double mass = d.total_mass();
    for (auto& [k, v] : d.p) v /= mass;
    return d;
  };
  const fock::OutcomeDistribution pq = normalized(fock::PhotonModel::kQuantum);
  const fock::OutcomeDistribution pc = normalized(fock::PhotonModel::kClassical);
  const fock::OutcomeDistribution& src = sample_from == "classical" ? pc : pq;

  std::vector<int> to99;
  json traces = json::array();
  for (int t = 0; t < trials; ++t) {
    Rng rng(Rng::derive(ctx.seed, static_cast<std::uint64_t>(t)));
    std::vector<fock::FockState> evs;
    std::vector<const fock::FockState*> keys;
    std::vector<double> probs;
    for (const auto& [k, v] : src.p) {
      keys.push_back(&k);
      probs.push_back(v);
    }
    for (long long e = 0; e < events; ++e) {
      double x = rng.uniform();
      double acc = 0;
      std::size_t idx = keys.size() - 1;
      for (std::size_t i = 0; i < probs.size(); ++i) {
        acc += probs[i];
        if (x < acc) {
          idx = i;
          break;
        }
      }
      evs.push_back(*keys[idx]);
    }
    const protocols::BayesianTrace trace = protocols::bayesian_verify(evs, pq, pc);
    to99.push_back(trace.events_to_099);
    if (t == 0) {
      for (double cnf : trace.confidence) traces.push_back(cnf);
    }
  }
  std::string table = "# event confidence (trial 0)\n";
  for (std::size_t k = 0; k < traces.size(); ++k) {
    char buf[48];
    std::snprintf(buf, sizeof buf, "%zu %.9f\n", k + 1, traces[k].get<double>());
    table += buf;
  }
  ctx.emit("trace.txt", table);
  std::vector<int> reached;
  for (int v : to99)
    if (v > 0) reached.push_back(v);
  std::sort(reached.begin(), reached.end());
  ctx.metrics["trials"] = trials;
  ctx.metrics["trials_reaching_099"] = static_cast<int>(reached.size());
  ctx.metrics["median_events_to_099"] =
      reached.empty() ? -1 : reached[reached.size() / 2];
}

void cmd_chm(RunContext& ctx, const std::string& name, double t1, double t2, bool family) {
  const CMat u = family ? protocols::chm(protocols::ChmDescriptor::f6_two_param(t1, t2))
                        : protocols::chm(protocols::ChmDescriptor::parse(name));
  ctx.emit("matrix.json", io::matrix_to_json(u));
  const double tol = (!family && name == "g6") ? 5e-3 : 1e-9;
  ctx.metrics["is_chm"] = protocols::is_chm(u, tol);
  ctx.metrics["tolerance"] = tol;
  ctx.metrics["unitarity_deviation"] = unitarity_deviation(u);
}

void cmd_manifold(RunContext& ctx, const std::string& kind, int grid,
                  const std::string& photons, const std::vector<int>& pairs) {
  std::string table;
  if (kind == "ztl") {
    const fock::FockState in = fock::FockState::parse(photons);
    const auto pts = protocols::ztl_violation_manifold(grid, in);
    table = "# theta1 theta2 nu\n";
    double min_v = 1e9, min_t1 = 0, min_t2 = 0;
    for (const auto& p : pts) {
      char buf[96];
      std::snprintf(buf, sizeof buf, "%.9f %.9f %.12f\n", p.theta1, p.theta2, p.value);
      table += buf;
      if (p.value < min_v) {
        min_v = p.value;
        min_t1 = p.theta1;
        min_t2 = p.theta2;
      }
    }
    ctx.metrics["min_nu"] = min_v;
    ctx.metrics["argmin_theta1"] = min_t1;
    ctx.metrics["argmin_theta2"] = min_t2;
  } else {
    if (pairs.size() != 4) throw CLI::ValidationError("--pairs needs in_a in_b out_a out_b");
    const auto pts = protocols::two_photon_manifold(grid, pairs[0], pairs[1], pairs[2], pairs[3]);
    table = "# theta1 theta2 probability\n";
    for (const auto& p : pts) {
      char buf[96];
      std::snprintf(buf, sizeof buf, "%.9f %.9f %.12f\n", p.theta1, p.theta2, p.value);
      table += buf;
    }
  }
  ctx.emit("manifold.txt", table);
  ctx.metrics["grid_points"] = grid;
}

void cmd_gate(RunContext& ctx, const std::string& name, const std::string& input) {
  const protocols::GateSpec g = protocols::gate_library(name);
  if (name == "bsg") {
    const protocols::HeraldedRunResult r = protocols::run_bsg_exact(g);
    ctx.metrics["success_probability"] = r.success_probability;
    const protocols::BsgCorrelations c = protocols::bsg_exact_correlations(g);
    ctx.metrics["zz"] = c.zz;
    ctx.metrics["xx"] = c.xx;
    ctx.metrics["witness"] = protocols::entanglement_witness(c.xx, c.zz);
    Eigen::Vector4cd phi = Eigen::Vector4cd::Zero();
    phi(0) = phi(3) = 1.0 / std::sqrt(2.0);
    ctx.metrics["bell_fidelity"] = std::norm(phi.dot(r.logical_amplitudes));
  } else if (name == "heralded_cnot") {
    const protocols::TruthTable t = protocols::heralded_cnot_truth_table(g);
    json tt = json::array();
    for (int r = 0; r < 4; ++r) {
      json row = json::array();
      for (int c = 0; c < 4; ++c) row.push_back(t.probabilities(r, c));
      tt.push_back(row);
    }
    ctx.metrics["truth_table"] = tt;
    ctx.metrics["success_probability"] = t.success_probability[0];
  } else if (name == "postselected_cnot") {
    const protocols::TruthTable t = protocols::postselected_cnot_truth_table();
    json tt = json::array();
    for (int r = 0; r < 4; ++r) {
      json row = json::array();
      for (int c = 0; c < 4; ++c) row.push_back(t.probabilities(r, c));
      tt.push_back(row);
    }
    ctx.metrics["truth_table"] = tt;
    ctx.metrics["success_probability"] = t.success_probability[0];
  } else {
    throw CLI::ValidationError("unknown gate: " + name);
  }
  ctx.emit("gate-matrix.json", io::matrix_to_json(g.matrix));
  ctx.emit("gate-config.json", io::mesh_config_to_json(g.config));
  ctx.config["input"] = input;
}

void cmd_calibrate(RunContext& ctx, const std::string& chip_file, long long shots_per_fringe) {
  chip::ChipModel cm = load_or_default_chip(chip_file, ctx.seed, ctx);
  Rng rng(Rng::derive(ctx.seed, 1));
  const chip::CalibrationResult cal = chip::run_calibration(cm, shots_per_fringe, rng);
  ctx.metrics["fringes_measured"] = cal.fringes_measured;
  ctx.metrics["rms_phase_error"] = chip::calibration_rms_error(cm, cal);
  chip::ChipModel updated = cm;
  updated.calibrated = cal.estimated;
  ctx.emit("chip-calibrated.json", io::chip_to_json(updated));
  // voltage table for the all-bar setting under the new calibration
  const std::vector<double> volts =
      updated.voltages_for_config(mesh::MeshConfig::all_bar(cm.mode_count));
  ctx.emit("voltages-all-bar.txt", io::voltage_table(volts, true));
  int flagged = 0;
  for (bool c : cal.characterized)
    if (!c) ++flagged;
  ctx.metrics["gauge_heaters_flagged"] = flagged;
}

void cmd_benchmark_phase(RunContext& ctx, const std::string& chip_file, int configs,
                         long long shots, double injected_noise) {
  chip::ChipModel cm = load_or_default_chip(chip_file, ctx.seed, ctx);
  if (injected_noise > 0) cm.phase_setting_noise = injected_noise;
  Rng rng(Rng::derive(ctx.seed, 2));
  const chip::PhaseAccuracyResult res =
      chip::benchmark_phase_accuracy(cm, configs, shots, rng);
  ctx.metrics["mean_fidelity"] = res.mean_fidelity;
  ctx.metrics["delta_phi"] = res.delta_phi;
  std::string table = "# delta_phi mean_fidelity\n";
  for (std::size_t k = 0; k < res.curve_noise.size(); ++k) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.4f %.9f\n", res.curve_noise[k], res.curve_fidelity[k]);
    table += buf;
  }
  ctx.emit("noise-curve.txt", table);
}

std::string counts_file_text(const std::vector<tomo::CountsRecord>& records) {
  std::string out = "# prep meas outcome count total\n";
  for (const auto& rec : records) {
    std::string prep, meas;
    for (std::size_t q = 0; q < rec.setting.prep.size(); ++q) {
      if (q) {
        prep += ",";
        meas += ",";
      }
      prep += qubits::state_name(rec.setting.prep[q]);
      meas += qubits::basis_name(rec.setting.meas[q]);
    }
    for (std::size_t o = 0; o < rec.n.size(); ++o) {
      char buf[128];
      std::snprintf(buf, sizeof buf, "%s %s %zu %lld %lld\n", prep.c_str(), meas.c_str(), o,
                    rec.n[o], rec.total);
      out += buf;
    }
  }
  return out;
}

std::vector<tomo::CountsRecord> counts_file_parse(const std::string& text, int n_qubits) {
  std::map<std::pair<std::string, std::string>, tomo::CountsRecord> table;
  std::istringstream in(text);
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty() || line[0] == '#') continue;
    std::istringstream ls(line);
    std::string prep, meas;
    std::size_t outcome;
    long long count, total;
    if (!(ls >> prep >> meas >> outcome >> count >> total))
      throw std::runtime_error("counts file: bad line: " + line);
    auto key = std::make_pair(prep, meas);
    auto& rec = table[key];
    if (rec.n.empty()) {
      rec.n.assign(1ULL << n_qubits, 0);
      rec.total = total;
      std::istringstream ps(prep), ms(meas);
      std::string tok;
      while (std::getline(ps, tok, ',')) rec.setting.prep.push_back(qubits::parse_state(tok));
      while (std::getline(ms, tok, ',')) rec.setting.meas.push_back(qubits::parse_basis(tok));
    }
    rec.n.at(outcome) = count;
  }
  std::vector<tomo::CountsRecord> out;
  for (auto& [k, v] : table) out.push_back(std::move(v));
  return out;
}

void cmd_tomography(RunContext& ctx, const std::string& gate, long long shots_per_setting,
                    int bootstrap, const std::string& counts_file) {
  const int n_qubits = gate == "cnot" ? 2 : 1;
  CMat ideal;
  if (gate == "cnot") {
    ideal = CMat::Zero(4, 4);
    ideal(0, 0) = ideal(1, 1) = ideal(2, 3) = ideal(3, 2) = 1;
  } else {
    // through the actual mesh fragment, not the abstract matrix
    const protocols::SingleQubitGateConfig frag = protocols::single_qubit_gate_config(gate[0]);
    ideal = frag.logical_unitary();
  }
  const std::vector<tomo::Setting> settings = tomo::generate_settings(n_qubits);

  std::vector<tomo::CountsRecord> records;
  if (!counts_file.empty()) {
    records = counts_file_parse(io::read_file(counts_file), n_qubits);
  } else {
    Rng rng(Rng::derive(ctx.seed, 3));
    records = tomo::simulate_counts(tomo::choi_of_unitary(ideal), settings, shots_per_setting,
                                    rng);
    ctx.emit("counts.txt", counts_file_text(records));
  }

  const tomo::ChoiState rho = tomo::mle_reconstruct(records, n_qubits);
  auto [fp, fg] = tomo::process_and_gate_fidelity(rho, ideal);
  ctx.emit("choi.json", io::matrix_to_json(rho.rho));
  ctx.metrics["process_fidelity"] = fp;
  ctx.metrics["gate_fidelity"] = fg;
  ctx.metrics["min_eigenvalue"] = rho.min_eigenvalue;
  ctx.metrics["ptrace_residual"] = rho.ptrace_residual;
  ctx.metrics["converged"] = rho.converged;
  if (bootstrap > 0) {
    Rng rng(Rng::derive(ctx.seed, 4));
    const tomo::BootstrapResult bs =
        tomo::bootstrap_errors(records, n_qubits, ideal, bootstrap, rng);
    ctx.metrics["process_fidelity_sigma"] = bs.fp_sigma;
    ctx.metrics["gate_fidelity_sigma"] = bs.fg_sigma;
  }
}

void cmd_campaign(RunContext& ctx, const std::string& spec_file, int workers) {
  const json spec = json::parse(io::read_file(spec_file));
  const std::string protocol = spec.value("protocol", "");
  if (protocol != "boson-sample")
    throw std::runtime_error("campaign: unsupported protocol '" + protocol + "'");
  const int members = spec.value("members", 0);
  if (members <= 0) throw std::runtime_error("campaign: nothing to aggregate");

  protocols::BosonSamplingOptions opt;
  opt.n_unitaries = members;
  opt.input = fock::FockState::parse(spec.value("input", "111000"));
  opt.shots = spec.value("shots", 10000);
  opt.workers = workers;
  const protocols::BosonSamplingResult res =
      protocols::boson_sampling_campaign(opt, ctx.seed, nullptr);

  std::string table = "# member statistical_fidelity\n";
  json failures = json::array();
  for (std::size_t k = 0; k < res.fidelities.size(); ++k) {
    char buf[48];
    std::snprintf(buf, sizeof buf, "%zu %.12f\n", k, res.fidelities[k]);
    table += buf;
    if (res.fidelities[k] == 0.0) failures.push_back(k);
  }
  ctx.emit("histogram.txt", table);
  ctx.metrics["members"] = members;
  ctx.metrics["mean_fidelity"] = res.mean;
  ctx.metrics["stddev_fidelity"] = res.stddev;
  ctx.metrics["failures"] = failures;
  ctx.metrics["histogram"] = fidelity_histogram(res.fidelities, 40, 0.9, 1.0);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"lpu: reprogrammable linear-optical processor simulator"};
  app.require_subcommand(1);
  app.fallthrough();  // global flags may follow the subcommand name

  std::string out_dir = ".";
  std::uint64_t seed = 0;
  long long shots = 10000;
  std::string backend = "exact";
  std::string chip_file;
  int workers = 1;
  app.add_option("--out", out_dir, "output directory");
  app.add_option("--seed", seed, "master seed for all stochastic steps");
  app.add_option("--shots", shots, "event budget");
  app.add_option("--backend", backend, "exact | chip")
      ->check(CLI::IsMember({"exact", "chip"}));
  app.add_option("--chip", chip_file, "chip description file");
  app.add_option("--workers", workers, "parallel campaign workers");

  std::string config_file, matrix_file, input = "111000", model = "quantum",
              subspace = "collision-free";
  int modes = 6;

  auto* c_compose = app.add_subcommand("compose", "mesh phases -> unitary matrix");
  c_compose->add_option("--config", config_file, "mesh config file")->required();

  auto* c_decompose = app.add_subcommand("decompose", "unitary matrix -> mesh phases");
  c_decompose->add_option("--matrix", matrix_file, "matrix file")->required();

  auto* c_haar = app.add_subcommand("haar", "sample a Haar-random mesh setting");
  c_haar->add_option("--modes", modes, "mode count");

  auto* c_sim = app.add_subcommand("simulate", "output distribution / sampled counts");
  c_sim->add_option("--config", config_file)->required();
  c_sim->add_option("--input", input, "occupation digit string");
  c_sim->add_option("--model", model, "quantum | classical")
      ->check(CLI::IsMember({"quantum", "classical"}));
  c_sim->add_option("--subspace", subspace, "full | collision-free")
      ->check(CLI::IsMember({"full", "collision-free"}));

  int unitaries = 100;
  double phase_noise = 0.0;
  auto* c_bs = app.add_subcommand("boson-sample", "Haar-random sampling campaign");
  c_bs->add_option("--unitaries", unitaries);
  c_bs->add_option("--input", input);
  c_bs->add_option("--phase-noise", phase_noise, "chip backend extra phase noise (rad)");

  std::string photons = "101010", ztl_matrix = "fourier6";
  auto* c_ztl = app.add_subcommand("ztl", "zero-transmission-law check");
  c_ztl->add_option("--photons", photons);
  c_ztl->add_option("--matrix", ztl_matrix, "fourier6 | s6 | g6 | matrix file");

  long long events = 100;
  int trials = 100;
  std::string sample_from = "quantum";
  auto* c_bayes = app.add_subcommand("bayes-verify", "Bayesian quantum-vs-classical trace");
  c_bayes->add_option("--events", events);
  c_bayes->add_option("--trials", trials);
  c_bayes->add_option("--sample-from", sample_from)
      ->check(CLI::IsMember({"quantum", "classical"}));

  std::string chm_name = "fourier6";
  double theta1 = M_PI, theta2 = 0.0;
  bool chm_family = false;
  auto* c_chm = app.add_subcommand("chm", "complex Hadamard matrices");
  c_chm->add_option("--name", chm_name, "fourier<N> | s6 | g6");
  c_chm->add_flag("--family", chm_family, "use the F6 two-parameter family");
  c_chm->add_option("--theta1", theta1);
  c_chm->add_option("--theta2", theta2);

  std::string manifold_kind = "ztl";
  int grid = 8;
  std::vector<int> pairs;
  auto* c_mani = app.add_subcommand("manifold", "correlation / violation manifolds");
  c_mani->add_option("--kind", manifold_kind, "ztl | two-photon")
      ->check(CLI::IsMember({"ztl", "two-photon"}));
  c_mani->add_option("--grid", grid, "grid points per axis");
  c_mani->add_option("--photons", photons);
  c_mani->add_option("--pairs", pairs, "in_a in_b out_a out_b")->expected(4);

  std::string gate_name = "bsg", gate_input = "00";
  auto* c_gate = app.add_subcommand("gate", "heralded / post-selected gates");
  c_gate->add_option("--name", gate_name, "bsg | heralded_cnot | postselected_cnot");
  c_gate->add_option("--input", gate_input);

  long long shots_per_fringe = 100000;
  auto* c_cal = app.add_subcommand("calibrate", "phase-voltage calibration sequence");
  c_cal->add_option("--shots-per-fringe", shots_per_fringe);

  int bench_configs = 100;
  double injected_noise = 0.0;
  auto* c_bench = app.add_subcommand("benchmark-phase", "phase accuracy benchmarking");
  c_bench->add_option("--configs", bench_configs);
  c_bench->add_option("--inject-noise", injected_noise, "Gaussian phase noise (rad)");

  std::string tomo_gate = "cnot", counts_file;
  int bootstrap = 0;
  auto* c_tomo = app.add_subcommand("tomography", "process tomography closed loop");
  c_tomo->add_option("--gate", tomo_gate, "cnot | X | Y | Z | H | T");
  c_tomo->add_option("--bootstrap", bootstrap, "bootstrap resamples");
  c_tomo->add_option("--counts", counts_file, "reconstruct from an existing counts file");

  std::string campaign_spec;
  auto* c_camp = app.add_subcommand("campaign", "aggregate campaign from a spec file");
  c_camp->add_option("--spec", campaign_spec, "campaign spec (json)")->required();

  CLI11_PARSE(app, argc, argv);

  RunContext ctx;
  ctx.out_dir = out_dir;
  ctx.seed = seed;
  for (const auto* copt : app.get_options())
    if (copt->count() && copt->get_name() != "--help")
      ctx.config[copt->get_name()] = copt->results().front();

  try {
    if (app.got_subcommand(c_compose)) {
      ctx.protocol = "compose";
      cmd_compose(ctx, config_file);
    } else if (app.got_subcommand(c_decompose)) {
      ctx.protocol = "decompose";
      cmd_decompose(ctx, matrix_file);
    } else if (app.got_subcommand(c_haar)) {
      ctx.protocol = "haar";
      cmd_haar(ctx, modes);
    } else if (app.got_subcommand(c_sim)) {
      ctx.protocol = "simulate";
      cmd_simulate(ctx, config_file, input, backend, chip_file, model, subspace, shots);
    } else if (app.got_subcommand(c_bs)) {
      ctx.protocol = "boson-sample";
      cmd_boson_sample(ctx, unitaries, input, shots, backend, chip_file, phase_noise, workers);
    } else if (app.got_subcommand(c_ztl)) {
      ctx.protocol = "ztl";
      cmd_ztl(ctx, photons, ztl_matrix, shots == 10000 ? 0 : shots);
    } else if (app.got_subcommand(c_bayes)) {
      ctx.protocol = "bayes-verify";
      cmd_bayes_verify(ctx, events, trials, sample_from);
    } else if (app.got_subcommand(c_chm)) {
      ctx.protocol = "chm";
      cmd_chm(ctx, chm_name, theta1, theta2, chm_family);
    } else if (app.got_subcommand(c_mani)) {
      ctx.protocol = "manifold";
      cmd_manifold(ctx, manifold_kind, grid, photons, pairs);
    } else if (app.got_subcommand(c_gate)) {
      ctx.protocol = "gate";
      cmd_gate(ctx, gate_name, gate_input);
    } else if (app.got_subcommand(c_cal)) {
      ctx.protocol = "calibrate";
      cmd_calibrate(ctx, chip_file, shots_per_fringe);
    } else if (app.got_subcommand(c_bench)) {
      ctx.protocol = "benchmark-phase";
      cmd_benchmark_phase(ctx, chip_file, bench_configs, shots, injected_noise);
    } else if (app.got_subcommand(c_tomo)) {
      ctx.protocol = "tomography";
      cmd_tomography(ctx, tomo_gate, shots, bootstrap, counts_file);
    } else if (app.got_subcommand(c_camp)) {
      ctx.protocol = "campaign";
      cmd_campaign(ctx, campaign_spec, workers);
    }
    ctx.finish();
  } catch (const CLI::Error& e) {
    ctx.discard_partial();
    std::cerr << "usage error: " << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    ctx.discard_partial();
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return 0;
}
