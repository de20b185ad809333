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

#include "lpu/tomography.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace lpu::tomo {

using qubits::PauliBasis;
using qubits::StateLabel;

std::vector<Setting> generate_settings(int n_qubits) {
  if (n_qubits != 1 && n_qubits != 2)
    throw std::invalid_argument("generate_settings: 1 or 2 qubits");
  const StateLabel states[6] = {StateLabel::kZero, StateLabel::kOne,   StateLabel::kPlus,
                                StateLabel::kMinus, StateLabel::kPlusI, StateLabel::kMinusI};
  const PauliBasis bases[3] = {PauliBasis::kZ, PauliBasis::kX, PauliBasis::kY};
  std::vector<Setting> out;
  if (n_qubits == 1) {
    for (auto s : states)
      for (auto b : bases) out.push_back({{s}, {b}});
    return out;
  }
  for (auto s1 : states)
    for (auto s2 : states)
      for (auto b1 : bases)
        for (auto b2 : bases) out.push_back({{s1, s2}, {b1, b2}});
  return out;
}

double hedged_frequency(long long n, long long total, int outcomes, double beta) {
  if (outcomes < 2) throw std::invalid_argument("hedged_frequency: need at least 2 outcomes");
  return (static_cast<double>(n) + beta) / (static_cast<double>(total) + outcomes * beta);
}

CMat choi_of_unitary(const CMat& u) {
  const int d = static_cast<int>(u.rows());
  // |v> = (1/sqrt d) sum_k |k> (x) U|k>, rho = |v><v|
  CVec v = CVec::Zero(d * d);
  for (int k = 0; k < d; ++k)
    for (int r = 0; r < d; ++r) v(k * d + r) = u(r, k) / std::sqrt(static_cast<double>(d));
  return v * v.adjoint();
}

namespace {

// E_ij = rho_prep^T (x) Pi_meas on (input slot, output slot)
CMat effect_matrix(const Setting& s, int outcome) {
  CMat prep(1, 1), proj(1, 1);
  prep(0, 0) = 1;
  proj(0, 0) = 1;
  const int nq = static_cast<int>(s.prep.size());
  for (int q = 0; q < nq; ++q) {
    prep = qubits::kron(prep, qubits::density(s.prep[static_cast<std::size_t>(q)]));
    const int bit = (outcome >> (nq - 1 - q)) & 1;
    const Eigen::Vector2cd v = qubits::basis_eigenvector(s.meas[static_cast<std::size_t>(q)], bit);
    proj = qubits::kron(proj, (v * v.adjoint()).eval());
  }
  return qubits::kron(prep.transpose(), proj);
}

CMat partial_trace_out(const CMat& rho, int d) {
  // trace over the second (output) slot
  CMat r = CMat::Zero(d, d);
  for (int i = 0; i < d; ++i)
    for (int j = 0; j < d; ++j)
      for (int k = 0; k < d; ++k) r(i, j) += rho(i * d + k, j * d + k);
  return r;
}

void project_trace_constraint(CMat& rho, int d) {
  // orthogonal projection onto Tr_out(rho) = I/d
  const CMat delta = partial_trace_out(rho, d) - CMat::Identity(d, d) / d;
  for (int i = 0; i < d; ++i)
    for (int j = 0; j < d; ++j) {
      const Complex corr = delta(i, j) / static_cast<double>(d);
      for (int k = 0; k < d; ++k) rho(i * d + k, j * d + k) -= corr;
    }
}

double project_psd(CMat& rho) {
  Eigen::SelfAdjointEigenSolver<CMat> es(0.5 * (rho + rho.adjoint().eval()));
  Eigen::VectorXd ev = es.eigenvalues();
  const double min_ev = ev.minCoeff();
  for (int k = 0; k < ev.size(); ++k) ev(k) = std::max(ev(k), 0.0);
  rho = es.eigenvectors() * ev.asDiagonal() * es.eigenvectors().adjoint();
  return min_ev;
}

}  // namespace

std::vector<double> setting_probabilities(const CMat& choi, const Setting& s) {
  const int nq = static_cast<int>(s.prep.size());
  const int d = 1 << nq;
  const int outcomes = 1 << nq;
  std::vector<double> p(static_cast<std::size_t>(outcomes));
  for (int o = 0; o < outcomes; ++o)
    p[static_cast<std::size_t>(o)] =
        std::max(0.0, d * std::real((choi * effect_matrix(s, o)).trace()));
  return p;
}

std::vector<CountsRecord> simulate_counts(const CMat& choi,
                                          const std::vector<Setting>& settings,
                                          long long shots_per_setting, Rng& rng) {
  std::vector<CountsRecord> out;
  out.reserve(settings.size());
  for (const auto& s : settings) {
    CountsRecord rec;
    rec.setting = s;
    rec.n = rng.multinomial(shots_per_setting, setting_probabilities(choi, s));
    rec.total = shots_per_setting;
    out.push_back(std::move(rec));
  }
  return out;
}

ChoiState mle_reconstruct(const std::vector<CountsRecord>& records, int n_qubits,
                          const MleOptions& opt) {
  const int d = 1 << n_qubits;
  const int dim = d * d;
  const int outcomes = 1 << n_qubits;

  // Precompute effects, hedged frequencies and weights.
  struct Datum {
    CMat effect;
    double p, weight, total;
  };
  std::vector<Datum> data;
  for (const auto& rec : records) {
    if (static_cast<int>(rec.n.size()) != outcomes)
      throw std::invalid_argument("mle_reconstruct: outcome count mismatch");
    for (int o = 0; o < outcomes; ++o) {
      Datum datum;
      datum.effect = effect_matrix(rec.setting, o);
      datum.p = hedged_frequency(rec.n[static_cast<std::size_t>(o)], rec.total, outcomes, opt.beta);
      datum.weight = static_cast<double>(rec.total) /
                     std::max(datum.p * (1 - datum.p), opt.weight_floor);
      datum.total = static_cast<double>(rec.total);
      data.push_back(std::move(datum));
    }
  }

  auto objective_and_grad = [&](const CMat& rho, CMat* grad) {
    double f = 0;
    if (grad) grad->setZero();
    for (const auto& datum : data) {
      const double model = d * std::real((rho * datum.effect).trace());
      const double r = datum.p - model;
      f += datum.weight * r * r;
      if (grad) *grad += (-2.0 * d * datum.weight * r) * datum.effect;
    }
    return f;
  };

  auto project = [&](CMat& rho, double* min_ev) {
    // a few alternations land inside both sets to good accuracy
    double ev = 0;
    for (int it = 0; it < 4; ++it) {
      project_trace_constraint(rho, d);
      ev = project_psd(rho);
    }
    project_trace_constraint(rho, d);
    if (min_ev) *min_ev = ev;
  };

  CMat rho = opt.warm_start ? *opt.warm_start : CMat::Identity(dim, dim) / d;
  project(rho, nullptr);

  // Lipschitz estimate for the gradient: 2 d^2 sum w ||E||^2 is loose, use a
  // power-iteration-free upper bound and backtracking below.
  double lip = 0;
  for (const auto& datum : data) lip += datum.weight * datum.effect.squaredNorm();
  lip *= 2.0 * d * d;
  double step = 1.0 / lip;

  ChoiState result;
  CMat y = rho, rho_prev = rho;
  double t_momentum = 1.0;
  double f_prev = objective_and_grad(rho, nullptr);
  CMat grad(dim, dim);
  int it = 0;
  for (; it < opt.max_iterations; ++it) {
    objective_and_grad(y, &grad);
    CMat cand = y - step * grad;
    project(cand, nullptr);
    double f_cand = objective_and_grad(cand, nullptr);
    // simple backtracking on divergence
    int bt = 0;
    while (f_cand > f_prev && bt < 30) {
      step *= 0.5;
      cand = y - step * grad;
      project(cand, nullptr);
      f_cand = objective_and_grad(cand, nullptr);
      ++bt;
    }
    if (f_cand > f_prev) {  // restart momentum
      y = rho;
      t_momentum = 1.0;
      continue;
    }
    const double t_next = 0.5 * (1.0 + std::sqrt(1.0 + 4.0 * t_momentum * t_momentum));
    y = cand + ((t_momentum - 1.0) / t_next) * (cand - rho_prev);
    rho_prev = cand;
    rho = cand;
    t_momentum = t_next;
    const double rel = std::abs(f_prev - f_cand) / std::max(std::abs(f_prev), 1e-300);
    f_prev = f_cand;
    if (rel < opt.tol && it > 10) {
      result.converged = true;
      break;
    }
    step *= 1.1;  // creep back up after backtracks
  }

  double min_ev;
  project(rho, &min_ev);
  result.rho = rho;
  result.min_eigenvalue = min_ev;
  result.ptrace_residual =
      (partial_trace_out(rho, d) - CMat::Identity(d, d) / d).cwiseAbs().maxCoeff();
  result.objective = objective_and_grad(rho, nullptr);
  result.iterations = it;
  return result;
}

std::pair<double, double> process_and_gate_fidelity(const ChoiState& rho, const CMat& ideal) {
  const CMat target = choi_of_unitary(ideal);
  if (target.rows() != rho.rho.rows())
    throw std::invalid_argument("process_and_gate_fidelity: dimension mismatch");
  const double d = std::sqrt(static_cast<double>(rho.rho.rows()));
  const double fp = std::real((rho.rho * target).trace());
  const double fg = (d * fp + 1.0) / (d + 1.0);
  return {fp, fg};
}

BootstrapResult bootstrap_errors(const std::vector<CountsRecord>& records, int n_qubits,
                                 const CMat& ideal, int resamples, Rng& rng,
                                 const MleOptions& opt) {
  BootstrapResult out;
  const ChoiState point = mle_reconstruct(records, n_qubits, opt);
  auto [fp, fg] = process_and_gate_fidelity(point, ideal);
  out.fp_point = fp;
  out.fg_point = fg;

  MleOptions warm = opt;
  warm.warm_start = &point.rho;
  double fp_acc = 0, fp2_acc = 0, fg_acc = 0, fg2_acc = 0;
  for (int r = 0; r < resamples; ++r) {
    std::vector<CountsRecord> resampled = records;
    for (auto& rec : resampled) {
      long long tot = 0;
      for (auto& n : rec.n) {
        n = rng.poisson(static_cast<double>(n));
        tot += n;
      }
      rec.total = std::max(tot, 1LL);
    }
    const ChoiState rho = mle_reconstruct(resampled, n_qubits, warm);
    auto [fpr, fgr] = process_and_gate_fidelity(rho, ideal);
    out.fp_samples.push_back(fpr);
    fp_acc += fpr;
    fp2_acc += fpr * fpr;
    fg_acc += fgr;
    fg2_acc += fgr * fgr;
  }
  if (resamples > 1) {
    const double n = resamples;
    out.fp_sigma = std::sqrt(std::max(0.0, (fp2_acc - fp_acc * fp_acc / n) / (n - 1)));
    out.fg_sigma = std::sqrt(std::max(0.0, (fg2_acc - fg_acc * fg_acc / n) / (n - 1)));
  }
  return out;
}

}  // namespace lpu::tomo
