// Copyright 2026 The itoffoli Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "itof/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

#include "itof/spinmodel.hpp"

namespace itof {

CMatrix Channel::apply(const CMatrix& rho) const {
  CMatrix out = CMatrix::Zero(dim(), dim());
  for (const auto& k : kraus) out.noalias() += k * rho * k.adjoint();
  return out;
}

Channel channel_from_columns(const CompositeSpace& space, const CMatrix& evolved) {
  const Index d = space.qubit_dim();
  const Index pd = space.phonon_dim();
  if (evolved.rows() != space.dim() || evolved.cols() != d) {
    throw std::invalid_argument("channel_from_columns needs one evolved column per qubit basis state");
  }
  Channel ch;
  ch.n_qubits = space.n_qubits();
  ch.kraus.assign(static_cast<std::size_t>(pd), CMatrix::Zero(d, d));
  for (Index x = 0; x < d; ++x) {
    for (Index a = 0; a < d; ++a) {
      for (Index k = 0; k < pd; ++k) ch.kraus[static_cast<std::size_t>(k)](a, x) = evolved(a * pd + k, x);
    }
  }
  return ch;
}

CMatrix vacuum_block(const CompositeSpace& space, const CMatrix& evolved) {
  const Index d = space.qubit_dim();
  CMatrix v(d, d);
  for (Index x = 0; x < d; ++x) {
    for (Index a = 0; a < d; ++a) v(a, x) = evolved(a * space.phonon_dim(), x);
  }
  return v;
}

namespace {

CMatrix pauli_string(int n, Index code) {
  static const CMatrix paulis[4] = {
      CMatrix::Identity(2, 2),
      (CMatrix(2, 2) << 0, 1, 1, 0).finished(),
      (CMatrix(2, 2) << 0, Complex{0, -1}, Complex{0, 1}, 0).finished(),
      (CMatrix(2, 2) << 1, 0, 0, -1).finished(),
  };
  CMatrix out = CMatrix::Identity(1, 1);
  for (int ion = 0; ion < n; ++ion) {
    const CMatrix& p = paulis[(code >> (2 * (n - 1 - ion))) & 3];
    CMatrix next(out.rows() * 2, out.cols() * 2);
    for (Index r = 0; r < out.rows(); ++r) {
      for (Index c = 0; c < out.cols(); ++c) next.block(2 * r, 2 * c, 2, 2) = out(r, c) * p;
    }
    out = std::move(next);
  }
  return out;
}

void check_dims(const Channel& channel, const CMatrix& ideal) {
  if (ideal.rows() != channel.dim() || ideal.cols() != channel.dim()) {
    throw std::invalid_argument("ideal unitary and channel differ in dimension");
  }
}

}  // namespace

double average_fidelity_pauli(const Channel& channel, const CMatrix& ideal) {
  check_dims(channel, ideal);
  const Index d = channel.dim();
  const Index count = d * d;
  Complex sum = 0.0;
  for (Index j = 0; j < count; ++j) {
    const CMatrix uj = pauli_string(channel.n_qubits, j);
    sum += (ideal * uj.adjoint() * ideal.adjoint() * channel.apply(uj)).trace();
  }
  const double dd = static_cast<double>(d);
  if (std::abs(sum.imag()) > 1e-8 * std::max(1.0, std::abs(sum))) {
    throw std::runtime_error("Pauli fidelity sum has a non-negligible imaginary part");
  }
  return (sum.real() + dd * dd) / (dd * dd * (dd + 1.0));
}

double average_fidelity_kraus(const Channel& channel, const CMatrix& ideal) {
  check_dims(channel, ideal);
  const double d = static_cast<double>(channel.dim());
  double sum = 0.0;
  for (const auto& k : channel.kraus) sum += std::norm((ideal.adjoint() * k).trace());
  return (sum + d) / (d * (d + 1.0));
}

double average_fidelity(const Channel& channel, const CMatrix& ideal) {
  return channel.n_qubits <= 4 ? average_fidelity_pauli(channel, ideal) : average_fidelity_kraus(channel, ideal);
}

double unitary_fidelity(const CMatrix& ideal, const CMatrix& v) {
  const double d = static_cast<double>(ideal.rows());
  return (std::norm((ideal.adjoint() * v).trace()) + d) / (d * d + d);
}

CMatrix phase_aligned(const CMatrix& v, const CMatrix& ideal) {
  const Complex overlap = (ideal.adjoint() * v).trace();
  if (std::abs(overlap) < 1e-300) return v;
  return v * (std::conj(overlap) / std::abs(overlap));
}

std::vector<double> thermal_weights(double nbar, int n_max) {
  std::vector<double> w(static_cast<std::size_t>(n_max) + 1, 0.0);
  if (nbar <= 0.0) {
    w[0] = 1.0;
    return w;
  }
  const double q = nbar / (1.0 + nbar);
  double p = 1.0 / (1.0 + nbar);
  for (auto& x : w) {
    x = p;
    p *= q;
  }
  return w;
}

std::vector<DegeneracyFlag> degeneracy_flags(const GateConfig& config, int k_max) {
  std::vector<DegeneracyFlag> flags;
  const int n = config.n_qubits();
  const double delta = config.delta_cm;
  for (std::uint64_t b = 0; b < (std::uint64_t{1} << n); ++b) {
    if (spin_of(b, config.target, n) != 1) continue;
    const double detuned = energy_gap(config.ising.J, config.target, b) - config.nu;
    for (int k = -k_max; k <= k_max; ++k) {
      if (k == 0) continue;
      const double mismatch = detuned - k * delta;
      if (std::abs(mismatch) < 3.0 * config.g) flags.push_back({b, k, mismatch});
    }
  }
  return flags;
}

FidelityReport analyze(const GateConfig& config, const CompositeSpace& space, const EvolutionResult& result) {
  const CMatrix& evolved = result.states;
  const int n = config.n_qubits();
  const Index d = space.qubit_dim();
  const CMatrix ideal = ideal_itoffoli(n, config.target);
  FidelityReport rep;
  rep.average_fidelity = average_fidelity(channel_from_columns(space, evolved), ideal);
  const CMatrix v = vacuum_block(space, evolved);
  rep.process = phase_aligned(v, ideal);

  const std::uint64_t s0 = target_pair_state(n, config.target, 0);
  const std::uint64_t s1 = target_pair_state(n, config.target, 1);
  for (Index x = 0; x < d; ++x) {
    const auto bits = static_cast<std::uint64_t>(x);
    rep.leakage_per_state.push_back(std::max(0.0, 1.0 - v.col(x).squaredNorm()));
    Index out = x;
    Complex expected = 1.0;
    if (bits == s0 || bits == s1) {
      out = static_cast<Index>(bits == s0 ? s1 : s0);
      expected = kI;
    }
    rep.populations.push_back(std::norm(v(out, x)));
    const double residual = std::arg(rep.process(out, x) / expected);
    rep.phase_residuals.push_back(residual);
    if (bits != s0 && bits != s1) rep.max_phase_residual = std::max(rep.max_phase_residual, std::abs(residual));
  }
  rep.target_population = std::norm(v(static_cast<Index>(s1), static_cast<Index>(s0)));
  rep.leakage = std::accumulate(rep.leakage_per_state.begin(), rep.leakage_per_state.end(), 0.0) / static_cast<double>(d);

  rep.phonon_excitation.assign(static_cast<std::size_t>(space.n_modes()), 0.0);
  for (Index x = 0; x < d; ++x) {
    for (Index i = 0; i < space.dim(); ++i) {
      const double pop = std::norm(evolved(i, x));
      if (pop == 0.0) continue;
      for (int m = 0; m < space.n_modes(); ++m) rep.phonon_excitation[m] += pop * space.occupation(i, m) / d;
    }
  }
  rep.flags = degeneracy_flags(config, *std::max_element(space.cutoffs().begin(), space.cutoffs().end()));
  rep.norm_drift = result.max_norm_drift;
  rep.timing = result.timing;
  return rep;
}

GateRun simulate_gate(const GateConfig& config, const GateRunOptions& options) {
  GateRun run;
  const CompositeSpace space = config.space();
  const std::vector<int> vacuum(static_cast<std::size_t>(space.n_modes()), 0);
  GateSimulator sim(config, space, options.evolution);
  run.evolution = sim.run(basis_inputs(space, vacuum));
  run.report = analyze(config, space, run.evolution);
  if (options.convergence_check) {
    std::vector<int> larger = space.cutoffs();
    for (int& c : larger) c += 2;
    const CompositeSpace big = config.space(larger);
    EvolutionOptions opts = options.evolution;
    opts.traced_columns.clear();
    opts.echo_plan = run.evolution.echo_plan;
    const GateSimulator sim2(config, big, opts);
    const EvolutionResult res2 = sim2.run(basis_inputs(big, vacuum));
    const double f2 = average_fidelity(channel_from_columns(big, res2.states), ideal_itoffoli(config.n_qubits(), config.target));
    run.convergence_delta = std::abs(f2 - run.report.average_fidelity);
  }
  return run;
}

ThermalResult thermal_fidelity(const GateConfig& config, double nbar, const EvolutionOptions& options, double tail) {
  if (nbar < 0.0) throw ConfigError("nbar must be non-negative", "nbar_cm");
  ThermalResult out;
  const int n_top = thermal_cutoff(nbar, tail);
  std::vector<int> cutoffs = config.fock_cutoffs;
  const std::vector<int> base = default_fock_cutoffs(config.couplings, config.omega_rabi, config.detunings);
  cutoffs[0] = std::max(cutoffs[0], base[0] + n_top);
  const CompositeSpace space = config.space(cutoffs);
  out.weights = thermal_weights(nbar, n_top);

  const Index d = space.qubit_dim();
  CMatrix inputs(space.dim(), d * (n_top + 1));
  std::vector<int> occ(static_cast<std::size_t>(space.n_modes()), 0);
  for (int k = 0; k <= n_top; ++k) {
    occ[0] = k;
    inputs.middleCols(k * d, d) = basis_inputs(space, occ);
  }
  EvolutionOptions opts = options;
  opts.traced_columns.clear();
  const EvolutionResult res = GateSimulator(config, space, opts).run(inputs);
  const CMatrix ideal = ideal_itoffoli(config.n_qubits(), config.target);
  double total = 0.0;
  for (int k = 0; k <= n_top; ++k) {
    const CMatrix cols = res.states.middleCols(k * d, d);
    out.per_n.push_back(average_fidelity(channel_from_columns(space, cols), ideal));
    out.fidelity += out.weights[k] * out.per_n.back();
    total += out.weights[k];
  }
  out.tail = 1.0 - total;
  out.fidelity /= total;
  return out;
}

AdiabaticityReport adiabaticity(const GateConfig& config, std::uint64_t bits, int samples) {
  const CompositeSpace space = config.space();
  EvolutionOptions opts;
  opts.plateau = false;
  opts.apply_echo = false;
  opts.trace_samples = samples;
  opts.traced_columns = {0};
  const std::vector<int> vacuum(static_cast<std::size_t>(space.n_modes()), 0);
  CMatrix input = CMatrix::Zero(space.dim(), 1);
  input(space.index(bits, vacuum), 0) = 1.0;
  const EvolutionResult res = GateSimulator(config, space, opts).run(input);

  AdiabaticityReport rep;
  const RMatrix table = config.coupling_table();
  const double c = table(0, static_cast<Index>(bits));
  for (const auto& pt : res.traces.front().points) {
    const double seq_t = pt.t <= config.ramp.t_a ? pt.t : pt.t + config.tau_g;
    const double env = ramp_value(config.ramp, std::min(seq_t, config.total_time()), config.tau_g);
    const Complex alpha_eq = kI * 0.5 * config.omega_rabi * env * c / config.detunings[0];
    const Complex a_mean(0.5 * pt.x[0], 0.5 * pt.p[0]);
    rep.max_deviation = std::max(rep.max_deviation, std::abs(a_mean - alpha_eq));
    rep.max_momentum = std::max(rep.max_momentum, std::abs(pt.p[0]));
  }
  const CVector& psi = res.states.col(0);
  rep.residual_population = 1.0 - std::norm(psi(space.index(bits, vacuum)));
  return rep;
}

}  // namespace itof
