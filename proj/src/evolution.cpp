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

#include "itof/evolution.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <sstream>

#include "itof/spinmodel.hpp"

namespace itof {

namespace {

// Groups the bitstrings of one mode by their coupling value c_m(b).
std::vector<std::pair<double, std::vector<std::uint64_t>>> coupling_groups(const RMatrix& table, int mode) {
  std::vector<std::pair<double, std::vector<std::uint64_t>>> groups;
  const double scale = std::max(table.row(mode).cwiseAbs().maxCoeff(), 1e-300);
  for (Index b = 0; b < table.cols(); ++b) {
    const double c = table(mode, b);
    auto it = std::find_if(groups.begin(), groups.end(),
                           [&](const auto& g) { return std::abs(g.first - c) <= 1e-12 * scale; });
    if (it == groups.end()) {
      groups.push_back({c, {static_cast<std::uint64_t>(b)}});
    } else {
      it->second.push_back(static_cast<std::uint64_t>(b));
    }
  }
  return groups;
}

double spin_sum(std::uint64_t bits, int n) {
  double s = 0.0;
  for (int i = 0; i < n; ++i) s += spin_of(bits, i, n);
  return s;
}

}  // namespace

CMatrix basis_inputs(const CompositeSpace& space, std::span<const int> occupations) {
  CMatrix inputs = CMatrix::Zero(space.dim(), space.qubit_dim());
  for (Index b = 0; b < space.qubit_dim(); ++b) inputs(space.index(static_cast<std::uint64_t>(b), occupations), b) = 1.0;
  return inputs;
}

EchoPlan plan_multibeat_echo(const GateConfig& config) {
  EchoPlan plan;
  const double t_total = config.total_time();
  const int pulses = std::max(1, static_cast<int>(std::lround(t_total / config.t_mb)));
  if (std::abs(pulses * config.t_mb - t_total) > 1e-3 * t_total) {
    std::ostringstream msg;
    msg << "t_T = " << t_total << " s is not a multiple of t_mb = " << config.t_mb << " s (using "
        << pulses << " pulses)";
    log_warning(msg.str());
  }
  double env2 = 0.0;
  for (int p = 0; p < pulses; ++p) {
    const double s = ramp_value(config.ramp, (p + 0.5) * t_total / pulses, config.tau_g);
    plan.envelope.push_back(s);
    env2 += s * s;
  }
  // Ising time of the gate: plateau plus two ramps weighted by env^2.
  const double area = config.tau_g + 2.0 * config.ramp.ising_area();
  plan.pulse_time = area / env2;

  RMatrix directions(config.n_qubits(), config.n_modes());
  for (int m = 0; m < config.n_modes(); ++m) {
    directions.col(m) = config.couplings.row(m).transpose().normalized();
  }
  plan.targets = target_phases(config.ising.scaled(-1.0), directions, plan.pulse_time);
  const auto modes = multibeat_modes(config.crystal, config.modes, config.couplings);
  plan.solution = solve_amplitudes(plan.targets.phases, config.t_mb, modes);
  return plan;
}

GateSimulator::GateSimulator(GateConfig config, CompositeSpace space, EvolutionOptions options)
    : config_(std::move(config)), space_(std::move(space)), options_(std::move(options)) {
  if (space_.n_modes() != config_.n_modes() || space_.n_qubits() != config_.n_qubits()) {
    throw std::invalid_argument("composite space does not match the gate configuration");
  }
  table_ = config_.coupling_table();
}

FactorizedPropagator GateSimulator::drive_free(double t0, double t1, bool reversed) const {
  FactorizedPropagator u(space_);
  const double span = t1 - t0;
  if (span <= 0.0) return u;
  const double sign = reversed ? -1.0 : 1.0;
  const int n = config_.n_qubits();
  const double plateau_end = config_.ramp.t_a + config_.tau_g;
  const bool constant = config_.ramp.shape == RampShape::Quench || config_.ramp.t_a <= 0.0 ||
                        (t0 >= config_.ramp.t_a && t1 <= plateau_end);
  const double dt0 = ramp_step(config_);
  const long steps = constant ? 1 : std::max(1L, static_cast<long>(std::ceil(span / dt0 - 1e-9)));
  const double dt = span / static_cast<double>(steps);
  std::vector<double> env(static_cast<std::size_t>(steps));
  for (long k = 0; k < steps; ++k) {
    env[static_cast<std::size_t>(k)] = ramp_value(config_.ramp, std::min(t0 + (k + 0.5) * dt, t1), config_.tau_g);
  }
  // The drive detuning tracks the dressed resonance, so the sigma_z term follows J(t).
  double area = 0.0;
  for (double e : env) area += e * e * dt;
  for (Index b = 0; b < space_.qubit_dim(); ++b) {
    u.add_phase(static_cast<std::uint64_t>(b), 0.5 * sign * config_.nu * spin_sum(static_cast<std::uint64_t>(b), n) * area);
  }
  for (int m = 0; m < space_.n_modes(); ++m) {
    const int levels = space_.levels(m);
    const double delta = sign * config_.detunings[m];
    for (const auto& [c, members] : coupling_groups(table_, m)) {
      CMatrix block;
      const double force = 0.5 * config_.omega_rabi * c;
      if (constant) {
        const CMatrix a = annihilation_matrix(levels);
        CMatrix h = force * env[0] * kI * (a.adjoint() - a);
        for (int k = 0; k < levels; ++k) h(k, k) -= delta * k;
        block = expm_hermitian(h, span);
      } else {
        std::vector<double> forces(env.size());
        for (std::size_t k = 0; k < env.size(); ++k) forces[k] = force * env[k];
        block = forced_oscillator_propagator(levels, delta, dt, forces, options_.order);
      }
      for (std::uint64_t bits : members) u.set_block(m, bits, block);
    }
  }
  return u;
}

FactorizedPropagator GateSimulator::ramp(RampDirection direction, bool reversed) const {
  const double t_a = config_.ramp.t_a;
  if (direction == RampDirection::Activate) return drive_free(0.0, t_a, reversed);
  const double start = t_a + config_.tau_g;
  return drive_free(start, start + t_a, reversed);
}

FactorizedPropagator GateSimulator::to_mode_frame(double t) const {
  FactorizedPropagator u(space_);
  for (int m = 0; m < space_.n_modes(); ++m) {
    CMatrix d = CMatrix::Zero(space_.levels(m), space_.levels(m));
    for (int k = 0; k < space_.levels(m); ++k) d(k, k) = std::exp(Complex{0.0, -config_.detunings[m] * k * t});
    for (Index b = 0; b < space_.qubit_dim(); ++b) u.set_block(m, static_cast<std::uint64_t>(b), d);
  }
  return u;
}

FactorizedPropagator GateSimulator::echo(const EchoPlan* plan) const {
  const double t_total = config_.total_time();
  switch (config_.echo) {
    case EchoKind::None:
      return FactorizedPropagator(space_);
    case EchoKind::SignFlip:
      // Frame of the reversed beatnote: its rotating frame coincides with the
      // mode frame at the start of the echo.
      return to_mode_frame(t_total).then(drive_free(0.0, t_total, true));
    case EchoKind::Multibeat:
      break;
  }
  if (plan == nullptr) throw ConfigError("multibeat echo needs a solved tone plan", "echo");
  FactorizedPropagator u = to_mode_frame(t_total);
  FactorizedPropagator pulses(space_);
  const int n = config_.n_qubits();
  const MultibeatSolution& sol = plan->solution;
  const double ising_area = config_.tau_g + 2.0 * config_.ramp.ising_area();
  for (Index b = 0; b < space_.qubit_dim(); ++b) {
    pulses.add_phase(static_cast<std::uint64_t>(b),
                     -0.5 * config_.nu * spin_sum(static_cast<std::uint64_t>(b), n) * ising_area);
  }
  for (int m = 0; m < space_.n_modes(); ++m) {
    const double omega = config_.crystal.mode_freqs(config_.modes[m]);
    const MagnusTerms unit = magnus_terms(sol, omega);
    for (const auto& [c, members] : coupling_groups(table_, m)) {
      CMatrix block = CMatrix::Identity(space_.levels(m), space_.levels(m));
      double phase = 0.0;
      for (std::size_t p = 0; p < plan->envelope.size(); ++p) {
        const double s = plan->envelope[p] * c;
        // Consecutive pulses see the same tones with the mode phase advanced.
        const Complex shift = std::exp(Complex{0.0, omega * sol.t_mb * static_cast<double>(p)});
        const Complex alpha = Complex{0.0, -1.0} * s * unit.displacement * shift;
        if (std::abs(alpha) > 1e-14) block = displacement_matrix(space_.levels(m), alpha) * block;
        phase += s * s * unit.phase;
      }
      for (std::uint64_t bits : members) {
        pulses.set_block(m, bits, block);
        pulses.add_phase(bits, phase);
      }
    }
  }
  return u.then(pulses);
}

long GateSimulator::plateau(CMatrix& states, double duration, double drive_amplitude) const {
  if (duration <= 0.0) return 0;
  const int n = config_.n_qubits();
  const Index pd = space_.phonon_dim();
  long terms = 0;
  for (Index b = 0; b < space_.qubit_dim(); ++b) {
    const auto bits = static_cast<std::uint64_t>(b);
    if (spin_of(bits, config_.target, n) != 1) continue;
    const std::uint64_t partner = flip_bit(bits, config_.target, n);
    const std::uint64_t pair[2] = {bits, partner};
    std::vector<Index> cols;
    for (Index j = 0; j < states.cols(); ++j) {
      if (states.col(j).segment(static_cast<Index>(bits) * pd, pd).squaredNorm() +
              states.col(j).segment(static_cast<Index>(partner) * pd, pd).squaredNorm() > 0.0) {
        cols.push_back(j);
      }
    }
    if (cols.empty()) continue;
    CMatrix sub(2 * pd, static_cast<Index>(cols.size()));
    for (std::size_t k = 0; k < cols.size(); ++k) {
      sub.col(static_cast<Index>(k)).head(pd) = states.col(cols[k]).segment(static_cast<Index>(bits) * pd, pd);
      sub.col(static_cast<Index>(k)).tail(pd) = states.col(cols[k]).segment(static_cast<Index>(partner) * pd, pd);
    }
    const SparseOp h = block_hamiltonian(config_, space_, pair, 1.0, drive_amplitude);
    terms += chebyshev_propagate(h, duration, sub).terms;
    for (std::size_t k = 0; k < cols.size(); ++k) {
      states.col(cols[k]).segment(static_cast<Index>(bits) * pd, pd) = sub.col(static_cast<Index>(k)).head(pd);
      states.col(cols[k]).segment(static_cast<Index>(partner) * pd, pd) = sub.col(static_cast<Index>(k)).tail(pd);
    }
  }
  return terms;
}

TracePoint measure(const GateConfig& config, const CompositeSpace& space, const CVector& state, double t) {
  TracePoint pt;
  pt.t = t;
  const int n = config.n_qubits();
  const Index pd = space.phonon_dim();
  std::vector<Complex> a_mean(static_cast<std::size_t>(space.n_modes()), 0.0);
  pt.n.assign(static_cast<std::size_t>(space.n_modes()), 0.0);
  Complex coherence = 0.0;
  for (Index i = 0; i < space.dim(); ++i) {
    const Complex psi = state(i);
    if (psi == Complex{0.0}) continue;
    const auto bits = static_cast<std::uint64_t>(i / pd);
    const double pop = std::norm(psi);
    const int s = spin_of(bits, config.target, n);
    pt.sz += s * pop;
    if (s == 1) {
      const Index j = static_cast<Index>(flip_bit(bits, config.target, n)) * pd + i % pd;
      coherence += std::conj(state(j)) * psi;  // <1|rho|0> component
    }
    for (int m = 0; m < space.n_modes(); ++m) {
      const int k = space.occupation(i, m);
      pt.n[m] += k * pop;
      if (k > 0) a_mean[m] += std::conj(state(i - space.mode_stride(m))) * std::sqrt(1.0 * k) * psi;
    }
  }
  pt.sx = 2.0 * coherence.real();
  pt.sy = -2.0 * coherence.imag();
  for (int m = 0; m < space.n_modes(); ++m) {
    pt.x.push_back(2.0 * a_mean[m].real());
    pt.p.push_back(2.0 * a_mean[m].imag());
  }
  return pt;
}

EvolutionResult GateSimulator::run(const CMatrix& inputs) const {
  if (inputs.rows() != space_.dim()) throw std::invalid_argument("input columns do not match the space");
  EvolutionResult result;
  result.states = inputs;
  const RVector norms0 = inputs.colwise().norm();
  const double t_a = config_.ramp.t_a;
  const double tau_g = options_.plateau ? config_.tau_g : 0.0;
  result.timing.t_a = t_a;
  result.timing.tau_g = tau_g;
  result.timing.t_total = 2.0 * t_a + tau_g;
  result.timing.dt = ramp_step(config_);

  for (Index col : options_.traced_columns) {
    if (col < 0 || col >= inputs.cols()) throw std::out_of_range("traced column out of range");
    result.traces.push_back({col, {measure(config_, space_, inputs.col(col), 0.0)}});
  }
  const int chunks = std::max(1, options_.trace_samples);
  auto record = [&](double t) {
    for (auto& tr : result.traces) tr.points.push_back(measure(config_, space_, result.states.col(tr.column), t));
  };
  auto drift = [&] {
    const RVector norms = result.states.colwise().norm();
    result.max_norm_drift = std::max(result.max_norm_drift, (norms - norms0).cwiseAbs().maxCoeff());
  };
  auto ramp_stage = [&](double start, double seq_start) {
    for (int c = 0; c < chunks; ++c) {
      const double a = seq_start + t_a * c / chunks;
      const double b = seq_start + t_a * (c + 1) / chunks;
      drive_free(a, b).apply(result.states);
      result.timing.ramp_steps += std::max(1L, static_cast<long>(std::ceil((b - a) / result.timing.dt - 1e-9)));
      if (!result.traces.empty()) record(start + (b - seq_start));
    }
  };

  ramp_stage(0.0, 0.0);
  if (tau_g > 0.0) {
    const double amp = options_.drive ? config_.drive_amplitude() : 0.0;
    for (int c = 0; c < chunks; ++c) {
      result.timing.plateau_terms += plateau(result.states, tau_g / chunks, amp);
      if (!result.traces.empty()) record(t_a + tau_g * (c + 1) / chunks);
    }
  }
  // The deactivation ramp reuses the envelope of the full sequence.
  ramp_stage(t_a + tau_g, t_a + config_.tau_g);
  drift();

  if (options_.apply_echo && config_.echo != EchoKind::None) {
    if (config_.echo == EchoKind::Multibeat) {
      result.echo_plan = options_.echo_plan ? options_.echo_plan
                                            : std::make_shared<const EchoPlan>(plan_multibeat_echo(config_));
      result.timing.echo_pulses = static_cast<int>(result.echo_plan->envelope.size());
      result.timing.echo_time = result.timing.echo_pulses * config_.t_mb;
    } else {
      result.timing.echo_time = config_.total_time();
    }
    echo(result.echo_plan.get()).apply(result.states);
    drift();
  }
  return result;
}

FactorizedPropagator adiabatic_ramp_unitary(const GateConfig& config, RampDirection direction) {
  return GateSimulator(config, config.space()).ramp(direction);
}

EvolutionResult itoffoli_sequence(const GateConfig& config, const CMatrix& inputs, const EvolutionOptions& options) {
  return GateSimulator(config, config.space(), options).run(inputs);
}

FactorizedPropagator echo_step(const GateConfig& config, const EchoPlan* plan) {
  std::shared_ptr<const EchoPlan> owned;
  if (config.echo == EchoKind::Multibeat && plan == nullptr) {
    owned = std::make_shared<const EchoPlan>(plan_multibeat_echo(config));
    plan = owned.get();
  }
  return GateSimulator(config, config.space()).echo(plan);
}

}  // namespace itof
