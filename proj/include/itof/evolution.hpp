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

#pragma once

#include <memory>
#include <optional>
#include <vector>

#include "itof/hamiltonians.hpp"
#include "itof/multibeat.hpp"
#include "itof/propagate.hpp"

namespace itof {

enum class RampDirection { Activate, Deactivate };

/// Expectation values of one tracked input. x = <a + a^dag>, p = <i (a^dag - a)>
/// per coupled mode in the frame rotating at the beatnote; Bloch components
/// of the target qubit.
struct TracePoint {
  double t = 0.0;
  std::vector<double> x;
  std::vector<double> p;
  std::vector<double> n;
  double sx = 0.0;
  double sy = 0.0;
  double sz = 0.0;
};

struct Trace {
  Index column = 0;
  std::vector<TracePoint> points;
};

struct TimingRecord {
  double t_a = 0.0;
  double tau_g = 0.0;
  double t_total = 0.0;
  double dt = 0.0;
  long ramp_steps = 0;
  long plateau_terms = 0;
  double echo_time = 0.0;
  int echo_pulses = 0;
};

/// Multi-beatnote echo: k2 pulses of length t_mb, pulse p scaled by
/// envelope[p] (the gate ramp sampled at the pulse center).
struct EchoPlan {
  MultibeatSolution solution;
  std::vector<double> envelope;
  double pulse_time = 0.0;  // effective Ising time per unit-envelope pulse
  PhaseTargets targets;
};

EchoPlan plan_multibeat_echo(const GateConfig& config);

struct EvolutionOptions {
  SplitOrder order = SplitOrder::Strang;
  bool drive = true;
  bool plateau = true;      // false: activation immediately followed by deactivation
  bool apply_echo = true;   // honour config.echo
  int trace_samples = 0;    // samples per stage for traced columns
  std::vector<Index> traced_columns;
  std::shared_ptr<const EchoPlan> echo_plan;  // solved on demand when null
};

struct EvolutionResult {
  CMatrix states;
  std::vector<Trace> traces;
  TimingRecord timing;
  double max_norm_drift = 0.0;
  std::shared_ptr<const EchoPlan> echo_plan;
};

/// Runs the activation ramp, driven plateau, deactivation ramp and optional
/// echo on a set of composite-space input columns.
class GateSimulator {
 public:
  GateSimulator(GateConfig config, CompositeSpace space, EvolutionOptions options = {});

  const GateConfig& config() const { return config_; }
  const CompositeSpace& space() const { return space_; }

  /// Drive-free evolution over the sequence interval [t0, t1] using the gate
  /// envelope; `reversed` flips every detuning and nu.
  FactorizedPropagator drive_free(double t0, double t1, bool reversed = false) const;
  FactorizedPropagator ramp(RampDirection direction, bool reversed = false) const;
  /// Phonon frame change exp(-i t sum_m delta_m n_m): beatnote frame to the
  /// frame rotating with each mode.
  FactorizedPropagator to_mode_frame(double t) const;
  /// Echo propagator following the gate (identity when config.echo is None).
  FactorizedPropagator echo(const EchoPlan* plan = nullptr) const;
  /// Plateau with constant envelope and drive amplitude; returns Chebyshev terms used.
  long plateau(CMatrix& states, double duration, double drive_amplitude) const;

  EvolutionResult run(const CMatrix& inputs) const;

 private:
  GateConfig config_;
  CompositeSpace space_;
  EvolutionOptions options_;
  RMatrix table_;
};

/// Sample trace values of column `state`.
TracePoint measure(const GateConfig& config, const CompositeSpace& space, const CVector& state, double t);

FactorizedPropagator adiabatic_ramp_unitary(const GateConfig& config, RampDirection direction);
EvolutionResult itoffoli_sequence(const GateConfig& config, const CMatrix& inputs,
                                  const EvolutionOptions& options = {});
FactorizedPropagator echo_step(const GateConfig& config, const EchoPlan* plan = nullptr);

/// Composite-space columns |occupations> (x) |x> for every qubit basis state x.
CMatrix basis_inputs(const CompositeSpace& space, std::span<const int> occupations);

}  // namespace itof
