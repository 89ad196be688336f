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

#include <string>
#include <vector>

#include "itof/evolution.hpp"

namespace itof {

/// Qubit channel rho -> sum_k K_k rho K_k^dag with one Kraus operator per
/// output phonon basis state k: K_k = <k| U |input phonons>.
struct Channel {
  int n_qubits = 0;
  std::vector<CMatrix> kraus;

  Index dim() const { return Index{1} << n_qubits; }
  CMatrix apply(const CMatrix& rho) const;
};

/// Columns of `evolved` are the images of |phonons> (x) |x>, x = 0 .. 2^N - 1.
Channel channel_from_columns(const CompositeSpace& space, const CMatrix& evolved);

/// Block <vacuum| U |vacuum> of the evolved ground-phonon columns.
CMatrix vacuum_block(const CompositeSpace& space, const CMatrix& evolved);

/// Average fidelity by the Pauli-string sum
/// [sum_j tr(U U_j^dag U^dag E(U_j)) + d^2] / (d^2 (d + 1)).
double average_fidelity_pauli(const Channel& channel, const CMatrix& ideal);
/// Same quantity from the Kraus form (sum_k |tr(U^dag K_k)|^2 + d) / (d (d + 1)).
double average_fidelity_kraus(const Channel& channel, const CMatrix& ideal);
/// Pauli sum for N <= 4, Kraus form above.
double average_fidelity(const Channel& channel, const CMatrix& ideal);
/// (|tr(U^dag V)|^2 + d) / (d^2 + d).
double unitary_fidelity(const CMatrix& ideal, const CMatrix& v);

/// `v` times the global phase that makes tr(ideal^dag v) real and positive.
CMatrix phase_aligned(const CMatrix& v, const CMatrix& ideal);

/// Geometric occupation p_n = nbar^n / (1 + nbar)^(n+1), n = 0 .. n_max.
std::vector<double> thermal_weights(double nbar, int n_max);

struct DegeneracyFlag {
  std::uint64_t bits = 0;  // register state with the target bit cleared
  int k = 0;               // phonon number of the crossing
  double mismatch = 0.0;   // (gap - nu) - k delta_cm, rad/s
};

/// Control strings whose detuned gap comes within 3 g of k delta_cm, 0 < |k| <= k_max.
std::vector<DegeneracyFlag> degeneracy_flags(const GateConfig& config, int k_max);

struct FidelityReport {
  double average_fidelity = 0.0;
  double leakage = 0.0;                 // mean population outside the ground-phonon subspace
  double max_phase_residual = 0.0;      // rad, over off-resonant states
  double target_population = 0.0;      // |<1,1..1|V|0,1..1>|^2
  std::vector<double> leakage_per_state;
  std::vector<double> phase_residuals;  // per input; target pair against +i
  std::vector<double> populations;      // |<ideal(x)|V|x>|^2
  std::vector<double> phonon_excitation;  // mean <n_m> over inputs
  std::vector<DegeneracyFlag> flags;
  CMatrix process;                      // phase-aligned vacuum block
  double norm_drift = 0.0;
  TimingRecord timing;
  std::string fingerprint;
};

/// Fidelity and diagnostics of evolved ground-phonon columns.
FidelityReport analyze(const GateConfig& config, const CompositeSpace& space, const EvolutionResult& result);

struct GateRunOptions {
  EvolutionOptions evolution;
  bool convergence_check = false;  // re-run with every cutoff raised by 2
};

struct GateRun {
  FidelityReport report;
  EvolutionResult evolution;
  double convergence_delta = 0.0;  // |F(n_max + 2) - F(n_max)| when checked
};

/// Full pipeline on the ground-phonon inputs.
GateRun simulate_gate(const GateConfig& config, const GateRunOptions& options = {});

struct ThermalResult {
  double fidelity = 0.0;
  std::vector<double> weights;
  std::vector<double> per_n;
  double tail = 0.0;  // probability beyond the simulated occupations
};

/// Fidelity for a thermal center-of-mass input with the other modes in
/// vacuum, mixing the per-occupation channels with weights p_n.
ThermalResult thermal_fidelity(const GateConfig& config, double nbar, const EvolutionOptions& options = {},
                               double tail = 1e-4);

struct AdiabaticityReport {
  double residual_population = 0.0;  // phonons left after activation + deactivation
  double max_deviation = 0.0;        // max |<a> - alpha_eq(t)| during the sequence
  double max_momentum = 0.0;         // max |<p>|
};

/// Activation then deactivation without plateau for input |vac> (x) |bits>;
/// deviation is measured from the instantaneous dressed equilibrium
/// alpha(t) = i Omega(t) c / (2 delta) of the center-of-mass mode.
AdiabaticityReport adiabaticity(const GateConfig& config, std::uint64_t bits, int samples = 400);

}  // namespace itof
