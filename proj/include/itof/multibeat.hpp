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

#include "itof/crystal.hpp"

namespace itof {

/// Per-mode entanglement phases reproducing a target coupling matrix,
/// duration * J_target ~ sum_m phi_m b_m (x) b_m.
struct PhaseTargets {
  RVector phases;
  double offdiag_residual = 0.0;  // Frobenius norm over i != j
  double residual = 0.0;          // Frobenius norm including the diagonal
};

/// Off-diagonal least-squares fit of `j_target` (zero-diagonal part) onto the
/// b_m (x) b_m family. Directions left free by the off-diagonals take their
/// value from the projection of `j_target.full()`. `mode_vectors` holds one b_m
/// per column.
PhaseTargets target_phases(const IsingMatrix& j_target, const RMatrix& mode_vectors,
                           double duration);

/// One mode seen by the multi-tone force.
struct MultibeatMode {
  double omega = 0.0;  // mode frequency, rad/s
  double norm2 = 0.0;  // l_m^2 = sum_i (eta_m^(i))^2
};

struct MultibeatSolution {
  double t_mb = 0.0;
  std::vector<int> harmonics;      // mu_k = 2 pi k / t_mb
  RVector amplitudes;              // Omega_k, rad/s, signed
  std::vector<MultibeatMode> modes;
  RVector target_phases;
  RVector achieved_phases;
  double max_phase_error = 0.0;
  double max_displacement = 0.0;   // max_m |A_m| per unit coupling
  int iterations = 0;

  double tone_freq(std::size_t k) const { return kTwoPi * harmonics.at(k) / t_mb; }
};

/// Displacement (first-order) and geometric phase (second-order) Magnus
/// terms of H = s (F(t) a^dag + F^*(t) a), F = sum_k (i Omega_k / 2) exp(-i (mu_k - omega) t),
/// over [0, t_mb] with s = 1: U = exp(i theta) D(-i A).
struct MagnusTerms {
  Complex displacement;  // A = int F dt
  double phase = 0.0;    // theta = int int_{t1 > t2} Im(F(t1) F^*(t2))
};

MagnusTerms magnus_terms(const MultibeatSolution& solution, double omega);

/// Achieved phases phi_m = -l_m^2 theta_m for the solution's amplitudes.
RVector achieved_phases(const MultibeatSolution& solution);

/// Harmonics bracketing every omega_m t_mb / 2 pi by +-2, with exact
/// resonances removed, capped at 24 tones nearest to the modes.
std::vector<int> default_harmonics(const std::vector<MultibeatMode>& modes, double t_mb);

struct SolverOptions {
  double tolerance = 1e-3;  // max phase error, rad
  int max_iterations = 500;
};

/// Real tone amplitudes realizing `phases` after t_mb with every
/// displacement integral A_m closed exactly. Throws SolverError on failure.
MultibeatSolution solve_amplitudes(const RVector& phases, double t_mb,
                                   const std::vector<MultibeatMode>& modes,
                                   std::vector<int> harmonics = {},
                                   const SolverOptions& options = {});

/// Modes and targets of the echo that reverses the gate couplings for one
/// pulse of length t_mb (per unit ramp envelope).
std::vector<MultibeatMode> multibeat_modes(const CrystalModel& crystal, const std::vector<int>& modes,
                                           const RMatrix& couplings);

struct VerificationReport {
  bool passed = false;
  double max_residual_population = 0.0;  // phonons left after t_mb, over bitstrings
  double max_phase_error = 0.0;          // rad, two-qubit phases vs target
  std::vector<double> mode_residuals;    // <n_m> left, worst bitstring
  std::string details;
};

/// Brute-force Taylor stepping of the multi-tone spin-phonon Hamiltonian on
/// the truncated phonon space of every bitstring for `pulses` consecutive
/// pulses, each scaled by `envelope[p]` (all ones when empty). Checks loop
/// closure (< 1e-4) and the induced phases against sum_p env_p^2 phi.
/// `couplings` holds the eta rows of the solution's modes.
VerificationReport verify_solution(const MultibeatSolution& solution, const RMatrix& couplings,
                                   const std::vector<int>& fock_cutoffs,
                                   std::vector<double> envelope = {});

}  // namespace itof
