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

#include "itof/types.hpp"

namespace itof {

/// Phonon-free spin model in the frame rotating with the drive.
struct SpinModelParams {
  int n_qubits = 0;
  RMatrix J;           // symmetric, zero diagonal, rad/s
  double nu = 0.0;     // drive-qubit detuning, rad/s
  double g = 0.0;      // drive strength, rad/s
  int target = 0;
};

/// -(nu/2) sum sigma_z + sum_{i != j} J_ij sigma_z sigma_z + (g/2) sigma_x^(t).
/// The pair sum runs over ordered pairs, so each pair appears twice.
CMatrix spin_hamiltonian(const SpinModelParams& params);

/// Diagonal energy of a computational basis state under spin_hamiltonian(g=0).
double energy_of_bitstring(const RMatrix& J, double nu, std::uint64_t bits);

/// Gap E(|0, x_c>) - E(|1, x_c>) of the Ising part, i.e. 4 sum_i J_ti (-1)^x_i.
/// `bits` is a full register bitstring; the target bit is ignored.
double energy_gap(const RMatrix& J, int target, std::uint64_t bits);

/// Drive detuning that makes the all-ones control pair degenerate:
/// nu = -4 sum_i J_ti.
double resonance_nu(const RMatrix& J, int target);

/// Identity except on {|0,1..1>, |1,1..1>} where it acts as i sigma_x.
CMatrix ideal_itoffoli(int n_qubits, int target);

/// Register bitstring with every control set to 1 and the target set to
/// `target_bit`.
std::uint64_t target_pair_state(int n_qubits, int target, int target_bit);

/// Relative dynamical phase -E t (wrapped to (-pi, pi]) of every computational
/// state with the Ising part acting for `ising_time` and the detuning term for
/// `detuning_time`, referenced to the all-ones target pair.
RVector dynamical_phases(const RMatrix& J, double nu, int target, double ising_time,
                         double detuning_time);

double wrap_phase(double phase);

}  // namespace itof
