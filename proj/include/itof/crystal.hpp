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

#include <span>
#include <vector>

#include "itof/types.hpp"

namespace itof {

/// Axial normal modes of a linear chain in units of the center-of-mass
/// frequency. `vectors` holds one orthonormal mode vector b_m per column.
struct AxialModes {
  RVector freq_ratios;
  RMatrix vectors;
};

/// Linear ion chain: equilibrium geometry, axial modes and the Lamb-Dicke
/// couplings of every ion to every mode.
///
/// `lamb_dicke(m, i)` is the coupling of ion i to mode m, following
/// eta_m^(i) = b_m^(i) * eta0 * sqrt(omega_cm / omega_m). With this
/// normalization the per-ion center-of-mass coupling is eta0 / sqrt(N).
struct CrystalModel {
  int n_ions = 0;
  double omega_cm = 0.0;
  std::vector<double> positions;
  RVector mode_freqs;
  RMatrix mode_vectors;
  double eta0 = 0.0;
  RMatrix lamb_dicke;

  static CrystalModel build(int n_ions, double omega_cm, double eta0);
  int n_modes() const { return static_cast<int>(mode_freqs.size()); }
};

/// Phonon-mediated Ising couplings. `J` has a zero diagonal; `per_mode`
/// sums to `J` exactly. `self_terms` keeps the i == j contributions that the
/// zero-diagonal convention drops (they only produce a global phase).
struct IsingMatrix {
  RMatrix J;
  std::vector<RMatrix> per_mode;
  RVector self_terms;

  /// J with the self terms restored on the diagonal.
  RMatrix full() const;
  IsingMatrix scaled(double factor) const;
};

/// Dimensionless equilibrium coordinates of an n-ion Coulomb chain in a
/// harmonic axial well. Damped Newton from uniform spacing; throws
/// SolverError if the force residual does not drop below 1e-12.
std::vector<double> equilibrium_positions(int n_ions, int max_iterations = 200);

/// Dimensionless axial Hessian of the chain at `positions`.
RMatrix axial_hessian(std::span<const double> positions);

AxialModes axial_modes(std::span<const double> positions);

RMatrix lamb_dicke_matrix(const CrystalModel& model);

/// J^(i,j) = Omega^2 sum_m eta_m^(i) eta_m^(j) / (4 delta_m) over the modes in
/// `modes` (all modes when empty). `detunings` runs parallel to the selected
/// modes. Zero detuning throws ConfigError.
IsingMatrix ising_matrix(const CrystalModel& model, double omega_rabi,
                         std::span<const double> detunings,
                         std::span<const int> modes = {});

/// Same as above for an explicit coupling matrix (rows = modes, cols = ions).
IsingMatrix ising_matrix(const RMatrix& couplings, double omega_rabi,
                         std::span<const double> detunings);

}  // namespace itof
