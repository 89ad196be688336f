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

#include <optional>
#include <span>
#include <string>
#include <vector>

#include "itof/crystal.hpp"
#include "itof/hilbert.hpp"

namespace itof {

enum class RampShape { SinSquared, Quench };
enum class ModeSet { CenterOfMass, AllAxial };
enum class EchoKind { None, SignFlip, Multibeat };

std::string to_string(RampShape shape);
std::string to_string(ModeSet set);
std::string to_string(EchoKind kind);

/// Envelope of the spin-dependent force amplitude Omega(t) / Omega.
struct RampProfile {
  RampShape shape = RampShape::SinSquared;
  double t_a = 0.0;

  /// Effective ramp time 0.5 t_a for sin^2 (t_a for a quench).
  double effective_time() const;
  /// Integral of (Omega(t)/Omega)^2 over one ramp: 3/8 t_a for sin^2. The
  /// Ising strength follows Omega^2, so this is the time the Ising phase
  /// actually accumulates for.
  double ising_area() const;
};

/// Multiplier in [0, 1]: sin^2 rise on [0, t_a], 1 on the plateau, cos^2 fall
/// on [t_a + tau_g, 2 t_a + tau_g]. Throws std::out_of_range outside.
double ramp_value(const RampProfile& profile, double t, double tau_g);

/// Physical inputs of one gate run before derived quantities are resolved.
struct GateSpec {
  int n_ions = 3;
  double omega_cm = 0.0;          // rad/s
  double delta_cm = 0.0;          // mu - omega_cm, rad/s, signed
  double eta_cm_per_ion = 0.1;
  std::optional<double> ising_j;  // |J| of the center-of-mass coupling, rad/s
  std::optional<double> omega_rabi;
  std::optional<double> g;
  std::optional<double> ratio_j_over_g;
  std::optional<double> t_a;      // defaults to tau_g
  RampShape ramp = RampShape::SinSquared;
  ModeSet mode_set = ModeSet::CenterOfMass;
  EchoKind echo = EchoKind::None;
  std::optional<int> target;
  std::optional<std::vector<int>> fock_cutoffs;
  bool drive_correction = true;
  double nu_offset = 0.0;         // expert: added to the resonant nu
  double t_mb = 5e-6;
  double nbar_cm = 0.0;
  double dt_scale = 1.0;
};

/// Fully resolved parameters of one gate run.
struct GateConfig {
  CrystalModel crystal;
  ModeSet mode_set = ModeSet::CenterOfMass;
  std::vector<int> modes;         // crystal mode indices that couple
  RMatrix couplings;              // eta rows of the coupled modes
  std::vector<double> detunings;  // delta_m = mu - omega_m, parallel to modes
  double omega_rabi = 0.0;
  double g = 0.0;                 // effective Rabi rate of the target pair
  double nu = 0.0;
  RampProfile ramp;
  double tau_g = 0.0;             // pi / g
  int target = 0;
  std::vector<int> fock_cutoffs;
  double lambda_c = 1.0;
  bool drive_correction = true;
  /// Sign of the applied drive. -1 makes the resonant pi pulse act as
  /// exp(+i pi/2 sigma_x) = i sigma_x on the target pair.
  double drive_sign = -1.0;
  EchoKind echo = EchoKind::None;
  double t_mb = 5e-6;
  double nbar_cm = 0.0;
  double dt_scale = 1.0;
  IsingMatrix ising;

  int n_qubits() const { return crystal.n_ions; }
  int n_modes() const { return static_cast<int>(modes.size()); }
  double total_time() const { return 2.0 * ramp.t_a + tau_g; }
  /// Signed drive amplitude applied on the plateau: drive_sign * g / lambda_c.
  double drive_amplitude() const;
  double delta_cm = 0.0;          // detuning from the center-of-mass mode
  double beatnote() const { return crystal.omega_cm + delta_cm; }
  double max_abs_detuning() const;
  CompositeSpace space() const { return CompositeSpace(n_qubits(), fock_cutoffs); }
  CompositeSpace space(std::span<const int> cutoffs) const;
  /// c_m(b) = sum_i eta_m^(i) s_i: rows = coupled modes, cols = bitstrings.
  RMatrix coupling_table() const;
  /// Homogeneous center-of-mass Ising strength Omega^2 eta_cm^2 / (4 delta_cm).
  double cm_ising() const;
};

GateConfig resolve(const GateSpec& spec);

/// n_max = ceil(|alpha|^2 + 6|alpha| + 4) per coupled mode with
/// |alpha_m| = Omega sum_i |eta_m^(i)| / (2 |delta_m|).
std::vector<int> default_fock_cutoffs(const RMatrix& couplings, double omega_rabi,
                                      std::span<const double> detunings);

/// Smallest n whose thermal tail sum_{k>n} p_k falls below `tail`.
int thermal_cutoff(double nbar, double tail = 1e-4);

/// Ramp step rule: min(2 pi / (50 max|delta|), t_a / 4000) times dt_scale.
double ramp_step(const GateConfig& config);

/// <n_out| D^dag(alpha_out) D(alpha_in) |n_in> in closed form (Laguerre).
Complex displaced_overlap(int n_out, int n_in, Complex alpha_out, Complex alpha_in);

/// prod_m exp(-beta_m^2/2) L_{n_m}(beta_m^2) for equal input/output occupations.
double overlap_factor(std::span<const double> betas, std::span<const int> occupations);

struct DriveCalibration {
  std::vector<double> betas;  // Omega eta_m^(t) / delta_m
  double lambda_c = 1.0;
  double g_tilde = 0.0;
};

/// Overlap of the two dressed target states and the corrected drive
/// g~ = g / lambda_c. Throws ConfigError when lambda_c <= 0.05.
DriveCalibration corrected_drive(const GateConfig& config, std::span<const int> occupations);

struct HamiltonianOptions {
  bool drive = true;
  /// Overrides the ramp envelope value when set (e.g. a plateau sample).
  std::optional<double> envelope;
  /// Reverses J and nu (delta -> -delta), as in the sign-flip echo.
  bool reversed = false;
};

/// Spin-phonon Hamiltonian in the frame rotating at the beatnote:
/// -(nu/2) sum sz + (i Omega(t)/2) sum_m sum_i (a_m^dag - a_m) eta_m^(i) sz
///   - sum_m delta_m a_m^dag a_m + drive(t) (g~/2) sx^(t).
SparseOp multimode_hamiltonian(const GateConfig& config, double t,
                               const HamiltonianOptions& options = {});
SparseOp multimode_hamiltonian(const GateConfig& config, const CompositeSpace& space, double t,
                               const HamiltonianOptions& options = {});

/// State-dependent displacement U_I = sum_b |b><b| (x) prod_m D(alpha_m(b)),
/// alpha_m(b) = i (Omega env / 2) c_m(b) / delta_m.
SparseOp lang_firsov_unitary(const GateConfig& config, const CompositeSpace& space,
                             double envelope);

/// Spin-phonon Hamiltonian restricted to the qubit basis states `bitstrings`
/// (rows ordered by list position, then phonon index). The drive couples
/// listed states that differ only in the target bit.
SparseOp block_hamiltonian(const GateConfig& config, const CompositeSpace& space,
                           std::span<const std::uint64_t> bitstrings, double envelope,
                           double drive_amplitude, bool reversed = false);

/// Center-of-mass Hamiltonian in the dressed frame:
/// -(nu/2) sum sz + J(t) sum_{i != j} sz sz - delta a^dag a + drive(t) (g~/2) sx,
/// with J(t) = J env(t)^2 and the plateau value of nu. With
/// `transformed_drive` the drive is U_I^dag sx U_I instead of the bare sx.
SparseOp single_mode_hamiltonian(const GateConfig& config, const CompositeSpace& space,
                                 double t, bool transformed_drive = false);

}  // namespace itof
