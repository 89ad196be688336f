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

#include "itof/hamiltonians.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>
#include <stdexcept>

#include "itof/spinmodel.hpp"

namespace itof {

std::string to_string(RampShape shape) {
  return shape == RampShape::SinSquared ? "sin2" : "quench";
}

std::string to_string(ModeSet set) {
  return set == ModeSet::CenterOfMass ? "cm_only" : "all_axial";
}

std::string to_string(EchoKind kind) {
  switch (kind) {
    case EchoKind::None: return "none";
    case EchoKind::SignFlip: return "sign_flip";
    case EchoKind::Multibeat: return "multibeat";
  }
  return "none";
}

double RampProfile::effective_time() const {
  return shape == RampShape::SinSquared ? 0.5 * t_a : t_a;
}

double RampProfile::ising_area() const {
  return shape == RampShape::SinSquared ? 0.375 * t_a : t_a;
}

double ramp_value(const RampProfile& profile, double t, double tau_g) {
  const double t_total = 2.0 * profile.t_a + tau_g;
  const double slack = 1e-12 * std::max(t_total, 1e-30);
  if (t < -slack || t > t_total + slack) {
    std::ostringstream msg;
    msg << "ramp time " << t << " outside [0, " << t_total << "]";
    throw std::out_of_range(msg.str());
  }
  if (profile.shape == RampShape::Quench || profile.t_a <= 0.0) return 1.0;
  if (t < profile.t_a) {
    const double s = std::sin(0.5 * kPi * t / profile.t_a);
    return s * s;
  }
  if (t <= profile.t_a + tau_g) return 1.0;
  const double c = std::cos(0.5 * kPi * (t - profile.t_a - tau_g) / profile.t_a);
  return c * c;
}

double GateConfig::drive_amplitude() const {
  const double scale = drive_correction ? 1.0 / lambda_c : 1.0;
  return drive_sign * g * scale;
}

double GateConfig::max_abs_detuning() const {
  double best = 0.0;
  for (double d : detunings) best = std::max(best, std::abs(d));
  return best;
}

CompositeSpace GateConfig::space(std::span<const int> cutoffs) const {
  return CompositeSpace(n_qubits(), std::vector<int>(cutoffs.begin(), cutoffs.end()));
}

RMatrix GateConfig::coupling_table() const {
  const int n = n_qubits();
  const Index dq = Index{1} << n;
  RMatrix table = RMatrix::Zero(n_modes(), dq);
  for (int m = 0; m < n_modes(); ++m) {
    for (Index b = 0; b < dq; ++b) {
      double c = 0.0;
      for (int i = 0; i < n; ++i) c += couplings(m, i) * spin_of(static_cast<std::uint64_t>(b), i, n);
      table(m, b) = c;
    }
  }
  return table;
}

double GateConfig::cm_ising() const {
  const double eta = crystal.lamb_dicke(0, 0);
  return omega_rabi * omega_rabi * eta * eta / (4.0 * delta_cm);
}

std::vector<int> default_fock_cutoffs(const RMatrix& couplings, double omega_rabi,
                                      std::span<const double> detunings) {
  std::vector<int> cutoffs;
  for (Index m = 0; m < couplings.rows(); ++m) {
    const double alpha =
        std::abs(omega_rabi) * couplings.row(m).cwiseAbs().sum() / (2.0 * std::abs(detunings[m]));
    cutoffs.push_back(static_cast<int>(std::ceil(alpha * alpha + 6.0 * alpha + 4.0)));
  }
  return cutoffs;
}

int thermal_cutoff(double nbar, double tail) {
  if (nbar <= 0.0) return 0;
  // Tail beyond n of the geometric distribution is (nbar / (1 + nbar))^(n+1).
  const double q = nbar / (1.0 + nbar);
  return static_cast<int>(std::ceil(std::log(tail) / std::log(q) - 1.0));
}

double ramp_step(const GateConfig& config) {
  double dt = kTwoPi / (50.0 * config.max_abs_detuning());
  if (config.ramp.t_a > 0.0) dt = std::min(dt, config.ramp.t_a / 4000.0);
  dt *= config.dt_scale;
  const double limit = kTwoPi / (5.0 * config.max_abs_detuning());
  if (dt > limit) {
    std::ostringstream msg;
    msg << "time step " << dt << " s exceeds 2pi/(5 max|delta|) = " << limit << " s";
    throw ConfigError(msg.str(), "dt_scale");
  }
  return dt;
}

Complex displaced_overlap(int n_out, int n_in, Complex alpha_out, Complex alpha_in) {
  // D^dag(a') D(a) = exp(i Im(a'^* a)) D(a - a').
  const Complex gamma = alpha_in - alpha_out;
  const Complex prefactor = std::exp(kI * std::imag(std::conj(alpha_out) * alpha_in));
  const double x = std::norm(gamma);
  const int lo = std::min(n_out, n_in);
  const int dn = std::abs(n_out - n_in);
  double log_ratio = 0.0;
  for (int k = lo + 1; k <= lo + dn; ++k) log_ratio -= 0.5 * std::log(static_cast<double>(k));
  const Complex base = n_out >= n_in ? gamma : -std::conj(gamma);
  const Complex power = dn == 0 ? Complex{1.0} : std::pow(base, dn);
  const double laguerre = std::assoc_laguerre(static_cast<unsigned>(lo), static_cast<unsigned>(dn), x);
  return prefactor * std::exp(log_ratio - 0.5 * x) * power * laguerre;
}

double overlap_factor(std::span<const double> betas, std::span<const int> occupations) {
  if (betas.size() != occupations.size()) {
    throw std::invalid_argument("overlap_factor: betas and occupations differ in length");
  }
  double lambda = 1.0;
  for (std::size_t m = 0; m < betas.size(); ++m) {
    const double x = betas[m] * betas[m];
    lambda *= std::exp(-0.5 * x) * std::laguerre(static_cast<unsigned>(occupations[m]), x);
  }
  return lambda;
}

DriveCalibration corrected_drive(const GateConfig& config, std::span<const int> occupations) {
  DriveCalibration cal;
  for (int m = 0; m < config.n_modes(); ++m) {
    cal.betas.push_back(config.omega_rabi * config.couplings(m, config.target) / config.detunings[m]);
  }
  cal.lambda_c = overlap_factor(cal.betas, occupations);
  if (cal.lambda_c < 0.05) {
    std::ostringstream msg;
    msg << "overlap factor lambda_c = " << cal.lambda_c << " too small: drive correction diverges";
    throw ConfigError(msg.str(), "drive_correction");
  }
  cal.g_tilde = config.g / cal.lambda_c;
  return cal;
}

GateConfig resolve(const GateSpec& spec) {
  if (spec.n_ions < 2) throw ConfigError("n_ions must be at least 2", "n_ions");
  if (spec.omega_cm <= 0.0) throw ConfigError("omega_cm must be positive", "omega_cm_khz");
  if (spec.delta_cm == 0.0) throw ConfigError("delta_cm must be nonzero", "delta_cm_khz");
  if (spec.eta_cm_per_ion <= 0.0) throw ConfigError("eta_cm_per_ion must be positive", "eta_cm_per_ion");
  if (spec.dt_scale <= 0.0) throw ConfigError("dt_scale must be positive", "dt_scale");
  if (spec.nbar_cm < 0.0) throw ConfigError("nbar_cm must be non-negative", "nbar_cm");

  GateConfig c;
  const int n = spec.n_ions;
  c.crystal = CrystalModel::build(n, spec.omega_cm, spec.eta_cm_per_ion * std::sqrt(static_cast<double>(n)));
  c.mode_set = spec.mode_set;
  c.delta_cm = spec.delta_cm;
  const double mu = spec.omega_cm + spec.delta_cm;
  if (spec.mode_set == ModeSet::CenterOfMass) {
    c.modes = {0};
  } else {
    c.modes.resize(n);
    std::iota(c.modes.begin(), c.modes.end(), 0);
  }
  c.couplings.resize(static_cast<Index>(c.modes.size()), n);
  for (std::size_t k = 0; k < c.modes.size(); ++k) {
    const int m = c.modes[k];
    c.couplings.row(static_cast<Index>(k)) = c.crystal.lamb_dicke.row(m);
    const double delta = mu - c.crystal.mode_freqs(m);
    if (delta == 0.0) throw ConfigError("beatnote resonant with an axial mode", "delta_cm_khz");
    c.detunings.push_back(delta);
  }

  const double eta = spec.eta_cm_per_ion;
  if (spec.ising_j) {
    if (*spec.ising_j <= 0.0) throw ConfigError("J must be positive (sign follows delta)", "J_khz");
    const double omega = std::sqrt(4.0 * std::abs(spec.delta_cm) * *spec.ising_j) / eta;
    if (spec.omega_rabi && std::abs(*spec.omega_rabi - omega) > 1e-3 * omega) {
      std::ostringstream msg;
      msg << "J and omega_rabi are inconsistent: J implies omega_rabi/2pi = " << to_khz(omega) << " kHz";
      throw ConfigError(msg.str(), "omega_rabi_khz");
    }
    c.omega_rabi = omega;
  } else if (spec.omega_rabi) {
    c.omega_rabi = *spec.omega_rabi;
  } else {
    throw ConfigError("one of J or omega_rabi is required", "J_khz");
  }
  if (c.omega_rabi <= 0.0) throw ConfigError("omega_rabi must be positive", "omega_rabi_khz");

  const double j_cm = std::abs(c.cm_ising());
  if (spec.g) {
    c.g = *spec.g;
    if (spec.ratio_j_over_g && std::abs(j_cm / c.g - *spec.ratio_j_over_g) > 1e-3 * *spec.ratio_j_over_g) {
      throw ConfigError("g and ratio_J_over_g are inconsistent", "ratio_J_over_g");
    }
  } else if (spec.ratio_j_over_g) {
    if (*spec.ratio_j_over_g <= 0.0) throw ConfigError("ratio_J_over_g must be positive", "ratio_J_over_g");
    c.g = j_cm / *spec.ratio_j_over_g;
  } else {
    throw ConfigError("one of g or ratio_J_over_g is required", "g_khz");
  }
  if (c.g <= 0.0) throw ConfigError("g must be positive", "g_khz");

  c.target = spec.target.value_or(spec.mode_set == ModeSet::AllAxial && n % 2 == 1 ? n / 2 : 0);
  if (c.target < 0 || c.target >= n) throw ConfigError("target ion out of range", "target_ion");

  c.ising = ising_matrix(c.couplings, c.omega_rabi, c.detunings);
  c.nu = resonance_nu(c.ising.J, c.target) + spec.nu_offset;
  c.tau_g = kPi / c.g;
  c.ramp.shape = spec.ramp;
  c.ramp.t_a = spec.t_a.value_or(c.tau_g);
  if (c.ramp.t_a < 0.0) throw ConfigError("t_a must be non-negative", "t_a_us");
  if (spec.ramp == RampShape::SinSquared && c.ramp.t_a * std::abs(spec.delta_cm) / kTwoPi < 5.0) {
    log_warning("ramp time shorter than five detuning periods: the ramp is not adiabatic");
  }
  c.echo = spec.echo;
  c.t_mb = spec.t_mb;
  c.nbar_cm = spec.nbar_cm;
  c.dt_scale = spec.dt_scale;
  c.drive_correction = spec.drive_correction;

  if (spec.fock_cutoffs) {
    c.fock_cutoffs = *spec.fock_cutoffs;
    if (c.fock_cutoffs.size() != c.modes.size()) {
      throw ConfigError("one Fock cutoff per coupled mode is required", "fock_nmax");
    }
  } else {
    c.fock_cutoffs = default_fock_cutoffs(c.couplings, c.omega_rabi, c.detunings);
    c.fock_cutoffs[0] += thermal_cutoff(c.nbar_cm);
  }

  const std::vector<int> vacuum(c.modes.size(), 0);
  c.lambda_c = corrected_drive(c, vacuum).lambda_c;

  const RMatrix table = c.coupling_table();
  for (int m = 1; m < c.n_modes(); ++m) {
    const double alpha = c.omega_rabi * table.row(m).cwiseAbs().maxCoeff() / (2.0 * std::abs(c.detunings[m]));
    if (alpha > 0.5) {
      std::ostringstream msg;
      msg << "spectator mode " << c.modes[m] << " displacement " << alpha << " exceeds 0.5";
      log_warning(msg.str());
    }
  }
  return c;
}

namespace {

double envelope_at(const GateConfig& config, double t, const HamiltonianOptions& options) {
  return options.envelope ? *options.envelope : ramp_value(config.ramp, t, config.tau_g);
}

bool on_plateau(const GateConfig& config, double t) {
  return t >= config.ramp.t_a && t <= config.ramp.t_a + config.tau_g;
}

}  // namespace

SparseOp block_hamiltonian(const GateConfig& config, const CompositeSpace& space,
                           std::span<const std::uint64_t> bitstrings, double envelope,
                           double drive_amplitude, bool reversed) {
  const int n = config.n_qubits();
  const Index pd = space.phonon_dim();
  const Index nb = static_cast<Index>(bitstrings.size());
  const double sign = reversed ? -1.0 : 1.0;
  const double nu = sign * config.nu;
  const double force = 0.5 * config.omega_rabi * envelope;
  const RMatrix table = config.coupling_table();

  std::vector<Eigen::Triplet<Complex>> triplets;
  triplets.reserve(static_cast<std::size_t>(nb * pd * (1 + 2 * space.n_modes() + 1)));
  std::vector<int> occ(space.n_modes());
  for (Index k = 0; k < nb; ++k) {
    const std::uint64_t bits = bitstrings[k];
    double spin_sum = 0.0;
    for (int i = 0; i < n; ++i) spin_sum += spin_of(bits, i, n);
    Index partner = -1;
    if (drive_amplitude != 0.0) {
      const std::uint64_t flipped = flip_bit(bits, config.target, n);
      for (Index q = 0; q < nb; ++q) {
        if (bitstrings[q] == flipped) partner = q;
      }
    }
    for (Index p = 0; p < pd; ++p) {
      const Index row = k * pd + p;
      double diag = -0.5 * nu * envelope * envelope * spin_sum;
      for (int m = 0; m < space.n_modes(); ++m) {
        const int nm = static_cast<int>((p / space.mode_stride(m)) % space.levels(m));
        diag -= sign * config.detunings[m] * nm;
        const double amp = force * table(m, static_cast<Index>(bits));
        if (amp == 0.0) continue;
        // P = i (a^dag - a): <n+1|P|n> = i sqrt(n+1), <n-1|P|n> = -i sqrt(n).
        if (nm < space.cutoff(m)) {
          triplets.emplace_back(row + space.mode_stride(m), row, kI * amp * std::sqrt(nm + 1.0));
        }
        if (nm > 0) triplets.emplace_back(row - space.mode_stride(m), row, -kI * amp * std::sqrt(1.0 * nm));
      }
      triplets.emplace_back(row, row, diag);
      if (partner >= 0) triplets.emplace_back(partner * pd + p, row, 0.5 * drive_amplitude);
    }
  }
  SparseOp h(nb * pd, nb * pd);
  h.setFromTriplets(triplets.begin(), triplets.end());
  return h;
}

SparseOp multimode_hamiltonian(const GateConfig& config, const CompositeSpace& space, double t,
                               const HamiltonianOptions& options) {
  if (space.n_modes() != config.n_modes()) {
    throw std::invalid_argument("space and configuration differ in mode count");
  }
  std::vector<std::uint64_t> all(static_cast<std::size_t>(space.qubit_dim()));
  std::iota(all.begin(), all.end(), std::uint64_t{0});
  const double env = envelope_at(config, t, options);
  const double drive = options.drive && on_plateau(config, t) ? config.drive_amplitude() : 0.0;
  return block_hamiltonian(config, space, all, env, drive, options.reversed);
}

SparseOp multimode_hamiltonian(const GateConfig& config, double t, const HamiltonianOptions& options) {
  return multimode_hamiltonian(config, config.space(), t, options);
}

SparseOp lang_firsov_unitary(const GateConfig& config, const CompositeSpace& space, double envelope) {
  const RMatrix table = config.coupling_table();
  const Index pd = space.phonon_dim();
  std::vector<Eigen::Triplet<Complex>> triplets;
  for (Index b = 0; b < space.qubit_dim(); ++b) {
    CMatrix block = CMatrix::Identity(1, 1);
    for (int m = 0; m < space.n_modes(); ++m) {
      const Complex alpha =
          kI * 0.5 * config.omega_rabi * envelope * table(m, b) / config.detunings[m];
      const CMatrix d = displacement_matrix(space.levels(m), alpha);
      CMatrix next(block.rows() * d.rows(), block.cols() * d.cols());
      for (Index r = 0; r < block.rows(); ++r) {
        for (Index s = 0; s < block.cols(); ++s) {
          next.block(r * d.rows(), s * d.cols(), d.rows(), d.cols()) = block(r, s) * d;
        }
      }
      block = std::move(next);
    }
    for (Index r = 0; r < pd; ++r) {
      for (Index s = 0; s < pd; ++s) {
        if (std::abs(block(r, s)) > 1e-15) triplets.emplace_back(b * pd + r, b * pd + s, block(r, s));
      }
    }
  }
  SparseOp u(space.dim(), space.dim());
  u.setFromTriplets(triplets.begin(), triplets.end());
  return u;
}

SparseOp single_mode_hamiltonian(const GateConfig& config, const CompositeSpace& space, double t,
                                 bool transformed_drive) {
  if (config.n_modes() != 1 || space.n_modes() != 1) {
    throw std::invalid_argument("single_mode_hamiltonian needs a single-mode configuration");
  }
  const int n = config.n_qubits();
  const double env = ramp_value(config.ramp, t, config.tau_g);
  const RMatrix& J = config.ising.J;
  std::vector<Eigen::Triplet<Complex>> triplets;
  for (Index b = 0; b < space.qubit_dim(); ++b) {
    const auto bits = static_cast<std::uint64_t>(b);
    double ising = 0.0;
    for (int i = 0; i < n; ++i) {
      for (int j = 0; j < n; ++j) {
        if (i != j) ising += J(i, j) * spin_of(bits, i, n) * spin_of(bits, j, n);
      }
    }
    double spin_sum = 0.0;
    for (int i = 0; i < n; ++i) spin_sum += spin_of(bits, i, n);
    for (int k = 0; k <= space.cutoff(0); ++k) {
      const Index row = b * space.phonon_dim() + k;
      triplets.emplace_back(row, row, env * env * (ising - 0.5 * config.nu * spin_sum) - config.detunings[0] * k);
    }
  }
  SparseOp h(space.dim(), space.dim());
  h.setFromTriplets(triplets.begin(), triplets.end());
  if (!on_plateau(config, t)) return h;
  SparseOp sx = pauli_embed(space, config.target, PauliAxis::X);
  if (transformed_drive) {
    const SparseOp u = lang_firsov_unitary(config, space, env);
    sx = SparseOp(u.adjoint() * sx * u);
  }
  h += (0.5 * config.drive_amplitude()) * sx;
  return h;
}

}  // namespace itof
