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

#include "itof/crystal.hpp"

#include <algorithm>
#include <cmath>
#include <iostream>
#include <mutex>
#include <sstream>

namespace itof {

namespace {

std::mutex g_warn_mutex;
bool g_warnings_enabled = true;

RVector force_residual(const RVector& u) {
  const Index n = u.size();
  RVector f(n);
  for (Index i = 0; i < n; ++i) {
    double s = u(i);
    for (Index j = 0; j < n; ++j) {
      if (j == i) continue;
      const double d = u(i) - u(j);
      s -= std::copysign(1.0 / (d * d), d);
    }
    f(i) = s;
  }
  return f;
}

bool strictly_increasing(const RVector& u) {
  for (Index i = 1; i < u.size(); ++i) {
    if (!(u(i) > u(i - 1))) return false;
  }
  return true;
}

}  // namespace

void log_warning(const std::string& message) {
  std::lock_guard lock(g_warn_mutex);
  if (g_warnings_enabled) std::clog << "warning: " << message << '\n';
}

void set_warnings_enabled(bool enabled) {
  std::lock_guard lock(g_warn_mutex);
  g_warnings_enabled = enabled;
}

std::vector<double> equilibrium_positions(int n_ions, int max_iterations) {
  if (n_ions < 2) throw ConfigError("equilibrium_positions needs at least two ions", "n_ions");

  // Uniform spacing roughly matching the chain length scale ~ N^0.56.
  RVector u(n_ions);
  const double half_length = 0.9 * std::pow(static_cast<double>(n_ions), 0.56);
  for (int i = 0; i < n_ions; ++i) {
    u(i) = -half_length + 2.0 * half_length * i / (n_ions - 1);
  }

  RVector f = force_residual(u);
  double residual = f.lpNorm<Eigen::Infinity>();
  for (int iter = 0; iter < max_iterations && residual >= 1e-12; ++iter) {
    const RMatrix hessian = axial_hessian(std::span<const double>(u.data(), n_ions));
    const RVector step = hessian.ldlt().solve(-f);
    double damping = 1.0;
    bool accepted = false;
    for (int k = 0; k < 40; ++k) {
      RVector trial = u + damping * step;
      if (strictly_increasing(trial)) {
        const RVector ft = force_residual(trial);
        const double rt = ft.lpNorm<Eigen::Infinity>();
        if (rt < residual || rt < 1e-13) {
          u = trial;
          f = ft;
          residual = rt;
          accepted = true;
          break;
        }
      }
      damping *= 0.5;
    }
    if (!accepted) break;
  }
  if (residual >= 1e-12) {
    std::ostringstream msg;
    msg << "equilibrium solver did not converge for n_ions=" << n_ions
        << " (residual " << residual << ")";
    throw SolverError(msg.str(), residual);
  }

  // Symmetrize: u_i = -u_{n-1-i}.
  std::vector<double> out(n_ions);
  for (int i = 0; i < n_ions; ++i) out[i] = 0.5 * (u(i) - u(n_ions - 1 - i));
  if (n_ions % 2 == 1) out[n_ions / 2] = 0.0;
  return out;
}

RMatrix axial_hessian(std::span<const double> positions) {
  const auto n = static_cast<Index>(positions.size());
  RMatrix a = RMatrix::Zero(n, n);
  for (Index i = 0; i < n; ++i) {
    a(i, i) = 1.0;
    for (Index j = 0; j < n; ++j) {
      if (i == j) continue;
      const double inv3 = 1.0 / std::pow(std::abs(positions[i] - positions[j]), 3);
      a(i, i) += 2.0 * inv3;
      a(i, j) = -2.0 * inv3;
    }
  }
  return a;
}

AxialModes axial_modes(std::span<const double> positions) {
  const RMatrix hessian = axial_hessian(positions);
  Eigen::SelfAdjointEigenSolver<RMatrix> solver(hessian);
  const Index n = hessian.rows();
  AxialModes modes;
  modes.freq_ratios = solver.eigenvalues().cwiseMax(0.0).cwiseSqrt();
  modes.vectors = solver.eigenvectors();

  // The center-of-mass mode is exact: eigenvalue 1, uniform vector.
  if (std::abs(modes.freq_ratios(0) - 1.0) > 1e-8) {
    log_warning("lowest axial mode deviates from the center-of-mass frequency");
  }
  modes.freq_ratios(0) = 1.0;
  modes.vectors.col(0).setConstant(1.0 / std::sqrt(static_cast<double>(n)));

  // Deterministic sign: first significant component positive.
  for (Index m = 1; m < n; ++m) {
    for (Index i = 0; i < n; ++i) {
      if (std::abs(modes.vectors(i, m)) > 1e-9) {
        if (modes.vectors(i, m) < 0) modes.vectors.col(m) *= -1.0;
        break;
      }
    }
    // Exact zeros for symmetry-forced nodes (e.g. the middle ion of odd modes).
    for (Index i = 0; i < n; ++i) {
      if (std::abs(modes.vectors(i, m)) < 1e-13) modes.vectors(i, m) = 0.0;
    }
  }
  return modes;
}

RMatrix lamb_dicke_matrix(const CrystalModel& model) {
  const int n = model.n_ions;
  RMatrix eta(model.n_modes(), n);
  for (int m = 0; m < model.n_modes(); ++m) {
    const double scale = model.eta0 * std::sqrt(model.omega_cm / model.mode_freqs(m));
    for (int i = 0; i < n; ++i) eta(m, i) = model.mode_vectors(i, m) * scale;
  }
  return eta;
}

CrystalModel CrystalModel::build(int n_ions, double omega_cm, double eta0) {
  if (omega_cm <= 0.0) throw ConfigError("omega_cm must be positive", "omega_cm_khz");
  if (eta0 <= 0.0) throw ConfigError("eta0 must be positive", "eta_cm_per_ion");
  CrystalModel model;
  model.n_ions = n_ions;
  model.omega_cm = omega_cm;
  model.eta0 = eta0;
  if (n_ions == 1) {
    model.positions = {0.0};
    model.mode_freqs = RVector::Constant(1, omega_cm);
    model.mode_vectors = RMatrix::Ones(1, 1);
  } else {
    model.positions = equilibrium_positions(n_ions);
    const AxialModes modes = axial_modes(model.positions);
    model.mode_freqs = omega_cm * modes.freq_ratios;
    model.mode_vectors = modes.vectors;
  }
  model.lamb_dicke = lamb_dicke_matrix(model);
  return model;
}

RMatrix IsingMatrix::full() const {
  RMatrix out = J;
  for (Index i = 0; i < out.rows(); ++i) out(i, i) = self_terms(i);
  return out;
}

IsingMatrix IsingMatrix::scaled(double factor) const {
  IsingMatrix out = *this;
  out.J *= factor;
  out.self_terms *= factor;
  for (auto& m : out.per_mode) m *= factor;
  return out;
}

IsingMatrix ising_matrix(const RMatrix& couplings, double omega_rabi,
                         std::span<const double> detunings) {
  if (static_cast<Index>(detunings.size()) != couplings.rows()) {
    throw ConfigError("one detuning per coupled mode is required", "delta");
  }
  const Index n = couplings.cols();
  IsingMatrix out;
  out.J = RMatrix::Zero(n, n);
  out.self_terms = RVector::Zero(n);
  for (Index m = 0; m < couplings.rows(); ++m) {
    const double delta = detunings[m];
    if (delta == 0.0) throw ConfigError("zero detuning makes the Ising coupling diverge", "delta");
    const double pref = omega_rabi * omega_rabi / (4.0 * delta);
    RMatrix jm = pref * couplings.row(m).transpose() * couplings.row(m);
    out.self_terms += jm.diagonal();
    jm.diagonal().setZero();
    out.J += jm;
    out.per_mode.push_back(std::move(jm));
  }
  return out;
}

IsingMatrix ising_matrix(const CrystalModel& model, double omega_rabi,
                         std::span<const double> detunings, std::span<const int> modes) {
  if (modes.empty()) return ising_matrix(model.lamb_dicke, omega_rabi, detunings);
  RMatrix rows(modes.size(), model.n_ions);
  for (std::size_t k = 0; k < modes.size(); ++k) rows.row(k) = model.lamb_dicke.row(modes[k]);
  return ising_matrix(rows, omega_rabi, detunings);
}

}  // namespace itof
