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

#include "itof/spinmodel.hpp"

#include <cmath>

namespace itof {

namespace {

void check_square(const RMatrix& J) {
  if (J.rows() != J.cols()) throw std::invalid_argument("Ising matrix must be square");
}

double ising_energy(const RMatrix& J, std::uint64_t bits) {
  const int n = static_cast<int>(J.rows());
  double e = 0.0;
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      if (i != j) e += J(i, j) * spin_of(bits, i, n) * spin_of(bits, j, n);
    }
  }
  return e;
}

double detuning_energy(int n, double nu, std::uint64_t bits) {
  double sz = 0.0;
  for (int i = 0; i < n; ++i) sz += spin_of(bits, i, n);
  return -0.5 * nu * sz;
}

}  // namespace

double energy_of_bitstring(const RMatrix& J, double nu, std::uint64_t bits) {
  check_square(J);
  return detuning_energy(static_cast<int>(J.rows()), nu, bits) + ising_energy(J, bits);
}

CMatrix spin_hamiltonian(const SpinModelParams& p) {
  check_square(p.J);
  if (p.J.rows() != p.n_qubits) throw std::invalid_argument("Ising matrix size differs from n_qubits");
  if (p.target < 0 || p.target >= p.n_qubits) throw std::out_of_range("target index out of range");
  const Index d = Index{1} << p.n_qubits;
  CMatrix h = CMatrix::Zero(d, d);
  for (Index b = 0; b < d; ++b) {
    const auto bits = static_cast<std::uint64_t>(b);
    h(b, b) = energy_of_bitstring(p.J, p.nu, bits);
    h(static_cast<Index>(flip_bit(bits, p.target, p.n_qubits)), b) += 0.5 * p.g;
  }
  return h;
}

double energy_gap(const RMatrix& J, int target, std::uint64_t bits) {
  check_square(J);
  const int n = static_cast<int>(J.rows());
  double gap = 0.0;
  for (int i = 0; i < n; ++i) {
    if (i != target) gap += 4.0 * J(target, i) * spin_of(bits, i, n);
  }
  return gap;
}

double resonance_nu(const RMatrix& J, int target) {
  check_square(J);
  double row = 0.0;
  for (Index i = 0; i < J.rows(); ++i) {
    if (i != target) row += J(target, i);
  }
  return -4.0 * row;
}

std::uint64_t target_pair_state(int n_qubits, int target, int target_bit) {
  std::uint64_t all = (std::uint64_t{1} << n_qubits) - 1;
  return target_bit ? all : flip_bit(all, target, n_qubits);
}

CMatrix ideal_itoffoli(int n_qubits, int target) {
  if (target < 0 || target >= n_qubits) throw std::out_of_range("target index out of range");
  const Index d = Index{1} << n_qubits;
  CMatrix u = CMatrix::Identity(d, d);
  const auto s0 = static_cast<Index>(target_pair_state(n_qubits, target, 0));
  const auto s1 = static_cast<Index>(target_pair_state(n_qubits, target, 1));
  u(s0, s0) = 0.0;
  u(s1, s1) = 0.0;
  u(s0, s1) = kI;
  u(s1, s0) = kI;
  return u;
}

double wrap_phase(double phase) {
  double w = std::remainder(phase, kTwoPi);
  if (w <= -kPi) w += kTwoPi;
  return w;
}

RVector dynamical_phases(const RMatrix& J, double nu, int target, double ising_time,
                         double detuning_time) {
  const int n = static_cast<int>(J.rows());
  const Index d = Index{1} << n;
  auto phase_of = [&](std::uint64_t b) {
    return -(ising_energy(J, b) * ising_time + detuning_energy(n, nu, b) * detuning_time);
  };
  const double ref = phase_of(target_pair_state(n, target, 1));
  RVector out(d);
  for (Index b = 0; b < d; ++b) out(b) = wrap_phase(phase_of(static_cast<std::uint64_t>(b)) - ref);
  return out;
}

}  // namespace itof
