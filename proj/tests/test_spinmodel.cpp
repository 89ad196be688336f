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


#include <random>

#include <doctest.h>

#include "itof/spinmodel.hpp"
#include "oracles.hpp"

using namespace itof;

namespace {

RMatrix homogeneous(int n, double j) {
  RMatrix m = RMatrix::Constant(n, n, j);
  m.diagonal().setZero();
  return m;
}

}  // namespace

TEST_CASE("spin Hamiltonian matches the Kronecker-product construction") {
  std::mt19937_64 rng(1);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  for (int n = 2; n <= 5; ++n) {
    RMatrix j = RMatrix::Zero(n, n);
    for (int a = 0; a < n; ++a) {
      for (int b = a + 1; b < n; ++b) j(a, b) = j(b, a) = u(rng);
    }
    SpinModelParams p{n, j, u(rng), u(rng), n / 2};
    CHECK((spin_hamiltonian(p) - oracle::spin_hamiltonian(j, p.nu, p.g, p.target)).norm() < 1e-12);
  }
}

TEST_CASE("energy gap formula against the dense spectrum") {
  std::mt19937_64 rng(2);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  for (int trial = 0; trial < 200; ++trial) {
    const int n = 2 + trial % 6;
    RMatrix j = RMatrix::Zero(n, n);
    for (int a = 0; a < n; ++a) {
      for (int b = a + 1; b < n; ++b) j(a, b) = j(b, a) = u(rng);
    }
    const int target = trial % n;
    const CMatrix h = oracle::spin_hamiltonian(j, 0.0, 0.0, target);
    const auto bits = std::uniform_int_distribution<std::uint64_t>(0, (1u << n) - 1)(rng);
    const std::uint64_t b0 = bits & ~(std::uint64_t{1} << (n - 1 - target));
    const double brute = h(static_cast<Index>(b0), static_cast<Index>(b0)).real() -
                         h(static_cast<Index>(flip_bit(b0, target, n)), static_cast<Index>(flip_bit(b0, target, n))).real();
    CHECK(std::abs(brute - energy_gap(j, target, b0)) < 1e-10);
  }
}

TEST_CASE("resonance makes the target pair degenerate") {
  const RMatrix j = homogeneous(3, khz(2));
  const double nu = resonance_nu(j, 0);
  CHECK(nu == doctest::Approx(-8.0 * khz(2)));
  const std::uint64_t s0 = target_pair_state(3, 0, 0);
  const std::uint64_t s1 = target_pair_state(3, 0, 1);
  CHECK(s0 == 0b011);
  CHECK(s1 == 0b111);
  CHECK(energy_of_bitstring(j, nu, s0) == doctest::Approx(energy_of_bitstring(j, nu, s1)));
  // Every other control string stays detuned.
  for (std::uint64_t b = 0; b < 8; ++b) {
    if ((b & 0b011) == 0b011) continue;
    CHECK(std::abs(energy_of_bitstring(j, nu, b) - energy_of_bitstring(j, nu, flip_bit(b, 0, 3))) > khz(1));
  }
}

TEST_CASE("ideal i-Toffoli") {
  for (int n = 2; n <= 5; ++n) {
    for (int t = 0; t < n; ++t) {
      const CMatrix u = ideal_itoffoli(n, t);
      CHECK((u - oracle::itoffoli(n, t)).norm() < 1e-15);
      CHECK((u.adjoint() * u - CMatrix::Identity(u.rows(), u.cols())).norm() < 1e-14);
    }
  }
  CHECK(ideal_itoffoli(3, 0).trace().real() == doctest::Approx(6.0));
}

TEST_CASE("resonant pulse at J/g = 2 transfers the target pair") {
  const double g = khz(1);
  const RMatrix j = homogeneous(3, 2.0 * g);
  SpinModelParams p{3, j, resonance_nu(j, 0), -g, 0};
  const CMatrix u = oracle::expm(Complex(0.0, -kPi / g) * spin_hamiltonian(p));
  const auto s0 = static_cast<Index>(target_pair_state(3, 0, 0));
  const auto s1 = static_cast<Index>(target_pair_state(3, 0, 1));
  CHECK(std::norm(u(s1, s0)) > 0.98);
  // The pulse maps |0,11> to i|1,11> up to the common pair energy.
  const double e = energy_of_bitstring(j, p.nu, static_cast<std::uint64_t>(s0));
  const Complex amp = u(s1, s0) * std::polar(1.0, e * kPi / g);
  CHECK(std::arg(amp) == doctest::Approx(kPi / 2).epsilon(1e-2));
  for (Index b = 0; b < 8; ++b) {
    if (b != s0 && b != s1) CHECK(std::norm(u(b, b)) > 0.98);
  }
}

TEST_CASE("dynamical phases vanish when J t = 2 pi k for homogeneous couplings") {
  const double jv = khz(2);
  const RMatrix j = homogeneous(3, jv);
  const double t = 2.0 * kTwoPi / jv;
  const RVector phases = dynamical_phases(j, resonance_nu(j, 0), 0, t, t);
  CHECK(phases.cwiseAbs().maxCoeff() < 1e-9);
  const RVector off = dynamical_phases(j, resonance_nu(j, 0), 0, 1.1 * t, 1.1 * t);
  CHECK(off.cwiseAbs().maxCoeff() > 0.1);
}

TEST_CASE("wrap_phase") {
  CHECK(wrap_phase(kPi) == doctest::Approx(kPi));
  CHECK(wrap_phase(-kPi) == doctest::Approx(kPi));
  CHECK(wrap_phase(3 * kTwoPi + 0.25) == doctest::Approx(0.25));
  CHECK(wrap_phase(-0.25 - kTwoPi) == doctest::Approx(-0.25));
}
