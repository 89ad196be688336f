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
#include <vector>

#include <doctest.h>

#include "itof/hilbert.hpp"
#include "oracles.hpp"

using namespace itof;

TEST_CASE("composite index layout: qubits slowest, last mode fastest") {
  const CompositeSpace space(2, {2, 3});
  CHECK(space.dim() == 4 * 3 * 4);
  CHECK(space.mode_stride(1) == 1);
  CHECK(space.mode_stride(0) == 4);
  const std::vector<int> occ{1, 2};
  const Index idx = space.index(0b10, occ);
  CHECK(idx == 2 * 12 + 1 * 4 + 2);
  const BasisLabel label = space.label(idx);
  CHECK(label.bits == 0b10);
  CHECK(label.occupations == occ);
  for (Index i = 0; i < space.dim(); ++i) CHECK(space.index(space.label(i).bits, space.label(i).occupations) == i);
  CHECK(space.occupation(idx, 0) == 1);
  CHECK(space.occupation(idx, 1) == 2);
}

TEST_CASE("Pauli embeddings match Kronecker products and sigma_z|0> = +|0>") {
  const CompositeSpace space(3, {2});
  const CMatrix id_ph = CMatrix::Identity(3, 3);
  for (int ion = 0; ion < 3; ++ion) {
    for (auto [axis, name] : {std::pair{PauliAxis::X, 'x'}, {PauliAxis::Y, 'y'}, {PauliAxis::Z, 'z'}}) {
      const CMatrix expected = oracle::kron(oracle::on_ion(oracle::pauli(name), ion, 3), id_ph);
      CHECK((CMatrix(pauli_embed(space, ion, axis)) - expected).norm() < 1e-14);
    }
  }
  const CMatrix z0 = CMatrix(pauli_embed(space, 0, PauliAxis::Z));
  CHECK(z0(0, 0).real() == 1.0);
  const CMatrix x = CMatrix(pauli_embed(space, 1, PauliAxis::X));
  const CMatrix y = CMatrix(pauli_embed(space, 1, PauliAxis::Y));
  CHECK((x * y + y * x).norm() < 1e-14);
}

TEST_CASE("ladder operators") {
  const int levels = 8;
  const CMatrix a = annihilation_matrix(levels);
  const CMatrix comm = a * a.adjoint() - a.adjoint() * a;
  for (int n = 0; n < levels - 1; ++n) CHECK(comm(n, n).real() == doctest::Approx(1.0));
  CHECK((a - oracle::annihilation(levels)).norm() < 1e-14);

  const CompositeSpace space(1, {3, 4});
  const CMatrix num = CMatrix(ladder_embed(space, 1, LadderKind::Number));
  const CMatrix ad = CMatrix(ladder_embed(space, 1, LadderKind::Create));
  const CMatrix an = CMatrix(ladder_embed(space, 1, LadderKind::Annihilate));
  CHECK((ad * an - num).norm() < 1e-12);
  for (Index i = 0; i < space.dim(); ++i) CHECK(num(i, i).real() == doctest::Approx(space.occupation(i, 1)));
}

TEST_CASE("displacement matrix agrees with the series exponential") {
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> u(-1.5, 1.5);
  for (int trial = 0; trial < 10; ++trial) {
    const Complex alpha(u(rng), u(rng));
    const CMatrix d = displacement_matrix(30, alpha);
    const CMatrix ref = oracle::displacement(30, alpha);
    CHECK((d - ref).cwiseAbs().maxCoeff() < 1e-10);
    CHECK(is_unitary(d, 1e-10));
  }
  CHECK(displacement_truncation_defect(30, 1.0) < 1e-12);
  CHECK(displacement_truncation_defect(4, 1.5) > displacement_truncation_defect(8, 1.5));
  const CompositeSpace small(1, {3});
  CHECK_THROWS_AS(displacement(small, 0, Complex(2.0, 0.0)), ConfigError);
}

TEST_CASE("partial trace, ground projector and product states") {
  const CompositeSpace space(2, {2});
  CVector q(4);
  q << 0.6, 0.0, Complex(0.0, 0.8), 0.0;
  const std::vector<int> occ{1};
  const CVector psi = product_state(space, q, occ);
  CHECK(psi.norm() == doctest::Approx(1.0));
  const CMatrix rho = partial_trace_fock(space, psi * psi.adjoint());
  CHECK((rho - q * q.adjoint()).norm() < 1e-14);
  const CMatrix proj = CMatrix(ground_projector(space));
  CHECK((proj * psi).norm() < 1e-14);
  CHECK((proj * proj - proj).norm() < 1e-14);
}

TEST_CASE("expm_hermitian matches the series exponential") {
  std::mt19937_64 rng(5);
  std::normal_distribution<double> n;
  CMatrix h(6, 6);
  for (Index i = 0; i < 6; ++i) {
    for (Index j = 0; j < 6; ++j) h(i, j) = Complex(n(rng), n(rng));
  }
  h = (h + h.adjoint()).eval();
  CHECK(is_hermitian(h));
  const CMatrix u = expm_hermitian(h, 0.7);
  CHECK((u - oracle::expm(Complex(0.0, -0.7) * h)).norm() < 1e-11);
  CHECK(is_unitary(u));
}
