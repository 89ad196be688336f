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


#include <cmath>
#include <numeric>
#include <random>
#include <vector>

#include <doctest.h>

#include "itof/analysis.hpp"
#include "itof/hamiltonians.hpp"
#include "itof/hilbert.hpp"
#include "itof/spinmodel.hpp"
#include "oracles.hpp"

using namespace itof;

namespace {

/// Random channel from the blocks of a random isometry.
Channel random_channel(int n_qubits, int n_kraus, std::mt19937_64& rng) {
  const Index d = Index{1} << n_qubits;
  const CMatrix v = oracle::random_unitary(d * n_kraus, rng).leftCols(d);
  Channel ch;
  ch.n_qubits = n_qubits;
  for (int k = 0; k < n_kraus; ++k) ch.kraus.push_back(v.middleRows(k * d, d));
  return ch;
}

GateSpec dip_spec(double j_khz) {
  GateSpec s;
  s.n_ions = 3;
  s.omega_cm = khz(1000);
  s.delta_cm = khz(50);
  s.ising_j = khz(j_khz);
  s.ratio_j_over_g = 2.0;
  return s;
}

}  // namespace

TEST_CASE("identity against the three-qubit i-Toffoli") {
  Channel id;
  id.n_qubits = 3;
  id.kraus = {CMatrix::Identity(8, 8)};
  const CMatrix ideal = ideal_itoffoli(3, 0);
  CHECK(average_fidelity_pauli(id, ideal) == doctest::Approx(44.0 / 72.0).epsilon(1e-12));
  CHECK(average_fidelity_kraus(id, ideal) == doctest::Approx(0.611111).epsilon(1e-6));
}

TEST_CASE("Pauli error channels: F = 1 - 2p/3") {
  for (double p : {0.0, 0.3, 0.75, 1.0}) {
    Channel ch;
    ch.n_qubits = 1;
    ch.kraus.push_back(std::sqrt(1.0 - p) * CMatrix::Identity(2, 2));
    for (char axis : {'x', 'y', 'z'}) ch.kraus.push_back(std::sqrt(p / 3.0) * oracle::pauli(axis));
    CHECK(average_fidelity_pauli(ch, CMatrix::Identity(2, 2)) == doctest::Approx(1.0 - 2.0 * p / 3.0).epsilon(1e-12));
    CHECK(average_fidelity_kraus(ch, CMatrix::Identity(2, 2)) == doctest::Approx(1.0 - 2.0 * p / 3.0).epsilon(1e-12));
  }
}

TEST_CASE("Pauli and Kraus forms agree on random channels") {
  std::mt19937_64 rng(21);
  for (int trial = 0; trial < 30; ++trial) {
    const int n = 1 + trial % 3;
    const Channel ch = random_channel(n, 1 + trial % 4, rng);
    const CMatrix u = oracle::random_unitary(Index{1} << n, rng);
    CHECK(average_fidelity_pauli(ch, u) == doctest::Approx(average_fidelity_kraus(ch, u)).epsilon(1e-10));
  }
}

TEST_CASE("unitary channels against the closed form") {
  std::mt19937_64 rng(22);
  for (int trial = 0; trial < 50; ++trial) {
    const Index d = Index{1} << (1 + trial % 3);
    const CMatrix u = oracle::random_unitary(d, rng);
    const CMatrix v = oracle::random_unitary(d, rng);
    CHECK(unitary_fidelity(u, v) == doctest::Approx(oracle::unitary_fidelity(u, v)).epsilon(1e-10));
  }
}

TEST_CASE("channels are linear and trace preserving") {
  std::mt19937_64 rng(23);
  const Channel ch = random_channel(2, 3, rng);
  const CMatrix a = oracle::random_unitary(4, rng);
  const CMatrix rho1 = a.col(0) * a.col(0).adjoint();
  const CMatrix rho2 = a.col(1) * a.col(1).adjoint();
  CHECK((ch.apply(0.3 * rho1 + 0.7 * rho2) - 0.3 * ch.apply(rho1) - 0.7 * ch.apply(rho2)).norm() < 1e-12);
  CHECK(ch.apply(rho1).trace().real() == doctest::Approx(1.0));
}

TEST_CASE("channel from evolved columns traces out the phonons") {
  std::mt19937_64 rng(24);
  const CompositeSpace space(2, {3});
  const CMatrix u = oracle::random_unitary(4, rng);
  const CMatrix w = oracle::random_unitary(4, rng);
  // U (x) W acting on |x>|0>: the phonon part is a pure state, so the channel is unitary.
  const CMatrix full = oracle::kron(u, w);
  CMatrix evolved(space.dim(), 4);
  for (Index x = 0; x < 4; ++x) evolved.col(x) = full.col(x * 4);
  const Channel ch = channel_from_columns(space, evolved);
  const CMatrix ideal = oracle::random_unitary(4, rng);
  CHECK(average_fidelity(ch, ideal) == doctest::Approx(oracle::unitary_fidelity(ideal, u)).epsilon(1e-10));
  CHECK(vacuum_block(space, evolved).isApprox(u * w(0, 0), 1e-12));
}

TEST_CASE("phase alignment removes a global phase") {
  const CMatrix ideal = ideal_itoffoli(3, 1);
  const CMatrix rotated = ideal * std::polar(1.0, 0.7);
  CHECK((phase_aligned(rotated, ideal) - ideal).norm() < 1e-12);
}

TEST_CASE("thermal weights are geometric with mean nbar") {
  for (double nbar : {0.1, 0.5, 1.0}) {
    const int n_max = thermal_cutoff(nbar, 1e-10);
    const std::vector<double> w = thermal_weights(nbar, n_max);
    const double total = std::accumulate(w.begin(), w.end(), 0.0);
    double mean = 0.0;
    for (std::size_t n = 0; n < w.size(); ++n) mean += static_cast<double>(n) * w[n];
    CHECK(total == doctest::Approx(1.0).epsilon(1e-9));
    CHECK(mean == doctest::Approx(nbar).epsilon(1e-6));
    for (std::size_t n = 1; n < w.size(); ++n) CHECK(w[n] / w[n - 1] == doctest::Approx(nbar / (1.0 + nbar)));
  }
  const std::vector<double> cold = thermal_weights(0.0, 5);
  CHECK(cold[0] == 1.0);
}

TEST_CASE("degeneracy flags appear where 8J meets the detuning") {
  const GateConfig at_dip = resolve(dip_spec(6.25));
  CHECK_FALSE(degeneracy_flags(at_dip, 4).empty());
  const GateConfig away = resolve(dip_spec(4.0));
  CHECK(degeneracy_flags(away, 4).empty());
}

TEST_CASE("fig2 report") {
  GateSpec s;
  s.n_ions = 3;
  s.omega_cm = khz(1000);
  s.delta_cm = khz(20);
  s.ising_j = khz(2);
  s.g = khz(1);
  const GateConfig c = resolve(s);
  GateRunOptions opts;
  opts.convergence_check = true;
  const GateRun run = simulate_gate(c, opts);
  const FidelityReport& r = run.report;
  CHECK(r.average_fidelity > 0.98);
  CHECK(r.target_population > 0.99);
  CHECK(r.leakage < 1e-3);
  CHECK(run.convergence_delta < 1e-6);
  CHECK(r.process.rows() == 8);
  CHECK(r.flags.empty());
}
