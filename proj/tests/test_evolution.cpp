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
#include <random>
#include <vector>

#include <doctest.h>

#include "itof/analysis.hpp"
#include "itof/evolution.hpp"
#include "itof/hilbert.hpp"
#include "itof/propagate.hpp"
#include "oracles.hpp"

using namespace itof;

namespace {

CMatrix random_hermitian(Index d, std::mt19937_64& rng) {
  std::normal_distribution<double> n;
  CMatrix h(d, d);
  for (Index i = 0; i < d; ++i) {
    for (Index j = 0; j < d; ++j) h(i, j) = Complex(n(rng), n(rng));
  }
  return 0.5 * (h + h.adjoint());
}

GateSpec fig2_spec() {
  GateSpec s;
  s.n_ions = 3;
  s.omega_cm = khz(1000);
  s.delta_cm = khz(20);
  s.ising_j = khz(2);
  s.g = khz(1);
  return s;
}

}  // namespace

TEST_CASE("Strang splitting is second order") {
  std::mt19937_64 rng(7);
  const CMatrix a = random_hermitian(6, rng);
  const CMatrix b = random_hermitian(6, rng);
  CVector psi = CVector::Zero(6);
  psi(0) = 1.0;
  auto error = [&](double dt, SplitOrder order) {
    const CVector exact = oracle::expm(Complex(0.0, -dt) * (a + b)) * psi;
    return (trotter_step(a, b, dt, psi, order) - exact).norm();
  };
  const double s1 = error(0.02, SplitOrder::Strang);
  const double s2 = error(0.01, SplitOrder::Strang);
  CHECK(s1 / s2 == doctest::Approx(8.0).epsilon(0.1));
  const double f1 = error(0.02, SplitOrder::FirstOrder);
  const double f2 = error(0.01, SplitOrder::FirstOrder);
  CHECK(f1 / f2 == doctest::Approx(4.0).epsilon(0.1));
}

TEST_CASE("Chebyshev propagation matches the dense exponential") {
  std::mt19937_64 rng(8);
  const CMatrix h = random_hermitian(40, rng) * 1e3;
  SparseOp sparse = h.sparseView();
  CMatrix states = CMatrix::Identity(40, 3);
  const ChebyshevStats stats = chebyshev_propagate(sparse, 0.05, states);
  const CMatrix exact = oracle::expm(Complex(0.0, -0.05) * h).leftCols(3);
  CHECK((states - exact).cwiseAbs().maxCoeff() < 1e-10);
  CHECK(stats.segments >= 1);
}

TEST_CASE("forced oscillator stepping converges to the exact propagator") {
  const int levels = 20;
  const double delta = 2.0;
  const double force = 0.7;
  const double t = 3.0;
  const CMatrix a = oracle::annihilation(levels);
  CMatrix h = force * Complex(0.0, 1.0) * (a.adjoint() - a);
  for (int n = 0; n < levels; ++n) h(n, n) -= delta * n;
  const CMatrix exact = oracle::expm(Complex(0.0, -t) * h);
  auto error = [&](int steps) {
    const std::vector<double> forces(static_cast<std::size_t>(steps), force);
    const CMatrix u = forced_oscillator_propagator(levels, delta, t / steps, forces);
    return (u - exact).topLeftCorner(6, 6).cwiseAbs().maxCoeff();
  };
  const double e1 = error(400);
  const double e2 = error(800);
  CHECK(e1 < 1e-3);
  CHECK(e1 / e2 == doctest::Approx(4.0).epsilon(0.15));
}

TEST_CASE("factorized propagator composes like dense matrices") {
  const CompositeSpace space(2, {2, 1});
  FactorizedPropagator u(space);
  FactorizedPropagator v(space);
  std::mt19937_64 rng(9);
  for (std::uint64_t b = 0; b < 4; ++b) {
    for (int m = 0; m < 2; ++m) {
      u.set_block(m, b, oracle::random_unitary(space.levels(m), rng));
      v.set_block(m, b, oracle::random_unitary(space.levels(m), rng));
    }
    u.add_phase(b, 0.3 * static_cast<double>(b));
    v.add_phase(b, -0.1);
  }
  CMatrix states = CMatrix::Identity(space.dim(), space.dim());
  CMatrix seq = states;
  u.apply(seq);
  v.apply(seq);
  CMatrix composed = states;
  u.then(v).apply(composed);
  CHECK((seq - composed).norm() < 1e-12);
  CHECK((seq.adjoint() * seq - states).norm() < 1e-12);
}

TEST_CASE("full gate agrees with brute-force time stepping") {
  GateSpec s = fig2_spec();
  s.fock_cutoffs = std::vector<int>{8};
  const GateConfig c = resolve(s);
  const CompositeSpace space = c.space();
  const std::vector<int> vacuum{0};
  const EvolutionResult res = GateSimulator(c, space).run(basis_inputs(space, vacuum));
  const CMatrix reference = oracle::brute_force_gate(c, space.levels(0), 0.25e-6);
  CHECK((res.states - reference).cwiseAbs().maxCoeff() < 2e-3);
  CHECK(res.max_norm_drift < 1e-10);
}

TEST_CASE("ramp-only sequence returns the register to the phonon vacuum") {
  const GateConfig c = resolve(fig2_spec());
  const std::uint64_t bits = 0b111;
  const AdiabaticityReport rep = adiabaticity(c, bits);
  CHECK(rep.residual_population < 1e-3);

  // Longer ramps are more adiabatic.
  double previous = 1.0;
  for (double t_a : {25e-6, 50e-6, 100e-6, 200e-6}) {
    GateSpec s = fig2_spec();
    s.t_a = t_a;
    const double residual = adiabaticity(resolve(s), bits).residual_population;
    CHECK(residual < previous);
    previous = residual;
  }
}

TEST_CASE("commensurate gate time reduces leakage") {
  const GateConfig c = resolve(fig2_spec());
  GateSpec shifted = fig2_spec();
  shifted.t_a = c.ramp.t_a + 0.5 * kPi / std::abs(c.detunings[0]);
  const double on_grid = simulate_gate(c).report.leakage;
  const double off_grid = simulate_gate(resolve(shifted)).report.leakage;
  CHECK(on_grid <= off_grid);
}

TEST_CASE("sign-flip echo removes single-mode dynamical phases") {
  GateSpec s = fig2_spec();
  s.delta_cm = khz(200);
  s.ising_j = khz(2.3);
  s.g.reset();
  s.ratio_j_over_g = 2.0;
  // J/g = 2 with t_a = tau_g keeps the phases commensurate; stretch the ramps.
  s.t_a = 1.3 * kPi / (khz(2.3) / 2.0);
  const double bare = simulate_gate(resolve(s)).report.max_phase_residual;
  s.echo = EchoKind::SignFlip;
  const double echoed = simulate_gate(resolve(s)).report.max_phase_residual;
  CHECK(bare > 0.1);
  CHECK(echoed < 0.1 * bare);
}

TEST_CASE("runs are deterministic") {
  const GateConfig c = resolve(fig2_spec());
  const GateRun a = simulate_gate(c);
  const GateRun b = simulate_gate(c);
  CHECK((a.evolution.states - b.evolution.states).norm() == 0.0);
  CHECK(a.report.average_fidelity == b.report.average_fidelity);
}
