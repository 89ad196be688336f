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
#include <vector>

#include <doctest.h>

#include "itof/evolution.hpp"
#include "itof/hamiltonians.hpp"
#include "itof/multibeat.hpp"

using namespace itof;

namespace {

GateConfig fig4_config() {
  GateSpec s;
  s.n_ions = 3;
  s.omega_cm = khz(1000);
  s.delta_cm = khz(-200);
  s.ising_j = khz(2);
  s.g = khz(1);
  s.mode_set = ModeSet::AllAxial;
  s.echo = EchoKind::Multibeat;
  return resolve(s);
}

}  // namespace

TEST_CASE("target phases of a mode-diagonal coupling are exact") {
  const GateConfig c = fig4_config();
  RMatrix directions(3, c.n_modes());
  for (int m = 0; m < c.n_modes(); ++m) directions.col(m) = c.couplings.row(m).transpose().normalized();
  const double duration = 1e-3;
  const PhaseTargets t = target_phases(c.ising, directions, duration);
  for (int m = 0; m < c.n_modes(); ++m) {
    const double expected = duration * c.omega_rabi * c.omega_rabi * c.couplings.row(m).squaredNorm() / (4.0 * c.detunings[m]);
    CHECK(t.phases(m) == doctest::Approx(expected).epsilon(1e-10));
  }
  CHECK(t.residual < 1e-10);
  CHECK(t.offdiag_residual < 1e-10);
}

TEST_CASE("single tone: closed-loop phase (l Omega / 2)^2 T / delta") {
  const double t_mb = 5e-6;
  MultibeatSolution s;
  s.t_mb = t_mb;
  s.harmonics = {197};
  s.amplitudes = RVector::Constant(1, 1.5e6);
  MultibeatMode mode{kTwoPi * 200 / t_mb, 0.02};
  s.modes = {mode};
  const double delta = s.tone_freq(0) - mode.omega;
  const MagnusTerms terms = magnus_terms(s, mode.omega);
  CHECK(std::abs(terms.displacement) < 1e-9 * 1.5e6 * t_mb);
  const double closed = mode.norm2 * std::pow(0.5 * 1.5e6, 2) * t_mb / delta;
  CHECK(std::abs(achieved_phases(s)(0)) == doctest::Approx(std::abs(closed)).epsilon(1e-10));

  // Mirroring the tone to the other side of the mode flips the phase.
  s.harmonics = {203};
  const double mirrored = achieved_phases(s)(0);
  s.harmonics = {197};
  CHECK(mirrored == doctest::Approx(-achieved_phases(s)(0)).epsilon(1e-10));
}

TEST_CASE("solver recovers a single-tone amplitude") {
  const double t_mb = 5e-6;
  const MultibeatMode mode{kTwoPi * 200 / t_mb, 0.02};
  MultibeatSolution probe;
  probe.t_mb = t_mb;
  probe.harmonics = {205};
  probe.amplitudes = RVector::Constant(1, 3.0e6);
  probe.modes = {mode};
  const RVector target = achieved_phases(probe);
  SolverOptions opts;
  opts.tolerance = 1e-12;
  const MultibeatSolution s = solve_amplitudes(target, t_mb, {mode}, {205}, opts);
  CHECK(std::abs(s.amplitudes(0)) == doctest::Approx(3.0e6).epsilon(1e-8));
}

TEST_CASE("harmonic set avoids exact resonances") {
  const double t_mb = 5e-6;
  const std::vector<MultibeatMode> modes{{kTwoPi * 5 / t_mb, 0.03}, {kTwoPi * 8.66 / t_mb, 0.02}};
  const std::vector<int> ks = default_harmonics(modes, t_mb);
  CHECK(std::find(ks.begin(), ks.end(), 5) == ks.end());
  CHECK(std::find(ks.begin(), ks.end(), 4) != ks.end());
  CHECK(std::find(ks.begin(), ks.end(), 9) != ks.end());
  CHECK(std::is_sorted(ks.begin(), ks.end()));
}

TEST_CASE("three-ion echo tones close every loop and hit the phases") {
  const GateConfig c = fig4_config();
  const EchoPlan plan = plan_multibeat_echo(c);
  const MultibeatSolution& s = plan.solution;
  CHECK(s.max_phase_error < 1e-3);
  for (const auto& mode : s.modes) {
    CHECK(std::abs(magnus_terms(s, mode.omega).displacement) * std::sqrt(mode.norm2) < 1e-9);
  }
  CHECK((achieved_phases(s) - plan.targets.phases).cwiseAbs().maxCoeff() < 1e-3);
  // The echo reverses the couplings.
  for (int m = 0; m < c.n_modes(); ++m) CHECK(plan.targets.phases(m) * c.detunings[m] < 0.0);
  CHECK(static_cast<int>(plan.envelope.size()) == static_cast<int>(std::lround(c.total_time() / c.t_mb)));
}

TEST_CASE("verification rejects a perturbed solution") {
  const GateConfig c = fig4_config();
  const EchoPlan plan = plan_multibeat_echo(c);
  const std::vector<int> cutoffs{4, 3, 3};
  CHECK(verify_solution(plan.solution, c.couplings, cutoffs).passed);
  MultibeatSolution bad = plan.solution;
  Index loudest = 0;
  bad.amplitudes.cwiseAbs().maxCoeff(&loudest);
  bad.amplitudes(loudest) *= 1.3;
  CHECK_FALSE(verify_solution(bad, c.couplings, cutoffs).passed);
}

TEST_CASE("too few tones for three modes raises a solver error") {
  const GateConfig c = fig4_config();
  const auto modes = multibeat_modes(c.crystal, c.modes, c.couplings);
  RVector target(3);
  target << 0.2, 0.1, 0.05;
  CHECK_THROWS_AS(solve_amplitudes(target, 5e-6, modes, {3}), SolverError);
}
