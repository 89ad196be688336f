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

#include "itof/multibeat.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <set>
#include <sstream>

#include "itof/hilbert.hpp"
#include "itof/spinmodel.hpp"

namespace itof {

namespace {

struct GaussRule {
  RVector nodes;    // on [-1, 1]
  RVector weights;
};

// Golub-Welsch for Gauss-Legendre.
const GaussRule& gauss16() {
  static const GaussRule rule = [] {
    constexpr int n = 16;
    RMatrix t = RMatrix::Zero(n, n);
    for (int k = 1; k < n; ++k) {
      const double b = k / std::sqrt(4.0 * k * k - 1.0);
      t(k, k - 1) = b;
      t(k - 1, k) = b;
    }
    Eigen::SelfAdjointEigenSolver<RMatrix> eig(t);
    GaussRule r;
    r.nodes = eig.eigenvalues();
    r.weights = 2.0 * eig.eigenvectors().row(0).transpose().array().square();
    return r;
  }();
  return rule;
}

// (1/2) int_0^T exp(-i d t) dt times i, i.e. the displacement per unit Omega.
Complex closure_coefficient(double d, double t_mb) {
  if (d == 0.0) return Complex{0.0, 0.5 * t_mb};
  return (1.0 - std::exp(Complex{0.0, -d * t_mb})) / (2.0 * d);
}

// int_0^t exp(-i d s) ds
Complex running_integral(double d, double t) {
  if (d == 0.0) return Complex{t, 0.0};
  return (1.0 - std::exp(Complex{0.0, -d * t})) / Complex{0.0, d};
}

// Quadratic form of the geometric phase: theta = Omega^T M Omega.
RMatrix phase_matrix(const std::vector<double>& detunings, double t_mb) {
  const Index k = static_cast<Index>(detunings.size());
  double fastest = 0.0;
  for (double d : detunings) fastest = std::max(fastest, std::abs(d));
  const int panels = std::max(1, static_cast<int>(std::ceil(fastest * t_mb)));
  const GaussRule& gl = gauss16();
  const double h = t_mb / panels;
  RMatrix m = RMatrix::Zero(k, k);
  CVector u(k);
  CVector big_u(k);
  for (int p = 0; p < panels; ++p) {
    for (Index q = 0; q < gl.nodes.size(); ++q) {
      const double t = h * (p + 0.5 * (gl.nodes(q) + 1.0));
      const double w = 0.5 * h * gl.weights(q);
      for (Index a = 0; a < k; ++a) {
        u(a) = std::exp(Complex{0.0, -detunings[a] * t});
        big_u(a) = running_integral(detunings[a], t);
      }
      for (Index a = 0; a < k; ++a) {
        for (Index b = 0; b < k; ++b) m(a, b) += 0.25 * w * std::imag(u(a) * std::conj(big_u(b)));
      }
    }
  }
  return 0.5 * (m + m.transpose());
}

std::vector<double> mode_detunings(const MultibeatSolution& s, double omega) {
  std::vector<double> d;
  for (std::size_t k = 0; k < s.harmonics.size(); ++k) d.push_back(s.tone_freq(k) - omega);
  return d;
}

}  // namespace

PhaseTargets target_phases(const IsingMatrix& j_target, const RMatrix& mode_vectors, double duration) {
  const Index n = j_target.J.rows();
  const Index nm = mode_vectors.cols();
  if (mode_vectors.rows() != n) throw std::invalid_argument("mode vectors do not match the coupling matrix");
  const RMatrix full = j_target.full();
  RVector anchor(nm);
  for (Index m = 0; m < nm; ++m) anchor(m) = mode_vectors.col(m).dot(full * mode_vectors.col(m));

  const Index pairs = n * (n - 1) / 2;
  RMatrix a(pairs, nm);
  RVector y(pairs);
  Index r = 0;
  for (Index i = 0; i < n; ++i) {
    for (Index j = i + 1; j < n; ++j, ++r) {
      for (Index m = 0; m < nm; ++m) a(r, m) = mode_vectors(i, m) * mode_vectors(j, m);
      y(r) = j_target.J(i, j);
    }
  }
  // Minimal change from the anchor that fits the off-diagonal entries.
  RVector phi = anchor;
  if (pairs > 0) {
    Eigen::CompleteOrthogonalDecomposition<RMatrix> cod(a);
    phi += cod.solve(y - a * anchor);
  }

  RMatrix recon = RMatrix::Zero(n, n);
  for (Index m = 0; m < nm; ++m) recon += phi(m) * mode_vectors.col(m) * mode_vectors.col(m).transpose();
  PhaseTargets out;
  out.phases = duration * phi;
  const RMatrix diff = recon - full;
  out.residual = duration * diff.norm();
  RMatrix off = recon - j_target.J;
  off.diagonal().setZero();
  out.offdiag_residual = duration * off.norm();
  return out;
}

MagnusTerms magnus_terms(const MultibeatSolution& solution, double omega) {
  const std::vector<double> d = mode_detunings(solution, omega);
  MagnusTerms out;
  for (std::size_t k = 0; k < d.size(); ++k) {
    out.displacement += solution.amplitudes(static_cast<Index>(k)) * closure_coefficient(d[k], solution.t_mb);
  }
  if (!d.empty()) {
    out.phase = solution.amplitudes.dot(phase_matrix(d, solution.t_mb) * solution.amplitudes);
  }
  return out;
}

RVector achieved_phases(const MultibeatSolution& solution) {
  RVector phi(static_cast<Index>(solution.modes.size()));
  for (std::size_t m = 0; m < solution.modes.size(); ++m) {
    phi(static_cast<Index>(m)) = -solution.modes[m].norm2 * magnus_terms(solution, solution.modes[m].omega).phase;
  }
  return phi;
}

std::vector<int> default_harmonics(const std::vector<MultibeatMode>& modes, double t_mb) {
  std::set<int> ks;
  for (const auto& mode : modes) {
    const double x = mode.omega * t_mb / kTwoPi;
    for (int k = static_cast<int>(std::floor(x)) - 2; k <= static_cast<int>(std::ceil(x)) + 2; ++k) {
      if (k >= 1) ks.insert(k);
    }
  }
  auto distance = [&](int k) {
    double best = std::numeric_limits<double>::infinity();
    for (const auto& mode : modes) best = std::min(best, std::abs(kTwoPi * k / t_mb - mode.omega));
    return best;
  };
  std::vector<int> out;
  for (int k : ks) {
    const double d = distance(k);
    bool resonant = false;
    for (const auto& mode : modes) resonant = resonant || d <= 1e-9 * mode.omega;
    if (!resonant) out.push_back(k);
  }
  if (out.size() > 24) {
    std::stable_sort(out.begin(), out.end(), [&](int a, int b) { return distance(a) < distance(b); });
    out.resize(24);
    std::sort(out.begin(), out.end());
  }
  return out;
}

std::vector<MultibeatMode> multibeat_modes(const CrystalModel& crystal, const std::vector<int>& modes,
                                           const RMatrix& couplings) {
  std::vector<MultibeatMode> out;
  for (std::size_t k = 0; k < modes.size(); ++k) {
    out.push_back({crystal.mode_freqs(modes[k]), couplings.row(static_cast<Index>(k)).squaredNorm()});
  }
  return out;
}

MultibeatSolution solve_amplitudes(const RVector& phases, double t_mb, const std::vector<MultibeatMode>& modes,
                                   std::vector<int> harmonics, const SolverOptions& options) {
  if (t_mb <= 0.0) throw ConfigError("t_mb must be positive", "t_mb_us");
  if (phases.size() != static_cast<Index>(modes.size())) {
    throw std::invalid_argument("one target phase per mode is required");
  }
  MultibeatSolution sol;
  sol.t_mb = t_mb;
  sol.modes = modes;
  sol.harmonics = harmonics.empty() ? default_harmonics(modes, t_mb) : std::move(harmonics);
  sol.target_phases = phases;
  const Index nk = static_cast<Index>(sol.harmonics.size());
  const Index nm = static_cast<Index>(modes.size());
  sol.amplitudes = RVector::Zero(nk);
  if (phases.cwiseAbs().maxCoeff() == 0.0 || nk == 0) {
    sol.achieved_phases = RVector::Zero(nm);
    sol.max_phase_error = phases.cwiseAbs().maxCoeff();
    return sol;
  }

  std::vector<RMatrix> quad;
  RMatrix closure(2 * nm, nk);
  for (Index m = 0; m < nm; ++m) {
    const std::vector<double> d = mode_detunings(sol, modes[m].omega);
    quad.push_back(-modes[m].norm2 * phase_matrix(d, t_mb));
    for (Index k = 0; k < nk; ++k) {
      const Complex c = closure_coefficient(d[k], t_mb);
      closure(2 * m, k) = c.real();
      closure(2 * m + 1, k) = c.imag();
    }
  }

  // Amplitudes live in the null space of the closure conditions.
  Eigen::JacobiSVD<RMatrix> svd(closure, Eigen::ComputeFullV);
  const double threshold = 1e-9 * t_mb;
  Index rank = 0;
  for (Index i = 0; i < svd.singularValues().size(); ++i) rank += svd.singularValues()(i) > threshold ? 1 : 0;
  const RMatrix z = svd.matrixV().rightCols(nk - rank);
  if (z.cols() == 0) throw SolverError("no tone combination closes every phase-space loop", phases.norm());

  std::vector<RMatrix> qz;
  for (const auto& q : quad) qz.push_back(z.transpose() * q * z);

  // Initial guess: diagonal (cross-term free) model in Omega_k^2.
  RMatrix diag(nm, nk);
  for (Index m = 0; m < nm; ++m) diag.row(m) = quad[m].diagonal().transpose();
  const RMatrix gram = diag.transpose() * diag;
  const double ridge = 1e-6 * gram.trace() / static_cast<double>(nk) + 1e-300;
  RVector w = (gram + ridge * RMatrix::Identity(nk, nk)).ldlt().solve(diag.transpose() * phases);
  RVector omega0 = w.cwiseMax(0.0).cwiseSqrt();
  if (omega0.norm() == 0.0) {
    const double scale = std::sqrt(phases.cwiseAbs().maxCoeff() / diag.cwiseAbs().maxCoeff());
    omega0 = RVector::Constant(nk, scale / std::sqrt(static_cast<double>(nk)));
  }
  RVector x = z.transpose() * omega0;

  auto residual = [&](const RVector& v) {
    RVector r(nm);
    for (Index m = 0; m < nm; ++m) r(m) = v.dot(qz[m] * v) - phases(m);
    return r;
  };
  RVector r = residual(x);
  double cost = r.squaredNorm();
  double lambda = 1e-3;
  const double goal = 1e-12 * (1.0 + phases.cwiseAbs().maxCoeff());
  int it = 0;
  for (; it < options.max_iterations && r.cwiseAbs().maxCoeff() > goal; ++it) {
    RMatrix jac(nm, x.size());
    for (Index m = 0; m < nm; ++m) jac.row(m) = 2.0 * (qz[m] * x).transpose();
    const RMatrix jtj = jac.transpose() * jac;
    const RVector grad = jac.transpose() * r;
    const double scale = std::max(jtj.diagonal().maxCoeff(), 1e-300);
    bool improved = false;
    for (int tries = 0; tries < 30; ++tries) {
      const RMatrix lhs = jtj + lambda * scale * RMatrix::Identity(x.size(), x.size());
      const RVector step = -lhs.ldlt().solve(grad);
      const RVector trial = x + step;
      const RVector rt = residual(trial);
      if (rt.squaredNorm() < cost) {
        x = trial;
        r = rt;
        cost = rt.squaredNorm();
        lambda = std::max(lambda / 3.0, 1e-15);
        improved = true;
        break;
      }
      lambda *= 4.0;
    }
    if (!improved) break;
  }
  sol.iterations = it;
  sol.amplitudes = z * x;
  sol.achieved_phases = achieved_phases(sol);
  sol.max_phase_error = (sol.achieved_phases - phases).cwiseAbs().maxCoeff();
  for (const auto& mode : modes) {
    sol.max_displacement = std::max(sol.max_displacement, std::abs(magnus_terms(sol, mode.omega).displacement));
  }
  if (sol.max_phase_error > options.tolerance) {
    std::ostringstream msg;
    msg << "multibeat solver did not reach the target phases (max error " << sol.max_phase_error
        << " rad); enlarge the tone set";
    throw SolverError(msg.str(), sol.max_phase_error);
  }
  return sol;
}

namespace {

// exp(-i dt H) v by a Taylor series run to machine precision.
void taylor_step(const SparseOp& h, double dt, CVector& v) {
  CVector term = v;
  CVector sum = v;
  for (int k = 1; k < 40; ++k) {
    term = (Complex{0.0, -dt} / static_cast<double>(k)) * (h * term);
    sum += term;
    if (term.norm() < 1e-16 * sum.norm()) break;
  }
  v = sum;
}

}  // namespace

VerificationReport verify_solution(const MultibeatSolution& solution, const RMatrix& couplings,
                                   const std::vector<int>& fock_cutoffs, std::vector<double> envelope) {
  const Index nm = static_cast<Index>(solution.modes.size());
  if (couplings.rows() != nm || static_cast<Index>(fock_cutoffs.size()) != nm) {
    throw std::invalid_argument("verify_solution: coupling rows and cutoffs must match the modes");
  }
  if (envelope.empty()) envelope.push_back(1.0);
  const int n = static_cast<int>(couplings.cols());
  const CompositeSpace space(n, fock_cutoffs);
  const CompositeSpace phonons(1, fock_cutoffs);
  std::vector<SparseOp> create;
  std::vector<SparseOp> number;
  for (Index m = 0; m < nm; ++m) {
    // Phonon-only operators: take the |0> qubit block of the one-qubit space.
    const SparseOp ad = ladder_embed(phonons, static_cast<int>(m), LadderKind::Create);
    const SparseOp nn = ladder_embed(phonons, static_cast<int>(m), LadderKind::Number);
    create.push_back(ad.topLeftCorner(phonons.phonon_dim(), phonons.phonon_dim()));
    number.push_back(nn.topLeftCorner(phonons.phonon_dim(), phonons.phonon_dim()));
  }

  double fastest = 0.0;
  for (const auto& mode : solution.modes) {
    for (std::size_t k = 0; k < solution.harmonics.size(); ++k) {
      fastest = std::max(fastest, std::abs(solution.tone_freq(k) - mode.omega));
    }
  }
  const int steps = std::max(200, static_cast<int>(std::ceil(fastest * solution.t_mb / 0.01)));
  const double dt = solution.t_mb / steps;

  double env2 = 0.0;
  for (double e : envelope) env2 += e * e;
  RVector ell(nm);
  for (Index m = 0; m < nm; ++m) ell(m) = std::sqrt(solution.modes[m].norm2);

  VerificationReport report;
  report.mode_residuals.assign(static_cast<std::size_t>(nm), 0.0);
  std::vector<double> phase_sim;
  std::vector<double> phase_target;
  const Index pd = space.phonon_dim();
  for (Index b = 0; b < space.qubit_dim(); ++b) {
    const auto bits = static_cast<std::uint64_t>(b);
    RVector c(nm);
    for (Index m = 0; m < nm; ++m) {
      c(m) = 0.0;
      for (int i = 0; i < n; ++i) c(m) += couplings(m, i) * spin_of(bits, i, n);
    }
    CVector v = CVector::Zero(pd);
    v(0) = 1.0;
    for (std::size_t p = 0; p < envelope.size(); ++p) {
      const double t0 = static_cast<double>(p) * solution.t_mb;
      for (int s = 0; s < steps; ++s) {
        const double t = t0 + (s + 0.5) * dt;
        SparseOp h(pd, pd);
        for (Index m = 0; m < nm; ++m) {
          Complex f = 0.0;
          for (std::size_t k = 0; k < solution.harmonics.size(); ++k) {
            const double d = solution.tone_freq(k) - solution.modes[m].omega;
            f += Complex{0.0, 0.5 * solution.amplitudes(static_cast<Index>(k))} * std::exp(Complex{0.0, -d * t});
          }
          const Complex z = envelope[p] * c(m) * f;
          h += SparseOp(z * create[m]) + SparseOp(std::conj(z) * SparseOp(create[m].adjoint()));
        }
        taylor_step(h, dt, v);
      }
    }
    report.max_residual_population = std::max(report.max_residual_population, 1.0 - std::norm(v(0)));
    for (Index m = 0; m < nm; ++m) {
      const double occ = std::real(v.dot(number[m] * v));
      report.mode_residuals[m] = std::max(report.mode_residuals[m], occ);
    }
    phase_sim.push_back(std::arg(v(0)));
    double target = 0.0;
    for (Index m = 0; m < nm; ++m) {
      const double proj = c(m) / ell(m);
      target -= env2 * solution.target_phases(m) * proj * proj;
    }
    phase_target.push_back(target);
  }
  for (std::size_t b = 0; b < phase_sim.size(); ++b) {
    const double err = wrap_phase((phase_sim[b] - phase_sim[0]) - (phase_target[b] - phase_target[0]));
    report.max_phase_error = std::max(report.max_phase_error, std::abs(err));
  }
  report.passed = report.max_residual_population < 1e-4 && report.max_phase_error < 1e-2;
  std::ostringstream msg;
  msg << "residual population " << report.max_residual_population << ", phase error "
      << report.max_phase_error << " rad";
  for (Index m = 0; m < nm; ++m) msg << ", mode " << m << " <n> " << report.mode_residuals[m];
  report.details = msg.str();
  return report;
}

}  // namespace itof
