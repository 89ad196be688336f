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

#include "itof/propagate.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace itof {

CVector trotter_step(const CMatrix& h_a, const CMatrix& h_b, double dt, const CVector& state,
                     SplitOrder order) {
  if (!(dt > 0.0) || !std::isfinite(dt)) throw ConfigError("Trotter step must be positive", "dt_scale");
  if (h_a.rows() != state.size() || h_b.rows() != state.size()) {
    throw std::invalid_argument("trotter_step: dimension mismatch");
  }
  if (order == SplitOrder::FirstOrder) {
    return expm_hermitian(h_a, dt) * (expm_hermitian(h_b, dt) * state);
  }
  const CMatrix half_b = expm_hermitian(h_b, 0.5 * dt);
  return half_b * (expm_hermitian(h_a, dt) * (half_b * state));
}

ChebyshevStats chebyshev_propagate(const SparseOp& h, double t, CMatrix& states, double tol) {
  ChebyshevStats stats;
  if (t == 0.0 || states.cols() == 0) return stats;
  double lo = std::numeric_limits<double>::infinity();
  double hi = -lo;
  for (Index r = 0; r < h.outerSize(); ++r) {
    double center = 0.0;
    double radius = 0.0;
    for (SparseOp::InnerIterator it(h, r); it; ++it) {
      if (it.col() == r) {
        center = it.value().real();
      } else {
        radius += std::abs(it.value());
      }
    }
    lo = std::min(lo, center - radius);
    hi = std::max(hi, center + radius);
  }
  const double shift = 0.5 * (hi + lo);
  const double half_width = std::max(0.5 * (hi - lo), 1e-12) * 1.01;
  stats.segments = std::max(1, static_cast<int>(std::ceil(half_width * std::abs(t) / 400.0)));
  const double dt = t / stats.segments;
  const double x = half_width * dt;

  std::vector<Complex> coeffs;
  for (int k = 0;; ++k) {
    const double jk = std::cyl_bessel_j(static_cast<double>(k), std::abs(x));
    // J_k(-x) = (-1)^k J_k(x); (-i)^k folds the sign of x into the phase.
    Complex ck = std::pow(Complex{0.0, x >= 0.0 ? -1.0 : 1.0}, k) * jk;
    if (k > 0) ck *= 2.0;
    coeffs.push_back(ck);
    if (k > std::abs(x) && std::abs(jk) < tol) break;
  }
  stats.terms = static_cast<int>(coeffs.size()) * stats.segments;

  SparseOp identity(h.rows(), h.cols());
  identity.setIdentity();
  const SparseOp scaled = (h - shift * identity) / Complex{half_width};
  const Complex global = std::exp(Complex{0.0, -shift * dt});
  CMatrix prev(states.rows(), states.cols());
  CMatrix cur(states.rows(), states.cols());
  CMatrix next(states.rows(), states.cols());
  for (int s = 0; s < stats.segments; ++s) {
    prev = states;
    cur.noalias() = scaled * prev;
    CMatrix acc = coeffs[0] * prev + coeffs[1] * cur;
    for (std::size_t k = 2; k < coeffs.size(); ++k) {
      next.noalias() = scaled * cur;
      next = 2.0 * next - prev;
      acc += coeffs[k] * next;
      std::swap(prev, cur);
      std::swap(cur, next);
    }
    states = global * acc;
  }
  return stats;
}

CMatrix forced_oscillator_propagator(int levels, double delta, double dt, std::span<const double> forces,
                                     SplitOrder order) {
  const CMatrix a = annihilation_matrix(levels);
  const CMatrix p = kI * (a.adjoint() - a);
  Eigen::SelfAdjointEigenSolver<CMatrix> eig(p);
  const CMatrix& v = eig.eigenvectors();
  const RVector& pk = eig.eigenvalues();
  CVector full(levels);
  CVector half(levels);
  for (int n = 0; n < levels; ++n) {
    full(n) = std::exp(Complex{0.0, delta * n * dt});
    half(n) = std::exp(Complex{0.0, 0.5 * delta * n * dt});
  }
  // Work in the eigenbasis of P: consecutive free steps collapse to Q = V^dag E V.
  const CMatrix q = v.adjoint() * full.asDiagonal() * v;
  CMatrix w = v.adjoint() * (order == SplitOrder::Strang ? half : full).asDiagonal();
  CMatrix tmp(levels, levels);
  for (std::size_t k = 0; k < forces.size(); ++k) {
    if (k > 0) {
      tmp.noalias() = q * w;
      w.swap(tmp);
    }
    for (int r = 0; r < levels; ++r) w.row(r) *= std::exp(Complex{0.0, -dt * forces[k] * pk(r)});
  }
  CMatrix u = v * w;
  if (order == SplitOrder::Strang) u = half.asDiagonal() * u;
  if (forces.empty()) u = CMatrix(full.asDiagonal());
  return u;
}

void apply_mode_matrix(const CompositeSpace& space, int mode, const CMatrix& u, Complex* phonons) {
  using RowMat = Eigen::Matrix<Complex, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
  const Index levels = space.levels(mode);
  const Index stride = space.mode_stride(mode);
  const Index outer = space.phonon_dim() / (levels * stride);
  RowMat tmp(levels, stride);
  for (Index o = 0; o < outer; ++o) {
    Eigen::Map<RowMat> block(phonons + o * levels * stride, levels, stride);
    tmp.noalias() = u * block;
    block = tmp;
  }
}

FactorizedPropagator::FactorizedPropagator(const CompositeSpace& space)
    : space_(space), phases_(static_cast<std::size_t>(space.qubit_dim()), 0.0) {
  blocks_.reserve(static_cast<std::size_t>(space.n_modes() * space.qubit_dim()));
  for (int m = 0; m < space.n_modes(); ++m) {
    for (Index b = 0; b < space.qubit_dim(); ++b) blocks_.push_back(CMatrix::Identity(space.levels(m), space.levels(m)));
  }
}

const CMatrix& FactorizedPropagator::block(int mode, std::uint64_t bits) const {
  return blocks_.at(static_cast<std::size_t>(mode * space_.qubit_dim() + static_cast<Index>(bits)));
}

void FactorizedPropagator::set_block(int mode, std::uint64_t bits, CMatrix u) {
  if (u.rows() != space_.levels(mode) || u.cols() != space_.levels(mode)) {
    throw std::invalid_argument("mode block does not match the Fock cutoff");
  }
  blocks_.at(static_cast<std::size_t>(mode * space_.qubit_dim() + static_cast<Index>(bits))) = std::move(u);
}

void FactorizedPropagator::apply(CMatrix& states) const {
  if (states.rows() != space_.dim()) throw std::invalid_argument("state dimension mismatch");
  const Index pd = space_.phonon_dim();
  for (Index j = 0; j < states.cols(); ++j) {
    for (Index b = 0; b < space_.qubit_dim(); ++b) {
      Complex* seg = states.col(j).data() + b * pd;
      bool empty = true;
      for (Index p = 0; p < pd && empty; ++p) empty = seg[p] == Complex{0.0};
      if (empty) continue;
      for (int m = 0; m < space_.n_modes(); ++m) {
        apply_mode_matrix(space_, m, block(m, static_cast<std::uint64_t>(b)), seg);
      }
      const Complex ph = std::exp(Complex{0.0, phases_[static_cast<std::size_t>(b)]});
      for (Index p = 0; p < pd; ++p) seg[p] *= ph;
    }
  }
}

FactorizedPropagator FactorizedPropagator::then(const FactorizedPropagator& next) const {
  if (next.space_.cutoffs() != space_.cutoffs() || next.space_.n_qubits() != space_.n_qubits()) {
    throw std::invalid_argument("propagators live on different spaces");
  }
  FactorizedPropagator out(space_);
  for (std::size_t k = 0; k < blocks_.size(); ++k) out.blocks_[k] = next.blocks_[k] * blocks_[k];
  for (std::size_t b = 0; b < phases_.size(); ++b) out.phases_[b] = phases_[b] + next.phases_[b];
  return out;
}

}  // namespace itof
