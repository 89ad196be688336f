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

#pragma once

#include <span>
#include <vector>

#include "itof/hilbert.hpp"

namespace itof {

enum class SplitOrder { FirstOrder, Strang };

/// One product-formula step for H = H_A + H_B.
/// FirstOrder: exp(-i dt H_A) exp(-i dt H_B) (H_B acts first).
/// Strang:     exp(-i dt/2 H_B) exp(-i dt H_A) exp(-i dt/2 H_B).
CVector trotter_step(const CMatrix& h_a, const CMatrix& h_b, double dt, const CVector& state,
                     SplitOrder order = SplitOrder::Strang);

struct ChebyshevStats {
  int segments = 0;
  int terms = 0;
};

/// states <- exp(-i t H) states for a time-independent Hermitian H, by a
/// Chebyshev expansion on Gershgorin spectral bounds.
ChebyshevStats chebyshev_propagate(const SparseOp& h, double t, CMatrix& states,
                                   double tol = 1e-14);

/// Product formula for one oscillator with H_k = -delta n + f_k P over
/// equal steps dt, where P = i (a^dag - a) and f_k is the force sampled at
/// the midpoint of step k. Returns the (levels x levels) propagator.
CMatrix forced_oscillator_propagator(int levels, double delta, double dt,
                                     std::span<const double> forces,
                                     SplitOrder order = SplitOrder::Strang);

/// Applies a single-mode matrix along `mode` of a phonon-space vector.
void apply_mode_matrix(const CompositeSpace& space, int mode, const CMatrix& u, Complex* phonons);

/// Drive-free propagator: block diagonal over qubit basis states and a
/// tensor product over modes inside each block,
/// U = sum_b exp(i theta_b) |b><b| (x) U_0(b) (x) ... (x) U_{M-1}(b).
class FactorizedPropagator {
 public:
  explicit FactorizedPropagator(const CompositeSpace& space);

  const CompositeSpace& space() const { return space_; }
  const CMatrix& block(int mode, std::uint64_t bits) const;
  void set_block(int mode, std::uint64_t bits, CMatrix u);
  double phase(std::uint64_t bits) const { return phases_.at(bits); }
  void add_phase(std::uint64_t bits, double theta) { phases_.at(bits) += theta; }

  /// Multiplies every column of `states` (composite-space vectors) in place.
  void apply(CMatrix& states) const;
  /// Composition `next` after `this`.
  FactorizedPropagator then(const FactorizedPropagator& next) const;

 private:
  CompositeSpace space_;
  std::vector<CMatrix> blocks_;  // mode-major: blocks_[mode * qubit_dim + bits]
  std::vector<double> phases_;
};

}  // namespace itof
