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

#include "itof/types.hpp"

namespace itof {

enum class PauliAxis { X, Y, Z };
enum class LadderKind { Create, Annihilate, Number };

/// Basis label of the composite register: qubit bitstring plus one Fock
/// occupation per mode.
struct BasisLabel {
  std::uint64_t bits = 0;
  std::vector<int> occupations;
};

/// N qubits tensored with M truncated oscillators.
///
/// Layout: the qubit index is the slowest index, then mode 0, ..., with the
/// last mode fastest. Within the qubit index ion 0 is the most significant
/// bit.
class CompositeSpace {
 public:
  CompositeSpace(int n_qubits, std::vector<int> fock_cutoffs);

  int n_qubits() const { return n_qubits_; }
  int n_modes() const { return static_cast<int>(cutoffs_.size()); }
  int cutoff(int mode) const { return cutoffs_.at(mode); }
  int levels(int mode) const { return cutoffs_.at(mode) + 1; }
  const std::vector<int>& cutoffs() const { return cutoffs_; }

  Index dim() const { return qubit_dim_ * phonon_dim_; }
  Index qubit_dim() const { return qubit_dim_; }
  Index phonon_dim() const { return phonon_dim_; }
  /// Distance between consecutive occupations of `mode` in the phonon index.
  Index mode_stride(int mode) const { return strides_.at(mode); }

  Index index(std::uint64_t bits, std::span<const int> occupations) const;
  Index phonon_index(std::span<const int> occupations) const;
  BasisLabel label(Index index) const;
  int occupation(Index index, int mode) const;

 private:
  int n_qubits_;
  std::vector<int> cutoffs_;
  std::vector<Index> strides_;
  Index qubit_dim_;
  Index phonon_dim_;
};

/// Single-qubit Pauli on `ion`, identity elsewhere. sigma_z|0> = +|0>.
SparseOp pauli_embed(const CompositeSpace& space, int ion, PauliAxis axis);

/// Truncated ladder operator on `mode`; Number equals Create * Annihilate.
SparseOp ladder_embed(const CompositeSpace& space, int mode, LadderKind kind);

/// (n_max+1)-level matrices used to build single-mode operators.
CMatrix annihilation_matrix(int levels);
CMatrix displacement_matrix(int levels, Complex alpha);

/// Truncated displacement exp(alpha a^dag - alpha^* a) embedded on `mode`.
/// Warns when |alpha|^2 > n_max / 4 and throws ConfigError when the vacuum
/// column departs from the exact coherent state by more than 1e-6.
SparseOp displacement(const CompositeSpace& space, int mode, Complex alpha);

/// Deviation of the truncated displacement's vacuum column from the exact
/// (normalized, truncated) coherent state amplitudes.
double displacement_truncation_defect(int levels, Complex alpha);

/// Traces out every Fock factor of a composite-space operator.
CMatrix partial_trace_fock(const CompositeSpace& space, const CMatrix& op);

/// Projector on the all-modes vacuum tensored with the qubit identity.
SparseOp ground_projector(const CompositeSpace& space);

/// Embeds a qubit-register state with every mode in `occupations`.
CVector product_state(const CompositeSpace& space, const CVector& qubit_state,
                      std::span<const int> occupations);

bool is_hermitian(const CMatrix& m, double tol = 1e-10);
bool is_unitary(const CMatrix& m, double tol = 1e-10);

/// Hermitian matrix exponential exp(-i t H) through eigendecomposition.
CMatrix expm_hermitian(const CMatrix& h, double t);

}  // namespace itof
