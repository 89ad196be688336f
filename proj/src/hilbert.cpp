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

#include "itof/hilbert.hpp"

#include <cmath>
#include <sstream>

namespace itof {

CompositeSpace::CompositeSpace(int n_qubits, std::vector<int> fock_cutoffs)
    : n_qubits_(n_qubits), cutoffs_(std::move(fock_cutoffs)) {
  if (n_qubits < 1 || n_qubits > 20) throw ConfigError("n_qubits must be in [1, 20]", "n_ions");
  qubit_dim_ = Index{1} << n_qubits;
  strides_.assign(cutoffs_.size(), 1);
  phonon_dim_ = 1;
  for (int m = static_cast<int>(cutoffs_.size()) - 1; m >= 0; --m) {
    if (cutoffs_[m] < 0) throw ConfigError("Fock cutoff must be non-negative", "fock_nmax");
    strides_[m] = phonon_dim_;
    phonon_dim_ *= cutoffs_[m] + 1;
  }
}

Index CompositeSpace::phonon_index(std::span<const int> occupations) const {
  if (occupations.size() != cutoffs_.size()) {
    throw std::out_of_range("occupation list does not match the number of modes");
  }
  Index p = 0;
  for (std::size_t m = 0; m < cutoffs_.size(); ++m) {
    if (occupations[m] < 0 || occupations[m] > cutoffs_[m]) {
      throw std::out_of_range("occupation outside the truncated Fock space");
    }
    p += occupations[m] * strides_[m];
  }
  return p;
}

Index CompositeSpace::index(std::uint64_t bits, std::span<const int> occupations) const {
  if (bits >= static_cast<std::uint64_t>(qubit_dim_)) throw std::out_of_range("qubit bitstring out of range");
  return static_cast<Index>(bits) * phonon_dim_ + phonon_index(occupations);
}

int CompositeSpace::occupation(Index index, int mode) const {
  const Index p = index % phonon_dim_;
  return static_cast<int>((p / strides_.at(mode)) % (cutoffs_[mode] + 1));
}

BasisLabel CompositeSpace::label(Index index) const {
  if (index < 0 || index >= dim()) throw std::out_of_range("basis index out of range");
  BasisLabel out;
  out.bits = static_cast<std::uint64_t>(index / phonon_dim_);
  out.occupations.resize(cutoffs_.size());
  for (int m = 0; m < n_modes(); ++m) out.occupations[m] = occupation(index, m);
  return out;
}

SparseOp pauli_embed(const CompositeSpace& space, int ion, PauliAxis axis) {
  if (ion < 0 || ion >= space.n_qubits()) throw std::out_of_range("ion index out of range");
  const int n = space.n_qubits();
  const Index pd = space.phonon_dim();
  std::vector<Eigen::Triplet<Complex>> trips;
  trips.reserve(space.dim());
  for (std::uint64_t b = 0; b < static_cast<std::uint64_t>(space.qubit_dim()); ++b) {
    const int s = spin_of(b, ion, n);
    std::uint64_t row = b;
    Complex value;
    switch (axis) {
      case PauliAxis::Z: value = s; break;
      case PauliAxis::X: row = flip_bit(b, ion, n); value = 1.0; break;
      // sigma_y|0> = i|1>, sigma_y|1> = -i|0>
      case PauliAxis::Y: row = flip_bit(b, ion, n); value = (s > 0) ? kI : -kI; break;
    }
    for (Index p = 0; p < pd; ++p) {
      trips.emplace_back(static_cast<Index>(row) * pd + p, static_cast<Index>(b) * pd + p, value);
    }
  }
  SparseOp op(space.dim(), space.dim());
  op.setFromTriplets(trips.begin(), trips.end());
  return op;
}

SparseOp ladder_embed(const CompositeSpace& space, int mode, LadderKind kind) {
  if (mode < 0 || mode >= space.n_modes()) throw std::out_of_range("mode index out of range");
  const Index stride = space.mode_stride(mode);
  const int nmax = space.cutoff(mode);
  std::vector<Eigen::Triplet<Complex>> trips;
  trips.reserve(space.dim());
  for (Index col = 0; col < space.dim(); ++col) {
    const int n = space.occupation(col, mode);
    switch (kind) {
      case LadderKind::Number:
        if (n > 0) trips.emplace_back(col, col, static_cast<double>(n));
        break;
      case LadderKind::Annihilate:
        if (n > 0) trips.emplace_back(col - stride, col, std::sqrt(static_cast<double>(n)));
        break;
      case LadderKind::Create:
        if (n < nmax) trips.emplace_back(col + stride, col, std::sqrt(n + 1.0));
        break;
    }
  }
  SparseOp op(space.dim(), space.dim());
  op.setFromTriplets(trips.begin(), trips.end());
  return op;
}

CMatrix annihilation_matrix(int levels) {
  CMatrix a = CMatrix::Zero(levels, levels);
  for (int n = 1; n < levels; ++n) a(n - 1, n) = std::sqrt(static_cast<double>(n));
  return a;
}

CMatrix expm_hermitian(const CMatrix& h, double t) {
  Eigen::SelfAdjointEigenSolver<CMatrix> solver(h);
  const RVector& e = solver.eigenvalues();
  CVector phases(e.size());
  for (Index k = 0; k < e.size(); ++k) phases(k) = std::exp(-kI * (t * e(k)));
  return solver.eigenvectors() * phases.asDiagonal() * solver.eigenvectors().adjoint();
}

CMatrix displacement_matrix(int levels, Complex alpha) {
  const CMatrix a = annihilation_matrix(levels);
  // D = exp(alpha a^dag - alpha^* a) = exp(-i G), G = i(alpha a^dag - alpha^* a).
  const CMatrix g = kI * (alpha * a.adjoint() - std::conj(alpha) * a);
  return expm_hermitian(0.5 * (g + g.adjoint()), 1.0);
}

double displacement_truncation_defect(int levels, Complex alpha) {
  const CMatrix d = displacement_matrix(levels, alpha);
  CVector coherent(levels);
  double factor = std::exp(-0.5 * std::norm(alpha));
  Complex power = 1.0;
  double fact = 1.0;
  for (int n = 0; n < levels; ++n) {
    if (n > 0) {
      power *= alpha;
      fact *= n;
    }
    coherent(n) = factor * power / std::sqrt(fact);
  }
  return (d.col(0) - coherent).norm();
}

namespace {

SparseOp embed_mode_block(const CompositeSpace& space, int mode, const CMatrix& block) {
  const Index stride = space.mode_stride(mode);
  const int levels = space.levels(mode);
  std::vector<Eigen::Triplet<Complex>> trips;
  trips.reserve(space.dim() * levels);
  for (Index col = 0; col < space.dim(); ++col) {
    const int n = space.occupation(col, mode);
    const Index base = col - n * stride;
    for (int r = 0; r < levels; ++r) {
      const Complex v = block(r, n);
      if (v != Complex{}) trips.emplace_back(base + r * stride, col, v);
    }
  }
  SparseOp op(space.dim(), space.dim());
  op.setFromTriplets(trips.begin(), trips.end());
  return op;
}

}  // namespace

SparseOp displacement(const CompositeSpace& space, int mode, Complex alpha) {
  if (mode < 0 || mode >= space.n_modes()) throw std::out_of_range("mode index out of range");
  const int nmax = space.cutoff(mode);
  if (std::norm(alpha) > nmax / 4.0) {
    std::ostringstream msg;
    msg << "displacement |alpha|^2=" << std::norm(alpha) << " is large for n_max=" << nmax;
    log_warning(msg.str());
  }
  const double defect = displacement_truncation_defect(nmax + 1, alpha);
  if (defect > 1e-6) {
    std::ostringstream msg;
    msg << "Fock cutoff " << nmax << " too small for displacement |alpha|=" << std::abs(alpha)
        << " (defect " << defect << ")";
    throw ConfigError(msg.str(), "fock_nmax");
  }
  return embed_mode_block(space, mode, displacement_matrix(nmax + 1, alpha));
}

CMatrix partial_trace_fock(const CompositeSpace& space, const CMatrix& op) {
  if (op.rows() != space.dim() || op.cols() != space.dim()) {
    throw std::invalid_argument("operator does not match the composite space");
  }
  const Index d = space.qubit_dim();
  const Index pd = space.phonon_dim();
  CMatrix out = CMatrix::Zero(d, d);
  for (Index a = 0; a < d; ++a) {
    for (Index b = 0; b < d; ++b) {
      out(a, b) = op.block(a * pd, b * pd, pd, pd).trace();
    }
  }
  return out;
}

SparseOp ground_projector(const CompositeSpace& space) {
  const Index pd = space.phonon_dim();
  std::vector<Eigen::Triplet<Complex>> trips;
  for (Index b = 0; b < space.qubit_dim(); ++b) trips.emplace_back(b * pd, b * pd, 1.0);
  SparseOp op(space.dim(), space.dim());
  op.setFromTriplets(trips.begin(), trips.end());
  return op;
}

CVector product_state(const CompositeSpace& space, const CVector& qubit_state,
                      std::span<const int> occupations) {
  if (qubit_state.size() != space.qubit_dim()) throw std::invalid_argument("qubit state has wrong size");
  CVector out = CVector::Zero(space.dim());
  const Index p = space.phonon_index(occupations);
  for (Index b = 0; b < space.qubit_dim(); ++b) out(b * space.phonon_dim() + p) = qubit_state(b);
  return out;
}

bool is_hermitian(const CMatrix& m, double tol) {
  return m.rows() == m.cols() && (m - m.adjoint()).cwiseAbs().maxCoeff() <= tol;
}

bool is_unitary(const CMatrix& m, double tol) {
  if (m.rows() != m.cols()) return false;
  return (m.adjoint() * m - CMatrix::Identity(m.rows(), m.cols())).cwiseAbs().maxCoeff() <= tol;
}

}  // namespace itof
