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

#include <complex>
#include <cstdint>
#include <numbers>
#include <stdexcept>
#include <string>

#include <Eigen/Dense>
#include <Eigen/Sparse>

namespace itof {

using Complex = std::complex<double>;
using CMatrix = Eigen::MatrixXcd;
using CVector = Eigen::VectorXcd;
using RMatrix = Eigen::MatrixXd;
using RVector = Eigen::VectorXd;
using SparseOp = Eigen::SparseMatrix<Complex, Eigen::RowMajor>;
using Index = Eigen::Index;

inline constexpr double kPi = std::numbers::pi;
inline constexpr double kTwoPi = 2.0 * std::numbers::pi;
inline constexpr Complex kI{0.0, 1.0};

// Frequencies are stored as angular (rad/s). Inputs quoted as f = omega/2pi
// in kHz are converted at the boundary with these helpers.
inline double khz(double value_khz) { return kTwoPi * 1e3 * value_khz; }
inline double to_khz(double angular) { return angular / (kTwoPi * 1e3); }
inline double microseconds(double us) { return us * 1e-6; }

/// Spin eigenvalue of ion `ion` in basis state `bits`: +1 for |0>, -1 for |1>.
/// Ion 0 is the most significant bit of the qubit index.
inline int spin_of(std::uint64_t bits, int ion, int n_qubits) {
  return ((bits >> (n_qubits - 1 - ion)) & 1U) ? -1 : 1;
}

inline std::uint64_t flip_bit(std::uint64_t bits, int ion, int n_qubits) {
  return bits ^ (std::uint64_t{1} << (n_qubits - 1 - ion));
}

/// Raised when an iterative numerical method fails to meet its tolerance.
class SolverError : public std::runtime_error {
 public:
  SolverError(const std::string& what, double residual)
      : std::runtime_error(what), residual_(residual) {}
  double residual() const { return residual_; }

 private:
  double residual_;
};

/// Raised for invalid physical configurations (bad step size, truncation too
/// small, divergent drive correction, ...).
class ConfigError : public std::invalid_argument {
 public:
  explicit ConfigError(const std::string& what, std::string key = {})
      : std::invalid_argument(what), key_(std::move(key)) {}
  const std::string& key() const { return key_; }

 private:
  std::string key_;
};

void log_warning(const std::string& message);
void set_warnings_enabled(bool enabled);

}  // namespace itof
