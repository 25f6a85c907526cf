// Copyright 2026 The pfsim Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include "pfsim/rotating.hpp"

namespace pfsim {

// Raised when eigenvectors cannot be split cleanly between the
// computational subspace and its complement (overlap near 1/2).
struct BlockAmbiguityError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Least-action block diagonalization of a rotating-frame Hamiltonian.
// T is the unitary closest to the identity (in Frobenius norm) that
// decouples the computational subspace {|00>,|01>,|10>,|11>} (coupler in
// its ground state) from everything else.
struct BlockResult {
  Eigen::Matrix4cd h4;       // computational block, rad/ns, order 00,01,10,11
  Eigen::MatrixXcd T;        // full-dimension decoupling unitary
  double offBlockResidual = 0.0;  // max |(T^dag H T)_{pq}| across blocks, rad/ns
  double unitarityError = 0.0;    // ||T^dag T - I||_inf

  // Two-qubit Pauli coefficients of h4, h4 = sum c_P (P/ norm). The
  // interaction rates reported below follow the conventions
  //   zeta = <ZZ part of the diagonal splittings>,
  //   alpha_ZX = half the ZX coefficient (the |0x> vs |1x> Rabi rate).
  double zz_khz() const;
  double zx_mhz() const;
  double zi_mhz() const;
  double iz_mhz() const;
  double ix_mhz() const;
  double iy_mhz() const;
  double zy_mhz() const;

  // Raw Pauli trace tr(P h4)/4 in rad/ns for a 4x4 two-qubit Pauli.
  double pauli_coefficient(const Eigen::Matrix4cd& pauli) const;
};

// Indices of the four computational labels in bare (and label) order.
std::array<int, 4> computational_indices(const TruncationSpec& t);

// Block-diagonalize an explicit Hermitian rotating-frame matrix whose
// basis is in label order for `t`. `overlapThreshold` is the margin around
// 1/2 at which subspace membership is declared ambiguous.
BlockResult block_diagonalize(const Eigen::MatrixXcd& h, const TruncationSpec& t,
                              double overlapThreshold = 0.5);

// Convenience: build H_r at the given control amplitude and reduce it.
BlockResult effective_gate_hamiltonian(const RotatingFrame& frame, double omega_mhz);

// Standard 4x4 two-qubit Paulis (qubit 1 is the high bit).
Eigen::Matrix4cd two_qubit_pauli(char p1, char p2);

}  // namespace pfsim
