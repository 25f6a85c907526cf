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

#include "pfsim/block.hpp"

#include <algorithm>
#include <numeric>

namespace pfsim {

namespace {

// Unitary polar factor W X^dag of a square matrix with SVD W S X^dag.
Eigen::MatrixXcd polar_unitary(const Eigen::MatrixXcd& m) {
  Eigen::BDCSVD<Eigen::MatrixXcd> svd(m, Eigen::ComputeFullU | Eigen::ComputeFullV);
  return svd.matrixU() * svd.matrixV().adjoint();
}

}  // namespace

std::array<int, 4> computational_indices(const TruncationSpec& t) {
  return {BareLabel{0, 0, 0}.index(t), BareLabel{0, 0, 1}.index(t),
          BareLabel{1, 0, 0}.index(t), BareLabel{1, 0, 1}.index(t)};
}

Eigen::Matrix4cd two_qubit_pauli(char p1, char p2) {
  auto single = [](char p) -> Eigen::Matrix2cd {
    Eigen::Matrix2cd m;
    const std::complex<double> i(0.0, 1.0);
    switch (p) {
      case 'I': m << 1, 0, 0, 1; break;
      case 'X': m << 0, 1, 1, 0; break;
      case 'Y': m << 0, -i, i, 0; break;
      case 'Z': m << 1, 0, 0, -1; break;
      default: throw std::invalid_argument("pauli must be one of I X Y Z");
    }
    return m;
  };
  const Eigen::Matrix2cd a = single(p1);
  const Eigen::Matrix2cd b = single(p2);
  Eigen::Matrix4cd out;
  for (int r = 0; r < 2; ++r)
    for (int c = 0; c < 2; ++c) out.block<2, 2>(2 * r, 2 * c) = a(r, c) * b;
  return out;
}

double BlockResult::pauli_coefficient(const Eigen::Matrix4cd& pauli) const {
  return 0.25 * (pauli * h4).trace().real();
}

double BlockResult::zz_khz() const {
  return khz_from_rad(4.0 * pauli_coefficient(two_qubit_pauli('Z', 'Z')));
}
double BlockResult::zx_mhz() const {
  return mhz_from_rad(2.0 * pauli_coefficient(two_qubit_pauli('Z', 'X')));
}
double BlockResult::zi_mhz() const {
  return mhz_from_rad(2.0 * pauli_coefficient(two_qubit_pauli('Z', 'I')));
}
double BlockResult::iz_mhz() const {
  return mhz_from_rad(2.0 * pauli_coefficient(two_qubit_pauli('I', 'Z')));
}
double BlockResult::ix_mhz() const {
  return mhz_from_rad(2.0 * pauli_coefficient(two_qubit_pauli('I', 'X')));
}
double BlockResult::iy_mhz() const {
  return mhz_from_rad(2.0 * pauli_coefficient(two_qubit_pauli('I', 'Y')));
}
double BlockResult::zy_mhz() const {
  return mhz_from_rad(2.0 * pauli_coefficient(two_qubit_pauli('Z', 'Y')));
}

BlockResult block_diagonalize(const Eigen::MatrixXcd& h, const TruncationSpec& t,
                              double overlapThreshold) {
  const int dim = t.dimension();
  if (h.rows() != dim || h.cols() != dim) {
    throw std::invalid_argument("hamiltonian dimension does not match truncation");
  }
  const std::array<int, 4> comp = computational_indices(t);

  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(h);
  if (es.info() != Eigen::Success) throw NonConvergenceError("eigensolver failed");
  const Eigen::MatrixXcd& evecs = es.eigenvectors();

  // Weight of each eigenvector inside the computational subspace.
  std::vector<double> w(dim);
  for (int k = 0; k < dim; ++k) {
    double s = 0.0;
    for (int idx : comp) s += std::norm(evecs(idx, k));
    w[k] = s;
  }
  std::vector<int> order(dim);
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](int a, int b) { return w[a] > w[b]; });
  if (w[order[3]] <= overlapThreshold || w[order[4]] >= overlapThreshold) {
    throw BlockAmbiguityError("computational subspace membership is ambiguous");
  }
  // Deterministic column order within each block.
  std::sort(order.begin(), order.begin() + 4);
  std::sort(order.begin() + 4, order.end());

  Eigen::MatrixXcd v(dim, dim);
  for (int k = 0; k < dim; ++k) v.col(k) = evecs.col(order[k]);

  Eigen::Matrix4cd v11;
  for (int r = 0; r < 4; ++r)
    for (int c = 0; c < 4; ++c) v11(r, c) = v(comp[r], c);
  std::vector<int> rest;
  rest.reserve(dim - 4);
  for (int r = 0; r < dim; ++r) {
    if (std::find(comp.begin(), comp.end(), r) == comp.end()) rest.push_back(r);
  }
  Eigen::MatrixXcd v22(dim - 4, dim - 4);
  for (int r = 0; r < dim - 4; ++r)
    for (int c = 0; c < dim - 4; ++c) v22(r, c) = v(rest[r], 4 + c);

  // T = V blockdiag(polar(V11), polar(V22))^dag is the block-diagonalizing
  // unitary closest to the identity; its computational block is Hermitian
  // positive, which pins the basis order inside the block.
  const Eigen::MatrixXcd u1 = polar_unitary(v11);
  const Eigen::MatrixXcd u2 = polar_unitary(v22);
  Eigen::MatrixXcd T(dim, dim);
  T.leftCols(4) = v.leftCols(4) * u1.adjoint();
  T.rightCols(dim - 4) = v.rightCols(dim - 4) * u2.adjoint();

  BlockResult out;
  // hb is ordered [computational block | rest]; within the block the basis
  // follows comp[] (00,01,10,11) because T11 is Hermitian positive.
  const Eigen::MatrixXcd hb = T.adjoint() * h * T;
  const Eigen::Matrix4cd h4raw = hb.topLeftCorner(4, 4);
  out.h4 = 0.5 * (h4raw + h4raw.adjoint().eval());
  out.offBlockResidual = hb.topRightCorner(4, dim - 4).cwiseAbs().maxCoeff();
  out.unitarityError =
      (T.adjoint() * T - Eigen::MatrixXcd::Identity(dim, dim)).cwiseAbs().maxCoeff();

  // Undo the row permutation implied by reading blocks at comp[]/rest[]:
  // T already lives in the original basis, so only columns need relabeling
  // for callers that transform full-space operators.
  Eigen::MatrixXcd Tcols(dim, dim);
  for (int c = 0; c < 4; ++c) Tcols.col(comp[c]) = T.col(c);
  for (int c = 0; c < dim - 4; ++c) Tcols.col(rest[c]) = T.col(4 + c);
  out.T = std::move(Tcols);
  return out;
}

BlockResult effective_gate_hamiltonian(const RotatingFrame& frame, double omega_mhz) {
  return block_diagonalize(frame.hamiltonian(omega_mhz), frame.trunc());
}

}  // namespace pfsim
