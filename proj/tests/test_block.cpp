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

#include <doctest.h>

#include <Eigen/Dense>
#include <cmath>

#include "pfsim/analysis.hpp"
#include "pfsim/block.hpp"
#include "pfsim/presets.hpp"
#include "pfsim/rotating.hpp"

using namespace pfsim;

namespace {
const TruncationSpec kT{4, 4, 4};

RotatingFrame make_frame(int dev) {
  return RotatingFrame(device_preset(dev), kT, DriveSpec{0.0, 0.0, 0});
}
}  // namespace

TEST_CASE("two-qubit Pauli matrices square to identity and are traceless") {
  for (char a : {'I', 'X', 'Y', 'Z'}) {
    for (char b : {'I', 'X', 'Y', 'Z'}) {
      const Eigen::Matrix4cd p = two_qubit_pauli(a, b);
      CHECK((p * p - Eigen::Matrix4cd::Identity()).cwiseAbs().maxCoeff() < 1e-14);
      if (a != 'I' || b != 'I') CHECK(std::abs(p.trace()) < 1e-14);
    }
  }
}

TEST_CASE("pauli projection reconstructs an arbitrary Hermitian 4x4 exactly") {
  // The 16 Paulis are an orthogonal basis; summing coefficient * Pauli must
  // return the input. Oracle is independent of the projection code path.
  Eigen::Matrix4cd a;
  a << 1.0, std::complex<double>(0.2, 0.3), 0.0, std::complex<double>(-0.1, 0.4),
      std::complex<double>(0.2, -0.3), -2.0, std::complex<double>(0.5, 0.0), 0.0,
      0.0, std::complex<double>(0.5, 0.0), 0.7, std::complex<double>(0.0, -0.6),
      std::complex<double>(-0.1, -0.4), 0.0, std::complex<double>(0.0, 0.6), 0.3;
  BlockResult r;
  r.h4 = a;
  Eigen::Matrix4cd sum = Eigen::Matrix4cd::Zero();
  for (char p1 : {'I', 'X', 'Y', 'Z'}) {
    for (char p2 : {'I', 'X', 'Y', 'Z'}) {
      const Eigen::Matrix4cd p = two_qubit_pauli(p1, p2);
      sum += r.pauli_coefficient(p) * p;
    }
  }
  CHECK((sum - a).cwiseAbs().maxCoeff() < 1e-13);
}

TEST_CASE("block diagonalization is unitary with small off-block residual") {
  const RotatingFrame f = make_frame(2);
  const BlockResult r = block_diagonalize(f.hamiltonian(5.0), kT);
  CHECK(r.unitarityError < 1e-10);
  // The drive couples the block to leakage levels at ~rad_from_mhz(5)
  // scale; decoupling must suppress that below the input scale.
  CHECK(r.offBlockResidual < 1e-8);
  CHECK((r.h4 - r.h4.adjoint()).cwiseAbs().maxCoeff() < 1e-12);
}

TEST_CASE("block reproduces the rotating-frame spectrum on the computational block") {
  // With T unitary and off-block residual ~0, the 4 block eigenvalues must
  // be 4 of the full eigenvalues. Oracle: direct eigensolver on both.
  const RotatingFrame f = make_frame(2);
  const Eigen::MatrixXcd h = f.hamiltonian(3.0);
  const BlockResult r = block_diagonalize(h, kT);
  Eigen::SelfAdjointEigenSolver<Eigen::Matrix4cd> small(r.h4);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> full(h);
  for (int i = 0; i < 4; ++i) {
    double best = 1e9;
    for (int j = 0; j < full.eigenvalues().size(); ++j) {
      best = std::min(best, std::abs(full.eigenvalues()[j] - small.eigenvalues()[i]));
    }
    CHECK(best < 1e-9);
  }
}

TEST_CASE("undriven block ZZ matches the dressed-energy combination") {
  for (int dev : {1, 2, 6}) {
    const RotatingFrame f = make_frame(dev);
    const BlockResult r = block_diagonalize(f.hamiltonian(0.0), kT);
    CHECK(std::abs((r.zz_khz()) - (f.static_zz_khz())) < 0.01);
    CHECK(std::abs(r.zx_mhz()) < 1e-9);
    CHECK(std::abs(r.ix_mhz()) < 1e-9);
    CHECK(std::abs(r.iy_mhz()) < 1e-9);
  }
}

TEST_CASE("ZX rate is linear in the amplitude at small drive") {
  const RotatingFrame f = make_frame(2);
  double ratio0 = 0.0;
  for (double om : {1.0, 2.0, 3.0, 4.0, 5.0}) {
    const BlockResult r = block_diagonalize(f.hamiltonian(om), kT);
    const double ratio = r.zx_mhz() / om;
    if (ratio0 == 0.0) ratio0 = ratio;
    CHECK(ratio == doctest::Approx(ratio0).epsilon(0.02));
  }
  CHECK(std::abs(ratio0) > 1e-3);
}

TEST_CASE("effective gate Hamiltonian agrees with direct block diagonalization") {
  const RotatingFrame f = make_frame(2);
  const BlockResult a = effective_gate_hamiltonian(f, 4.0);
  const BlockResult b = block_diagonalize(f.hamiltonian(4.0), kT);
  CHECK((a.h4 - b.h4).cwiseAbs().maxCoeff() < 1e-12);
}

TEST_CASE("driven total ZZ splits into static plus drive-induced parts") {
  const CircuitParams p = device_preset(2);
  const DrivenPoint d = total_zz(p, kT, DriveSpec{30.0, 0.0, 0});
  CHECK(std::abs((d.zeta_khz) - (d.zetaS_khz + d.zetaD_khz)) < 1e-6);
  const DrivenPoint d0 = total_zz(p, kT, DriveSpec{0.0, 0.0, 0});
  CHECK(std::abs((d0.zetaD_khz) - (0.0)) < 1e-6);
}
