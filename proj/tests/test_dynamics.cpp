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
#include <complex>
#include <vector>

#include "pfsim/block.hpp"
#include "pfsim/dynamics.hpp"
#include "pfsim/presets.hpp"

using namespace pfsim;

namespace {
const std::complex<double> kI(0.0, 1.0);
}

TEST_CASE("adaptive integrator solves a known linear ODE") {
  // y' = -i w y has the closed solution y0 exp(-i w t).
  const double w = 3.7;
  Eigen::MatrixXcd y(1, 1);
  y(0, 0) = 1.0;
  integrate_dopri5(
      [&](double, const Eigen::MatrixXcd& s, Eigen::MatrixXcd& d) { d = -kI * w * s; }, 0.0,
      2.5, y, 1e-11, 1e-14);
  const std::complex<double> exact = std::exp(-kI * w * 2.5);
  CHECK(std::abs(y(0, 0) - exact) < 1e-9);
}

TEST_CASE("adaptive integrator handles a time-dependent coefficient") {
  // y' = -i a t y integrates to exp(-i a t^2 / 2).
  const double a = 2.0;
  Eigen::MatrixXcd y(1, 1);
  y(0, 0) = 1.0;
  integrate_dopri5(
      [&](double t, const Eigen::MatrixXcd& s, Eigen::MatrixXcd& d) { d = -kI * a * t * s; },
      0.0, 3.0, y, 1e-11, 1e-14);
  const std::complex<double> exact = std::exp(-kI * a * 9.0 / 2.0);
  CHECK(std::abs(y(0, 0) - exact) < 1e-8);
}

TEST_CASE("fixed-step RK4 converges at fourth order") {
  auto solve = [](double step) {
    Eigen::MatrixXcd y(1, 1);
    y(0, 0) = 1.0;
    integrate_rk4(
        [](double, const Eigen::MatrixXcd& s, Eigen::MatrixXcd& d) { d = -kI * 5.0 * s; }, 0.0,
        1.0, step, y);
    return std::abs(y(0, 0) - std::exp(-kI * 5.0));
  };
  const double e1 = solve(0.01);
  const double e2 = solve(0.005);
  CHECK(e1 / e2 > 12.0);  // ~16 for clean fourth order
  CHECK(e1 / e2 < 20.0);
}

TEST_CASE("Lindblad relaxation matches the analytic T1 decay") {
  // Single qubit (others decoupled and unexcited): excited population
  // decays as exp(-t/T1).
  const TruncationSpec t{2, 1, 1};
  const CoherenceSpec c = CoherenceSpec::uniform(0.5, 1.0, true);  // T1 = 500 ns, no dephasing cap
  const auto collapse = collapse_operators(c, t);
  Eigen::MatrixXcd rho = Eigen::MatrixXcd::Zero(2, 2);
  rho(1, 1) = 1.0;
  const Eigen::MatrixXcd h = Eigen::MatrixXcd::Zero(2, 2);
  const double tEnd = 200.0;
  rho = evolve_open_constant(h, collapse, rho, tEnd, 0.05);
  CHECK(rho(1, 1).real() == doctest::Approx(std::exp(-tEnd / 500.0)).epsilon(1e-3));
  CHECK(std::abs(rho.trace() - 1.0) < 1e-10);
}

TEST_CASE("Lindblad dephasing decays coherence at the Ramsey rate") {
  const TruncationSpec t{2, 1, 1};
  // T2 below 2 T1 leaves pure dephasing 1/Tphi = 1/T2 - 1/(2 T1).
  const double t1 = 1.0e3, t2 = 0.4e3;  // ns
  const CoherenceSpec c = CoherenceSpec::uniform(t1 * 1e-3, t2 * 1e-3, true);
  const auto collapse = collapse_operators(c, t);
  Eigen::MatrixXcd rho(2, 2);
  rho << 0.5, 0.5, 0.5, 0.5;
  const double tEnd = 100.0;
  rho = evolve_open_constant(Eigen::MatrixXcd::Zero(2, 2), collapse, rho, tEnd, 0.05);
  CHECK(std::abs(rho(0, 1)) == doctest::Approx(0.5 * std::exp(-tEnd / t2)).epsilon(1e-3));
}

TEST_CASE("lossless coherence spec yields no collapse operators") {
  const auto collapse = collapse_operators(CoherenceSpec::none(), {3, 3, 3});
  for (const auto& op : collapse) CHECK(op.cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("open evolution preserves a stationary mixed state") {
  // The maximally mixed state of a T1-free, dephasing-only qubit is exactly
  // stationary under any diagonal Hamiltonian.
  const TruncationSpec t{2, 1, 1};
  CoherenceSpec c = CoherenceSpec::uniform(1e9, 1.0, true);
  const auto collapse = collapse_operators(c, t);
  Eigen::MatrixXcd rho = 0.5 * Eigen::MatrixXcd::Identity(2, 2);
  Eigen::MatrixXcd h = Eigen::MatrixXcd::Zero(2, 2);
  h(1, 1) = 1.0;
  const Eigen::MatrixXcd out = evolve_open_constant(h, collapse, rho, 50.0, 0.05);
  CHECK((out - rho).cwiseAbs().maxCoeff() < 1e-8);
}

TEST_CASE("closed evolution conserves norm and matches the static propagator") {
  const CircuitParams p = device_preset(2);
  SweepOptions opt;
  const TruncationSpec t{3, 3, 3};
  Eigen::MatrixXcd psi = Eigen::MatrixXcd::Zero(t.dimension(), 1);
  psi(BareLabel{1, 0, 0}.index(t), 0) = 1.0;
  auto constWc = [&](double) { return p.omegaC; };
  auto noDrive = [](double) { return 0.0; };
  const double tEnd = 17.0;
  const Eigen::MatrixXcd out =
      evolve_closed(p, opt, t, constWc, noDrive, 0.0, p.omegaC, 0.0, tEnd, psi, 1e-11);
  CHECK(std::abs(out.col(0).norm() - 1.0) < 1e-9);
  // Oracle: constant Hamiltonian, so the exact propagator is the matrix
  // exponential in the eigenbasis.
  const Eigen::MatrixXcd h = build_static_hamiltonian(p, t);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(h);
  const Eigen::VectorXcd phases =
      (-kI * tEnd * es.eigenvalues().array()).exp().matrix().cast<std::complex<double>>();
  const Eigen::MatrixXcd exact =
      es.eigenvectors() * phases.asDiagonal() * es.eigenvectors().adjoint() * psi;
  CHECK((out - exact).cwiseAbs().maxCoeff() < 1e-7);
}

TEST_CASE("ZX90 unitary is the quarter-turn ZX rotation") {
  const Eigen::Matrix4cd u = zx90_unitary(1.0);
  CHECK((u * u.adjoint() - Eigen::Matrix4cd::Identity()).cwiseAbs().maxCoeff() < 1e-14);
  // Four applications of exp(-i pi/4 ZX) give exp(-i pi ZX) = -I.
  const Eigen::Matrix4cd u4 = u * u * u * u;
  CHECK((u4 + Eigen::Matrix4cd::Identity()).cwiseAbs().maxCoeff() < 1e-13);
}

TEST_CASE("average gate fidelity is 1 for the ideal map and degrades with error") {
  const Eigen::Matrix4cd ideal = zx90_unitary(1.0);
  std::array<Eigen::Matrix4cd, 16> images;
  int k = 0;
  for (char a : {'I', 'X', 'Y', 'Z'}) {
    for (char b : {'I', 'X', 'Y', 'Z'}) {
      const Eigen::Matrix4cd p = two_qubit_pauli(a, b);
      images[k++] = ideal * p * ideal.adjoint();
    }
  }
  CHECK(average_gate_fidelity(images, ideal) == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(average_gate_fidelity_zx90(images) == doctest::Approx(1.0).epsilon(1e-10));
  // A virtual-Z-rotated ideal gate must still be recognized as perfect.
  Eigen::Matrix4cd vz = Eigen::Matrix4cd::Identity();
  vz(2, 2) = std::exp(kI * 0.3);
  vz(3, 3) = std::exp(kI * 0.3);
  k = 0;
  for (char a : {'I', 'X', 'Y', 'Z'}) {
    for (char b : {'I', 'X', 'Y', 'Z'}) {
      const Eigen::Matrix4cd p = two_qubit_pauli(a, b);
      const Eigen::Matrix4cd g = vz * ideal;
      images[k++] = g * p * g.adjoint();
    }
  }
  CHECK(average_gate_fidelity_zx90(images) == doctest::Approx(1.0).epsilon(1e-4));
  // A depolarized map scores strictly lower.
  for (auto& img : images) img *= 0.9;
  images[0] = Eigen::Matrix4cd::Identity();
  CHECK(average_gate_fidelity_zx90(images) < 0.95);
}
