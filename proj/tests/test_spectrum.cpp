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
#include <algorithm>
#include <cmath>
#include <random>
#include <vector>

#include "pfsim/presets.hpp"
#include "pfsim/spectrum.hpp"

using namespace pfsim;

TEST_CASE("jacobi iteration diagonalizes a random Hermitian matrix") {
  std::mt19937 rng(12345);
  std::normal_distribution<double> dist;
  const int n = 12;
  Eigen::MatrixXcd a(n, n);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) a(i, j) = {dist(rng), dist(rng)};
  }
  Eigen::MatrixXcd h = 0.5 * (a + a.adjoint().eval());
  const Eigen::MatrixXcd h0 = h;
  Eigen::MatrixXcd v = Eigen::MatrixXcd::Identity(n, n);
  jacobi_sweep_to_tolerance(h, v, 1e-12, 100000);

  double off = 0.0;
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      if (i != j) off = std::max(off, std::abs(h(i, j)));
    }
  }
  CHECK(off < 1e-11);
  CHECK((v.adjoint() * v - Eigen::MatrixXcd::Identity(n, n)).cwiseAbs().maxCoeff() < 1e-12);
  CHECK((v.adjoint() * h0 * v - h).cwiseAbs().maxCoeff() < 1e-10);
}

TEST_CASE("jacobi leaves an already diagonal matrix untouched") {
  Eigen::MatrixXcd h = Eigen::Vector4cd(1.0, 2.0, 3.0, 4.0).asDiagonal();
  Eigen::MatrixXcd v = Eigen::MatrixXcd::Identity(4, 4);
  CHECK(jacobi_sweep_to_tolerance(h, v, 1e-14, 100) == 0);
  CHECK((v - Eigen::MatrixXcd::Identity(4, 4)).cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("exact and iterative diagonalization agree on dressed energies") {
  for (int dev : {2, 5}) {
    const CircuitParams p = device_preset(dev);
    const TruncationSpec t{4, 4, 4};
    const Eigen::MatrixXcd h = build_static_hamiltonian(p, t);
    const LabeledSpectrum ex = diagonalize_exact(h, p, t);
    const LabeledSpectrum np = diagonalize_npad(h, p, t);
    for (const BareLabel& b :
         {BareLabel{1, 0, 0}, BareLabel{0, 0, 1}, BareLabel{1, 0, 1}, BareLabel{0, 1, 0}}) {
      CHECK(ex.energy_ghz(b) == doctest::Approx(np.energy_ghz(b)).epsilon(1e-10));
    }
    CHECK(std::abs((ex.static_zz_khz()) - (np.static_zz_khz())) < 1e-4);
  }
}

TEST_CASE("zero coupling yields perfect labels and bare energies") {
  CircuitParams p = device_preset(2);
  p.g12 = p.g1c = p.g2c = 0.0;
  const TruncationSpec t{4, 4, 4};
  const LabeledSpectrum s = diagonalize_exact(build_static_hamiltonian(p, t), p, t);
  for (int i = 0; i < t.dimension(); ++i) {
    CHECK(s.labelOverlap[i] == doctest::Approx(1.0).epsilon(1e-12));
    const BareLabel b = BareLabel::from_index(i, t);
    CHECK(s.energies[i] == doctest::Approx(bare_label_energy(p, b)).epsilon(1e-12));
  }
  CHECK(std::abs((s.static_zz_khz()) - (0.0)) < 1e-9);
  CHECK(s.dressed_omega1_ghz() == doctest::Approx(p.omega1).epsilon(1e-12));
  CHECK(s.dressed_omega2_ghz() == doctest::Approx(p.omega2).epsilon(1e-12));
}

TEST_CASE("dressed pair splitting matches the two-level exchange formula") {
  // One qubit + coupler, second qubit decoupled and far detuned: the
  // one-excitation pair is a 2x2 exchange block up to counter-rotating
  // corrections bounded by g^2/(omega_1 + omega_c) ~ 2e-4 GHz.
  CircuitParams p;
  p.omega1 = 4.25;
  p.omegaC = 4.35;
  p.omega2 = 20.0;  // parked far away
  p.delta1 = p.deltaC = p.delta2 = -300.0;
  p.g1c = 40.0;
  p.g12 = p.g2c = 0.0;
  const TruncationSpec t{3, 3, 3};
  const LabeledSpectrum s = diagonalize_exact(build_static_hamiltonian(p, t), p, t);
  const double e10 = s.energy_ghz({1, 0, 0});
  const double e01 = s.energy_ghz({0, 1, 0});
  const double detune = p.omegaC - p.omega1;
  const double g = p.g1c * 1e-3;
  const double jc = std::sqrt(detune * detune + 4 * g * g);
  CHECK(std::abs((e01 - e10) - jc) < 1e-3);
  CHECK(std::abs((e01 - e10) - jc) > 1e-8);  // the correction is real, not noise
}

TEST_CASE("static ZZ is truncation-stable at the working size") {
  const CircuitParams p = device_preset(2);  // at the 4.8 GHz table point
  const double z5 = diagonalize_exact(build_static_hamiltonian(p, {5, 5, 5}), p, {5, 5, 5})
                        .static_zz_khz();
  const double z7 = diagonalize_exact(build_static_hamiltonian(p, {7, 7, 7}), p, {7, 7, 7})
                        .static_zz_khz();
  CHECK(std::abs(z5 - z7) < 0.01 * std::abs(z7));
}

TEST_CASE("labeling failure is reported for resonant strong mixing") {
  // Degenerate qubit and coupler with strong coupling: |100> and |010> are
  // 50/50 mixtures and no honest assignment exists.
  CircuitParams p;
  p.omega1 = p.omegaC = 4.5;
  p.omega2 = 6.5;
  p.delta1 = p.deltaC = p.delta2 = -300.0;
  p.g1c = 80.0;
  p.g12 = p.g2c = 0.0;
  const TruncationSpec t{3, 3, 3};
  CHECK_THROWS_AS(diagonalize_exact(build_static_hamiltonian(p, t), p, t, 0.6),
                  LabelingError);
}
