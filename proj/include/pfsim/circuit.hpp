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

#include <Eigen/Dense>
#include <array>
#include <stdexcept>
#include <string>

#include "pfsim/units.hpp"

namespace pfsim {

// Two qubits (1, 2) coupled directly and through a tunable coupler (c).
// Frequencies are value/2pi in GHz, anharmonicities and couplings in MHz.
// Anharmonicity is negative for transmons; a CSFQ has positive delta.
struct CircuitParams {
  double omega1 = 0.0;  // GHz
  double omega2 = 0.0;  // GHz
  double omegaC = 0.0;  // GHz
  double delta1 = 0.0;  // MHz
  double delta2 = 0.0;  // MHz
  double deltaC = 0.0;  // MHz
  double g12 = 0.0;     // MHz
  double g1c = 0.0;     // MHz
  double g2c = 0.0;     // MHz

  void validate() const;

  CircuitParams with_coupler_frequency(double omegaC_ghz) const {
    CircuitParams p = *this;
    p.omegaC = omegaC_ghz;
    return p;
  }
};

// Dimensionless capacitance ratios. Couplings inherit a sqrt(frequency)
// dependence: g_ic = alpha_i sqrt(omega_i omega_c), g_12 = alpha12
// sqrt(omega_1 omega_2), so tuning the coupler co-varies the couplings.
struct CapacitanceModel {
  double alpha1 = 0.0;
  double alpha2 = 0.0;
  double alpha12 = 0.0;

  void validate() const;

  // True when the decoupling frequency closed form has a real solution.
  bool has_real_idle_solution() const {
    return alpha12 > 0.0 && 2.0 * alpha1 * alpha2 / alpha12 < 1.0;
  }
};

struct TruncationSpec {
  int n1 = 5;
  int nc = 5;
  int n2 = 5;

  static constexpr int kMaxDimension = 10000;

  int dimension() const { return n1 * nc * n2; }
  void validate() const;
};

// Occupation numbers |q1, c, q2>. Basis layout is lexicographic in
// (q1, c, q2); rebuilding any operator with identical inputs is
// bit-identical.
struct BareLabel {
  int q1 = 0;
  int c = 0;
  int q2 = 0;

  int index(const TruncationSpec& t) const { return (q1 * t.nc + c) * t.n2 + q2; }

  static BareLabel from_index(int idx, const TruncationSpec& t) {
    BareLabel b;
    b.q2 = idx % t.n2;
    idx /= t.n2;
    b.c = idx % t.nc;
    b.q1 = idx / t.nc;
    return b;
  }

  int total() const { return q1 + c + q2; }

  bool operator==(const BareLabel&) const = default;
  auto operator<=>(const BareLabel&) const = default;

  std::string str() const;
};

// Charge-like drive Omega cos(omega_d t)(a^dag + a) on one subsystem.
// omegaD == 0 requests the dressed target-qubit frequency.
struct DriveSpec {
  double Omega = 0.0;       // MHz
  double omegaD = 0.0;      // GHz; 0 -> dressed frequency of the target qubit
  int drivenSubsystem = 0;  // 0 = Q1 (control), 1 = coupler, 2 = Q2 (target)

  void validate() const;
};

// Bare Duffing energy of level n, in rad/ns.
inline double bare_energy(double omega_ghz, double delta_mhz, int n) {
  return n * rad_from_ghz(omega_ghz) + 0.5 * n * (n - 1) * rad_from_mhz(delta_mhz);
}

// Sum of bare subsystem energies for a label, in rad/ns.
double bare_label_energy(const CircuitParams& p, const BareLabel& b);

// Dense Hermitian multilevel Hamiltonian in rad/ns: Duffing diagonals plus
// (a^dag + a)(a^dag + a) exchange couplings between all three pairs.
// Hermiticity is enforced exactly by construction.
Eigen::MatrixXcd build_static_hamiltonian(const CircuitParams& p, const TruncationSpec& t);

// (a^dag + a) on the driven subsystem, identity elsewhere (dimensionless;
// callers supply amplitude and time dependence).
Eigen::MatrixXcd build_drive_operator(const DriveSpec& d, const TruncationSpec& t);

// Recompute g12, g1c, g2c from capacitance ratios at the current
// frequencies. Output couplings are in MHz.
CircuitParams couplings_from_capacitance(const CapacitanceModel& m, const CircuitParams& p);

// Invert the sqrt-frequency coupling model from couplings quoted at a
// reference coupler frequency (default 4.8 GHz).
CapacitanceModel capacitance_from_couplings(const CircuitParams& p, double omegaRef_ghz = 4.8);

}  // namespace pfsim
