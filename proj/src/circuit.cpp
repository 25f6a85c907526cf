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

#include "pfsim/circuit.hpp"

#include <unsupported/Eigen/KroneckerProduct>

#include <cmath>
#include <sstream>

namespace pfsim {

namespace {

bool finite(double x) { return std::isfinite(x); }

// (a^dag + a) on an n-level subsystem.
Eigen::MatrixXd ladder_x(int n) {
  Eigen::MatrixXd x = Eigen::MatrixXd::Zero(n, n);
  for (int k = 0; k + 1 < n; ++k) {
    x(k, k + 1) = std::sqrt(double(k + 1));
    x(k + 1, k) = x(k, k + 1);
  }
  return x;
}

// Embed a single-subsystem operator at slot s (0=q1, 1=c, 2=q2).
Eigen::MatrixXd embed(const Eigen::MatrixXd& op, int s, const TruncationSpec& t) {
  const std::array<int, 3> n = {t.n1, t.nc, t.n2};
  Eigen::MatrixXd m = op;
  // kron(I_left, op, I_right)
  for (int k = s - 1; k >= 0; --k) {
    m = Eigen::kroneckerProduct(Eigen::MatrixXd::Identity(n[k], n[k]), m).eval();
  }
  for (int k = s + 1; k < 3; ++k) {
    m = Eigen::kroneckerProduct(m, Eigen::MatrixXd::Identity(n[k], n[k])).eval();
  }
  return m;
}

}  // namespace

void CircuitParams::validate() const {
  for (double v : {omega1, omega2, omegaC, delta1, delta2, deltaC, g12, g1c, g2c}) {
    if (!finite(v)) throw std::invalid_argument("CircuitParams: non-finite parameter");
  }
  if (omega1 <= 0 || omega2 <= 0 || omegaC <= 0) {
    throw std::invalid_argument("CircuitParams: frequencies must be strictly positive");
  }
}

void CapacitanceModel::validate() const {
  for (double v : {alpha1, alpha2, alpha12}) {
    if (!finite(v)) throw std::invalid_argument("CapacitanceModel: non-finite ratio");
  }
  if (alpha1 <= 0 || alpha1 >= 1 || alpha2 <= 0 || alpha2 >= 1) {
    throw std::invalid_argument("CapacitanceModel: alpha ratios must lie in (0, 1)");
  }
  if (alpha12 <= 0) {
    throw std::invalid_argument("CapacitanceModel: alpha12 must be positive");
  }
}

void TruncationSpec::validate() const {
  if (n1 < 3 || nc < 3 || n2 < 3) {
    throw std::invalid_argument("TruncationSpec: each subsystem needs at least 3 levels");
  }
  if (dimension() > kMaxDimension) {
    throw std::invalid_argument("TruncationSpec: Hilbert dimension exceeds cap of 10000");
  }
}

void DriveSpec::validate() const {
  if (!finite(Omega) || Omega < 0) throw std::invalid_argument("DriveSpec: Omega must be >= 0");
  if (drivenSubsystem < 0 || drivenSubsystem > 2) {
    throw std::invalid_argument("DriveSpec: drivenSubsystem must be 0, 1 or 2");
  }
}

std::string BareLabel::str() const {
  std::ostringstream os;
  os << "|" << q1 << "," << c << "," << q2 << ">";
  return os.str();
}

double bare_label_energy(const CircuitParams& p, const BareLabel& b) {
  return bare_energy(p.omega1, p.delta1, b.q1) + bare_energy(p.omegaC, p.deltaC, b.c) +
         bare_energy(p.omega2, p.delta2, b.q2);
}

Eigen::MatrixXcd build_static_hamiltonian(const CircuitParams& p, const TruncationSpec& t) {
  p.validate();
  t.validate();
  const int dim = t.dimension();

  Eigen::MatrixXd h = Eigen::MatrixXd::Zero(dim, dim);
  for (int i = 0; i < dim; ++i) {
    h(i, i) = bare_label_energy(p, BareLabel::from_index(i, t));
  }

  const Eigen::MatrixXd x1 = embed(ladder_x(t.n1), 0, t);
  const Eigen::MatrixXd xc = embed(ladder_x(t.nc), 1, t);
  const Eigen::MatrixXd x2 = embed(ladder_x(t.n2), 2, t);
  h += rad_from_mhz(p.g1c) * (x1 * xc);
  h += rad_from_mhz(p.g2c) * (xc * x2);
  h += rad_from_mhz(p.g12) * (x1 * x2);

  Eigen::MatrixXcd out = h.cast<std::complex<double>>();
  out = 0.5 * (out + out.adjoint()).eval();
  return out;
}

Eigen::MatrixXcd build_drive_operator(const DriveSpec& d, const TruncationSpec& t) {
  d.validate();
  t.validate();
  const std::array<int, 3> n = {t.n1, t.nc, t.n2};
  return embed(ladder_x(n[d.drivenSubsystem]), d.drivenSubsystem, t).cast<std::complex<double>>();
}

CircuitParams couplings_from_capacitance(const CapacitanceModel& m, const CircuitParams& p) {
  m.validate();
  p.validate();
  CircuitParams out = p;
  // alpha * sqrt(GHz * GHz) -> GHz, reported in MHz.
  out.g1c = 1e3 * m.alpha1 * std::sqrt(p.omega1 * p.omegaC);
  out.g2c = 1e3 * m.alpha2 * std::sqrt(p.omega2 * p.omegaC);
  out.g12 = 1e3 * m.alpha12 * std::sqrt(p.omega1 * p.omega2);
  return out;
}

CapacitanceModel capacitance_from_couplings(const CircuitParams& p, double omegaRef_ghz) {
  p.validate();
  if (omegaRef_ghz <= 0) throw std::invalid_argument("reference frequency must be positive");
  CapacitanceModel m;
  m.alpha1 = 1e-3 * p.g1c / std::sqrt(p.omega1 * omegaRef_ghz);
  m.alpha2 = 1e-3 * p.g2c / std::sqrt(p.omega2 * omegaRef_ghz);
  m.alpha12 = 1e-3 * p.g12 / std::sqrt(p.omega1 * p.omega2);
  m.validate();
  return m;
}

}  // namespace pfsim
