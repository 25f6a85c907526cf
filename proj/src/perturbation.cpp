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

#include "pfsim/perturbation.hpp"

#include <cmath>

namespace pfsim {

namespace {
// Resonance denominators below this (GHz) are treated as poles.
constexpr double kPoleEps = 1e-3;
}  // namespace

double g_eff_mhz(const CircuitParams& p) {
  const double g12 = 1e-3 * p.g12;  // GHz
  const double g1c = 1e-3 * p.g1c;
  const double g2c = 1e-3 * p.g2c;
  const double d1 = p.omega1 - p.omegaC;
  const double d2 = p.omega2 - p.omegaC;
  const double s1 = p.omega1 + p.omegaC;
  const double s2 = p.omega2 + p.omegaC;
  const double geff = g12 + 0.5 * g1c * g2c * (1.0 / d1 - 1.0 / s1 + 1.0 / d2 - 1.0 / s2);
  return 1e3 * geff;
}

SwtCoefficients swt_static_coefficients(const CircuitParams& p) {
  p.validate();
  SwtCoefficients out;

  const double d12 = p.omega1 - p.omega2;
  const double d1 = p.omega1 - p.omegaC;
  const double d2 = p.omega2 - p.omegaC;
  const double delta1 = 1e-3 * p.delta1;  // GHz
  const double delta2 = 1e-3 * p.delta2;
  const double deltaC = 1e-3 * p.deltaC;
  const double g12 = 1e-3 * p.g12;

  if (std::abs(d1) < kPoleEps || std::abs(d2) < kPoleEps) {
    out.pole = true;
    return out;
  }
  const double geff = 1e-3 * g_eff_mhz(p);
  out.gEff_mhz = 1e3 * geff;

  const double denA = d12 - delta2;
  const double denB = d12 + delta1;
  const double denC = d1 + d2 - deltaC;
  if (std::abs(denA) < kPoleEps || std::abs(denB) < kPoleEps || std::abs(denC) < kPoleEps) {
    out.pole = true;
    return out;
  }

  const double chi = deltaC / (d1 + d2);
  const double zs1 = 2.0 * geff * geff * (delta1 + delta2) / (denA * denB);
  const double zs2 = 8.0 * (geff - chi * g12) * (geff - g12) / denC;

  out.zetaS1_khz = 1e6 * zs1;
  out.zetaS2_khz = 1e6 * zs2;
  out.zetaS_khz = out.zetaS1_khz + out.zetaS2_khz;
  return out;
}

std::optional<double> idle_frequency_perturbative(const CapacitanceModel& m,
                                                  const CircuitParams& p) {
  if (!m.has_real_idle_solution()) return std::nullopt;
  const double under = 1.0 - 2.0 * m.alpha1 * m.alpha2 / m.alpha12;
  return (p.omega1 + p.omega2) / (2.0 * std::sqrt(under));
}

double idle_offset_khz(const CircuitParams& p, double omegaCI_ghz) {
  const double g12 = 1e-3 * p.g12;
  const double deltaC = 1e-3 * p.deltaC;
  const double den = p.omega1 + p.omega2 - 2.0 * omegaCI_ghz;
  return 1e6 * 8.0 * g12 * g12 * deltaC / (den * den);
}

std::array<double, 11> transition_rates(const CircuitParams& p) {
  const double g = 1e-3 * p.g1c;  // GHz; assumes g1c = g2c
  const double delta = 1e-3 * p.delta1;
  const double deltaC = 1e-3 * p.deltaC;
  const double d1 = p.omega1 - p.omegaC;
  const double d2 = p.omega2 - p.omegaC;
  const double d12 = p.omega1 - p.omega2;
  const double rt2 = std::sqrt(2.0);

  std::array<double, 11> l{};
  l[0] = -g * g * delta / (2.0 * d12 * d2 * (d12 + delta));
  l[1] = -g * delta / (2.0 * d1 * (d1 + delta));
  l[2] = -rt2 * g * g * delta / (d12 * (d12 - delta) * (d2 + delta));
  l[3] = -g / (2.0 * d1);
  l[4] = -g * g * delta / (rt2 * d12 * d2 * (d12 + delta));
  l[5] = g * delta / (rt2 * d1 * (d1 + delta));
  l[6] = -g * g * (d2 + deltaC) / (2.0 * d12 * d2 * (d2 - deltaC));
  l[7] = -g / (rt2 * (d1 - deltaC));
  l[8] = -g * delta / (rt2 * d1 * (d1 + delta));
  l[9] = g * g / (d2 * (d12 + delta));
  l[10] = -g * g * delta / (d12 * (d12 - delta) * (d2 + delta));
  return l;
}

}  // namespace pfsim
