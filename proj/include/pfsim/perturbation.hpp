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

#include <array>
#include <optional>

#include "pfsim/circuit.hpp"

namespace pfsim {

// Fourth-order Schrieffer-Wolff static coefficients. Valid far from the
// qubit-qubit and qubit-coupler straddling poles; `pole` marks parameter
// points where a resonance denominator vanishes and the closed forms are
// meaningless (the numeric paths stay finite there).
struct SwtCoefficients {
  double zetaS1_khz = 0.0;
  double zetaS2_khz = 0.0;
  double zetaS_khz = 0.0;
  double gEff_mhz = 0.0;
  bool pole = false;
};

// Effective qubit-qubit coupling, direct plus coupler-mediated
// (counter-rotating terms included), in MHz.
double g_eff_mhz(const CircuitParams& p);

SwtCoefficients swt_static_coefficients(const CircuitParams& p);

// Closed-form decoupling coupler frequency (GHz). Empty when the
// capacitance ratios admit no real solution (e.g. device 1).
std::optional<double> idle_frequency_perturbative(const CapacitanceModel& m,
                                                  const CircuitParams& p);

// Residual static ZZ offset left at the perturbative decoupling frequency,
// 8 g12^2 deltaC / (omega1 + omega2 - 2 omegaCI)^2, in kHz.
double idle_offset_khz(const CircuitParams& p, double omegaCI_ghz);

// Dimensionless leading-order transition rates for the simplified circuit
// g1c = g2c = g, g12 = 0, delta1 = delta2 = delta. Index k holds lambda_{k+1}.
std::array<double, 11> transition_rates(const CircuitParams& p);

}  // namespace pfsim
