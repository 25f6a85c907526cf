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

#include <functional>
#include <memory>
#include <optional>
#include <utility>
#include <vector>

#include "pfsim/block.hpp"
#include "pfsim/perturbation.hpp"

namespace pfsim {

// One point of a coupler-frequency sweep. `masked` marks points where
// dressed labeling failed (avoided crossing); such samples carry no value.
struct ZZSample {
  double omegaC_ghz = 0.0;
  double zeta_khz = 0.0;
  double gEff_mhz = 0.0;
  bool masked = false;
};

// A ZZ-free point. Type I is a smooth sign change (bracketed and polished);
// type II sits between two samples of large opposite-sign |zeta| and marks a
// divergence-like flip, not an operating point.
struct ZeroCrossing {
  double omegaC_ghz = 0.0;
  bool typeII = false;
  double residual_khz = 0.0;
};

struct SweepResult {
  std::vector<ZZSample> samples;
  std::vector<ZeroCrossing> zeros;
};

struct SweepOptions {
  double start_ghz = 4.3;
  double stop_ghz = 7.0;
  double step_ghz = 0.005;
  Diagonalizer method = Diagonalizer::kExact;
  TruncationSpec trunc{};
  // Re-derive couplings from capacitance ratios as omega_c moves; the
  // ratios are taken from the input couplings at omegaRef.
  bool covaryCouplings = true;
  double omegaRef_ghz = 4.8;
  // |zeta| beyond this on both sides of an un-bracketed flip marks type II.
  double typeIIThreshold_khz = 50.0;
  double bisectTol_ghz = 1e-5;
};

// Apply the sqrt-frequency coupling model at the requested coupler
// frequency when co-variation is on; otherwise just retune the coupler.
CircuitParams tuned_params(const CircuitParams& base, double omegaC_ghz,
                           const SweepOptions& opt);

// Static ZZ as a function of coupler frequency with all sign changes
// bracketed, polished, and classified.
SweepResult static_zz_sweep(const CircuitParams& params, const SweepOptions& opt);

// Static ZZ at a single point via the requested method, in kHz.
double static_zz_at(const CircuitParams& params, const TruncationSpec& trunc,
                    Diagonalizer method);

// Numeric effective qubit-qubit coupling: half the minimum splitting of the
// dressed |100>/|001> pair as qubit 1 is tuned through resonance with
// qubit 2 at fixed coupler parameters. Returns MHz (non-negative).
double numeric_geff_mhz(const CircuitParams& params, const TruncationSpec& trunc);

struct IdlePoint {
  std::optional<double> omegaCI_ghz;              // numeric
  std::optional<double> omegaCIPerturbative_ghz;  // closed form
  double residualZZ_khz = 0.0;
  double residualGeff_mhz = 0.0;
};

// Decoupling coupler frequency: closed form where it exists, numeric value
// from the static-ZZ zero nearest the perturbative seed (or nearest the
// mean qubit frequency when no closed form exists). Absent fields stay
// empty rather than holding fabricated values.
IdlePoint find_idle_point(const CircuitParams& params, const CapacitanceModel& cap,
                          const SweepOptions& opt);

// Total driven ZZ and the gate rate at one operating point.
struct DrivenPoint {
  double zeta_khz = 0.0;    // total
  double zetaS_khz = 0.0;   // static part
  double zetaD_khz = 0.0;   // drive-induced part
  double alphaZX_mhz = 0.0;
  double ix_mhz = 0.0;
  double iy_mhz = 0.0;
  double zy_mhz = 0.0;
};

DrivenPoint total_zz(const RotatingFrame& frame, double omega_mhz);
DrivenPoint total_zz(const CircuitParams& params, const TruncationSpec& trunc,
                     const DriveSpec& drive);

// All amplitudes in (0, maxOmega] where the total ZZ vanishes, found by
// sign bracketing on a fixed grid plus bisection. Empty result = no
// dynamic freedom at this coupler frequency.
std::vector<double> freedom_amplitudes(const RotatingFrame& frame, double maxOmega_mhz = 100.0,
                                       double step_mhz = 0.5, double tol_mhz = 0.01);

struct FreedomSample {
  double omegaC_ghz = 0.0;
  double omegaStar_mhz = 0.0;   // smallest positive root
  double alphaZXAtStar_mhz = 0.0;
  bool hasRoot = false;
  bool masked = false;
};

struct FreedomCurve {
  std::vector<FreedomSample> samples;
  // Closed intervals of omega_c with no freedom amplitude.
  std::vector<std::pair<double, double>> gaps;
};

FreedomCurve freedom_curve(const CircuitParams& params, const SweepOptions& opt,
                           double maxOmega_mhz = 100.0, double omegaStep_mhz = 0.5);

// Driven analogue of static_zz_sweep: zeros of zeta(omega_c) at fixed
// drive amplitude (type I only).
std::vector<ZeroCrossing> driven_zz_zeros(const CircuitParams& params, const SweepOptions& opt,
                                          double omega_mhz);

// Smallest amplitude in [lo, hi] at which the number of type-I zeros in
// the sweep window differs from the count at `lo`, resolved by bisection
// to `tol`. Empty when the count never changes.
std::optional<double> critical_amplitude(const CircuitParams& params, const SweepOptions& opt,
                                         double loOmega_mhz, double hiOmega_mhz,
                                         double tol_mhz = 0.5);

// Power-law decomposition of the drive dependence:
//   zeta_d(Omega) ~ eta2 Omega^2 + eta_a Omega^a,
//   alpha_ZX(Omega) ~ mu1 Omega + mu_b Omega^b.
struct ExponentFit {
  double eta2 = 0.0;  // kHz/MHz^2
  double etaA = 0.0;
  double a = 0.0;
  double mu1 = 0.0;  // MHz/MHz
  double muB = 0.0;
  double b = 0.0;
  bool etaReliable = false;
  bool aReliable = false;
  bool bReliable = false;
  double residualA = 0.0;  // rms log-residual of the a fit
  double residualB = 0.0;
};

// Fit from explicit samples (Omega in MHz, zeta_d in kHz, alpha_ZX in MHz).
// `smallOmegaMax` bounds the window used for the leading coefficients.
ExponentFit fit_exponents_from_samples(const std::vector<double>& omega_mhz,
                                       const std::vector<double>& zetaD_khz,
                                       const std::vector<double>& alphaZX_mhz,
                                       double smallOmegaMax_mhz = 4.0);

// Evaluate the model at the given amplitudes and fit.
ExponentFit fit_exponents(const CircuitParams& params, const TruncationSpec& trunc,
                          const std::vector<double>& omegaSamples_mhz,
                          double smallOmegaMax_mhz = 4.0);

// Ramsey-like conditional-phase fringe cos(2 pi zeta tau_p).
double conditional_phase_fringe(double zeta_khz, double tauP_us);

// One cell of the 2D freedom map over (Delta12, omega_c).
struct MapCell {
  double delta12_ghz = 0.0;
  double omegaC_ghz = 0.0;
  double zeta_khz = 0.0;
  double gEff_mhz = 0.0;
  bool masked = false;
};

struct ZeroBoundary {
  std::vector<std::pair<double, double>> points;  // (delta12, omega_c)
  bool typeII = false;
};

struct FreedomMap {
  std::vector<MapCell> cells;  // row-major, omega_c outer, delta12 inner
  int nDelta12 = 0;
  int nOmegaC = 0;
  std::vector<ZeroBoundary> zzBoundaries;
  std::vector<std::pair<double, double>> gEffFreePoints;
};

// zeta over a (Delta12, omega_c) grid at fixed drive amplitude. Delta12 is
// scanned by moving qubit 1 with qubit 2 fixed; couplings co-vary when the
// options say so. Omega = 0 reduces to the static map.
FreedomMap freedom_map_2d(const CircuitParams& paramsTemplate, const SweepOptions& opt,
                          double delta12Start_ghz, double delta12Stop_ghz, int nDelta12,
                          int nOmegaC, double omega_mhz);

}  // namespace pfsim
