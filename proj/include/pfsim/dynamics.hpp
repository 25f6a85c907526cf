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
#include <functional>

#include "pfsim/analysis.hpp"
#include "pfsim/pulse.hpp"

namespace pfsim {

// dY/dt = f(t, Y); the callback writes the derivative into its last
// argument. Matrix-valued state covers stacked state vectors and stacked
// density operators alike.
using DerivFn = std::function<void(double, const Eigen::MatrixXcd&, Eigen::MatrixXcd&)>;

// Adaptive Dormand-Prince 5(4). Returns the number of accepted steps.
long integrate_dopri5(const DerivFn& f, double t0, double t1, Eigen::MatrixXcd& y,
                      double relTol = 1e-9, double absTol = 1e-12);

// Fixed-step classical RK4; the final partial step is shortened to land on t1.
void integrate_rk4(const DerivFn& f, double t0, double t1, double step, Eigen::MatrixXcd& y);

// Dense Lindblad right-hand side (units rad/ns for h, 1/sqrt(ns) folded
// into the collapse operators).
Eigen::MatrixXcd lindblad_rhs(const Eigen::MatrixXcd& h,
                              const std::vector<Eigen::MatrixXcd>& collapse,
                              const Eigen::MatrixXcd& rho);

// Constant-Hamiltonian Lindblad propagation by fixed-step RK4. Small
// systems and reference solutions only; the schedule simulators below use
// specialized paths.
Eigen::MatrixXcd evolve_open_constant(const Eigen::MatrixXcd& h,
                                      const std::vector<Eigen::MatrixXcd>& collapse,
                                      Eigen::MatrixXcd rho, double t_ns, double step_ns);

// Per-qubit relaxation (lowering operator, rate 1/T1) and pure dephasing
// (number operator, rate 2/Tphi) in the bare product basis, with rates
// folded in so D[C] needs no extra factors.
std::vector<Eigen::MatrixXcd> collapse_operators(const CoherenceSpec& c,
                                                 const TruncationSpec& t);

// Closed lab-frame evolution of stacked state columns under the multilevel
// Hamiltonian with a moving coupler frequency (couplings co-varying per
// `opt`) and an optional charge drive on qubit 1. Integration happens in
// the interaction picture of the bare diagonal at `refOmegaC_ghz`;
// inputs/outputs are lab-frame amplitudes at t0/t1.
Eigen::MatrixXcd evolve_closed(const CircuitParams& base, const SweepOptions& opt,
                               const TruncationSpec& trunc,
                               const std::function<double(double)>& omegaC_of_t,
                               const std::function<double(double)>& driveAmp_mhz_of_t,
                               double omegaD_ghz, double refOmegaC_ghz, double t0, double t1,
                               Eigen::MatrixXcd psiColumns, double relTol = 1e-9);

struct RampStudyPoint {
  double tau0_ns = 0.0;
  double f01 = 0.0;  // round-trip retention starting from dressed |001>
  double f10 = 0.0;  // dressed |100>
  double f11 = 0.0;  // dressed |101>
  double worst() const;
};

// Round trip omegaCI -> omegaCE -> omegaCI with the given envelope shape,
// one point per requested ramp duration. Each fidelity is the population
// left in the dressed computational subspace at the idle point (1 minus
// leakage); coherent exchange inside the subspace does not count as loss.
std::vector<RampStudyPoint> ramp_round_trip_study(const CircuitParams& params,
                                                  const SweepOptions& opt,
                                                  const TruncationSpec& trunc, RampShape shape,
                                                  double omegaCI_ghz, double omegaCE_ghz,
                                                  const std::vector<double>& tau0s_ns,
                                                  double relTol = 1e-9);

struct GateErrorPoint {
  double tg_ns = 0.0;
  double omega_mhz = 0.0;   // flat-top amplitude
  double omegaC_ghz = 0.0;  // entangling coupler frequency (freedom-curve paths)
  double zeta_khz = 0.0;    // residual total ZZ at that amplitude
  double error = 0.0;       // 1 - average gate fidelity vs ideal ZX90
  bool feasible = true;
};

// Open-system ZX90 error at a fixed entangling coupler frequency for each
// requested gate length. The flat-top amplitude is calibrated so the
// integrated ZX angle over the whole envelope (edges included) is pi/4;
// gate lengths whose required rate is out of reach are marked infeasible.
// The residual ZZ is whatever the calibrated amplitude leaves.
std::vector<GateErrorPoint> zx90_gate_error(const CircuitParams& paramsAtE,
                                            const TruncationSpec& trunc,
                                            const CoherenceSpec& coherence,
                                            const std::vector<double>& tg_ns,
                                            double rise_ns = 20.0, double fall_ns = 20.0,
                                            bool cancelSpurious = true,
                                            double edgeStep_ns = 0.01);

// ZZ-free operating point at one coupler frequency: the smallest freedom
// amplitude (total ZZ zero) together with the gate length whose integrated
// ZX angle is pi/4 at that amplitude. Infeasible when no freedom amplitude
// exists at or below maxOmega, or the amplitude overshoots the angle
// within the edges alone.
GateErrorPoint zx90_freedom_schedule(const CircuitParams& base, const SweepOptions& opt,
                                     const TruncationSpec& trunc, double omegaCE_ghz,
                                     double maxOmega_mhz = 100.0, double rise_ns = 20.0,
                                     double fall_ns = 20.0);

// Open-system ZX90 error along the freedom curve: at each coupler
// frequency the drive amplitude is the freedom amplitude (total ZZ zero)
// and the gate length follows from the pi/4 angle condition, tracing the
// error-versus-gate-length tradeoff of ZZ-free operation.
std::vector<GateErrorPoint> zx90_freedom_gate_error(
    const CircuitParams& base, const SweepOptions& opt, const TruncationSpec& trunc,
    const CoherenceSpec& coherence, const std::vector<double>& omegaCE_ghz,
    double maxOmega_mhz = 100.0, double rise_ns = 20.0, double fall_ns = 20.0,
    bool cancelSpurious = true, double edgeStep_ns = 0.01);

struct GateResult {
  std::array<double, 4> stateFidelities{};  // inputs |00>,|01>,|10>,|11>
  double avgGateFidelity = 0.0;
  double leakage = 0.0;
  double idleToIdleError = 0.0;
};

// Idle -> entangled -> idle sequence in the lab frame with Lindblad
// decoherence: coupler ramp down, ZX90 drive segment, ramp up. Compared
// against the ideal ZX90 in the optimal virtual-Z frame.
GateResult full_pf_cycle(const CircuitParams& params, const SweepOptions& opt,
                         const PFCycleSchedule& schedule, const CoherenceSpec& coherence,
                         const TruncationSpec& trunc, double step_ns = 0.004,
                         bool cancelSpurious = true);

// pi/2 rotation exp(-i sign pi/4 ZX) on the computational block.
Eigen::Matrix4cd zx90_unitary(double sign);

// Average gate fidelity of a map given by its images of the 16 two-qubit
// Paulis (projected onto the computational block), maximized over virtual-Z
// frames on both qubits and over the ZX rotation sign.
double average_gate_fidelity_zx90(const std::array<Eigen::Matrix4cd, 16>& pauliImages);

// Same map, maximized over ideal single-qubit corrections before and after
// the gate (and the ZX sign), seeded from the virtual-Z optimum. A plain
// always-on cross-resonance tone leaves the driven qubit rotated about a
// tilted axis; that deterministic local rotation is compensated here
// instead of being charged to the entangling gate.
double average_gate_fidelity_zx90_local(const std::array<Eigen::Matrix4cd, 16>& pauliImages);

// Nielsen's average-fidelity formula for a fixed ideal unitary.
double average_gate_fidelity(const std::array<Eigen::Matrix4cd, 16>& pauliImages,
                             const Eigen::Matrix4cd& ideal);

}  // namespace pfsim
