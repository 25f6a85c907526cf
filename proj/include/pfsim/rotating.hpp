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

#include <complex>

#include "pfsim/spectrum.hpp"

namespace pfsim {

// Time-independent rotating-frame description of a driven circuit.
//
// The static Hamiltonian is fully diagonalized (dressed basis, label
// order), every subsystem is rotated at the drive frequency with
// W = exp(-i omega_d t n) and terms still oscillating after the rotation
// (at omega_d and above) are dropped. What remains is
//     H_r(Omega) = diag(E_label - omega_d N_label) + (Omega/2) M,
// where M is the dressed charge operator masked to |dN| = 1 transitions.
//
// A second tone on the target qubit (the cancellation pulse for the
// removable single-qubit components) enters through `hamiltonian`'s
// complex target amplitude.
class RotatingFrame {
 public:
  RotatingFrame(const CircuitParams& params, const TruncationSpec& trunc,
                const DriveSpec& drive);

  const LabeledSpectrum& spectrum() const { return spectrum_; }
  double drive_frequency_ghz() const { return ghz_from_rad(omegaD_); }
  double static_zz_khz() const { return spectrum_.static_zz_khz(); }
  const TruncationSpec& trunc() const { return trunc_; }

  // H_r with the control tone only (rad/ns). Omega in MHz.
  Eigen::MatrixXcd hamiltonian(double omegaControl_mhz) const;

  // H_r with control and target tones; amplitudes are complex MHz
  // (phase = tone phase).
  Eigen::MatrixXcd hamiltonian(std::complex<double> controlAmp_mhz,
                               std::complex<double> targetAmp_mhz) const;

  // Masked dressed charge operator of one subsystem, including the
  // rotating-wave factor 1/2 (dimensionless); hamiltonian() scales it by
  // the angular amplitude. Lower/upper parts are split so complex
  // amplitudes can weight them separately.
  const Eigen::MatrixXcd& control_mask_lower() const { return ctrlLower_; }
  const Eigen::MatrixXcd& target_mask_lower() const { return tgtLower_; }

  const Eigen::VectorXd& rotating_diagonal() const { return diag_; }

 private:
  static void build_masks(const LabeledSpectrum& s, const Eigen::MatrixXcd& bareOp,
                          Eigen::MatrixXcd& lower);

  TruncationSpec trunc_;
  LabeledSpectrum spectrum_;
  double omegaD_;          // rad/ns
  Eigen::VectorXd diag_;   // rad/ns, label order
  Eigen::MatrixXcd ctrlLower_;  // elements with N_row - N_col = -1
  Eigen::MatrixXcd tgtLower_;
};

}  // namespace pfsim
