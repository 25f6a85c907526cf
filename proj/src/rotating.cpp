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

#include "pfsim/rotating.hpp"

namespace pfsim {

void RotatingFrame::build_masks(const LabeledSpectrum& s, const Eigen::MatrixXcd& bareOp,
                                Eigen::MatrixXcd& lower) {
  const int dim = s.trunc.dimension();
  const Eigen::MatrixXcd dressed = s.vectors.adjoint() * bareOp * s.vectors;
  lower = Eigen::MatrixXcd::Zero(dim, dim);
  for (int col = 0; col < dim; ++col) {
    const int nCol = BareLabel::from_index(col, s.trunc).total();
    for (int row = 0; row < dim; ++row) {
      const int nRow = BareLabel::from_index(row, s.trunc).total();
      // Keep only de-excitations here; excitations come from the adjoint.
      if (nRow - nCol == -1) lower(row, col) = dressed(row, col);
    }
  }
}

RotatingFrame::RotatingFrame(const CircuitParams& params, const TruncationSpec& trunc,
                             const DriveSpec& drive)
    : trunc_(trunc),
      spectrum_(diagonalize_exact(build_static_hamiltonian(params, trunc), params, trunc)) {
  drive.validate();
  omegaD_ = drive.omegaD > 0.0 ? rad_from_ghz(drive.omegaD)
                               : rad_from_ghz(spectrum_.dressed_omega2_ghz());

  const int dim = trunc_.dimension();
  diag_.resize(dim);
  for (int b = 0; b < dim; ++b) {
    diag_[b] = spectrum_.energies[b] - omegaD_ * BareLabel::from_index(b, trunc_).total();
  }
  const double e0 = diag_[BareLabel{0, 0, 0}.index(trunc_)];
  diag_.array() -= e0;

  DriveSpec ctrl = drive;
  ctrl.drivenSubsystem = 0;
  DriveSpec tgt = drive;
  tgt.drivenSubsystem = 2;
  build_masks(spectrum_, build_drive_operator(ctrl, trunc_), ctrlLower_);
  build_masks(spectrum_, build_drive_operator(tgt, trunc_), tgtLower_);
}

Eigen::MatrixXcd RotatingFrame::hamiltonian(double omegaControl_mhz) const {
  return hamiltonian(std::complex<double>(omegaControl_mhz, 0.0), 0.0);
}

Eigen::MatrixXcd RotatingFrame::hamiltonian(std::complex<double> controlAmp_mhz,
                                            std::complex<double> targetAmp_mhz) const {
  const std::complex<double> ac = 0.5 * rad_from_mhz(1.0) * controlAmp_mhz;
  const std::complex<double> at = 0.5 * rad_from_mhz(1.0) * targetAmp_mhz;
  Eigen::MatrixXcd h = ac * ctrlLower_ + std::conj(ac) * ctrlLower_.adjoint();
  if (targetAmp_mhz != std::complex<double>(0.0)) {
    h += at * tgtLower_ + std::conj(at) * tgtLower_.adjoint();
  }
  h.diagonal() += diag_.cast<std::complex<double>>();
  return h;
}

}  // namespace pfsim
