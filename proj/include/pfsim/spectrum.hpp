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
#include <optional>
#include <stdexcept>
#include <vector>

#include "pfsim/circuit.hpp"

namespace pfsim {

enum class Diagonalizer { kExact, kNpad, kSwt };

// Raised when the greedy maximum-overlap rule cannot attach dressed states
// to bare labels, i.e. near an avoided crossing where labels are ill-defined.
struct LabelingError : std::runtime_error {
  LabelingError(const std::string& msg, int labelA, int labelB)
      : std::runtime_error(msg), labelA(labelA), labelB(labelB) {}
  int labelA;
  int labelB;
};

struct NonConvergenceError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Eigendecomposition with dressed states attached to bare labels.
// Column b of `vectors` and entry b of `energies` belong to the bare basis
// index b (lexicographic BareLabel order). Energies are in rad/ns.
struct LabeledSpectrum {
  Eigen::VectorXd energies;
  Eigen::MatrixXcd vectors;
  std::vector<double> labelOverlap;  // |<bare_b|dressed_b>|^2 per label
  TruncationSpec trunc;
  Diagonalizer diagonalizer = Diagonalizer::kExact;

  double energy_rad(const BareLabel& b) const { return energies[b.index(trunc)]; }
  double energy_ghz(const BareLabel& b) const { return ghz_from_rad(energy_rad(b)); }

  // Dressed qubit frequencies (GHz) from single-excitation splittings.
  double dressed_omega1_ghz() const;
  double dressed_omega2_ghz() const;

  // Static ZZ strength E(101) - E(001) - E(100) + E(000) in kHz.
  double static_zz_khz() const;
};

// Greedy maximum-overlap assignment of eigenvectors to bare labels, ties
// broken by bare-energy proximity. Columns of the returned matrix are
// reordered to label order and phase-fixed so the labelled component is
// real and positive. Throws LabelingError when the best available overlap
// for a label marked strict drops below `minOverlap`; labels outside the
// mask keep their best assignment even when heavily hybridized. A null
// mask makes every label strict.
void assign_labels(Eigen::VectorXd& evals, Eigen::MatrixXcd& evecs,
                   const Eigen::VectorXd& bareEnergies, double minOverlap,
                   std::vector<double>* overlapOut,
                   const std::vector<char>* strictMask = nullptr);

// `strictTotalMax`: only labels with total occupation up to this bound must
// clear the overlap threshold. Analysis quantities read energies of
// low-excitation labels; highly excited levels hybridize strongly at some
// coupler frequencies and for them the assignment is just a basis ordering.
LabeledSpectrum diagonalize_exact(const Eigen::MatrixXcd& h, const CircuitParams& p,
                                  const TruncationSpec& t, double minOverlap = 0.25,
                                  int strictTotalMax = 2);

// Iterated 2x2 closest-to-identity Givens rotations zeroing the largest
// off-diagonal element until all off-diagonal magnitudes fall below `tol`
// (same units as h). `rotationCap` bounds the iteration count.
LabeledSpectrum diagonalize_npad(const Eigen::MatrixXcd& h, const CircuitParams& p,
                                 const TruncationSpec& t, double tol = 1e-12,
                                 long rotationCap = 1000000, double minOverlap = 0.25,
                                 int strictTotalMax = 2);

// In-place Jacobi iteration on an arbitrary Hermitian matrix; accumulates
// the transform into `v` (v <- v * R at each step). Returns the rotation
// count. Exposed separately so the iteration can be tested on its own.
long jacobi_sweep_to_tolerance(Eigen::MatrixXcd& h, Eigen::MatrixXcd& v, double tol,
                               long rotationCap);

}  // namespace pfsim
