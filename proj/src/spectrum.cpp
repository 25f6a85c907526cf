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

#include "pfsim/spectrum.hpp"

#include <algorithm>
#include <cmath>
#include <complex>

namespace pfsim {

namespace {

using Cplx = std::complex<double>;

// Closest-to-identity unitary diagonalizing the Hermitian 2x2 pivot block.
Eigen::Matrix2cd pivot_rotation(const Cplx& hpp, const Cplx& hpq, const Cplx& hqq) {
  Eigen::Matrix2cd block;
  block << hpp, hpq, std::conj(hpq), hqq;
  Eigen::SelfAdjointEigenSolver<Eigen::Matrix2cd> es(block);
  Eigen::Matrix2cd r = es.eigenvectors();
  if (std::abs(r(0, 0)) < std::abs(r(0, 1))) {
    r.col(0).swap(r.col(1));
  }
  for (int c = 0; c < 2; ++c) {
    const Cplx d = r(c, c);
    const double a = std::abs(d);
    if (a > 0) r.col(c) *= std::conj(d) / a;
  }
  return r;
}

}  // namespace

long jacobi_sweep_to_tolerance(Eigen::MatrixXcd& h, Eigen::MatrixXcd& v, double tol,
                               long rotationCap) {
  const int n = int(h.rows());
  if (n < 2) return 0;

  // Per-row maximum over the strict upper triangle.
  std::vector<double> rowMax(n, -1.0);
  std::vector<int> rowArg(n, -1);
  auto recomputeRow = [&](int i) {
    rowMax[i] = -1.0;
    rowArg[i] = -1;
    for (int j = i + 1; j < n; ++j) {
      const double a = std::abs(h(i, j));
      if (a > rowMax[i]) {
        rowMax[i] = a;
        rowArg[i] = j;
      }
    }
  };
  for (int i = 0; i < n; ++i) recomputeRow(i);

  long rotations = 0;
  while (true) {
    int p = 0;
    for (int i = 1; i < n; ++i) {
      if (rowMax[i] > rowMax[p]) p = i;
    }
    if (rowMax[p] < tol) break;
    if (rotations >= rotationCap) {
      throw NonConvergenceError("jacobi iteration did not converge within rotation cap");
    }
    const int q = rowArg[p];

    const Eigen::Matrix2cd r = pivot_rotation(h(p, p), h(p, q), h(q, q));
    const Eigen::Matrix2cd rAdj = r.adjoint();

    for (int j = 0; j < n; ++j) {
      const Cplx a = h(p, j), b = h(q, j);
      h(p, j) = rAdj(0, 0) * a + rAdj(0, 1) * b;
      h(q, j) = rAdj(1, 0) * a + rAdj(1, 1) * b;
    }
    for (int i = 0; i < n; ++i) {
      const Cplx a = h(i, p), b = h(i, q);
      h(i, p) = a * r(0, 0) + b * r(1, 0);
      h(i, q) = a * r(0, 1) + b * r(1, 1);
    }
    for (int i = 0; i < n; ++i) {
      const Cplx a = v(i, p), b = v(i, q);
      v(i, p) = a * r(0, 0) + b * r(1, 0);
      v(i, q) = a * r(0, 1) + b * r(1, 1);
    }
    h(p, q) = 0.0;
    h(q, p) = 0.0;
    h(p, p) = Cplx(h(p, p).real(), 0.0);
    h(q, q) = Cplx(h(q, q).real(), 0.0);

    recomputeRow(p);
    recomputeRow(q);
    for (int i = 0; i < n; ++i) {
      if (i == p || i == q) continue;
      if (rowArg[i] == p || rowArg[i] == q) {
        recomputeRow(i);
      } else {
        for (int j : {p, q}) {
          if (j > i) {
            const double a = std::abs(h(i, j));
            if (a > rowMax[i]) {
              rowMax[i] = a;
              rowArg[i] = j;
            }
          }
        }
      }
    }
    ++rotations;
  }
  return rotations;
}

void assign_labels(Eigen::VectorXd& evals, Eigen::MatrixXcd& evecs,
                   const Eigen::VectorXd& bareEnergies, double minOverlap,
                   std::vector<double>* overlapOut, const std::vector<char>* strictMask) {
  const int n = int(evals.size());

  struct Candidate {
    double overlap;
    double energyDist;
    int label;
    int eig;
  };
  std::vector<Candidate> cands;
  cands.reserve(size_t(n) * n);
  for (int b = 0; b < n; ++b) {
    for (int k = 0; k < n; ++k) {
      cands.push_back({std::norm(evecs(b, k)), std::abs(evals[k] - bareEnergies[b]), b, k});
    }
  }
  std::sort(cands.begin(), cands.end(), [](const Candidate& x, const Candidate& y) {
    if (x.overlap != y.overlap) return x.overlap > y.overlap;
    if (x.energyDist != y.energyDist) return x.energyDist < y.energyDist;
    if (x.label != y.label) return x.label < y.label;
    return x.eig < y.eig;
  });

  std::vector<int> eigOfLabel(n, -1), labelOfEig(n, -1);
  int assigned = 0;
  for (const Candidate& c : cands) {
    if (eigOfLabel[c.label] >= 0 || labelOfEig[c.eig] >= 0) continue;
    eigOfLabel[c.label] = c.eig;
    labelOfEig[c.eig] = c.label;
    if (++assigned == n) break;
  }

  for (int b = 0; b < n; ++b) {
    if (strictMask && !(*strictMask)[b]) continue;
    const int k = eigOfLabel[b];
    const double ov = std::norm(evecs(b, k));
    if (ov < minOverlap) {
      // Report the label whose preferred eigenvector crowded this one out.
      int bestEig = 0;
      double best = -1.0;
      for (int kk = 0; kk < n; ++kk) {
        const double o = std::norm(evecs(b, kk));
        if (o > best) {
          best = o;
          bestEig = kk;
        }
      }
      throw LabelingError("dressed-state labeling ambiguous (near-degeneracy)", b,
                          labelOfEig[bestEig]);
    }
  }

  Eigen::VectorXd evalsOut(n);
  Eigen::MatrixXcd evecsOut(n, n);
  if (overlapOut) overlapOut->resize(n);
  for (int b = 0; b < n; ++b) {
    const int k = eigOfLabel[b];
    evalsOut[b] = evals[k];
    Eigen::VectorXcd col = evecs.col(k);
    const Cplx d = col[b];
    const double a = std::abs(d);
    if (a > 0) col *= std::conj(d) / a;
    evecsOut.col(b) = col;
    if (overlapOut) (*overlapOut)[b] = a * a;
  }
  evals = evalsOut;
  evecs = evecsOut;
}

double LabeledSpectrum::dressed_omega1_ghz() const {
  return energy_ghz({1, 0, 0}) - energy_ghz({0, 0, 0});
}

double LabeledSpectrum::dressed_omega2_ghz() const {
  return energy_ghz({0, 0, 1}) - energy_ghz({0, 0, 0});
}

double LabeledSpectrum::static_zz_khz() const {
  const double zz = energy_rad({1, 0, 1}) - energy_rad({0, 0, 1}) - energy_rad({1, 0, 0}) +
                    energy_rad({0, 0, 0});
  return khz_from_rad(zz);
}

namespace {

Eigen::VectorXd bare_energy_vector(const CircuitParams& p, const TruncationSpec& t) {
  Eigen::VectorXd e(t.dimension());
  for (int i = 0; i < t.dimension(); ++i) {
    e[i] = bare_label_energy(p, BareLabel::from_index(i, t));
  }
  return e;
}

std::vector<char> strict_mask(const TruncationSpec& t, int strictTotalMax) {
  std::vector<char> mask(size_t(t.dimension()));
  for (int i = 0; i < t.dimension(); ++i) {
    mask[size_t(i)] = BareLabel::from_index(i, t).total() <= strictTotalMax;
  }
  return mask;
}

}  // namespace

LabeledSpectrum diagonalize_exact(const Eigen::MatrixXcd& h, const CircuitParams& p,
                                  const TruncationSpec& t, double minOverlap,
                                  int strictTotalMax) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(h);
  LabeledSpectrum s;
  s.energies = es.eigenvalues();
  s.vectors = es.eigenvectors();
  s.trunc = t;
  s.diagonalizer = Diagonalizer::kExact;
  const std::vector<char> mask = strict_mask(t, strictTotalMax);
  assign_labels(s.energies, s.vectors, bare_energy_vector(p, t), minOverlap, &s.labelOverlap,
                &mask);
  return s;
}

LabeledSpectrum diagonalize_npad(const Eigen::MatrixXcd& h, const CircuitParams& p,
                                 const TruncationSpec& t, double tol, long rotationCap,
                                 double minOverlap, int strictTotalMax) {
  Eigen::MatrixXcd d = h;
  Eigen::MatrixXcd v = Eigen::MatrixXcd::Identity(h.rows(), h.cols());
  jacobi_sweep_to_tolerance(d, v, tol, rotationCap);

  LabeledSpectrum s;
  s.energies = d.diagonal().real();
  s.vectors = v;
  s.trunc = t;
  s.diagonalizer = Diagonalizer::kNpad;
  const std::vector<char> mask = strict_mask(t, strictTotalMax);
  assign_labels(s.energies, s.vectors, bare_energy_vector(p, t), minOverlap, &s.labelOverlap,
                &mask);
  return s;
}

}  // namespace pfsim
