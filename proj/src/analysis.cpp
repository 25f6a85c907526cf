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

#include "pfsim/analysis.hpp"

#include <algorithm>
#include <cmath>

namespace pfsim {

namespace {

// Bisection on a sign change of f over [lo, hi]; f(lo) and f(hi) must have
// opposite signs. Returns the root abscissa to tolerance `tol`.
template <typename F>
double bisect(F&& f, double lo, double hi, double fLo, double tol) {
  while (hi - lo > tol) {
    const double mid = 0.5 * (lo + hi);
    const double fMid = f(mid);
    if ((fMid < 0.0) == (fLo < 0.0)) {
      lo = mid;
      fLo = fMid;
    } else {
      hi = mid;
    }
  }
  return 0.5 * (lo + hi);
}

// Ordinary least squares y = intercept + slope * x.
void linear_fit(const std::vector<double>& x, const std::vector<double>& y, double& intercept,
                double& slope) {
  const double n = static_cast<double>(x.size());
  double sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0;
  for (size_t i = 0; i < x.size(); ++i) {
    sx += x[i];
    sy += y[i];
    sxx += x[i] * x[i];
    sxy += x[i] * y[i];
  }
  const double den = n * sxx - sx * sx;
  slope = den != 0.0 ? (n * sxy - sx * sy) / den : 0.0;
  intercept = (sy - slope * sx) / n;
}

}  // namespace

CircuitParams tuned_params(const CircuitParams& base, double omegaC_ghz,
                           const SweepOptions& opt) {
  if (!opt.covaryCouplings) return base.with_coupler_frequency(omegaC_ghz);
  const CapacitanceModel cap = capacitance_from_couplings(base, opt.omegaRef_ghz);
  return couplings_from_capacitance(cap, base.with_coupler_frequency(omegaC_ghz));
}

double static_zz_at(const CircuitParams& params, const TruncationSpec& trunc,
                    Diagonalizer method) {
  if (method == Diagonalizer::kSwt) {
    const SwtCoefficients c = swt_static_coefficients(params);
    if (c.pole) throw std::domain_error("perturbative closed form hit a pole");
    return c.zetaS_khz;
  }
  const Eigen::MatrixXcd h = build_static_hamiltonian(params, trunc);
  const LabeledSpectrum s = method == Diagonalizer::kExact
                                ? diagonalize_exact(h, params, trunc)
                                : diagonalize_npad(h, params, trunc);
  return s.static_zz_khz();
}

SweepResult static_zz_sweep(const CircuitParams& params, const SweepOptions& opt) {
  SweepResult out;
  auto eval = [&](double wc) {
    return static_zz_at(tuned_params(params, wc, opt), opt.trunc, opt.method);
  };

  const int n = static_cast<int>(std::floor((opt.stop_ghz - opt.start_ghz) / opt.step_ghz)) + 1;
  out.samples.reserve(n);
  for (int i = 0; i < n; ++i) {
    ZZSample s;
    s.omegaC_ghz = opt.start_ghz + i * opt.step_ghz;
    s.gEff_mhz = g_eff_mhz(tuned_params(params, s.omegaC_ghz, opt));
    try {
      s.zeta_khz = eval(s.omegaC_ghz);
    } catch (const std::exception&) {
      s.masked = true;
    }
    out.samples.push_back(s);
  }

  for (size_t i = 1; i < out.samples.size(); ++i) {
    const ZZSample& a = out.samples[i - 1];
    const ZZSample& b = out.samples[i];
    if (a.masked || b.masked) continue;
    if ((a.zeta_khz < 0.0) == (b.zeta_khz < 0.0)) continue;
    ZeroCrossing z;
    if (std::abs(a.zeta_khz) > opt.typeIIThreshold_khz &&
        std::abs(b.zeta_khz) > opt.typeIIThreshold_khz) {
      z.typeII = true;
      z.omegaC_ghz = 0.5 * (a.omegaC_ghz + b.omegaC_ghz);
    } else {
      try {
        z.omegaC_ghz =
            bisect(eval, a.omegaC_ghz, b.omegaC_ghz, a.zeta_khz, opt.bisectTol_ghz);
        z.residual_khz = eval(z.omegaC_ghz);
      } catch (const std::exception&) {
        continue;  // labeling failed inside the bracket; drop the candidate
      }
    }
    out.zeros.push_back(z);
  }
  return out;
}

double numeric_geff_mhz(const CircuitParams& params, const TruncationSpec& trunc) {
  const std::array<int, 2> pair = {BareLabel{1, 0, 0}.index(trunc),
                                   BareLabel{0, 0, 1}.index(trunc)};
  auto splitting = [&](double omega1) {
    CircuitParams p = params;
    p.omega1 = omega1;
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(build_static_hamiltonian(p, trunc));
    // Pick the two eigenvectors with the largest weight on the
    // single-excitation qubit pair.
    int best = -1, second = -1;
    double wBest = -1.0, wSecond = -1.0;
    for (int k = 0; k < trunc.dimension(); ++k) {
      const double w =
          std::norm(es.eigenvectors()(pair[0], k)) + std::norm(es.eigenvectors()(pair[1], k));
      if (w > wBest) {
        second = best;
        wSecond = wBest;
        best = k;
        wBest = w;
      } else if (w > wSecond) {
        second = k;
        wSecond = w;
      }
    }
    return std::abs(es.eigenvalues()[best] - es.eigenvalues()[second]);
  };

  // Coarse scan through resonance, then golden-section refinement.
  const double center = params.omega2;
  const double half = 0.06;  // GHz
  double bestW = center, bestS = splitting(center);
  for (int i = -20; i <= 20; ++i) {
    const double w = center + half * i / 20.0;
    const double s = splitting(w);
    if (s < bestS) {
      bestS = s;
      bestW = w;
    }
  }
  double lo = bestW - half / 20.0, hi = bestW + half / 20.0;
  const double gr = 0.5 * (std::sqrt(5.0) - 1.0);
  double x1 = hi - gr * (hi - lo), x2 = lo + gr * (hi - lo);
  double f1 = splitting(x1), f2 = splitting(x2);
  while (hi - lo > 1e-6) {
    if (f1 < f2) {
      hi = x2;
      x2 = x1;
      f2 = f1;
      x1 = hi - gr * (hi - lo);
      f1 = splitting(x1);
    } else {
      lo = x1;
      x1 = x2;
      f1 = f2;
      x2 = lo + gr * (hi - lo);
      f2 = splitting(x2);
    }
  }
  return 0.5 * mhz_from_rad(std::min(f1, f2));
}

IdlePoint find_idle_point(const CircuitParams& params, const CapacitanceModel& cap,
                          const SweepOptions& opt) {
  IdlePoint out;
  out.omegaCIPerturbative_ghz = idle_frequency_perturbative(cap, params);
  if (!out.omegaCIPerturbative_ghz) return out;  // no protected idle point

  const double seed = *out.omegaCIPerturbative_ghz;
  auto eval = [&](double wc) {
    return static_zz_at(tuned_params(params, wc, opt), opt.trunc, Diagonalizer::kExact);
  };

  // Expand outward from the perturbative seed until the static ZZ changes
  // sign, then bisect. The nearest sign change is the numeric idle point.
  // The seed itself may sit where labeling fails; start from the nearest
  // evaluable point instead.
  const double step = opt.step_ghz;
  double seedW = seed, fSeed = 0.0;
  bool haveSeed = false;
  for (int i = 0; !haveSeed && i <= 40; ++i) {
    for (const double wc : {seed + i * step, seed - i * step}) {
      try {
        fSeed = eval(wc);
        seedW = wc;
        haveSeed = true;
      } catch (const std::exception&) {
      }
      if (haveSeed || i == 0) break;
    }
  }
  if (!haveSeed) return out;
  double root = seedW;
  bool found = std::abs(fSeed) < 1e-9;
  for (int i = 1; !found && i <= 120; ++i) {
    for (const double wc : {seedW + i * step, seedW - i * step}) {
      double f;
      try {
        f = eval(wc);
      } catch (const std::exception&) {
        continue;
      }
      if ((f < 0.0) != (fSeed < 0.0)) {
        const double inner = wc > seedW ? wc - step : wc + step;
        double fInner;
        try {
          fInner = eval(inner);
        } catch (const std::exception&) {
          fInner = fSeed;
        }
        root = wc > seedW ? bisect(eval, inner, wc, fInner, opt.bisectTol_ghz)
                          : bisect(eval, wc, inner, f, opt.bisectTol_ghz);
        found = true;
        break;
      }
    }
  }
  if (!found) return out;

  out.omegaCI_ghz = root;
  out.residualZZ_khz = eval(root);
  out.residualGeff_mhz = g_eff_mhz(tuned_params(params, root, opt));
  return out;
}

DrivenPoint total_zz(const RotatingFrame& frame, double omega_mhz) {
  DrivenPoint out;
  out.zetaS_khz = frame.static_zz_khz();
  const BlockResult b = block_diagonalize(frame.hamiltonian(omega_mhz), frame.trunc());
  out.zeta_khz = b.zz_khz();
  out.zetaD_khz = out.zeta_khz - out.zetaS_khz;
  out.alphaZX_mhz = b.zx_mhz();
  out.ix_mhz = b.ix_mhz();
  out.iy_mhz = b.iy_mhz();
  out.zy_mhz = b.zy_mhz();
  return out;
}

DrivenPoint total_zz(const CircuitParams& params, const TruncationSpec& trunc,
                     const DriveSpec& drive) {
  const RotatingFrame frame(params, trunc, drive);
  return total_zz(frame, drive.Omega);
}

std::vector<double> freedom_amplitudes(const RotatingFrame& frame, double maxOmega_mhz,
                                       double step_mhz, double tol_mhz) {
  std::vector<double> roots;
  auto eval = [&](double om) {
    return block_diagonalize(frame.hamiltonian(om), frame.trunc()).zz_khz();
  };

  double prevOm = 0.0;
  double prevF = frame.static_zz_khz();
  bool prevOk = true;
  if (std::abs(prevF) < 0.5) roots.push_back(0.0);
  for (double om = step_mhz; om <= maxOmega_mhz + 1e-9; om += step_mhz) {
    double f = 0.0;
    bool ok = true;
    try {
      f = eval(om);
    } catch (const std::exception&) {
      ok = false;
    }
    if (ok && prevOk && (f < 0.0) != (prevF < 0.0)) {
      roots.push_back(bisect(eval, prevOm, om, prevF, tol_mhz));
    }
    if (ok) {
      prevOm = om;
      prevF = f;
    }
    prevOk = ok;
  }
  return roots;
}

FreedomCurve freedom_curve(const CircuitParams& params, const SweepOptions& opt,
                           double maxOmega_mhz, double omegaStep_mhz) {
  FreedomCurve out;
  const int n = static_cast<int>(std::floor((opt.stop_ghz - opt.start_ghz) / opt.step_ghz)) + 1;
  out.samples.reserve(n);
  for (int i = 0; i < n; ++i) {
    FreedomSample s;
    s.omegaC_ghz = opt.start_ghz + i * opt.step_ghz;
    try {
      const RotatingFrame frame(tuned_params(params, s.omegaC_ghz, opt), opt.trunc,
                                DriveSpec{0.0, 0.0, 0});
      const std::vector<double> roots =
          freedom_amplitudes(frame, maxOmega_mhz, omegaStep_mhz);
      if (!roots.empty()) {
        s.hasRoot = true;
        s.omegaStar_mhz = roots.front();
        s.alphaZXAtStar_mhz = total_zz(frame, s.omegaStar_mhz).alphaZX_mhz;
      }
    } catch (const std::exception&) {
      s.masked = true;
    }
    out.samples.push_back(s);
  }

  // Contiguous rootless (unmasked) stretches are the freedom gaps.
  int runStart = -1;
  for (size_t i = 0; i <= out.samples.size(); ++i) {
    const bool gapPoint =
        i < out.samples.size() && !out.samples[i].masked && !out.samples[i].hasRoot;
    if (gapPoint && runStart < 0) runStart = static_cast<int>(i);
    if (!gapPoint && runStart >= 0) {
      out.gaps.emplace_back(out.samples[runStart].omegaC_ghz, out.samples[i - 1].omegaC_ghz);
      runStart = -1;
    }
  }
  return out;
}

std::vector<ZeroCrossing> driven_zz_zeros(const CircuitParams& params, const SweepOptions& opt,
                                          double omega_mhz) {
  auto eval = [&](double wc) {
    const CircuitParams p = tuned_params(params, wc, opt);
    const RotatingFrame frame(p, opt.trunc, DriveSpec{omega_mhz, 0.0, 0});
    return block_diagonalize(frame.hamiltonian(omega_mhz), opt.trunc).zz_khz();
  };

  std::vector<ZeroCrossing> zeros;
  const int n = static_cast<int>(std::floor((opt.stop_ghz - opt.start_ghz) / opt.step_ghz)) + 1;
  double prevWc = 0.0, prevF = 0.0;
  bool prevOk = false;
  for (int i = 0; i < n; ++i) {
    const double wc = opt.start_ghz + i * opt.step_ghz;
    double f = 0.0;
    bool ok = true;
    try {
      f = eval(wc);
    } catch (const std::exception&) {
      ok = false;
    }
    if (ok && prevOk && (f < 0.0) != (prevF < 0.0)) {
      ZeroCrossing z;
      if (std::abs(f) > opt.typeIIThreshold_khz && std::abs(prevF) > opt.typeIIThreshold_khz) {
        z.typeII = true;
        z.omegaC_ghz = 0.5 * (prevWc + wc);
        zeros.push_back(z);
      } else {
        try {
          z.omegaC_ghz = bisect(eval, prevWc, wc, prevF, opt.bisectTol_ghz);
          z.residual_khz = eval(z.omegaC_ghz);
          zeros.push_back(z);
        } catch (const std::exception&) {
        }
      }
    }
    if (ok) {
      prevWc = wc;
      prevF = f;
    }
    prevOk = ok;
  }
  return zeros;
}

std::optional<double> critical_amplitude(const CircuitParams& params, const SweepOptions& opt,
                                         double loOmega_mhz, double hiOmega_mhz,
                                         double tol_mhz) {
  auto typeICount = [&](double om) {
    int c = 0;
    for (const ZeroCrossing& z : driven_zz_zeros(params, opt, om)) c += z.typeII ? 0 : 1;
    return c;
  };
  const int c0 = typeICount(loOmega_mhz);
  double lo = loOmega_mhz, hi = hiOmega_mhz;
  if (typeICount(hi) == c0) return std::nullopt;
  while (hi - lo > tol_mhz) {
    const double mid = 0.5 * (lo + hi);
    if (typeICount(mid) == c0) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  return 0.5 * (lo + hi);
}

ExponentFit fit_exponents_from_samples(const std::vector<double>& omega_mhz,
                                       const std::vector<double>& zetaD_khz,
                                       const std::vector<double>& alphaZX_mhz,
                                       double smallOmegaMax_mhz) {
  ExponentFit out;
  const size_t n = omega_mhz.size();
  if (zetaD_khz.size() != n || alphaZX_mhz.size() != n) {
    throw std::invalid_argument("exponent fit inputs must have equal length");
  }

  // Alternate between the leading coefficient (small-amplitude window,
  // corrected by the current higher-order model) and the higher-order
  // power law fitted on the residual in log-log space.
  auto solve = [&](const std::vector<double>& y, double leadPow, double noiseFloor,
                   double& lead, double& amp, double& expo, bool& leadOk, bool& expOk,
                   double& rms) {
    std::vector<double> xs, ys;  // small window, y / Omega^leadPow vs Omega^2
    for (size_t i = 0; i < n; ++i) {
      if (omega_mhz[i] <= 0.0 || omega_mhz[i] > smallOmegaMax_mhz) continue;
      xs.push_back(omega_mhz[i] * omega_mhz[i]);
      ys.push_back(y[i] / std::pow(omega_mhz[i], leadPow));
    }
    leadOk = xs.size() >= 3;
    if (!leadOk) return;
    double slope;
    linear_fit(xs, ys, lead, slope);

    amp = 0.0;
    expo = 0.0;
    for (int iter = 0; iter < 6; ++iter) {
      // Residual power law on the samples above the small window.
      std::vector<double> lx, ly;
      double signRef = 0.0;
      for (size_t i = n; i-- > 0;) {
        if (omega_mhz[i] <= smallOmegaMax_mhz) continue;
        const double r = y[i] - lead * std::pow(omega_mhz[i], leadPow);
        if (signRef == 0.0 && std::abs(r) > noiseFloor) signRef = r < 0.0 ? -1.0 : 1.0;
        if (signRef * r <= noiseFloor) continue;
        lx.push_back(std::log(omega_mhz[i]));
        ly.push_back(std::log(signRef * r));
      }
      if (lx.size() < 4) {
        expOk = false;
        return;
      }
      double la;
      linear_fit(lx, ly, la, expo);
      amp = signRef * std::exp(la);

      rms = 0.0;
      for (size_t i = 0; i < lx.size(); ++i) {
        const double e = ly[i] - (la + expo * lx[i]);
        rms += e * e;
      }
      rms = std::sqrt(rms / lx.size());

      // Refit the leading coefficient with the higher-order term removed.
      double num = 0.0, den = 0.0;
      for (size_t i = 0; i < n; ++i) {
        if (omega_mhz[i] <= 0.0 || omega_mhz[i] > smallOmegaMax_mhz) continue;
        const double basis = std::pow(omega_mhz[i], leadPow);
        num += basis * (y[i] - amp * std::pow(omega_mhz[i], expo));
        den += basis * basis;
      }
      if (den > 0.0) lead = num / den;
    }
    expOk = rms < 0.15;
  };

  double rmsA = 0.0, rmsB = 0.0;
  solve(zetaD_khz, 2.0, 1e-3, out.eta2, out.etaA, out.a, out.etaReliable, out.aReliable, rmsA);
  bool mu1Ok = false;
  solve(alphaZX_mhz, 1.0, 1e-5, out.mu1, out.muB, out.b, mu1Ok, out.bReliable, rmsB);
  out.etaReliable = out.etaReliable && mu1Ok;
  out.residualA = rmsA;
  out.residualB = rmsB;
  return out;
}

ExponentFit fit_exponents(const CircuitParams& params, const TruncationSpec& trunc,
                          const std::vector<double>& omegaSamples_mhz,
                          double smallOmegaMax_mhz) {
  if (omegaSamples_mhz.size() < 8) {
    throw std::invalid_argument("exponent fit needs at least 8 amplitude samples");
  }
  const RotatingFrame frame(params, trunc, DriveSpec{0.0, 0.0, 0});
  std::vector<double> zd, ax;
  zd.reserve(omegaSamples_mhz.size());
  ax.reserve(omegaSamples_mhz.size());
  for (const double om : omegaSamples_mhz) {
    const DrivenPoint p = total_zz(frame, om);
    zd.push_back(p.zetaD_khz);
    ax.push_back(p.alphaZX_mhz);
  }
  return fit_exponents_from_samples(omegaSamples_mhz, zd, ax, smallOmegaMax_mhz);
}

double conditional_phase_fringe(double zeta_khz, double tauP_us) {
  return std::cos(kTwoPi * zeta_khz * tauP_us * 1e-3);
}

FreedomMap freedom_map_2d(const CircuitParams& paramsTemplate, const SweepOptions& opt,
                          double delta12Start_ghz, double delta12Stop_ghz, int nDelta12,
                          int nOmegaC, double omega_mhz) {
  if (nDelta12 < 2 || nOmegaC < 2) throw std::invalid_argument("map grid needs >= 2 points per axis");
  FreedomMap out;
  out.nDelta12 = nDelta12;
  out.nOmegaC = nOmegaC;
  out.cells.reserve(static_cast<size_t>(nDelta12) * nOmegaC);

  auto cellParams = [&](double d12, double wc) {
    CircuitParams p = paramsTemplate;
    p.omega1 = paramsTemplate.omega2 + d12;
    return tuned_params(p, wc, opt);
  };

  for (int r = 0; r < nOmegaC; ++r) {
    const double wc = opt.start_ghz + (opt.stop_ghz - opt.start_ghz) * r / (nOmegaC - 1);
    for (int c = 0; c < nDelta12; ++c) {
      MapCell cell;
      cell.delta12_ghz =
          delta12Start_ghz + (delta12Stop_ghz - delta12Start_ghz) * c / (nDelta12 - 1);
      cell.omegaC_ghz = wc;
      const CircuitParams p = cellParams(cell.delta12_ghz, wc);
      cell.gEff_mhz = g_eff_mhz(p);
      try {
        if (omega_mhz == 0.0) {
          cell.zeta_khz = static_zz_at(p, opt.trunc, Diagonalizer::kExact);
        } else {
          const RotatingFrame frame(p, opt.trunc, DriveSpec{omega_mhz, 0.0, 0});
          cell.zeta_khz = block_diagonalize(frame.hamiltonian(omega_mhz), opt.trunc).zz_khz();
        }
      } catch (const std::exception&) {
        cell.masked = true;
      }
      out.cells.push_back(cell);
    }
  }

  ZeroBoundary typeI, typeII;
  auto scanPair = [&](const MapCell& a, const MapCell& b) {
    if (a.masked || b.masked) return;
    if ((a.zeta_khz < 0.0) == (b.zeta_khz < 0.0)) return;
    const bool big = std::abs(a.zeta_khz) > opt.typeIIThreshold_khz &&
                     std::abs(b.zeta_khz) > opt.typeIIThreshold_khz;
    // Linear interpolation of the crossing along the grid edge.
    const double t = std::abs(a.zeta_khz) / (std::abs(a.zeta_khz) + std::abs(b.zeta_khz));
    const std::pair<double, double> pt = {a.delta12_ghz + t * (b.delta12_ghz - a.delta12_ghz),
                                          a.omegaC_ghz + t * (b.omegaC_ghz - a.omegaC_ghz)};
    (big ? typeII : typeI).points.push_back(pt);
    if ((a.gEff_mhz < 0.0) != (b.gEff_mhz < 0.0)) out.gEffFreePoints.push_back(pt);
  };
  auto at = [&](int r, int c) -> const MapCell& { return out.cells[r * nDelta12 + c]; };
  for (int r = 0; r < nOmegaC; ++r)
    for (int c = 0; c + 1 < nDelta12; ++c) scanPair(at(r, c), at(r, c + 1));
  for (int c = 0; c < nDelta12; ++c)
    for (int r = 0; r + 1 < nOmegaC; ++r) scanPair(at(r, c), at(r + 1, c));

  // The effective-coupling boundary can cross cells the ZZ boundary skips.
  for (int r = 0; r < nOmegaC; ++r) {
    for (int c = 0; c + 1 < nDelta12; ++c) {
      const MapCell& a = at(r, c);
      const MapCell& b = at(r, c + 1);
      if ((a.gEff_mhz < 0.0) != (b.gEff_mhz < 0.0) &&
          ((a.zeta_khz < 0.0) == (b.zeta_khz < 0.0) || a.masked || b.masked)) {
        const double t = std::abs(a.gEff_mhz) / (std::abs(a.gEff_mhz) + std::abs(b.gEff_mhz));
        out.gEffFreePoints.emplace_back(a.delta12_ghz + t * (b.delta12_ghz - a.delta12_ghz),
                                        a.omegaC_ghz);
      }
    }
  }

  typeII.typeII = true;
  if (!typeI.points.empty()) out.zzBoundaries.push_back(std::move(typeI));
  if (!typeII.points.empty()) out.zzBoundaries.push_back(std::move(typeII));
  return out;
}

}  // namespace pfsim
