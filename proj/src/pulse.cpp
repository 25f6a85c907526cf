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

#include "pfsim/pulse.hpp"

#include <algorithm>
#include <cmath>

namespace pfsim {

void RampEnvelope::validate() const {
  if (!(tau0_ns > 0.0)) throw std::invalid_argument("ramp duration must be positive");
  if (!(steepness > 0.0)) throw std::invalid_argument("tanh steepness must be positive");
  if (edgeWidth_ns < 0.0) throw std::invalid_argument("Gaussian edge width must be >= 0");
}

double RampEnvelope::progress(double t_ns) const {
  const double t = std::clamp(t_ns, 0.0, tau0_ns);
  if (shape == RampShape::kTanh) {
    const double k = steepness;
    return (std::tanh(k * (2.0 * t / tau0_ns - 1.0)) + std::tanh(k)) / (2.0 * std::tanh(k));
  }
  // Gaussian-filtered step: normalized CDF of a Gaussian centered at tau0/2.
  const double sigma = edgeWidth_ns > 0.0 ? edgeWidth_ns : tau0_ns / 6.0;
  auto cdf = [&](double x) { return 0.5 * (1.0 + std::erf(x / (sigma * std::sqrt(2.0)))); };
  const double lo = cdf(-0.5 * tau0_ns);
  const double hi = cdf(0.5 * tau0_ns);
  return (cdf(t - 0.5 * tau0_ns) - lo) / (hi - lo);
}

void DriveSegment::validate() const {
  if (Omega_mhz < 0.0) throw std::invalid_argument("drive amplitude must be >= 0");
  if (rise_ns < 0.0 || fall_ns < 0.0 || flatTop_ns < 0.0) {
    throw std::invalid_argument("drive segment durations must be >= 0");
  }
}

double DriveSegment::envelope(double t_ns) const {
  if (t_ns <= 0.0 || t_ns >= total_ns()) return 0.0;
  if (t_ns < rise_ns) return 0.5 * (1.0 - std::cos(M_PI * t_ns / rise_ns));
  if (t_ns <= rise_ns + flatTop_ns) return 1.0;
  const double u = (t_ns - rise_ns - flatTop_ns) / fall_ns;
  return 0.5 * (1.0 + std::cos(M_PI * u));
}

void CoherenceSpec::validate() const {
  auto check = [](double t1, double t2, const char* q) {
    if (t1 < 0.0 || t2 < 0.0) throw std::invalid_argument(std::string("negative coherence time on ") + q);
    if (t1 > 0.0 && t2 > 0.0 && t2 > 2.0 * t1) {
      throw std::invalid_argument(std::string("T2 > 2 T1 is unphysical on ") + q);
    }
    if (t1 <= 0.0 && t2 > 0.0) return;  // pure dephasing only
  };
  check(t1q1, t2q1, "qubit 1");
  check(t1q2, t2q2, "qubit 2");
}

double CoherenceSpec::relaxation_rate(int qubit) const {
  const double t1 = qubit == 0 ? t1q1 : t1q2;
  if (t1 <= 0.0) return 0.0;
  return 1.0 / (t1 * (microseconds ? 1e3 : 1.0));
}

double CoherenceSpec::dephasing_rate(int qubit) const {
  const double t1 = qubit == 0 ? t1q1 : t1q2;
  const double t2 = qubit == 0 ? t2q1 : t2q2;
  if (t2 <= 0.0) return 0.0;
  const double scale = microseconds ? 1e3 : 1.0;
  const double invTphi = 1.0 / (t2 * scale) - (t1 > 0.0 ? 0.5 / (t1 * scale) : 0.0);
  return std::max(invTphi, 0.0);
}

void PFCycleSchedule::validate() const {
  rampDown.validate();
  drive.validate();
  rampUp.validate();
  const double tol = 1e-9;
  if (std::abs(rampDown.omegaEnd_ghz - rampUp.omegaStart_ghz) > tol ||
      std::abs(rampDown.omegaStart_ghz - rampUp.omegaEnd_ghz) > tol) {
    throw std::invalid_argument(
        "cycle must ramp down to the drive frequency point and back to the start");
  }
}

}  // namespace pfsim
