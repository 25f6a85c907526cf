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

#include <stdexcept>
#include <string>

namespace pfsim {

enum class RampShape { kTanh, kFlatTopGaussian };

// Monotone coupler-frequency ramp over t in [0, tau0]. Both shapes are
// renormalized so the endpoints are met exactly at t = 0 and t = tau0.
struct RampEnvelope {
  RampShape shape = RampShape::kTanh;
  double tau0_ns = 35.0;
  double omegaStart_ghz = 0.0;
  double omegaEnd_ghz = 0.0;
  double steepness = 3.0;      // tanh argument scale
  double edgeWidth_ns = 0.0;   // Gaussian sigma; 0 -> tau0 / 6

  void validate() const;
  // Dimensionless progress 0 -> 1 over [0, tau0].
  double progress(double t_ns) const;
  double value_ghz(double t_ns) const {
    return omegaStart_ghz + (omegaEnd_ghz - omegaStart_ghz) * progress(t_ns);
  }
  RampEnvelope reversed() const {
    RampEnvelope r = *this;
    std::swap(r.omegaStart_ghz, r.omegaEnd_ghz);
    return r;
  }
};

// Round-square drive envelope: cosine rise, flat top, cosine fall.
struct DriveSegment {
  double Omega_mhz = 0.0;
  double rise_ns = 20.0;
  double fall_ns = 20.0;
  double flatTop_ns = 0.0;

  void validate() const;
  double total_ns() const { return rise_ns + flatTop_ns + fall_ns; }
  // Dimensionless envelope 0..1 at t in [0, total].
  double envelope(double t_ns) const;
  double amplitude_mhz(double t_ns) const { return Omega_mhz * envelope(t_ns); }
};

// Per-qubit relaxation and dephasing times. `microseconds` selects the
// unit of the stored numbers; infinities (<= 0 treated as infinite) turn
// the corresponding channel off.
struct CoherenceSpec {
  double t1q1 = 0.0;
  double t2q1 = 0.0;
  double t1q2 = 0.0;
  double t2q2 = 0.0;
  bool microseconds = true;

  static CoherenceSpec uniform(double t1, double t2, bool microseconds = true) {
    return CoherenceSpec{t1, t2, t1, t2, microseconds};
  }
  static CoherenceSpec none() { return CoherenceSpec{0, 0, 0, 0, true}; }

  void validate() const;
  bool lossless() const { return t1q1 <= 0 && t2q1 <= 0 && t1q2 <= 0 && t2q2 <= 0; }
  // Rates in 1/ns; zero when the channel is off. qubit is 0 or 1.
  double relaxation_rate(int qubit) const;
  double dephasing_rate(int qubit) const;
};

// Idle -> entangled -> idle sequence: ramp down, drive, ramp up, strictly
// in that order (ramps and drive never overlap).
struct PFCycleSchedule {
  RampEnvelope rampDown;
  DriveSegment drive;
  RampEnvelope rampUp;

  void validate() const;
  double total_ns() const {
    return rampDown.tau0_ns + drive.total_ns() + rampUp.tau0_ns;
  }
};

}  // namespace pfsim
