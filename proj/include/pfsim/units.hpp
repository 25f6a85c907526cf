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

#include <numbers>

namespace pfsim {

// Public interfaces use plain frequency units (value/2pi): GHz for
// frequencies, MHz for anharmonicities/couplings/amplitudes, kHz for ZZ
// strengths. Internal operators and energies are angular frequencies in
// rad/ns so that exp(-iHt) with t in ns needs no extra factor.
inline constexpr double kTwoPi = 2.0 * std::numbers::pi;

inline constexpr double rad_from_ghz(double f) { return kTwoPi * f; }
inline constexpr double rad_from_mhz(double f) { return kTwoPi * f * 1e-3; }
inline constexpr double ghz_from_rad(double w) { return w / kTwoPi; }
inline constexpr double mhz_from_rad(double w) { return w / kTwoPi * 1e3; }
inline constexpr double khz_from_rad(double w) { return w / kTwoPi * 1e6; }

}  // namespace pfsim
