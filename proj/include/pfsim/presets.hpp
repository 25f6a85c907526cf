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

#include <string>

#include "pfsim/circuit.hpp"

namespace pfsim {

inline constexpr int kNumDevicePresets = 6;

// Built-in device presets 1..6. g1c = g2c = 95 MHz throughout; the coupler
// frequency field defaults to 4.8 GHz (the reference at which couplings
// are quoted) and is meant to be swept.
CircuitParams device_preset(int id);

// JSON (de)serialization matching the shipped configs/deviceN.json schema.
std::string circuit_params_to_json(const CircuitParams& p);
CircuitParams circuit_params_from_json_text(const std::string& text);
CircuitParams circuit_params_from_json_file(const std::string& path);

}  // namespace pfsim
