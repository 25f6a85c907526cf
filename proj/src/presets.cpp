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

#include "pfsim/presets.hpp"

#include <fstream>
#include <sstream>

#include <json.hpp>

namespace pfsim {

CircuitParams device_preset(int id) {
  //            omega1 omega2  g12  deltaC delta1 delta2
  static constexpr double kTable[6][6] = {
      {4.25, 4.20, 3.76, -100.0, -250.0, -250.0},  // 1
      {4.25, 4.20, 6.48, -100.0, -250.0, -250.0},  // 2
      {4.25, 4.20, 6.48, -200.0, -250.0, -250.0},  // 3
      {4.25, 4.20, 6.48, -100.0, -320.0, -320.0},  // 4
      {4.00, 4.20, 9.48, -100.0, 500.0, -250.0},   // 5 (CSFQ-transmon)
      {4.40, 4.20, 9.48, -100.0, -320.0, -320.0},  // 6
  };
  if (id < 1 || id > kNumDevicePresets) {
    throw std::invalid_argument("device preset id must be in 1..6");
  }
  const double* row = kTable[id - 1];
  CircuitParams p;
  p.omega1 = row[0];
  p.omega2 = row[1];
  p.g12 = row[2];
  p.deltaC = row[3];
  p.delta1 = row[4];
  p.delta2 = row[5];
  p.g1c = 95.0;
  p.g2c = 95.0;
  p.omegaC = 4.8;
  return p;
}

std::string circuit_params_to_json(const CircuitParams& p) {
  nlohmann::ordered_json j;
  j["units"] = {{"frequencies", "GHz"}, {"anharmonicities", "MHz"}, {"couplings", "MHz"}};
  j["omega1"] = p.omega1;
  j["omega2"] = p.omega2;
  j["omegaC"] = p.omegaC;
  j["delta1"] = p.delta1;
  j["delta2"] = p.delta2;
  j["deltaC"] = p.deltaC;
  j["g12"] = p.g12;
  j["g1c"] = p.g1c;
  j["g2c"] = p.g2c;
  return j.dump(2);
}

CircuitParams circuit_params_from_json_text(const std::string& text) {
  const nlohmann::json j = nlohmann::json::parse(text);
  static const char* kKeys[] = {"omega1", "omega2", "omegaC", "delta1", "delta2",
                                "deltaC", "g12",    "g1c",    "g2c"};
  for (const auto& [key, value] : j.items()) {
    bool known = key == "units";
    for (const char* k : kKeys) known = known || key == k;
    if (!known) throw std::invalid_argument("unknown key in device config: " + key);
  }
  CircuitParams p;
  auto get = [&](const char* k) -> double {
    if (!j.contains(k)) throw std::invalid_argument(std::string("device config missing: ") + k);
    return j.at(k).get<double>();
  };
  p.omega1 = get("omega1");
  p.omega2 = get("omega2");
  p.omegaC = get("omegaC");
  p.delta1 = get("delta1");
  p.delta2 = get("delta2");
  p.deltaC = get("deltaC");
  p.g12 = get("g12");
  p.g1c = get("g1c");
  p.g2c = get("g2c");
  p.validate();
  return p;
}

CircuitParams circuit_params_from_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open device config: " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return circuit_params_from_json_text(ss.str());
}

}  // namespace pfsim
