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

#include <chrono>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <future>
#include <iostream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "pfsim/analysis.hpp"
#include "pfsim/dynamics.hpp"
#include "pfsim/io.hpp"
#include "pfsim/presets.hpp"

namespace fs = std::filesystem;
using nlohmann::json;
using nlohmann::ordered_json;

namespace {

struct CliError : std::runtime_error {
  std::string kind;
  CliError(std::string k, const std::string& msg) : std::runtime_error(msg), kind(std::move(k)) {}
};

// ---------------------------------------------------------------------------
// Config plumbing
// ---------------------------------------------------------------------------

// Rejects keys outside `allowed`; validation errors name the offender.
void check_keys(const json& j, const std::vector<std::string>& allowed,
                const std::string& where) {
  if (!j.is_object()) throw CliError("validation", where + " must be a JSON object");
  for (const auto& [key, value] : j.items()) {
    bool known = false;
    for (const std::string& k : allowed) known = known || key == k;
    if (!known) throw CliError("validation", "unknown key in " + where + ": " + key);
  }
}

double get_num(const json& j, const std::string& key, double dflt) {
  if (!j.contains(key)) return dflt;
  if (!j.at(key).is_number()) throw CliError("validation", key + " must be a number");
  return j.at(key).get<double>();
}

pfsim::TruncationSpec get_trunc(const json& j, pfsim::TruncationSpec dflt) {
  if (!j.contains("trunc")) return dflt;
  const json& t = j.at("trunc");
  if (!t.is_array() || t.size() != 3) {
    throw CliError("validation", "trunc must be an array of three level counts");
  }
  pfsim::TruncationSpec out{t[0].get<int>(), t[1].get<int>(), t[2].get<int>()};
  out.validate();
  return out;
}

std::vector<double> get_list(const json& j, const std::string& key,
                             std::vector<double> dflt) {
  if (!j.contains(key)) return dflt;
  if (!j.at(key).is_array()) throw CliError("validation", key + " must be an array");
  std::vector<double> out;
  for (const json& v : j.at(key)) out.push_back(v.get<double>());
  return out;
}

pfsim::Diagonalizer parse_method(const std::string& m) {
  if (m == "exact") return pfsim::Diagonalizer::kExact;
  if (m == "npad") return pfsim::Diagonalizer::kNpad;
  throw CliError("validation", "method must be exact or npad (swt is a separate column)");
}

pfsim::RampShape parse_shape(const std::string& s) {
  if (s == "tanh") return pfsim::RampShape::kTanh;
  if (s == "flat-top-gaussian") return pfsim::RampShape::kFlatTopGaussian;
  throw CliError("validation", "shape must be tanh or flat-top-gaussian");
}

pfsim::CoherenceSpec get_coherence(const json& j) {
  pfsim::CoherenceSpec c = pfsim::CoherenceSpec::uniform(200.0, 200.0, true);
  if (!j.contains("coherence")) return c;
  const json& cj = j.at("coherence");
  check_keys(cj, {"t1", "t2", "microseconds"}, "coherence");
  c = pfsim::CoherenceSpec::uniform(get_num(cj, "t1", 200.0), get_num(cj, "t2", 200.0),
                                    cj.value("microseconds", true));
  c.validate();
  return c;
}

pfsim::CircuitParams device_from_config(const json& cfg) {
  if (!cfg.contains("device")) {
    throw CliError("validation", "config missing required field: device");
  }
  const json& d = cfg.at("device");
  if (d.is_number_integer()) return pfsim::device_preset(d.get<int>());
  if (d.is_string()) return pfsim::circuit_params_from_json_file(d.get<std::string>());
  if (d.is_object()) return pfsim::circuit_params_from_json_text(d.dump());
  throw CliError("validation", "device must be a preset id 1..6, a config path, or inline params");
}

pfsim::SweepOptions sweep_from_params(const json& p, pfsim::TruncationSpec defaultTrunc) {
  pfsim::SweepOptions opt;
  opt.start_ghz = get_num(p, "start", opt.start_ghz);
  opt.stop_ghz = get_num(p, "stop", opt.stop_ghz);
  opt.step_ghz = get_num(p, "step", opt.step_ghz);
  opt.method = parse_method(p.value("method", "exact"));
  opt.trunc = get_trunc(p, defaultTrunc);
  opt.covaryCouplings = p.value("covary", true);
  opt.omegaRef_ghz = get_num(p, "omegaRef", opt.omegaRef_ghz);
  opt.typeIIThreshold_khz = get_num(p, "typeIIThreshold", opt.typeIIThreshold_khz);
  return opt;
}

// Run `fn(i)` for i in [0, n) on up to `threads` workers; results are
// collected by index so output order never depends on scheduling.
template <typename Fn>
void parallel_for(int n, int threads, Fn fn) {
  if (threads <= 1 || n <= 1) {
    for (int i = 0; i < n; ++i) fn(i);
    return;
  }
  std::atomic<int> next{0};
  std::vector<std::future<void>> pool;
  const int workers = std::min(threads, n);
  for (int w = 0; w < workers; ++w) {
    pool.push_back(std::async(std::launch::async, [&] {
      for (int i = next.fetch_add(1); i < n; i = next.fetch_add(1)) fn(i);
    }));
  }
  for (auto& f : pool) f.get();
}

std::string fmt(double v) { return pfsim::format_double(v); }

json zeros_to_json(const std::vector<pfsim::ZeroCrossing>& zeros) {
  json out = json::array();
  for (const auto& z : zeros) {
    out.push_back({{"omega_c_ghz", z.omegaC_ghz},
                   {"type", z.typeII ? "II" : "I"},
                   {"residual_khz", z.residual_khz}});
  }
  return out;
}


// ---------------------------------------------------------------------------
// Tasks
// ---------------------------------------------------------------------------

struct TaskContext {
  fs::path out;
  int threads = 1;
  double gridScale = 1.0;  // > 1 coarsens every grid
};

void task_static_zz(const json& cfg, const json& p, const TaskContext& ctx) {
  check_keys(p, {"start", "stop", "step", "method", "trunc", "covary", "omegaRef",
                 "typeIIThreshold"},
             "params");
  const pfsim::CircuitParams params = device_from_config(cfg);
  pfsim::SweepOptions opt = sweep_from_params(p, {5, 5, 5});
  opt.step_ghz *= ctx.gridScale;
  const pfsim::SweepResult res = pfsim::static_zz_sweep(params, opt);

  pfsim::CsvWriter csv({"omega_c_ghz", "zeta_s_khz", "g_eff_mhz", "masked"});
  for (const auto& s : res.samples) {
    csv.add_row_mixed({fmt(s.omegaC_ghz), s.masked ? "" : fmt(s.zeta_khz), fmt(s.gEff_mhz),
                       s.masked ? "1" : "0"});
  }
  csv.write((ctx.out / "static_zz.csv").string());
  pfsim::write_text_file((ctx.out / "zeros.json").string(),
                         zeros_to_json(res.zeros).dump(2) + "\n");
}

void task_idle_point(const json& cfg, const json& p, const TaskContext& ctx) {
  check_keys(p, {"start", "stop", "step", "trunc", "covary", "omegaRef"}, "params");
  const pfsim::CircuitParams params = device_from_config(cfg);
  // Compact truncation matches the reference table; see README on defaults.
  const pfsim::SweepOptions opt = sweep_from_params(p, {3, 3, 3});
  const pfsim::CapacitanceModel cap =
      pfsim::capacitance_from_couplings(params, opt.omegaRef_ghz);
  const pfsim::IdlePoint ip = pfsim::find_idle_point(params, cap, opt);

  pfsim::CsvWriter csv({"numeric_ghz", "perturbative_ghz", "residual_zz_khz",
                        "residual_geff_mhz"});
  csv.add_row_mixed({ip.omegaCI_ghz ? fmt(*ip.omegaCI_ghz) : "NA",
                     ip.omegaCIPerturbative_ghz ? fmt(*ip.omegaCIPerturbative_ghz) : "NA",
                     fmt(ip.residualZZ_khz), fmt(ip.residualGeff_mhz)});
  csv.write((ctx.out / "idle_point.csv").string());

  ordered_json j;
  if (ip.omegaCI_ghz) j["numeric_ghz"] = *ip.omegaCI_ghz;
  else j["numeric_ghz"] = nullptr;
  if (ip.omegaCIPerturbative_ghz) j["perturbative_ghz"] = *ip.omegaCIPerturbative_ghz;
  else j["perturbative_ghz"] = nullptr;
  j["residual_zz_khz"] = ip.residualZZ_khz;
  j["residual_geff_mhz"] = ip.residualGeff_mhz;
  pfsim::write_text_file((ctx.out / "idle_point.json").string(), j.dump(2) + "\n");
}

void task_freedom_curve(const json& cfg, const json& p, const TaskContext& ctx) {
  check_keys(p, {"start", "stop", "step", "trunc", "covary", "omegaRef", "maxOmega",
                 "omegaStep"},
             "params");
  const pfsim::CircuitParams params = device_from_config(cfg);
  pfsim::SweepOptions opt = sweep_from_params(p, {5, 5, 5});
  opt.start_ghz = get_num(p, "start", 4.6);
  opt.stop_ghz = get_num(p, "stop", 6.6);
  opt.step_ghz = get_num(p, "step", 0.02) * ctx.gridScale;
  const double maxOmega = get_num(p, "maxOmega", 100.0);
  const double omegaStep = get_num(p, "omegaStep", 0.5);
  const pfsim::FreedomCurve fc = pfsim::freedom_curve(params, opt, maxOmega, omegaStep);

  pfsim::CsvWriter csv({"omega_c_ghz", "omega_star_mhz", "alpha_zx_mhz", "has_root",
                        "masked"});
  for (const auto& s : fc.samples) {
    csv.add_row_mixed({fmt(s.omegaC_ghz), s.hasRoot ? fmt(s.omegaStar_mhz) : "",
                       s.hasRoot ? fmt(s.alphaZXAtStar_mhz) : "", s.hasRoot ? "1" : "0",
                       s.masked ? "1" : "0"});
  }
  csv.write((ctx.out / "freedom_curve.csv").string());
  json gaps = json::array();
  for (const auto& g : fc.gaps) gaps.push_back({{"from_ghz", g.first}, {"to_ghz", g.second}});
  pfsim::write_text_file((ctx.out / "gaps.json").string(), gaps.dump(2) + "\n");
}

void task_map2d(const json& cfg, const json& p, const TaskContext& ctx) {
  check_keys(p, {"start", "stop", "trunc", "covary", "omegaRef", "delta12Start",
                 "delta12Stop", "nDelta12", "nOmegaC", "omega", "typeIIThreshold"},
             "params");
  const pfsim::CircuitParams params = device_from_config(cfg);
  pfsim::SweepOptions opt = sweep_from_params(p, {3, 3, 3});
  const double d12a = get_num(p, "delta12Start", -0.4);
  const double d12b = get_num(p, "delta12Stop", 0.4);
  const int n12 = std::max(2, int(get_num(p, "nDelta12", 33) / ctx.gridScale));
  const int nwc = std::max(2, int(get_num(p, "nOmegaC", 28) / ctx.gridScale));
  const double omega = get_num(p, "omega", 0.0);
  const pfsim::FreedomMap map =
      pfsim::freedom_map_2d(params, opt, d12a, d12b, n12, nwc, omega);

  pfsim::CsvWriter csv({"delta12_ghz", "omega_c_ghz", "zeta_khz", "g_eff_mhz", "masked"});
  for (const auto& c : map.cells) {
    csv.add_row_mixed({fmt(c.delta12_ghz), fmt(c.omegaC_ghz), c.masked ? "" : fmt(c.zeta_khz),
                       fmt(c.gEff_mhz), c.masked ? "1" : "0"});
  }
  csv.write((ctx.out / "map2d.csv").string());

  ordered_json bj;
  bj["zz_boundaries"] = json::array();
  for (const auto& b : map.zzBoundaries) {
    json pts = json::array();
    for (const auto& pt : b.points) pts.push_back({pt.first, pt.second});
    bj["zz_boundaries"].push_back({{"type", b.typeII ? "II" : "I"}, {"points", pts}});
  }
  bj["g_eff_free_points"] = json::array();
  for (const auto& pt : map.gEffFreePoints) bj["g_eff_free_points"].push_back({pt.first, pt.second});
  pfsim::write_text_file((ctx.out / "boundaries.json").string(), bj.dump(2) + "\n");
}

void task_exponents(const json& cfg, const json& p, const TaskContext& ctx) {
  check_keys(p, {"omegaC", "trunc", "covary", "omegaRef", "samples", "smallOmegaMax"},
             "params");
  if (!p.contains("omegaC")) throw CliError("validation", "exponents requires params.omegaC");
  const pfsim::CircuitParams base = device_from_config(cfg);
  const pfsim::SweepOptions opt = sweep_from_params(p, {5, 5, 5});
  const pfsim::CircuitParams params =
      pfsim::tuned_params(base, get_num(p, "omegaC", 0.0), opt);
  std::vector<double> samples = get_list(
      p, "samples",
      {0.5, 1.0, 1.5, 2.0, 2.5, 3.0, 3.5, 4.0, 6.0, 9.0, 13.0, 18.0, 24.0, 30.0});
  const pfsim::ExponentFit fit = pfsim::fit_exponents(params, opt.trunc, samples,
                                                      get_num(p, "smallOmegaMax", 4.0));
  ordered_json j;
  j["eta2_khz_per_mhz2"] = fit.eta2;
  j["eta_a"] = fit.etaA;
  j["a"] = fit.a;
  j["mu1"] = fit.mu1;
  j["mu_b"] = fit.muB;
  j["b"] = fit.b;
  j["eta_reliable"] = fit.etaReliable;
  j["a_reliable"] = fit.aReliable;
  j["b_reliable"] = fit.bReliable;
  j["residual_a"] = fit.residualA;
  j["residual_b"] = fit.residualB;
  pfsim::write_text_file((ctx.out / "exponents.json").string(), j.dump(2) + "\n");
}

void task_ramp(const json& cfg, const json& p, const TaskContext& ctx) {
  check_keys(p, {"omegaCI", "omegaCE", "shape", "tau0", "trunc", "covary", "omegaRef",
                 "relTol"},
             "params");
  const pfsim::CircuitParams params = device_from_config(cfg);
  const pfsim::SweepOptions opt = sweep_from_params(p, {5, 5, 5});
  double omegaCI = get_num(p, "omegaCI", 0.0);
  if (omegaCI <= 0.0) {
    const pfsim::CapacitanceModel cap =
        pfsim::capacitance_from_couplings(params, opt.omegaRef_ghz);
    const pfsim::IdlePoint ip = pfsim::find_idle_point(params, cap, opt);
    if (!ip.omegaCI_ghz) throw CliError("infeasible", "device has no idle point; set omegaCI");
    omegaCI = *ip.omegaCI_ghz;
  }
  const double omegaCE = get_num(p, "omegaCE", 4.8);
  const pfsim::RampShape shape = parse_shape(p.value("shape", "tanh"));
  std::vector<double> tau0s = get_list(p, "tau0", {5, 10, 15, 20, 25, 30, 35, 40, 45, 50});
  const auto study = pfsim::ramp_round_trip_study(params, opt, opt.trunc, shape, omegaCI,
                                                  omegaCE, tau0s, get_num(p, "relTol", 1e-9));
  pfsim::CsvWriter csv({"tau0_ns", "f01", "f10", "f11"});
  for (const auto& s : study) csv.add_row({s.tau0_ns, s.f01, s.f10, s.f11});
  csv.write((ctx.out / "ramp.csv").string());
}

void task_gate_error(const json& cfg, const json& p, const TaskContext& ctx) {
  check_keys(p, {"omegaCE", "tg", "trunc", "covary", "omegaRef", "coherence", "rise",
                 "fall", "maxOmega"},
             "params");
  const pfsim::CircuitParams base = device_from_config(cfg);
  const pfsim::SweepOptions opt = sweep_from_params(p, {3, 3, 3});
  const double rise = get_num(p, "rise", 20.0);
  const double fall = get_num(p, "fall", 20.0);
  std::vector<pfsim::GateErrorPoint> pts;
  if (p.contains("omegaCE") && p.at("omegaCE").is_array()) {
    // Freedom-curve mode: each listed coupler frequency is driven at its
    // ZZ-free amplitude; the gate length follows from the pi/4 condition.
    pts = pfsim::zx90_freedom_gate_error(base, opt, opt.trunc, get_coherence(p),
                                         get_list(p, "omegaCE", {}),
                                         get_num(p, "maxOmega", 100.0), rise, fall);
  } else {
    const double omegaCE = get_num(p, "omegaCE", 4.8);
    const pfsim::CircuitParams params = pfsim::tuned_params(base, omegaCE, opt);
    std::vector<double> tgs = get_list(p, "tg", {60, 80, 100, 120, 140, 160, 180, 200, 220});
    pts = pfsim::zx90_gate_error(params, opt.trunc, get_coherence(p), tgs, rise, fall);
    for (auto& pt : pts) pt.omegaC_ghz = omegaCE;
  }
  pfsim::CsvWriter csv({"omega_c_ghz", "tg_ns", "omega_mhz", "zeta_khz", "error", "feasible"});
  for (const auto& pt : pts) {
    csv.add_row_mixed({fmt(pt.omegaC_ghz),
                       (pt.feasible || pt.tg_ns > 0.0) ? fmt(pt.tg_ns) : "",
                       pt.feasible ? fmt(pt.omega_mhz) : "",
                       pt.feasible ? fmt(pt.zeta_khz) : "",
                       pt.feasible ? fmt(pt.error) : "", pt.feasible ? "1" : "0"});
  }
  csv.write((ctx.out / "gate_error.csv").string());
}

void task_full_cycle(const json& cfg, const json& p, const TaskContext& ctx) {
  check_keys(p, {"omegaCI", "omegaCE", "shape", "tau0", "tg", "omega", "trunc", "covary",
                 "omegaRef", "coherence", "rise", "fall", "step", "maxOmega"},
             "params");
  const pfsim::CircuitParams params = device_from_config(cfg);
  const pfsim::SweepOptions opt = sweep_from_params(p, {3, 3, 3});
  double omegaCI = get_num(p, "omegaCI", 0.0);
  if (omegaCI <= 0.0) {
    const pfsim::CapacitanceModel cap =
        pfsim::capacitance_from_couplings(params, opt.omegaRef_ghz);
    const pfsim::IdlePoint ip = pfsim::find_idle_point(params, cap, opt);
    if (!ip.omegaCI_ghz) throw CliError("infeasible", "device has no idle point; set omegaCI");
    omegaCI = *ip.omegaCI_ghz;
  }
  const double omegaCE = get_num(p, "omegaCE", 4.8);
  const double tau0 = get_num(p, "tau0", 35.0);
  const double rise = get_num(p, "rise", 20.0);
  const double fall = get_num(p, "fall", 20.0);

  // Default calibration is ZZ-free: drive at the freedom amplitude with the
  // gate length set by the pi/4 condition. Explicit omega and tg override it.
  double omega = get_num(p, "omega", 0.0);
  double tg = get_num(p, "tg", 0.0);
  if (omega <= 0.0 || tg <= 0.0) {
    const pfsim::GateErrorPoint sch = pfsim::zx90_freedom_schedule(
        params, opt, opt.trunc, omegaCE, get_num(p, "maxOmega", 100.0), rise, fall);
    if (!sch.feasible) {
      throw CliError("infeasible",
                     "no ZZ-free drive schedule at this coupler frequency; set omega and tg");
    }
    omega = sch.omega_mhz;
    tg = sch.tg_ns;
  }

  pfsim::PFCycleSchedule sched;
  sched.rampDown = {parse_shape(p.value("shape", "tanh")), tau0, omegaCI, omegaCE};
  sched.drive = {omega, rise, fall, tg - rise - fall};
  sched.rampUp = sched.rampDown.reversed();
  const pfsim::GateResult r = pfsim::full_pf_cycle(params, opt, sched, get_coherence(p),
                                                   opt.trunc, get_num(p, "step", 0.004));
  ordered_json j;
  j["omega_mhz"] = omega;
  j["tg_ns"] = tg;
  j["total_ns"] = sched.total_ns();
  j["state_fidelities"] = r.stateFidelities;
  j["avg_gate_fidelity"] = r.avgGateFidelity;
  j["leakage"] = r.leakage;
  j["idle_to_idle_error"] = r.idleToIdleError;
  pfsim::write_text_file((ctx.out / "full_cycle.json").string(), j.dump(2) + "\n");
}

void task_fringes(const json& cfg, const json& p, const TaskContext& ctx) {
  check_keys(p, {"start", "stop", "step", "trunc", "covary", "omegaRef", "omega", "tauP"},
             "params");
  const pfsim::CircuitParams params = device_from_config(cfg);
  pfsim::SweepOptions opt = sweep_from_params(p, {5, 5, 5});
  opt.step_ghz = get_num(p, "step", 0.01) * ctx.gridScale;
  const double omega = get_num(p, "omega", 0.0);
  std::vector<double> taus = get_list(p, "tauP", {0.25, 0.5, 0.75, 1.0});

  const int n = int((opt.stop_ghz - opt.start_ghz) / opt.step_ghz) + 1;
  std::vector<double> zetas(n, std::numeric_limits<double>::quiet_NaN());
  parallel_for(n, ctx.threads, [&](int i) {
    const double wc = opt.start_ghz + i * opt.step_ghz;
    try {
      const pfsim::CircuitParams pt = pfsim::tuned_params(params, wc, opt);
      if (omega > 0.0) {
        zetas[i] = pfsim::total_zz(pt, opt.trunc, pfsim::DriveSpec{omega, 0.0, 0}).zeta_khz;
      } else {
        zetas[i] = pfsim::static_zz_at(pt, opt.trunc, opt.method);
      }
    } catch (const std::exception&) {
      // masked cell
    }
  });

  pfsim::CsvWriter csv({"omega_c_ghz", "tau_p_us", "zeta_khz", "fringe"});
  for (int i = 0; i < n; ++i) {
    const double wc = opt.start_ghz + i * opt.step_ghz;
    for (const double tau : taus) {
      if (std::isnan(zetas[i])) {
        csv.add_row_mixed({fmt(wc), fmt(tau), "", ""});
      } else {
        csv.add_row({wc, tau, zetas[i], pfsim::conditional_phase_fringe(zetas[i], tau)});
      }
    }
  }
  csv.write((ctx.out / "fringes.csv").string());
}

using TaskFn = void (*)(const json&, const json&, const TaskContext&);

const std::map<std::string, TaskFn>& task_table() {
  static const std::map<std::string, TaskFn> t = {
      {"static-zz", task_static_zz},   {"idle-point", task_idle_point},
      {"freedom-curve", task_freedom_curve}, {"map2d", task_map2d},
      {"exponents", task_exponents},   {"ramp", task_ramp},
      {"gate-error", task_gate_error}, {"full-cycle", task_full_cycle},
      {"fringes", task_fringes},
  };
  return t;
}

void run_config(const json& cfg, const TaskContext& ctx) {
  check_keys(cfg, {"device", "task", "params", "out"}, "config");
  if (!cfg.contains("task")) throw CliError("validation", "config missing required field: task");
  const std::string task = cfg.at("task").get<std::string>();
  const auto it = task_table().find(task);
  if (it == task_table().end()) throw CliError("validation", "unknown task: " + task);
  const json params = cfg.value("params", json::object());

  fs::create_directories(ctx.out);
  const auto t0 = std::chrono::steady_clock::now();
  it->second(cfg, params, ctx);
  const double wall = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  pfsim::write_manifest((ctx.out / "manifest.json").string(), task, cfg.dump(), wall);
}

// ---------------------------------------------------------------------------
// Reproduction targets: named bundles that emit plot-ready columns.
// ---------------------------------------------------------------------------

void repro_table1(const TaskContext& ctx) {
  pfsim::CsvWriter csv({"device", "omega1_ghz", "omega2_ghz", "g12_mhz", "g1c_mhz",
                        "g2c_mhz", "delta_c_mhz", "delta1_mhz", "delta2_mhz"});
  for (int d = 1; d <= 6; ++d) {
    const pfsim::CircuitParams p = pfsim::device_preset(d);
    csv.add_row({double(d), p.omega1, p.omega2, p.g12, p.g1c, p.g2c, p.deltaC, p.delta1,
                 p.delta2});
  }
  csv.write((ctx.out / "table1.csv").string());
}

void repro_table2(const TaskContext& ctx) {
  pfsim::CsvWriter csv({"device", "numeric_ghz", "perturbative_ghz", "residual_zz_khz"});
  std::array<pfsim::IdlePoint, 6> rows;
  parallel_for(6, ctx.threads, [&](int i) {
    const pfsim::CircuitParams params = pfsim::device_preset(i + 1);
    pfsim::SweepOptions opt;
    opt.trunc = {3, 3, 3};
    const pfsim::CapacitanceModel cap = pfsim::capacitance_from_couplings(params, 4.8);
    rows[i] = pfsim::find_idle_point(params, cap, opt);
  });
  for (int i = 0; i < 6; ++i) {
    const pfsim::IdlePoint& ip = rows[i];
    csv.add_row_mixed({fmt(i + 1.0), ip.omegaCI_ghz ? fmt(*ip.omegaCI_ghz) : "NA",
                       ip.omegaCIPerturbative_ghz ? fmt(*ip.omegaCIPerturbative_ghz) : "NA",
                       ip.omegaCI_ghz ? fmt(ip.residualZZ_khz) : "NA"});
  }
  csv.write((ctx.out / "table2.csv").string());
}

void repro_table3(const TaskContext& ctx) {
  // Closed-form rates vs exact rotating-frame elements on the simplified
  // circuit (small equal qubit-coupler couplings, no direct coupling, equal
  // anharmonicities), three-level subsystems. Conditional pairs are
  // reported as half-differences, the target-leakage pair as a full
  // difference.
  pfsim::CircuitParams p = pfsim::device_preset(2);
  p.g12 = 0.0;
  p.g1c = p.g2c = 10.0;
  p.omegaC = 4.8;
  const pfsim::TruncationSpec t{3, 3, 3};
  const pfsim::RotatingFrame frame(p, t, pfsim::DriveSpec{0.0, 0.0, 0});
  const double om = 1.0;
  const Eigen::MatrixXcd h = frame.hamiltonian(om);
  auto elem = [&](pfsim::BareLabel a, pfsim::BareLabel b) {
    return h(a.index(t), b.index(t)).real() / pfsim::rad_from_mhz(om);
  };
  const auto lam = pfsim::transition_rates(p);
  struct Row {
    const char* name;
    double exact;
  };
  const Row rows[11] = {
      {"lambda1", 0.5 * (elem({0, 0, 0}, {0, 0, 1}) - elem({1, 0, 0}, {1, 0, 1}))},
      {"lambda2", 0.5 * (elem({0, 0, 0}, {0, 1, 0}) - elem({1, 0, 0}, {1, 1, 0}))},
      {"lambda3", elem({0, 0, 1}, {0, 0, 2}) - elem({1, 0, 1}, {1, 0, 2})},
      {"lambda4", elem({0, 0, 1}, {0, 1, 1})},
      {"lambda5", elem({0, 0, 1}, {2, 0, 0})},
      {"lambda6", elem({0, 1, 0}, {2, 0, 0})},
      {"lambda7", elem({0, 1, 0}, {0, 1, 1})},
      {"lambda8", elem({0, 1, 0}, {0, 2, 0})},
      {"lambda9", elem({0, 1, 1}, {2, 0, 1})},
      {"lambda10", elem({2, 0, 0}, {2, 0, 1})},
      {"lambda11", elem({0, 0, 2}, {2, 0, 1})},
  };
  pfsim::CsvWriter csv({"rate", "closed_form", "exact_element"});
  for (int k = 0; k < 11; ++k) {
    csv.add_row_mixed({rows[k].name, fmt(lam[k]), fmt(rows[k].exact)});
  }
  csv.write((ctx.out / "table3.csv").string());
}

void repro_fig3(const TaskContext& ctx) {
  pfsim::CsvWriter csv({"device", "omega_c_ghz", "zeta_s_khz", "masked"});
  std::array<pfsim::SweepResult, 6> res;
  parallel_for(6, ctx.threads, [&](int i) {
    pfsim::SweepOptions opt;
    opt.trunc = {3, 3, 3};
    opt.step_ghz = 0.005 * ctx.gridScale;
    res[i] = pfsim::static_zz_sweep(pfsim::device_preset(i + 1), opt);
  });
  for (int i = 0; i < 6; ++i) {
    for (const auto& s : res[i].samples) {
      csv.add_row_mixed({fmt(i + 1.0), fmt(s.omegaC_ghz), s.masked ? "" : fmt(s.zeta_khz),
                         s.masked ? "1" : "0"});
    }
  }
  csv.write((ctx.out / "fig3.csv").string());
}

void repro_fig4(const TaskContext& ctx) {
  for (const auto& [suffix, omega] : std::vector<std::pair<std::string, double>>{
           {"a", 0.0}, {"b", 40.0}}) {
    json cfg = {{"device", 2},
                {"task", "map2d"},
                {"params", {{"omega", omega}}}};
    TaskContext sub = ctx;
    sub.out = ctx.out / ("fig4" + suffix);
    fs::create_directories(sub.out);
    task_map2d(cfg, cfg["params"], sub);
  }
}

void repro_fig5a(const TaskContext& ctx) {
  pfsim::CsvWriter csv({"device", "omega_c_ghz", "omega_star_mhz", "alpha_zx_mhz",
                        "has_root"});
  std::array<pfsim::FreedomCurve, 6> res;
  parallel_for(6, ctx.threads, [&](int i) {
    pfsim::SweepOptions opt;
    opt.trunc = {3, 3, 3};
    opt.start_ghz = 4.6;
    opt.stop_ghz = 6.6;
    opt.step_ghz = 0.025 * ctx.gridScale;
    res[i] = pfsim::freedom_curve(pfsim::device_preset(i + 1), opt, 100.0, 0.5);
  });
  for (int i = 0; i < 6; ++i) {
    for (const auto& s : res[i].samples) {
      csv.add_row_mixed({fmt(i + 1.0), fmt(s.omegaC_ghz),
                         s.hasRoot ? fmt(s.omegaStar_mhz) : "",
                         s.hasRoot ? fmt(s.alphaZXAtStar_mhz) : "", s.hasRoot ? "1" : "0"});
    }
  }
  csv.write((ctx.out / "fig5a.csv").string());
}

void repro_fig5h(const TaskContext& ctx) {
  // Exponent fits along the coupler axis for device 6.
  std::vector<double> wcs;
  for (double w = 4.90; w <= 5.65 + 1e-9; w += 0.05 * ctx.gridScale) wcs.push_back(w);
  std::vector<pfsim::ExponentFit> fits(wcs.size());
  const std::vector<double> samples = {0.5, 1.0, 1.5, 2.0, 2.5, 3.0,  3.5,
                                       4.0, 6.0, 9.0, 13.0, 18.0, 24.0, 30.0};
  parallel_for(int(wcs.size()), ctx.threads, [&](int i) {
    pfsim::SweepOptions opt;
    const pfsim::CircuitParams p =
        pfsim::tuned_params(pfsim::device_preset(6), wcs[i], opt);
    fits[i] = pfsim::fit_exponents(p, {5, 5, 5}, samples);
  });
  pfsim::CsvWriter csv({"omega_c_ghz", "a", "b", "eta2_khz_per_mhz2", "mu1", "a_reliable",
                        "b_reliable"});
  for (size_t i = 0; i < wcs.size(); ++i) {
    const auto& f = fits[i];
    csv.add_row_mixed({fmt(wcs[i]), f.aReliable ? fmt(f.a) : "", f.bReliable ? fmt(f.b) : "",
                       fmt(f.eta2), fmt(f.mu1), f.aReliable ? "1" : "0",
                       f.bReliable ? "1" : "0"});
  }
  csv.write((ctx.out / "fig5h.csv").string());
}

void repro_fig6a(const TaskContext& ctx) {
  pfsim::CsvWriter csv({"t_ns", "tanh_ghz", "flat_top_gaussian_ghz"});
  const pfsim::RampEnvelope tanhEnv{pfsim::RampShape::kTanh, 35.0, 6.59, 4.8};
  const pfsim::RampEnvelope gaussEnv{pfsim::RampShape::kFlatTopGaussian, 35.0, 6.59, 4.8};
  for (int i = 0; i <= 350; ++i) {
    const double t = i * 0.1;
    csv.add_row({t, tanhEnv.value_ghz(t), gaussEnv.value_ghz(t)});
  }
  csv.write((ctx.out / "fig6a.csv").string());
}

void repro_fig6b(const TaskContext& ctx) {
  const pfsim::CircuitParams params = pfsim::device_preset(2);
  pfsim::SweepOptions opt;
  const pfsim::CapacitanceModel cap = pfsim::capacitance_from_couplings(params, 4.8);
  const pfsim::IdlePoint ip = pfsim::find_idle_point(params, cap, opt);
  std::vector<double> tau0s;
  for (double t = 5.0; t <= 50.0 + 1e-9; t += 5.0 * std::max(1.0, ctx.gridScale)) {
    tau0s.push_back(t);
  }
  pfsim::CsvWriter csv({"shape", "tau0_ns", "f01", "f10", "f11"});
  for (const auto& [name, shape] : std::vector<std::pair<std::string, pfsim::RampShape>>{
           {"tanh", pfsim::RampShape::kTanh},
           {"flat-top-gaussian", pfsim::RampShape::kFlatTopGaussian}}) {
    const auto study = pfsim::ramp_round_trip_study(params, opt, {5, 5, 5}, shape,
                                                    *ip.omegaCI_ghz, 4.8, tau0s);
    for (const auto& s : study) {
      csv.add_row_mixed({name, fmt(s.tau0_ns), fmt(s.f01), fmt(s.f10), fmt(s.f11)});
    }
  }
  csv.write((ctx.out / "fig6b.csv").string());
}

void repro_fig7(const TaskContext& ctx) {
  // Error versus gate length along each device's freedom curve: every point
  // is driven at its ZZ-free amplitude, so gate length is set by the coupler
  // frequency. Windows span each device's feasible branch.
  struct Branch {
    int device;
    double start, stop, step, maxOmega;
  };
  const std::vector<Branch> branches = {{2, 5.70, 5.96, 0.02, 300.0},
                                        {3, 5.60, 5.86, 0.02, 300.0},
                                        {4, 5.52, 5.78, 0.02, 300.0},
                                        {5, 4.60, 4.78, 0.02, 150.0},
                                        {6, 4.62, 5.00, 0.04, 100.0}};
  pfsim::CsvWriter csv(
      {"device", "omega_c_ghz", "tg_ns", "omega_mhz", "zeta_khz", "error", "feasible"});
  std::vector<std::pair<int, std::vector<pfsim::GateErrorPoint>>> res;
  for (const Branch& b : branches) {
    std::vector<double> wcs;
    for (double wc = b.start; wc <= b.stop + 1e-9; wc += b.step * std::max(1.0, ctx.gridScale)) {
      wcs.push_back(wc);
    }
    pfsim::SweepOptions opt;
    opt.trunc = {3, 3, 3};
    res.emplace_back(b.device, pfsim::zx90_freedom_gate_error(
                                   pfsim::device_preset(b.device), opt, opt.trunc,
                                   pfsim::CoherenceSpec::uniform(200.0, 200.0, true), wcs,
                                   b.maxOmega));
  }
  for (const auto& [device, pts] : res) {
    for (const auto& pt : pts) {
      csv.add_row_mixed({fmt(double(device)), fmt(pt.omegaC_ghz),
                         pt.feasible ? fmt(pt.tg_ns) : "",
                         pt.feasible ? fmt(pt.omega_mhz) : "",
                         pt.feasible ? fmt(pt.zeta_khz) : "",
                         pt.feasible ? fmt(pt.error) : "", pt.feasible ? "1" : "0"});
    }
  }
  csv.write((ctx.out / "fig7.csv").string());
}

void repro_fig8(const TaskContext& ctx) {
  // Device-2 frequencies with equal capacitance ratios; overlay of the
  // three methods plus the effective-coupling axis.
  pfsim::CircuitParams p = pfsim::device_preset(2);
  pfsim::CapacitanceModel cap = pfsim::capacitance_from_couplings(p, 4.8);
  cap.alpha1 = cap.alpha2 = 0.022;
  p = pfsim::couplings_from_capacitance(cap, p);
  pfsim::SweepOptions opt;
  opt.step_ghz = 0.02 * ctx.gridScale;
  const pfsim::TruncationSpec t{5, 5, 5};
  const int n = int((opt.stop_ghz - opt.start_ghz) / opt.step_ghz) + 1;
  struct Row {
    double wc = 0.0, exact = 0.0, npad = 0.0, swt = 0.0, geff = 0.0;
    bool masked = false, pole = false;
  };
  std::vector<Row> rows(n);
  parallel_for(n, ctx.threads, [&](int i) {
    Row& r = rows[i];
    r.wc = opt.start_ghz + i * opt.step_ghz;
    const pfsim::CircuitParams pt = pfsim::tuned_params(p, r.wc, opt);
    r.geff = pfsim::g_eff_mhz(pt);
    const pfsim::SwtCoefficients sc = pfsim::swt_static_coefficients(pt);
    r.pole = sc.pole;
    r.swt = sc.zetaS_khz;
    try {
      r.exact = pfsim::static_zz_at(pt, t, pfsim::Diagonalizer::kExact);
      r.npad = pfsim::static_zz_at(pt, t, pfsim::Diagonalizer::kNpad);
    } catch (const std::exception&) {
      r.masked = true;
    }
  });
  pfsim::CsvWriter csv({"omega_c_ghz", "zeta_exact_khz", "zeta_npad_khz", "zeta_swt_khz",
                        "g_eff_mhz"});
  for (const Row& r : rows) {
    csv.add_row_mixed({fmt(r.wc), r.masked ? "" : fmt(r.exact), r.masked ? "" : fmt(r.npad),
                       r.pole ? "" : fmt(r.swt), fmt(r.geff)});
  }
  csv.write((ctx.out / "fig8.csv").string());
}

void repro_fig9(const TaskContext& ctx) {
  pfsim::CsvWriter csv({"device", "omega_mhz", "omega_c_ghz", "zeta_khz", "masked"});
  struct Panel {
    int device;
    double omega;
  };
  const std::vector<Panel> panels = {{2, 0.0}, {2, 47.0}, {2, 60.0},
                                     {6, 0.0}, {6, 42.3}, {6, 60.0}};
  pfsim::SweepOptions opt;
  opt.step_ghz = 0.01 * ctx.gridScale;
  const int n = int((opt.stop_ghz - opt.start_ghz) / opt.step_ghz) + 1;
  std::vector<std::vector<double>> grid(panels.size(),
                                        std::vector<double>(n, std::numeric_limits<double>::quiet_NaN()));
  parallel_for(int(panels.size()) * n, ctx.threads, [&](int k) {
    const int pi = k / n, i = k % n;
    const double wc = opt.start_ghz + i * opt.step_ghz;
    try {
      const pfsim::CircuitParams pt =
          pfsim::tuned_params(pfsim::device_preset(panels[pi].device), wc, opt);
      if (panels[pi].omega > 0.0) {
        grid[pi][i] =
            pfsim::total_zz(pt, {5, 5, 5}, pfsim::DriveSpec{panels[pi].omega, 0.0, 0}).zeta_khz;
      } else {
        grid[pi][i] = pfsim::static_zz_at(pt, {5, 5, 5}, pfsim::Diagonalizer::kExact);
      }
    } catch (const std::exception&) {
    }
  });
  for (size_t pi = 0; pi < panels.size(); ++pi) {
    for (int i = 0; i < n; ++i) {
      const double wc = opt.start_ghz + i * opt.step_ghz;
      const bool masked = std::isnan(grid[pi][i]);
      csv.add_row_mixed({fmt(double(panels[pi].device)), fmt(panels[pi].omega), fmt(wc),
                         masked ? "" : fmt(grid[pi][i]), masked ? "1" : "0"});
    }
  }
  csv.write((ctx.out / "fig9.csv").string());
}

void repro_fig10(const TaskContext& ctx) {
  struct Panel {
    int device;
    double omega;
  };
  const std::vector<Panel> panels = {{2, 0.0}, {2, 47.0}, {2, 60.0},
                                     {6, 0.0}, {6, 42.3}, {6, 60.0}};
  pfsim::CsvWriter csv({"device", "omega_mhz", "omega_c_ghz", "tau_p_us", "fringe"});
  pfsim::SweepOptions opt;
  opt.start_ghz = 4.5;
  opt.stop_ghz = 7.0;
  opt.step_ghz = 0.02 * ctx.gridScale;
  const int n = int((opt.stop_ghz - opt.start_ghz) / opt.step_ghz) + 1;
  std::vector<std::vector<double>> grid(panels.size(),
                                        std::vector<double>(n, std::numeric_limits<double>::quiet_NaN()));
  parallel_for(int(panels.size()) * n, ctx.threads, [&](int k) {
    const int pi = k / n, i = k % n;
    const double wc = opt.start_ghz + i * opt.step_ghz;
    try {
      const pfsim::CircuitParams pt =
          pfsim::tuned_params(pfsim::device_preset(panels[pi].device), wc, opt);
      if (panels[pi].omega > 0.0) {
        grid[pi][i] =
            pfsim::total_zz(pt, {5, 5, 5}, pfsim::DriveSpec{panels[pi].omega, 0.0, 0}).zeta_khz;
      } else {
        grid[pi][i] = pfsim::static_zz_at(pt, {5, 5, 5}, pfsim::Diagonalizer::kExact);
      }
    } catch (const std::exception&) {
    }
  });
  for (size_t pi = 0; pi < panels.size(); ++pi) {
    for (int i = 0; i < n; ++i) {
      const double wc = opt.start_ghz + i * opt.step_ghz;
      for (double tau = 0.1; tau <= 1.0 + 1e-9; tau += 0.1) {
        if (std::isnan(grid[pi][i])) {
          csv.add_row_mixed({fmt(double(panels[pi].device)), fmt(panels[pi].omega), fmt(wc),
                             fmt(tau), ""});
        } else {
          csv.add_row({double(panels[pi].device), panels[pi].omega, wc, tau,
                       pfsim::conditional_phase_fringe(grid[pi][i], tau)});
        }
      }
    }
  }
  csv.write((ctx.out / "fig10.csv").string());
}

const std::map<std::string, void (*)(const TaskContext&)>& repro_table() {
  static const std::map<std::string, void (*)(const TaskContext&)> t = {
      {"table1", repro_table1}, {"table2", repro_table2}, {"table3", repro_table3},
      {"fig3", repro_fig3},     {"fig4", repro_fig4},     {"fig5a", repro_fig5a},
      {"fig5h", repro_fig5h},   {"fig6a", repro_fig6a},   {"fig6b", repro_fig6b},
      {"fig7", repro_fig7},     {"fig8", repro_fig8},     {"fig9", repro_fig9},
      {"fig10", repro_fig10},
  };
  return t;
}

void run_reproduce(const std::string& name, TaskContext ctx) {
  const auto it = repro_table().find(name);
  if (it == repro_table().end()) {
    std::string known;
    for (const auto& [k, v] : repro_table()) known += (known.empty() ? "" : ", ") + k;
    throw CliError("validation", "unknown reproduction target: " + name + " (known: " + known + ")");
  }
  ctx.out /= name;
  fs::create_directories(ctx.out);
  const auto t0 = std::chrono::steady_clock::now();
  it->second(ctx);
  const double wall = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  ordered_json cfg = {{"reproduce", name}, {"gridScale", ctx.gridScale}};
  pfsim::write_manifest((ctx.out / "manifest.json").string(), "reproduce:" + name, cfg.dump(),
                        wall);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"pfsim: two-qubit tunable-coupler simulator (idle/entangled operating "
               "points, ZZ cancellation, ZX90 gate dynamics)"};
  std::string configPath, reproduceName, outDir;
  int threads = 1;
  double gridScale = 1.0;
  app.add_option("--config", configPath, "Run config JSON (device, task, params)");
  app.add_option("--reproduce", reproduceName,
                 "Named reproduction target (table1..3, fig3..fig10)");
  app.add_option("--out", outDir, "Output directory (default $PFSIM_OUT_DIR or ./pfsim_out)");
  app.add_option("--threads", threads, "Parallel workers for grid tasks")->check(CLI::PositiveNumber);
  app.add_option("--grid-scale", gridScale, "Grid coarsening factor (>1 = coarser, for CI)")
      ->check(CLI::PositiveNumber);
  CLI11_PARSE(app, argc, argv);

  try {
    if (configPath.empty() == reproduceName.empty()) {
      throw CliError("validation", "exactly one of --config or --reproduce is required");
    }
    TaskContext ctx;
    if (outDir.empty()) {
      const char* env = std::getenv("PFSIM_OUT_DIR");
      outDir = env ? env : "pfsim_out";
    }
    ctx.out = outDir;
    ctx.threads = threads;
    ctx.gridScale = gridScale;

    if (!reproduceName.empty()) {
      run_reproduce(reproduceName, ctx);
    } else {
      std::ifstream in(configPath);
      if (!in) throw CliError("io", "cannot open config: " + configPath);
      json cfg;
      try {
        cfg = json::parse(in);
      } catch (const json::exception& e) {
        throw CliError("validation", std::string("config is not valid JSON: ") + e.what());
      }
      if (cfg.contains("out") && outDir == "pfsim_out") ctx.out = cfg.at("out").get<std::string>();
      run_config(cfg, ctx);
    }
  } catch (const CliError& e) {
    ordered_json err = {{"error", {{"type", e.kind}, {"message", e.what()}}}};
    std::cerr << err.dump() << "\n";
    return 1;
  } catch (const std::exception& e) {
    ordered_json err = {{"error", {{"type", "runtime"}, {"message", e.what()}}}};
    std::cerr << err.dump() << "\n";
    return 1;
  }
  return 0;
}
