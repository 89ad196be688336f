// Copyright 2026 The itoffoli Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "itof/config.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <fstream>
#include <iomanip>
#include <sstream>

namespace itof {

namespace {

std::string trim(const std::string& s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

double to_double(const KeyValues& v, const std::string& key) {
  const std::string& text = v.at(key);
  try {
    std::size_t used = 0;
    const double x = std::stod(text, &used);
    if (used != text.size() || !std::isfinite(x)) throw std::invalid_argument(text);
    return x;
  } catch (const std::exception&) {
    throw ConfigError("value '" + text + "' is not a number", key);
  }
}

int to_int(const KeyValues& v, const std::string& key) {
  const double x = to_double(v, key);
  if (x != std::floor(x) || std::abs(x) > 1e9) throw ConfigError("value must be an integer", key);
  return static_cast<int>(x);
}

bool to_bool(const KeyValues& v, const std::string& key) {
  const std::string& t = v.at(key);
  if (t == "true" || t == "1" || t == "yes") return true;
  if (t == "false" || t == "0" || t == "no") return false;
  throw ConfigError("value '" + t + "' is not a boolean", key);
}

std::optional<double> opt_double(const KeyValues& v, const std::string& key) {
  if (!v.contains(key)) return std::nullopt;
  return to_double(v, key);
}

const std::vector<std::string> kSweepKeys = {"sweep_key", "sweep_from", "sweep_to", "sweep_steps", "sweep_values"};

}  // namespace

const std::vector<std::string>& known_keys() {
  static const std::vector<std::string> keys = {
      "n_ions",        "omega_cm_khz",   "delta_cm_khz", "eta_cm_per_ion", "J_khz",
      "omega_rabi_khz", "g_khz",         "ratio_J_over_g", "t_a_mode",      "mode_set",
      "echo",          "nbar_cm",        "fock_nmax",    "k1",             "k2",
      "target_ion",    "t_a_us",         "t_mb_us",      "ramp",           "drive_correction",
      "nu_offset_khz", "dt_scale",       "convergence_check", "sweep_key",  "sweep_from",
      "sweep_to",      "sweep_steps",    "sweep_values"};
  return keys;
}

KeyValues parse_key_values(std::istream& in) {
  KeyValues out;
  std::string line;
  int number = 0;
  while (std::getline(in, line)) {
    ++number;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) {
      throw ConfigError("line " + std::to_string(number) + ": expected key = value", trim(line));
    }
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    const auto& keys = known_keys();
    if (std::find(keys.begin(), keys.end(), key) == keys.end()) throw ConfigError("unknown key", key);
    if (value.empty()) throw ConfigError("empty value", key);
    out[key] = value;
  }
  return out;
}

KeyValues load_config_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot read config file " + path, "config");
  return parse_key_values(in);
}

std::vector<std::string> preset_names() {
  return {"fig2", "fig3", "fig3_dip", "fig3a", "fig4a", "fig4b"};
}

KeyValues preset_values(const std::string& name) {
  KeyValues v = {{"n_ions", "3"},          {"omega_cm_khz", "1000"}, {"eta_cm_per_ion", "0.1"},
                 {"t_a_mode", "equal_tau_g"}, {"fock_nmax", "auto"}, {"nbar_cm", "0"}};
  if (name == "fig2") {
    v.insert({{"delta_cm_khz", "20"}, {"J_khz", "2"}, {"g_khz", "1"}, {"mode_set", "cm_only"}, {"echo", "none"}});
  } else if (name == "fig3") {
    v.insert({{"delta_cm_khz", "200"}, {"J_khz", "2"}, {"ratio_J_over_g", "2"}, {"mode_set", "cm_only"},
              {"echo", "none"}, {"sweep_key", "J_khz"}, {"sweep_from", "2"}, {"sweep_to", "10"},
              {"sweep_steps", "9"}});
  } else if (name == "fig3_dip") {
    v.insert({{"delta_cm_khz", "50"}, {"J_khz", "6.25"}, {"ratio_J_over_g", "2"}, {"mode_set", "cm_only"},
              {"echo", "none"}, {"sweep_key", "J_khz"}, {"sweep_from", "5"}, {"sweep_to", "7.5"},
              {"sweep_steps", "126"}});
  } else if (name == "fig3a") {
    v.insert({{"delta_cm_khz", "-20"}, {"J_khz", "2"}, {"g_khz", "1"}, {"mode_set", "all_axial"},
              {"echo", "none"}});
  } else if (name == "fig4a") {
    v.insert({{"delta_cm_khz", "-200"}, {"J_khz", "9.524"}, {"g_khz", "4.762"}, {"mode_set", "all_axial"},
              {"echo", "multibeat"}, {"t_mb_us", "5"}, {"sweep_key", "nbar_cm"},
              {"sweep_values", "0,0.1,0.2,0.5,1.0"}});
  } else if (name == "fig4b") {
    v.insert({{"delta_cm_khz", "-200"}, {"J_khz", "2"}, {"g_khz", "1"}, {"mode_set", "all_axial"},
              {"echo", "multibeat"}, {"t_mb_us", "5"}, {"sweep_key", "nbar_cm"},
              {"sweep_values", "0,0.1,0.2,0.5,1.0"}});
  } else {
    throw ConfigError("unknown preset '" + name + "'", "preset");
  }
  return v;
}

KeyValues merged(KeyValues base, const KeyValues& overrides) {
  for (const auto& [k, val] : overrides) base[k] = val;
  return base;
}

RunSettings settings_from_values(const KeyValues& v) {
  const auto& keys = known_keys();
  for (const auto& [k, val] : v) {
    if (std::find(keys.begin(), keys.end(), k) == keys.end()) throw ConfigError("unknown key", k);
  }
  for (const char* required : {"n_ions", "omega_cm_khz", "delta_cm_khz"}) {
    if (!v.contains(required)) throw ConfigError("missing required key", required);
  }
  RunSettings rs;
  GateSpec& s = rs.spec;
  s.n_ions = to_int(v, "n_ions");
  s.omega_cm = khz(to_double(v, "omega_cm_khz"));
  s.delta_cm = khz(to_double(v, "delta_cm_khz"));
  if (v.contains("eta_cm_per_ion")) s.eta_cm_per_ion = to_double(v, "eta_cm_per_ion");
  if (auto j = opt_double(v, "J_khz")) s.ising_j = khz(*j);
  if (auto o = opt_double(v, "omega_rabi_khz")) s.omega_rabi = khz(*o);
  if (auto g = opt_double(v, "g_khz")) s.g = khz(*g);
  if (auto r = opt_double(v, "ratio_J_over_g")) s.ratio_j_over_g = *r;
  if (!s.ising_j && !s.omega_rabi) throw ConfigError("missing required key (or omega_rabi_khz)", "J_khz");
  if (!s.g && !s.ratio_j_over_g) throw ConfigError("missing required key (or ratio_J_over_g)", "g_khz");

  const std::string ta_mode = v.contains("t_a_mode") ? v.at("t_a_mode") : "equal_tau_g";
  if (ta_mode == "explicit") {
    if (!v.contains("t_a_us")) throw ConfigError("t_a_mode = explicit needs t_a_us", "t_a_us");
    s.t_a = microseconds(to_double(v, "t_a_us"));
  } else if (ta_mode == "equal_tau_g") {
    if (v.contains("t_a_us")) throw ConfigError("t_a_us needs t_a_mode = explicit", "t_a_us");
  } else {
    throw ConfigError("expected equal_tau_g or explicit", "t_a_mode");
  }

  if (v.contains("mode_set")) {
    const std::string& m = v.at("mode_set");
    if (m == "cm_only") {
      s.mode_set = ModeSet::CenterOfMass;
    } else if (m == "all_axial") {
      s.mode_set = ModeSet::AllAxial;
    } else {
      throw ConfigError("expected cm_only or all_axial", "mode_set");
    }
  }
  if (v.contains("echo")) {
    const std::string& e = v.at("echo");
    if (e == "none") {
      s.echo = EchoKind::None;
    } else if (e == "sign_flip") {
      s.echo = EchoKind::SignFlip;
    } else if (e == "multibeat") {
      s.echo = EchoKind::Multibeat;
    } else {
      throw ConfigError("expected none, sign_flip or multibeat", "echo");
    }
  }
  if (v.contains("ramp")) {
    const std::string& r = v.at("ramp");
    if (r == "sin2") {
      s.ramp = RampShape::SinSquared;
    } else if (r == "quench") {
      s.ramp = RampShape::Quench;
    } else {
      throw ConfigError("expected sin2 or quench", "ramp");
    }
  }
  if (v.contains("nbar_cm")) s.nbar_cm = to_double(v, "nbar_cm");
  if (v.contains("target_ion")) s.target = to_int(v, "target_ion");
  if (v.contains("t_mb_us")) s.t_mb = microseconds(to_double(v, "t_mb_us"));
  if (v.contains("drive_correction")) s.drive_correction = to_bool(v, "drive_correction");
  if (v.contains("nu_offset_khz")) s.nu_offset = khz(to_double(v, "nu_offset_khz"));
  if (v.contains("dt_scale")) s.dt_scale = to_double(v, "dt_scale");
  if (v.contains("convergence_check")) rs.convergence_check = to_bool(v, "convergence_check");
  if (v.contains("fock_nmax") && v.at("fock_nmax") != "auto") {
    const int nmax = to_int(v, "fock_nmax");
    if (nmax < 1) throw ConfigError("fock_nmax must be auto or a positive integer", "fock_nmax");
    const int modes = s.mode_set == ModeSet::AllAxial ? s.n_ions : 1;
    s.fock_cutoffs = std::vector<int>(static_cast<std::size_t>(modes), nmax);
  }
  if (v.contains("k1")) {
    // t_T = 2 pi k1 / |delta_cm| fixes the ramp time once tau_g is known.
    if (v.contains("t_a_us")) throw ConfigError("k1 and t_a_us both fix the ramp time", "k1");
    const int k1 = to_int(v, "k1");
    const GateConfig probe = resolve(s);
    const double t_total = kTwoPi * k1 / std::abs(s.delta_cm);
    const double t_a = 0.5 * (t_total - probe.tau_g);
    if (t_a < 0.0) throw ConfigError("k1 gives a total time shorter than the gate time", "k1");
    s.t_a = t_a;
  }
  if (v.contains("k2")) rs.k2 = to_int(v, "k2");

  if (v.contains("sweep_key")) {
    SweepSpec sw;
    sw.key = v.at("sweep_key");
    const auto& known = known_keys();
    if (std::find(known.begin(), known.end(), sw.key) == known.end() ||
        std::find(kSweepKeys.begin(), kSweepKeys.end(), sw.key) != kSweepKeys.end()) {
      throw ConfigError("cannot sweep key '" + sw.key + "'", "sweep_key");
    }
    if (v.contains("sweep_values")) {
      std::stringstream ss(v.at("sweep_values"));
      std::string item;
      while (std::getline(ss, item, ',')) {
        KeyValues one = {{"sweep_values", trim(item)}};
        sw.values.push_back(to_double(one, "sweep_values"));
      }
    } else {
      for (const char* k : {"sweep_from", "sweep_to", "sweep_steps"}) {
        if (!v.contains(k)) throw ConfigError("missing required sweep key", k);
      }
      const double from = to_double(v, "sweep_from");
      const double to = to_double(v, "sweep_to");
      const int steps = to_int(v, "sweep_steps");
      if (steps < 1) throw ConfigError("sweep_steps must be positive", "sweep_steps");
      for (int i = 0; i < steps; ++i) {
        sw.values.push_back(steps == 1 ? from : from + (to - from) * i / (steps - 1));
      }
    }
    if (sw.values.empty()) throw ConfigError("sweep has no values", "sweep_values");
    rs.sweep = sw;
  }
  return rs;
}

std::string fingerprint(const KeyValues& values) {
  std::uint64_t h = 1469598103934665603ULL;
  for (const auto& [k, val] : values) {  // std::map iterates in sorted key order
    if (std::find(kSweepKeys.begin(), kSweepKeys.end(), k) != kSweepKeys.end()) continue;
    std::string canonical = val;
    try {
      std::size_t used = 0;
      const double x = std::stod(val, &used);
      if (used == val.size()) {
        std::ostringstream num;
        num << std::setprecision(12) << x;
        canonical = num.str();
      }
    } catch (const std::exception&) {
    }
    for (char ch : k + "=" + canonical + "\n") {
      h ^= static_cast<unsigned char>(ch);
      h *= 1099511628211ULL;
    }
  }
  std::ostringstream out;
  out << std::hex << std::setw(16) << std::setfill('0') << h;
  return out.str();
}

}  // namespace itof
