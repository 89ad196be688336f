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


#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include <doctest.h>

#include "itof/config.hpp"
#include "itof/runner.hpp"

using namespace itof;

namespace {

std::string key_of_error(const std::string& text) {
  std::istringstream in(text);
  try {
    parse_key_values(in);
  } catch (const ConfigError& e) {
    return e.key();
  }
  return "";
}

std::filesystem::path scratch_dir(const std::string& name) {
  const auto dir = std::filesystem::temp_directory_path() / ("itof_test_" + name);
  std::filesystem::remove_all(dir);
  std::filesystem::create_directories(dir);
  return dir;
}

}  // namespace

TEST_CASE("key = value parsing") {
  std::istringstream in("# gate\n n_ions = 3  \nJ_khz=2 # trailing comment\n\n");
  const KeyValues v = parse_key_values(in);
  CHECK(v.at("n_ions") == "3");
  CHECK(v.at("J_khz") == "2");
  CHECK(v.size() == 2);
}

TEST_CASE("parse errors name the offending key") {
  CHECK(key_of_error("n_ions = 3\nbogus_key = 1\n") == "bogus_key");
  CHECK(key_of_error("J_khz =\n") == "J_khz");

  KeyValues v = preset_values("fig2");
  v["n_ions"] = "three";
  try {
    settings_from_values(v);
    FAIL("expected a ConfigError");
  } catch (const ConfigError& e) {
    CHECK(e.key() == "n_ions");
  }
  v = preset_values("fig2");
  v["mode_set"] = "radial";
  CHECK_THROWS_WITH_AS(settings_from_values(v), "expected cm_only or all_axial", ConfigError);
  v = preset_values("fig2");
  v.erase("delta_cm_khz");
  try {
    settings_from_values(v);
    FAIL("expected a ConfigError");
  } catch (const ConfigError& e) {
    CHECK(e.key() == "delta_cm_khz");
  }
}

TEST_CASE("every preset resolves") {
  for (const auto& name : preset_names()) {
    CAPTURE(name);
    const RunSettings s = settings_from_values(preset_values(name));
    CHECK_NOTHROW(resolve(s.spec));
  }
  CHECK_THROWS_AS(preset_values("fig9"), ConfigError);
  const RunSettings sweep = settings_from_values(preset_values("fig4a"));
  REQUIRE(sweep.sweep.has_value());
  CHECK(sweep.sweep->key == "nbar_cm");
  CHECK(sweep.sweep->values.size() == 5);
}

TEST_CASE("timing integers and cutoffs") {
  KeyValues v = preset_values("fig2");
  v["k1"] = "30";
  const GateConfig c = resolve(settings_from_values(v).spec);
  CHECK(c.total_time() == doctest::Approx(30.0 / 20e3));
  CHECK(c.ramp.t_a == doctest::Approx(500e-6));

  v = preset_values("fig2");
  v["fock_nmax"] = "7";
  CHECK(resolve(settings_from_values(v).spec).fock_cutoffs == std::vector<int>{7});
  v["fock_nmax"] = "0";
  CHECK_THROWS_AS(settings_from_values(v), ConfigError);
}

TEST_CASE("fingerprint ignores ordering, sweep keys and number spelling") {
  KeyValues a = preset_values("fig3");
  KeyValues b;
  for (auto it = a.rbegin(); it != a.rend(); ++it) b.insert(*it);
  CHECK(fingerprint(a) == fingerprint(b));
  b["sweep_steps"] = "40";
  CHECK(fingerprint(a) == fingerprint(b));
  b["J_khz"] = "2.000";
  CHECK(fingerprint(a) == fingerprint(b));
  b["J_khz"] = "2.5";
  CHECK(fingerprint(a) != fingerprint(b));
  CHECK(fingerprint(a).size() == 16);
}

TEST_CASE("command runner: errors and outputs") {
  const auto dir = scratch_dir("runner");
  std::ostringstream out;
  std::ostringstream err;

  CliRequest bad;
  bad.command = "fidelity";
  bad.preset = "nope";
  bad.out_dir = dir;
  CHECK(run_command(bad, out, err) == 2);
  CHECK(err.str().find("kind=config key=preset") != std::string::npos);

  const auto cfg = dir / "gate.cfg";
  std::ofstream(cfg) << "n_ions = 3\nomega_cm_khz = 1000\ndelta_cm_khz = 20\nJ_khz = 2\ng_khz = 1\n";
  CliRequest ok;
  ok.command = "fidelity";
  ok.config_path = cfg.string();
  ok.out_dir = dir;
  CHECK(run_command(ok, out, err) == 0);
  std::ifstream report(dir / "report.csv");
  std::string first;
  std::string header;
  std::getline(report, first);
  std::getline(report, header);
  CHECK(first == "# itof report schema v1");
  CHECK(header == report_header());

  CliRequest modes;
  modes.command = "modes";
  modes.preset = "fig2";
  modes.out_dir = dir;
  std::ostringstream modes_out;
  CHECK(run_command(modes, modes_out, err) == 0);
  CHECK(modes_out.str().find("1.73205") != std::string::npos);
  CHECK(std::filesystem::exists(dir / "modes.csv"));
  std::filesystem::remove_all(dir);
}

TEST_CASE("sweep records keep the input order") {
  std::vector<KeyValues> points;
  for (const char* j : {"3", "2", "4"}) {
    KeyValues v = preset_values("fig3");
    for (const char* k : {"sweep_key", "sweep_from", "sweep_to", "sweep_steps"}) v.erase(k);
    v["J_khz"] = j;
    v["convergence_check"] = "false";
    points.push_back(v);
  }
  const auto records = run_sweep(points, "fig3", 2);
  REQUIRE(records.size() == 3);
  CHECK(records[0].values.at("J_khz") == "3");
  CHECK(records[1].values.at("J_khz") == "2");
  CHECK(records[2].values.at("J_khz") == "4");
  for (const auto& r : records) CHECK(r.ok);
}
