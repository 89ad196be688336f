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

#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "itof/runner.hpp"

int main(int argc, char** argv) {
  CLI::App app{"itof: simulator for the single-step N-qubit i-Toffoli gate in trapped-ion chains"};
  app.require_subcommand(1);

  itof::CliRequest req;
  std::string config;
  std::string preset;
  std::string out_dir = "itof_out";
  std::string nmax;
  double dt_scale = 0.0;

  const char* commands[][2] = {
      {"modes", "equilibrium positions, axial modes, Lamb-Dicke and Ising matrices"},
      {"simulate", "one gate run with traces, process matrix and plot script"},
      {"sweep", "parallel sweep over sweep_key"},
      {"echo-solve", "solve and verify the multi-beatnote echo tones"},
      {"fidelity", "average gate fidelity (thermal when nbar_cm > 0)"},
  };
  for (const auto& [name, help] : commands) {
    CLI::App* sub = app.add_subcommand(name, help);
    sub->add_option("--config", config, "key = value configuration file");
    sub->add_option("--preset", preset, "fig2 | fig3 | fig3_dip | fig3a | fig4a | fig4b");
    sub->add_option("--out", out_dir, "output directory");
    sub->add_option("--workers", req.workers, "sweep worker threads (default: hardware concurrency)");
    sub->add_option("--nmax", nmax, "Fock cutoff: auto or an integer");
    sub->add_option("--dt-scale", dt_scale, "multiplier on the ramp time step");
  }
  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) return app.exit(e);
    std::cerr << "error: kind=usage message=\"" << e.what() << "\"\n";
    return 64;
  }

  req.command = app.get_subcommands().front()->get_name();
  if (!config.empty()) req.config_path = config;
  if (!preset.empty()) req.preset = preset;
  if (!nmax.empty()) req.nmax = nmax;
  if (dt_scale > 0.0) req.dt_scale = dt_scale;
  req.out_dir = out_dir;
  return itof::run_command(req, std::cout, std::cerr);
}
