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

#pragma once

#include <filesystem>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "itof/analysis.hpp"
#include "itof/config.hpp"

namespace itof {

struct CliRequest {
  std::string command;  // modes | simulate | sweep | echo-solve | fidelity
  std::optional<std::string> config_path;
  std::optional<std::string> preset;
  std::filesystem::path out_dir = "itof_out";
  int workers = 0;      // 0: hardware concurrency
  std::optional<std::string> nmax;
  std::optional<double> dt_scale;
};

/// One row of report.csv.
struct RunRecord {
  std::string fingerprint;
  std::string preset;
  KeyValues values;
  bool ok = false;
  std::string error;
  std::optional<GateConfig> config;
  FidelityReport report;
  std::optional<double> thermal_fidelity;
  double convergence_delta = -1.0;
  double wall_time = 0.0;
};

/// Preset, then config file, then command-line overrides.
KeyValues request_values(const CliRequest& request);

/// Resolves and simulates one configuration. Failures are captured in the
/// record instead of thrown.
RunRecord run_point(const KeyValues& values, const std::string& preset, const EvolutionOptions& evolution = {});

/// Runs every point on `workers` threads; output order follows the input.
std::vector<RunRecord> run_sweep(const std::vector<KeyValues>& points, const std::string& preset, int workers);

std::string report_header();
std::string report_row(const RunRecord& record);
void write_report(const std::filesystem::path& file, const std::vector<RunRecord>& records);
void write_trace(const std::filesystem::path& file, const Trace& trace);
void write_unitary(const std::filesystem::path& file, const CMatrix& process);

/// Executes a subcommand. Returns the process exit code; failures print one
/// machine-readable `error:` line on `err`.
int run_command(const CliRequest& request, std::ostream& out, std::ostream& err);

}  // namespace itof
