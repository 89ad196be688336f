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

#include "itof/runner.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <mutex>
#include <sstream>
#include <thread>

#include "itof/spinmodel.hpp"

namespace itof {

namespace {

constexpr const char* kSchema = "# itof report schema v1";

std::string num(double x) {
  std::ostringstream s;
  s << std::setprecision(10) << x;
  return s.str();
}

std::string csv_escape(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

std::string bitstring(std::uint64_t bits, int n) {
  std::string s;
  for (int i = 0; i < n; ++i) s += spin_of(bits, i, n) == 1 ? '0' : '1';
  return s;
}

std::string join_ints(const std::vector<int>& v, char sep) {
  std::string s;
  for (std::size_t i = 0; i < v.size(); ++i) s += (i ? std::string(1, sep) : "") + std::to_string(v[i]);
  return s;
}

std::ofstream open_out(const std::filesystem::path& file) {
  std::ofstream out(file);
  if (!out) throw ConfigError("cannot write " + file.string(), "out");
  return out;
}

GateSpec vacuum_spec(GateSpec spec) {
  spec.nbar_cm = 0.0;
  return spec;
}

void write_plot_script(const std::filesystem::path& dir, const std::string& command, const std::string& sweep_key) {
  std::ofstream py = open_out(dir / ("plot_" + command + ".py"));
  py << "# Regenerates the figures of `itof " << command << "` from the CSV outputs.\n"
     << "import glob\nimport os\n\nimport matplotlib.pyplot as plt\nimport numpy as np\nimport pandas as pd\n\n"
     << "here = os.path.dirname(os.path.abspath(__file__))\n";
  if (command == "simulate") {
    py << "for path in sorted(glob.glob(os.path.join(here, 'trace_*.csv'))):\n"
          "    df = pd.read_csv(path)\n"
          "    name = os.path.basename(path)[6:-4]\n"
          "    fig, (ax0, ax1) = plt.subplots(1, 2, figsize=(10, 4))\n"
          "    ax0.plot(df['x_0'], df['p_0'])\n"
          "    ax0.set_xlabel('<x>')\n"
          "    ax0.set_ylabel('<p>')\n"
          "    ax0.set_title('phase space, input ' + name)\n"
          "    for c in ('sx', 'sy', 'sz'):\n"
          "        ax1.plot(df['t_us'], df[c], label=c)\n"
          "    ax1.set_xlabel('t (us)')\n"
          "    ax1.legend()\n"
          "    fig.savefig(os.path.join(here, 'trace_' + name + '.png'), dpi=150)\n\n"
          "lines = [l for l in open(os.path.join(here, 'unitary.txt')) if not l.startswith('#') and l.strip()]\n"
          "data = np.array([[float(x) for x in l.split()] for l in lines])\n"
          "d = data.shape[1]\n"
          "fig, axes = plt.subplots(1, 2, figsize=(10, 4))\n"
          "for ax, part, title in zip(axes, (data[:d], data[d:]), ('real', 'imag')):\n"
          "    im = ax.imshow(part, cmap='RdBu', vmin=-1, vmax=1)\n"
          "    ax.set_title(title)\n"
          "    fig.colorbar(im, ax=ax)\n"
          "fig.savefig(os.path.join(here, 'unitary.png'), dpi=150)\n";
  } else {
    py << "df = pd.read_csv(os.path.join(here, 'report.csv'), comment='#')\n"
          "df = df[df['status'] == 'ok']\n"
          "key = '" << sweep_key << "'\n"
          "col = 'fidelity_thermal' if key == 'nbar_cm' else 'fidelity'\n"
          "fig, ax = plt.subplots(figsize=(6, 4))\n"
          "ax.semilogy(df[key], 1.0 - df[col], 'o-')\n"
          "flagged = df[df['degeneracy_flags'] > 0]\n"
          "ax.semilogy(flagged[key], 1.0 - flagged[col], 'rx', label='degeneracy flag')\n"
          "ax.set_xlabel(key)\n"
          "ax.set_ylabel('1 - F')\n"
          "ax.legend()\n"
          "fig.savefig(os.path.join(here, 'sweep.png'), dpi=150)\n";
  }
}

}  // namespace

KeyValues request_values(const CliRequest& request) {
  KeyValues v;
  if (request.preset) v = preset_values(*request.preset);
  if (request.config_path) v = merged(v, load_config_file(*request.config_path));
  if (request.nmax) v["fock_nmax"] = *request.nmax;
  if (request.dt_scale) v["dt_scale"] = num(*request.dt_scale);
  if (v.empty()) throw ConfigError("either --preset or --config is required", "config");
  return v;
}

RunRecord run_point(const KeyValues& values, const std::string& preset, const EvolutionOptions& evolution) {
  RunRecord rec;
  rec.values = values;
  rec.preset = preset;
  rec.fingerprint = fingerprint(values);
  const auto start = std::chrono::steady_clock::now();
  try {
    const RunSettings settings = settings_from_values(values);
    const GateConfig config = resolve(settings.spec);
    rec.config = config;
    if (settings.k2) {
      const double t_eff = 2.0 * config.ramp.effective_time() + config.tau_g;
      const double mismatch = wrap_phase(std::abs(config.cm_ising()) * t_eff - kTwoPi * *settings.k2);
      if (std::abs(mismatch) > 1e-3) {
        log_warning("timing integer k2 not satisfied: J t_T - 2 pi k2 = " + num(mismatch) + " rad");
      }
    }
    const GateConfig vac = config.nbar_cm > 0.0 ? resolve(vacuum_spec(settings.spec)) : config;
    GateRunOptions opts;
    opts.evolution = evolution;
    opts.convergence_check = settings.convergence_check;
    GateRun run = simulate_gate(vac, opts);
    rec.report = std::move(run.report);
    rec.report.fingerprint = rec.fingerprint;
    if (settings.convergence_check) rec.convergence_delta = run.convergence_delta;
    if (config.nbar_cm > 0.0) {
      EvolutionOptions thermal_opts = evolution;
      thermal_opts.echo_plan = run.evolution.echo_plan;
      rec.thermal_fidelity = thermal_fidelity(config, config.nbar_cm, thermal_opts).fidelity;
    }
    if (settings.convergence_check && run.convergence_delta > 1e-4) {
      log_warning("Fock cutoff not converged: fidelity moved by " + num(run.convergence_delta) + " at n_max + 2");
    }
    rec.report.timing = run.evolution.timing;
    rec.ok = true;
  } catch (const SolverError& e) {
    rec.error = std::string("solver: ") + e.what();
  } catch (const ConfigError& e) {
    rec.error = "config[" + e.key() + "]: " + e.what();
  } catch (const std::exception& e) {
    rec.error = e.what();
  }
  rec.wall_time = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return rec;
}

std::vector<RunRecord> run_sweep(const std::vector<KeyValues>& points, const std::string& preset, int workers) {
  std::vector<RunRecord> records(points.size());
  std::atomic<std::size_t> next{0};
  auto work = [&] {
    for (std::size_t i = next++; i < points.size(); i = next++) records[i] = run_point(points[i], preset);
  };
  const int n = std::max(1, std::min<int>(workers, static_cast<int>(points.size())));
  std::vector<std::thread> pool;
  for (int t = 1; t < n; ++t) pool.emplace_back(work);
  work();
  for (auto& t : pool) t.join();
  return records;
}

std::string report_header() {
  return "fingerprint,preset,n_ions,omega_cm_khz,delta_cm_khz,eta_cm_per_ion,J_khz,omega_rabi_khz,g_khz,"
         "ratio_J_over_g,t_a_us,tau_g_us,t_total_us,mode_set,echo,target_ion,nbar_cm,fock_nmax,dt_us,"
         "lambda_c,g_tilde_khz,nu_khz,fidelity,fidelity_thermal,leakage,max_phase_residual_rad,"
         "target_population,convergence_delta,degeneracy_flags,status,error,runtime_s";
}

std::string report_row(const RunRecord& r) {
  std::ostringstream row;
  row << r.fingerprint << ',' << r.preset << ',';
  if (r.config) {
    const GateConfig& c = *r.config;
    const double j = std::abs(c.cm_ising());
    row << c.n_qubits() << ',' << num(to_khz(c.crystal.omega_cm)) << ',' << num(to_khz(c.delta_cm)) << ','
        << num(c.crystal.lamb_dicke(0, 0)) << ',' << num(to_khz(j)) << ',' << num(to_khz(c.omega_rabi)) << ','
        << num(to_khz(c.g)) << ',' << num(j / c.g) << ',' << num(c.ramp.t_a * 1e6) << ','
        << num(c.tau_g * 1e6) << ',' << num(c.total_time() * 1e6) << ',' << to_string(c.mode_set) << ','
        << to_string(c.echo) << ',' << c.target << ',' << num(c.nbar_cm) << ','
        << join_ints(c.fock_cutoffs, '/') << ',' << num(ramp_step(c) * 1e6) << ',' << num(c.lambda_c) << ','
        << num(to_khz(std::abs(c.drive_amplitude()))) << ',' << num(to_khz(c.nu)) << ',';
  } else {
    row << std::string(20, ',');
  }
  if (r.ok) {
    row << num(r.report.average_fidelity) << ',' << (r.thermal_fidelity ? num(*r.thermal_fidelity) : "") << ','
        << num(r.report.leakage) << ',' << num(r.report.max_phase_residual) << ','
        << num(r.report.target_population) << ',' << (r.convergence_delta >= 0 ? num(r.convergence_delta) : "")
        << ',' << r.report.flags.size() << ",ok,,";
  } else {
    row << ",,,,,,,error," << csv_escape(r.error) << ',';
  }
  row << std::fixed << std::setprecision(3) << r.wall_time;
  return row.str();
}

void write_report(const std::filesystem::path& file, const std::vector<RunRecord>& records) {
  std::ofstream out = open_out(file);
  out << kSchema << '\n' << report_header() << '\n';
  for (const auto& r : records) out << report_row(r) << '\n';
}

void write_trace(const std::filesystem::path& file, const Trace& trace) {
  std::ofstream out = open_out(file);
  const std::size_t modes = trace.points.empty() ? 0 : trace.points.front().x.size();
  out << "t_us";
  for (std::size_t m = 0; m < modes; ++m) out << ",x_" << m;
  for (std::size_t m = 0; m < modes; ++m) out << ",p_" << m;
  for (std::size_t m = 0; m < modes; ++m) out << ",n_" << m;
  out << ",sx,sy,sz\n";
  for (const auto& pt : trace.points) {
    out << num(pt.t * 1e6);
    for (double v : pt.x) out << ',' << num(v);
    for (double v : pt.p) out << ',' << num(v);
    for (double v : pt.n) out << ',' << num(v);
    out << ',' << num(pt.sx) << ',' << num(pt.sy) << ',' << num(pt.sz) << '\n';
  }
}

void write_unitary(const std::filesystem::path& file, const CMatrix& process) {
  std::ofstream out = open_out(file);
  out << "# process matrix <vac|U|vac>, global phase aligned to the ideal gate\n# real part\n";
  out << std::fixed << std::setprecision(6);
  for (Index r = 0; r < process.rows(); ++r) {
    for (Index c = 0; c < process.cols(); ++c) out << (c ? " " : "") << std::setw(10) << process(r, c).real();
    out << '\n';
  }
  out << "# imaginary part\n";
  for (Index r = 0; r < process.rows(); ++r) {
    for (Index c = 0; c < process.cols(); ++c) out << (c ? " " : "") << std::setw(10) << process(r, c).imag();
    out << '\n';
  }
}

namespace {

int run_modes(const KeyValues& values, const CliRequest& req, std::ostream& out) {
  const RunSettings settings = settings_from_values(values);
  const GateConfig config = resolve(settings.spec);
  const CrystalModel& cr = config.crystal;
  std::ofstream csv = open_out(req.out_dir / "modes.csv");
  csv << "mode,freq_ratio,freq_khz,detuning_khz";
  for (int i = 0; i < cr.n_ions; ++i) csv << ",b_" << i;
  for (int i = 0; i < cr.n_ions; ++i) csv << ",eta_" << i;
  csv << '\n';
  out << "positions:";
  for (double u : cr.positions) out << ' ' << num(u);
  out << "\nratios:";
  for (int m = 0; m < cr.n_modes(); ++m) {
    const double ratio = cr.mode_freqs(m) / cr.omega_cm;
    out << ' ' << std::fixed << std::setprecision(5) << ratio;
    csv << m << ',' << num(ratio) << ',' << num(to_khz(cr.mode_freqs(m))) << ','
        << num(to_khz(config.beatnote() - cr.mode_freqs(m)));
    for (int i = 0; i < cr.n_ions; ++i) csv << ',' << num(cr.mode_vectors(i, m));
    for (int i = 0; i < cr.n_ions; ++i) csv << ',' << num(cr.lamb_dicke(m, i));
    csv << '\n';
  }
  out.unsetf(std::ios::fixed);
  out << "\nJ/2pi (kHz):\n";
  for (int i = 0; i < cr.n_ions; ++i) {
    for (int j = 0; j < cr.n_ions; ++j) out << (j ? " " : "") << std::setw(12) << num(to_khz(config.ising.J(i, j)));
    out << '\n';
  }
  return 0;
}

int run_echo_solve(const KeyValues& values, const CliRequest& req, std::ostream& out) {
  RunSettings settings = settings_from_values(values);
  settings.spec.echo = EchoKind::Multibeat;
  const GateConfig config = resolve(settings.spec);
  const EchoPlan plan = plan_multibeat_echo(config);
  const MultibeatSolution& sol = plan.solution;
  std::ofstream csv = open_out(req.out_dir / "multibeat.csv");
  csv << "# t_mb_us=" << num(sol.t_mb * 1e6) << " pulses=" << plan.envelope.size() << " amplitudes signed\n";
  csv << "harmonic,freq_khz,amplitude_khz\n";
  for (std::size_t k = 0; k < sol.harmonics.size(); ++k) {
    csv << sol.harmonics[k] << ',' << num(to_khz(sol.tone_freq(k))) << ','
        << num(to_khz(sol.amplitudes(static_cast<Index>(k)))) << '\n';
  }
  std::vector<int> cutoffs(static_cast<std::size_t>(config.n_modes()), 6);
  const VerificationReport ver = verify_solution(sol, config.couplings, cutoffs);
  out << "tones: " << sol.harmonics.size() << "\nphases (target / achieved, rad):\n";
  for (Index m = 0; m < sol.target_phases.size(); ++m) {
    out << "  mode " << config.modes[m] << ": " << num(sol.target_phases(m)) << " / " << num(sol.achieved_phases(m))
        << '\n';
  }
  out << "max phase error: " << num(sol.max_phase_error) << " rad\n";
  out << "verify: " << (ver.passed ? "passed" : "failed") << " (" << ver.details << ")\n";
  return ver.passed ? 0 : 4;
}

void print_record(const RunRecord& r, std::ostream& out) {
  if (!r.ok) {
    out << "status=error " << r.error << '\n';
    return;
  }
  out << "fidelity=" << num(r.report.average_fidelity);
  if (r.thermal_fidelity) out << " fidelity_thermal=" << num(*r.thermal_fidelity);
  out << " leakage=" << num(r.report.leakage) << " max_phase_residual=" << num(r.report.max_phase_residual);
  if (r.convergence_delta >= 0) out << " convergence_delta=" << num(r.convergence_delta);
  out << " runtime_s=" << std::fixed << std::setprecision(2) << r.wall_time << '\n';
  out.unsetf(std::ios::fixed);
}

}  // namespace

int run_command(const CliRequest& req, std::ostream& out, std::ostream& err) {
  try {
    const KeyValues values = request_values(req);
    std::error_code ec;
    std::filesystem::create_directories(req.out_dir, ec);
    if (ec) throw ConfigError("cannot create output directory " + req.out_dir.string(), "out");
    const std::string preset = req.preset.value_or("");
    const int workers = req.workers > 0 ? req.workers : std::max(1u, std::thread::hardware_concurrency());

    if (req.command == "modes") return run_modes(values, req, out);
    if (req.command == "echo-solve") return run_echo_solve(values, req, out);
    if (req.command == "fidelity") {
      const RunRecord rec = run_point(values, preset);
      write_report(req.out_dir / "report.csv", {rec});
      print_record(rec, out);
      if (!rec.ok) throw std::runtime_error(rec.error);
      return 0;
    }
    if (req.command == "simulate") {
      const RunSettings settings = settings_from_values(values);
      const GateConfig config = resolve(vacuum_spec(settings.spec));
      const int n = config.n_qubits();
      const std::vector<std::uint64_t> tracked = {target_pair_state(n, config.target, 0),
                                                  target_pair_state(n, config.target, 1), 0};
      GateRunOptions opts;
      opts.convergence_check = settings.convergence_check;
      opts.evolution.trace_samples = 200;
      for (auto b : tracked) opts.evolution.traced_columns.push_back(static_cast<Index>(b));
      const auto start = std::chrono::steady_clock::now();
      const GateRun run = simulate_gate(config, opts);
      RunRecord rec;
      rec.values = values;
      rec.preset = preset;
      rec.fingerprint = fingerprint(values);
      rec.config = config;
      rec.ok = true;
      rec.report = run.report;
      if (settings.convergence_check) rec.convergence_delta = run.convergence_delta;
      rec.wall_time = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
      write_report(req.out_dir / "report.csv", {rec});
      for (const auto& tr : run.evolution.traces) {
        write_trace(req.out_dir / ("trace_" + bitstring(static_cast<std::uint64_t>(tr.column), n) + ".csv"), tr);
      }
      write_unitary(req.out_dir / "unitary.txt", run.report.process);
      write_plot_script(req.out_dir, "simulate", "");
      print_record(rec, out);
      return 0;
    }
    if (req.command == "sweep") {
      const RunSettings settings = settings_from_values(values);
      if (!settings.sweep) throw ConfigError("sweep needs sweep_key and sweep values", "sweep_key");
      std::vector<KeyValues> points;
      for (double x : settings.sweep->values) {
        KeyValues p = values;
        for (const char* k : {"sweep_key", "sweep_from", "sweep_to", "sweep_steps", "sweep_values"}) p.erase(k);
        p[settings.sweep->key] = num(x);
        points.push_back(std::move(p));
      }
      const auto records = run_sweep(points, preset, workers);
      write_report(req.out_dir / "report.csv", records);
      write_plot_script(req.out_dir, "sweep", settings.sweep->key);
      int failures = 0;
      for (const auto& r : records) {
        out << settings.sweep->key << '=' << r.values.at(settings.sweep->key) << ' ';
        print_record(r, out);
        failures += r.ok ? 0 : 1;
      }
      return failures == 0 ? 0 : 5;
    }
    throw ConfigError("unknown subcommand '" + req.command + "'", "command");
  } catch (const ConfigError& e) {
    err << "error: kind=config key=" << e.key() << " message=\"" << e.what() << "\"\n";
    return 2;
  } catch (const SolverError& e) {
    err << "error: kind=solver residual=" << num(e.residual()) << " message=\"" << e.what() << "\"\n";
    return 3;
  } catch (const std::exception& e) {
    err << "error: kind=runtime message=\"" << e.what() << "\"\n";
    return 1;
  }
}

}  // namespace itof
