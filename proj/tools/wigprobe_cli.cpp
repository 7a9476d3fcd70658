// Copyright 2026 The wigprobe Authors
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

// wigprobe: Monte Carlo reliability scans of parity-based Wigner probing with
// a time-multiplexed detector, and overlap diagnostics.

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <fmt/format.h>
#include <fmt/ostream.h>
#include <json.hpp>

#include "wigprobe/mismatch_diagnosis.hpp"
#include "wigprobe/montecarlo.hpp"
#include "wigprobe/scenario_file.hpp"

namespace fs = std::filesystem;
using namespace wigprobe;

namespace {

constexpr int kExitUsage = 1;
constexpr int kExitIo = 2;
constexpr int kExitInversion = 3;

struct IoError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Writes through a temporary so a failed write never leaves a partial file.
template <typename Fn>
void write_file(const fs::path& path, Fn&& body) {
  const fs::path tmp = path.string() + ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary);
    if (!out) throw IoError(fmt::format("cannot write '{}'", path.string()));
    body(out);
    out.flush();
    if (!out) throw IoError(fmt::format("write to '{}' failed", path.string()));
  }
  std::error_code ec;
  fs::rename(tmp, path, ec);
  if (ec) throw IoError(fmt::format("cannot write '{}': {}", path.string(), ec.message()));
}

struct RunOptions {
  std::string scenario_path;
  std::optional<std::string> preset;
  std::optional<std::uint64_t> seed;
  std::optional<std::int64_t> events;
  std::optional<int> runs;
  std::optional<double> alpha_max;
  std::optional<double> alpha_step;
  std::optional<std::string> out;
  std::optional<int> fock;
  std::optional<std::string> sampling;
  unsigned threads = 0;
  bool dump_matrices = false;
  bool dump_config = false;
};

std::string shortest(double v) { return fmt::format("{}", v); }

int run_command(const RunOptions& opt) {
  KeyValues kv;
  if (!opt.scenario_path.empty()) kv = read_key_values(opt.scenario_path);
  // command-line flags win over the file
  if (opt.preset) kv["preset"] = *opt.preset;
  if (opt.seed) kv["seed"] = std::to_string(*opt.seed);
  if (opt.events) kv["events_per_run"] = std::to_string(*opt.events);
  if (opt.runs) kv["runs"] = std::to_string(*opt.runs);
  if (opt.alpha_max) kv["alpha_max"] = shortest(*opt.alpha_max);
  if (opt.alpha_step) kv["alpha_step"] = shortest(*opt.alpha_step);
  if (opt.out) kv["output_dir"] = *opt.out;
  if (opt.fock) kv["input_fock_m"] = std::to_string(*opt.fock);
  if (opt.sampling) kv["sampling"] = *opt.sampling;

  const ScenarioFile file = build_scenario(kv);
  if (opt.dump_config) {
    dump_scenario(std::cout, file);
    return 0;
  }

  const fs::path dir(file.output_dir);
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec || !fs::is_directory(dir))
    throw IoError(fmt::format("cannot create output directory '{}'", dir.string()));

  const ExperimentScenario& scn = file.scenario;
  const ScanResult result = scan(scn, opt.threads);

  write_file(dir / "scan.csv", [&](std::ostream& o) { write_scan_csv(o, result); });
  write_file(dir / "points.json", [&](std::ostream& o) { write_points_json(o, result); });
  write_file(dir / "scenario.txt", [&](std::ostream& o) { dump_scenario(o, file); });

  if (opt.dump_matrices) {
    const int bins = scn.bins();
    const ConvolutionMatrix C_gen = build_convolution_matrix(scn.tmd_generation, bins);
    const ConvolutionMatrix C_recon = build_convolution_matrix(scn.tmd_reconstruction, bins);
    const LossMatrix L = loss_matrix(scn.eta_total(), bins + 1);
    write_file(dir / "C_generation.csv", [&](std::ostream& o) { write_matrix_csv(o, C_gen.entries, "N", "n"); });
    write_file(dir / "C_reconstruction.csv",
               [&](std::ostream& o) { write_matrix_csv(o, C_recon.entries, "N", "n"); });
    write_file(dir / "L.csv", [&](std::ostream& o) { write_matrix_csv(o, L.entries, "m", "n"); });
  }

  using json = nlohmann::ordered_json;
  const WignerSample& origin = result.samples.front();
  int reliable_points = 0;
  bool inversion_failed = false;
  for (const WignerSample& s : result.samples) {
    reliable_points += s.reliability.reliable ? 1 : 0;
    inversion_failed = inversion_failed || !s.diagnostics.empty();
  }
  const auto opt_json = [](const std::optional<double>& v) { return v ? json(*v) : json(nullptr); };
  json summary;
  summary["preset"] = file.preset;
  summary["input_fock_m"] = scn.input_fock_m;
  summary["seed"] = scn.rng_seed;
  summary["boundary_alpha"] = opt_json(result.boundary);
  summary["wigner_at_origin_mean"] = origin.W_reconstructed_mean;
  summary["wigner_at_origin_std"] = origin.W_reconstructed_std;
  summary["min_component_at_origin"] = origin.reliability.min_component;
  summary["reliable_points"] = reliable_points;
  summary["origin_reliable"] = result.origin_reliable;
  summary["first_reliable_alpha"] = opt_json(result.first_reliable);
  write_file(dir / "summary.json", [&](std::ostream& o) { o << summary.dump(2) << '\n'; });

  fmt::print("preset {} (|{}>), seed {}\n", file.preset, scn.input_fock_m, scn.rng_seed);
  fmt::print("{:>6} {:>12} {:>12} {:>12} {:>12} {:>8}\n", "alpha", "W_degraded", "W_recon", "std",
             "min rho", "ok");
  for (const WignerSample& s : result.samples)
    fmt::print("{:>6.2f} {:>12.6f} {:>12.6f} {:>12.2e} {:>12.2e} {:>8}\n", s.alpha, s.W_degraded_mean,
               s.W_reconstructed_mean, s.W_reconstructed_std, s.reliability.min_component,
               s.reliability.reliable ? "yes" : "no");
  if (result.boundary)
    fmt::print("reliable up to alpha = {}\n", shortest(*result.boundary));
  else
    fmt::print("no reliable grid point\n");
  fmt::print("artifacts in {}\n", dir.string());

  if (inversion_failed) {
    fmt::print(stderr, "error: click inversion failed at one or more grid points (see points.json)\n");
    return kExitInversion;
  }
  return 0;
}

struct OverlapOptions {
  double T = 0.95;
  std::optional<std::vector<std::string>> m_grid;  // raw tokens; given but empty is an error
  double m_step = 0.05;
  std::string out = "overlap.csv";
};

int diagnose_command(const OverlapOptions& opt) {
  std::vector<double> grid;
  if (opt.m_grid) {
    for (const std::string& token : *opt.m_grid) {
      if (token.empty()) continue;
      std::size_t used = 0;
      double value = 0.0;
      try {
        value = std::stod(token, &used);
      } catch (const std::exception&) {
        used = 0;
      }
      if (used != token.size()) throw std::invalid_argument("bad overlap value '" + token + "'");
      grid.push_back(value);
    }
  } else {
    if (!(opt.m_step > 0.0 && opt.m_step <= 1.0)) throw std::invalid_argument("--m-step must lie in (0, 1]");
    grid = make_alpha_grid(1.0, opt.m_step);
  }
  if (grid.empty()) throw std::invalid_argument("overlap grid is empty");
  // Compute fully before touching the file system.
  std::ostringstream buffer;
  write_amplitude_csv(buffer, opt.T, grid);
  const fs::path path(opt.out);
  if (path.has_parent_path()) {
    std::error_code ec;
    fs::create_directories(path.parent_path(), ec);
  }
  write_file(path, [&](std::ostream& o) { o << buffer.str(); });
  fmt::print("wrote {} ({} rows)\n", path.string(), grid.size());
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"wigprobe: Wigner-function probing with click detectors"};
  app.require_subcommand(1);

  RunOptions run;
  CLI::App* run_cmd = app.add_subcommand("run", "Monte Carlo reliability scan of a scenario");
  run_cmd->add_option("--scenario", run.scenario_path, "Settings file (key = value)")->check(CLI::ExistingFile);
  run_cmd->add_option("--preset", run.preset, "case1, case2a, case2b, case3-fock1, case3-fock2, case4, custom");
  run_cmd->add_option("--seed", run.seed, "RNG seed");
  run_cmd->add_option("--events", run.events, "Events per run");
  run_cmd->add_option("--runs", run.runs, "Runs per grid point");
  run_cmd->add_option("--alpha-max", run.alpha_max, "Largest displacement on the grid");
  run_cmd->add_option("--alpha-step", run.alpha_step, "Displacement grid step");
  run_cmd->add_option("--out", run.out, "Output directory");
  run_cmd->add_option("--fock", run.fock, "Input Fock number (case1 and custom)");
  run_cmd->add_option("--sampling", run.sampling, "photon or click");
  run_cmd->add_option("--threads", run.threads, "Worker threads (0 = all cores)");
  run_cmd->add_flag("--dump-matrices", run.dump_matrices, "Also write C and L as CSV");
  run_cmd->add_flag("--dump-config", run.dump_config, "Print the resolved settings and exit");

  OverlapOptions overlap;
  CLI::App* diag_cmd = app.add_subcommand("diagnose-overlap", "Oscillation amplitudes versus mode overlap");
  diag_cmd->add_option("--T", overlap.T, "Beamsplitter transmittance");
  std::vector<std::string> m_grid_tokens;
  CLI::Option* m_grid_opt = diag_cmd->add_option("--m-grid", m_grid_tokens, "Explicit overlap values, comma separated")
                                ->delimiter(',')
                                ->expected(0, -1);
  diag_cmd->add_option("--m-step", overlap.m_step, "Step of the 0..1 overlap grid");
  diag_cmd->add_option("--out", overlap.out, "Output CSV path");

  CLI11_PARSE(app, argc, argv);
  if (m_grid_opt->count() > 0) overlap.m_grid = m_grid_tokens;

  try {
    if (run_cmd->parsed()) return run_command(run);
    if (diag_cmd->parsed()) return diagnose_command(overlap);
  } catch (const IoError& e) {
    fmt::print(stderr, "error: {}\n", e.what());
    return kExitIo;
  } catch (const SingularSystemError& e) {
    fmt::print(stderr, "error: {}\n", e.what());
    return kExitInversion;
  } catch (const std::exception& e) {
    fmt::print(stderr, "error: {}\n", e.what());
    return kExitUsage;
  }
  return kExitUsage;
}
