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

#include "wigprobe/scenario_file.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <istream>
#include <ostream>

#include <fmt/format.h>
#include <fmt/ostream.h>
#include <fmt/ranges.h>

namespace wigprobe {

namespace {

constexpr std::string_view kPhysicsKeys[] = {
    "input_fock_m",          "eta1",           "T",
    "epsilon",               "overlap_M",      "generation_stages",
    "generation_couplers",   "reconstruction_stages", "reconstruction_couplers",
    "reliability_threshold", "overflow_limit"};

constexpr std::string_view kRunKeys[] = {"preset",     "events_per_run", "runs",
                                         "seed",       "alpha_max",      "alpha_step",
                                         "sampling",   "forward_cutoff", "output_dir"};

std::string_view trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

[[noreturn]] void bad_value(std::string_view key, std::string_view value, std::string_view want) {
  throw std::invalid_argument(fmt::format("{}: '{}' is not {}", key, value, want));
}

template <typename T>
T parse_number(std::string_view key, std::string_view value) {
  T out{};
  const auto* end = value.data() + value.size();
  const auto [ptr, ec] = std::from_chars(value.data(), end, out);
  if (ec != std::errc() || ptr != end) bad_value(key, value, "a number");
  return out;
}

std::vector<double> parse_ratios(std::string_view key, std::string_view value) {
  std::vector<double> out;
  while (true) {
    const auto comma = value.find(',');
    out.push_back(parse_number<double>(key, trim(value.substr(0, comma))));
    if (comma == std::string_view::npos) break;
    value.remove_prefix(comma + 1);
  }
  return out;
}

struct Preset {
  std::string_view name;
  int fock;
  double eta1, T, epsilon, M;
  int stages;
  double gen_ratio, recon_ratio;
  double threshold;
};

// Cases 2 and 3 quote only the overall efficiency; it is carried by epsilon
// with eta1 = 1, so epsilon = overall / T.
constexpr Preset kPresets[] = {
    {"case1", 1, 1.0, 0.95, 1.0, 1.0, 3, 0.5, 0.5, kDefaultNegativityThreshold},
    {"case2a", 1, 1.0, 0.95, 0.6 / 0.95, 1.0, 3, 0.45, 0.5, kDefaultNegativityThreshold},
    {"case2b", 1, 1.0, 0.95, 0.6 / 0.95, 1.0, 4, 0.45, 0.5, kDefaultNegativityThreshold},
    {"case3-fock1", 1, 1.0, 0.95, 0.3 / 0.95, 1.0, 3, 0.45, 0.5, kDefaultNegativityThreshold},
    {"case3-fock2", 2, 1.0, 0.95, 0.3 / 0.95, 1.0, 3, 0.45, 0.5, kDefaultNegativityThreshold},
    {"case4", 1, 0.3, 0.95, 1.0, 0.5, 3, 0.5, 0.5, kMismatchNegativityThreshold},
};

const Preset* find_preset(std::string_view name) {
  for (const Preset& p : kPresets)
    if (p.name == name) return &p;
  return nullptr;
}

// String form of every physics field, for dumping and for preset consistency checks.
KeyValues physics_values(const ExperimentScenario& s) {
  const auto ratios = [](const TmdConfig& c) { return fmt::format("{}", fmt::join(c.coupler_ratios, ",")); };
  return {
      {"input_fock_m", fmt::format("{}", s.input_fock_m)},
      {"eta1", fmt::format("{}", s.eta1)},
      {"T", fmt::format("{}", s.T)},
      {"epsilon", fmt::format("{}", s.epsilon)},
      {"overlap_M", fmt::format("{}", s.overlap_M)},
      {"generation_stages", fmt::format("{}", s.tmd_generation.stages)},
      {"generation_couplers", ratios(s.tmd_generation)},
      {"reconstruction_stages", fmt::format("{}", s.tmd_reconstruction.stages)},
      {"reconstruction_couplers", ratios(s.tmd_reconstruction)},
      {"reliability_threshold", fmt::format("{}", s.reliability_threshold)},
      {"overflow_limit", fmt::format("{}", s.overflow_limit)},
  };
}

TmdConfig tmd_from(std::string_view stages_key, std::string_view ratios_key, const KeyValues& kv,
                   double epsilon) {
  TmdConfig cfg;
  cfg.stages = parse_number<int>(stages_key, kv.find(stages_key)->second);
  cfg.coupler_ratios = parse_ratios(ratios_key, kv.find(ratios_key)->second);
  if (cfg.coupler_ratios.size() == 1 && cfg.stages > 1)
    cfg.coupler_ratios.assign(static_cast<std::size_t>(std::max(cfg.stages, 1)), cfg.coupler_ratios[0]);
  cfg.detection_efficiency = epsilon;
  cfg.validate();
  return cfg;
}

}  // namespace

ExperimentScenario preset_scenario(std::string_view name) {
  const Preset* p = find_preset(name);
  if (!p) throw std::invalid_argument(fmt::format("unknown preset '{}'", name));
  ExperimentScenario s;
  s.input_fock_m = p->fock;
  s.eta1 = p->eta1;
  s.T = p->T;
  s.epsilon = p->epsilon;
  s.overlap_M = p->M;
  s.tmd_generation = TmdConfig::uniform(p->stages, p->gen_ratio, p->epsilon);
  s.tmd_reconstruction = TmdConfig::uniform(p->stages, p->recon_ratio, p->epsilon);
  s.reliability_threshold = p->threshold;
  s.overflow_limit = kDefaultOverflowLimit;
  s.alpha_grid = make_alpha_grid(2.0, 0.1);
  return s;
}

std::vector<double> make_alpha_grid(double max, double step) {
  if (!(step > 0.0) || !std::isfinite(step)) throw std::invalid_argument("alpha step must be positive");
  if (!(max >= 0.0) || !std::isfinite(max)) throw std::invalid_argument("alpha max must be non-negative");
  const auto count = static_cast<long>(std::floor(max / step + 1e-9));
  if (count > 100000) throw std::invalid_argument("alpha grid is too fine");
  std::vector<double> grid;
  for (long k = 0; k <= count; ++k) grid.push_back(std::round(static_cast<double>(k) * step * 1e9) / 1e9);
  return grid;
}

KeyValues parse_key_values(std::istream& in) {
  KeyValues kv;
  std::string line;
  for (int lineno = 1; std::getline(in, line); ++lineno) {
    std::string_view view(line);
    view = trim(view.substr(0, view.find('#')));
    if (view.empty()) continue;
    const auto eq = view.find('=');
    if (eq == std::string_view::npos)
      throw std::invalid_argument(fmt::format("line {}: expected 'key = value'", lineno));
    const std::string key(trim(view.substr(0, eq)));
    const std::string value(trim(view.substr(eq + 1)));
    if (key.empty() || value.empty())
      throw std::invalid_argument(fmt::format("line {}: empty key or value", lineno));
    if (!kv.emplace(key, value).second)
      throw std::invalid_argument(fmt::format("line {}: duplicate key '{}'", lineno, key));
  }
  return kv;
}

KeyValues read_key_values(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error(fmt::format("cannot open scenario file '{}'", path.string()));
  return parse_key_values(in);
}

ScenarioFile build_scenario(const KeyValues& kv) {
  for (const auto& [key, value] : kv) {
    const bool known = std::ranges::find(kPhysicsKeys, key) != std::end(kPhysicsKeys) ||
                       std::ranges::find(kRunKeys, key) != std::end(kRunKeys);
    if (!known) throw std::invalid_argument(fmt::format("unknown key '{}'", key));
  }

  ScenarioFile file;
  if (auto it = kv.find("preset"); it != kv.end()) file.preset = it->second;
  if (std::ranges::find(kPresetNames, file.preset) == std::end(kPresetNames))
    throw std::invalid_argument(fmt::format("unknown preset '{}'", file.preset));

  ExperimentScenario& s = file.scenario;
  if (file.preset == "custom") {
    for (std::string_view key : kPhysicsKeys)
      if (!kv.contains(key)) throw std::invalid_argument(fmt::format("custom scenario needs '{}'", key));
    const auto num = [&](std::string_view key) { return parse_number<double>(key, kv.find(key)->second); };
    s.input_fock_m = parse_number<int>("input_fock_m", kv.find("input_fock_m")->second);
    s.eta1 = num("eta1");
    s.T = num("T");
    s.epsilon = num("epsilon");
    s.overlap_M = num("overlap_M");
    s.reliability_threshold = num("reliability_threshold");
    s.overflow_limit = num("overflow_limit");
    s.tmd_generation = tmd_from("generation_stages", "generation_couplers", kv, s.epsilon);
    s.tmd_reconstruction = tmd_from("reconstruction_stages", "reconstruction_couplers", kv, s.epsilon);
  } else {
    s = preset_scenario(file.preset);
    // case1 is run for both |1> and |2>; the Fock number is free there only.
    if (file.preset == "case1") {
      if (auto it = kv.find("input_fock_m"); it != kv.end())
        s.input_fock_m = parse_number<int>("input_fock_m", it->second);
    }
    const KeyValues fixed = physics_values(s);
    for (std::string_view key : kPhysicsKeys) {
      const auto it = kv.find(key);
      if (it == kv.end()) continue;
      const std::string& want = fixed.find(key)->second;
      bool same = it->second == want;
      if (!same && (key == "generation_couplers" || key == "reconstruction_couplers")) {
        std::vector<double> given = parse_ratios(key, it->second);
        const std::vector<double> fixed_ratios = parse_ratios(key, want);
        if (given.size() == 1) given.assign(fixed_ratios.size(), given[0]);
        same = given == fixed_ratios;
      }
      else if (!same && key != "input_fock_m" && key != "generation_stages" && key != "reconstruction_stages")
        same = parse_number<double>(key, it->second) == parse_number<double>(key, want);
      if (!same)
        throw std::invalid_argument(fmt::format(
            "preset '{}' fixes {} = {}; use preset = custom to change it", file.preset, key, want));
    }
  }

  if (auto it = kv.find("events_per_run"); it != kv.end())
    s.events_per_run = parse_number<std::int64_t>(it->first, it->second);
  if (auto it = kv.find("runs"); it != kv.end()) s.runs = parse_number<int>(it->first, it->second);
  if (auto it = kv.find("seed"); it != kv.end()) s.rng_seed = parse_number<std::uint64_t>(it->first, it->second);
  if (auto it = kv.find("forward_cutoff"); it != kv.end())
    s.forward_cutoff = parse_number<int>(it->first, it->second);
  if (auto it = kv.find("sampling"); it != kv.end()) {
    if (it->second == "photon")
      s.sampling = SamplingLevel::photon;
    else if (it->second == "click")
      s.sampling = SamplingLevel::click;
    else
      bad_value(it->first, it->second, "'photon' or 'click'");
  }
  if (auto it = kv.find("alpha_max"); it != kv.end()) file.alpha_max = parse_number<double>(it->first, it->second);
  if (auto it = kv.find("alpha_step"); it != kv.end()) file.alpha_step = parse_number<double>(it->first, it->second);
  if (auto it = kv.find("output_dir"); it != kv.end()) file.output_dir = it->second;

  s.alpha_grid = make_alpha_grid(file.alpha_max, file.alpha_step);
  if (s.input_fock_m != 1 && s.input_fock_m != 2)
    throw std::invalid_argument("input_fock_m must be 1 or 2");
  s.validate();
  return file;
}

void dump_scenario(std::ostream& out, const ScenarioFile& file) {
  const ExperimentScenario& s = file.scenario;
  fmt::print(out, "preset = {}\n", file.preset);
  const KeyValues physics = physics_values(s);
  for (std::string_view key : kPhysicsKeys) fmt::print(out, "{} = {}\n", key, physics.find(key)->second);
  fmt::print(out, "events_per_run = {}\n", s.events_per_run);
  fmt::print(out, "runs = {}\n", s.runs);
  fmt::print(out, "seed = {}\n", s.rng_seed);
  fmt::print(out, "alpha_max = {}\n", file.alpha_max);
  fmt::print(out, "alpha_step = {}\n", file.alpha_step);
  fmt::print(out, "sampling = {}\n", s.sampling == SamplingLevel::photon ? "photon" : "click");
  fmt::print(out, "forward_cutoff = {}\n", s.forward_cutoff);
  fmt::print(out, "output_dir = {}\n", file.output_dir);
}

}  // namespace wigprobe
