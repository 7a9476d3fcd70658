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

#pragma once

#include <filesystem>
#include <iosfwd>
#include <map>
#include <string>
#include <string_view>
#include <vector>

#include "wigprobe/montecarlo.hpp"

namespace wigprobe {

/// Flat `key = value` settings; later assignments are rejected, not merged.
using KeyValues = std::map<std::string, std::string, std::less<>>;

inline constexpr std::string_view kPresetNames[] = {"case1",       "case2a",      "case2b", "case3-fock1",
                                                    "case3-fock2", "case4",       "custom"};

struct ScenarioFile {
  std::string preset = "case1";
  ExperimentScenario scenario;
  double alpha_max = 2.0;
  double alpha_step = 0.1;
  std::string output_dir = "out";
};

/// Parses `key = value` lines; `#` starts a comment. Throws std::invalid_argument
/// with the line number on malformed or duplicate keys.
KeyValues parse_key_values(std::istream& in);
KeyValues read_key_values(const std::filesystem::path& path);

/// Builds a scenario from settings. A named preset fixes every physics field;
/// physics keys may still appear but must repeat the preset's value exactly.
/// `custom` requires every physics key.
ScenarioFile build_scenario(const KeyValues& kv);

/// The physics of a named preset (not `custom`).
ExperimentScenario preset_scenario(std::string_view name);

/// 0, step, 2 step, ... up to max (inclusive, tolerant to rounding).
std::vector<double> make_alpha_grid(double max, double step);

/// Writes a complete, re-parseable settings file.
void dump_scenario(std::ostream& out, const ScenarioFile& file);

}  // namespace wigprobe
