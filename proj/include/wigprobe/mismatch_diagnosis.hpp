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

#include <iosfwd>
#include <span>
#include <vector>

#include "wigprobe/photon_statistics.hpp"

namespace wigprobe {

/// A_ii = |rho_ii(alpha = 1) - rho_ii(alpha = 0)| of a displaced |1>, read
/// from loss-inverted statistics.
struct OscillationAmplitude {
  int component = 0;
  double overlap_M = 1.0;
  double value = 0.0;
};

/// Reference amplitude that yields an effective displacement of one under the
/// lab calibration alpha = sqrt((1 - T) / T) beta / sqrt(eta1).
double beta_for_unit_displacement(double T, double eta1 = 1.0);

/// Only i = 0 and i = 1 are defined.
OscillationAmplitude oscillation_amplitude(int i, double M, double T, Complex beta_for_alpha1,
                                           int cutoff = 64);

std::vector<OscillationAmplitude> amplitude_curve(int i, double T, std::span<const double> M_grid);

/// CSV with columns M,A00,A11. Throws std::invalid_argument on an empty grid
/// before writing anything.
void write_amplitude_csv(std::ostream& out, double T, std::span<const double> M_grid);

}  // namespace wigprobe
