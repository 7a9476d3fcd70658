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

#include "wigprobe/mismatch_diagnosis.hpp"

#include <cmath>
#include <ostream>

#include <fmt/format.h>
#include <fmt/ostream.h>

#include "numeric_util.hpp"
#include "wigprobe/reconstruction.hpp"

namespace wigprobe {

namespace {

double inverted_component(int i, double M, double T, Complex beta, int cutoff) {
  const PhotonDistribution detected =
      mismatch_distribution(PhotonDistribution::fock(1), beta, T, M, cutoff);
  return invert_loss(detected.probs(), T)[i];
}

}  // namespace

double beta_for_unit_displacement(double T, double eta1) {
  detail::require_unit_interval(eta1, "eta1");
  if (!(T > 0.0 && T < 1.0)) throw std::invalid_argument("T must lie in (0, 1) to displace");
  return std::sqrt(eta1 * T / (1.0 - T));
}

OscillationAmplitude oscillation_amplitude(int i, double M, double T, Complex beta_for_alpha1,
                                           int cutoff) {
  if (i != 0 && i != 1) throw std::invalid_argument("oscillation amplitude defined for i = 0, 1 only");
  const double at_origin = inverted_component(i, M, T, Complex{}, cutoff);
  const double at_one = inverted_component(i, M, T, beta_for_alpha1, cutoff);
  return {i, M, std::abs(at_one - at_origin)};
}

std::vector<OscillationAmplitude> amplitude_curve(int i, double T, std::span<const double> M_grid) {
  const double beta = beta_for_unit_displacement(T);
  std::vector<OscillationAmplitude> curve;
  curve.reserve(M_grid.size());
  for (double M : M_grid) curve.push_back(oscillation_amplitude(i, M, T, beta));
  return curve;
}

void write_amplitude_csv(std::ostream& out, double T, std::span<const double> M_grid) {
  if (M_grid.empty()) throw std::invalid_argument("overlap grid is empty");
  const auto a00 = amplitude_curve(0, T, M_grid);
  const auto a11 = amplitude_curve(1, T, M_grid);
  out << "M,A00,A11\n";
  for (std::size_t k = 0; k < M_grid.size(); ++k)
    fmt::print(out, "{:.6g},{:.12g},{:.12g}\n", M_grid[k], a00[k].value, a11[k].value);
}

}  // namespace wigprobe
