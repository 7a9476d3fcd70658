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

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <random>
#include <span>
#include <string>
#include <vector>

#include "wigprobe/detector_model.hpp"
#include "wigprobe/reconstruction.hpp"

namespace wigprobe {

/// What the Monte Carlo draws per event.
///   photon: a detected photon number, histogrammed and then convolved
///           exactly with the generation TMD response;
///   click:  a click count from the exact click distribution.
enum class SamplingLevel { photon, click };

struct ExperimentScenario {
  int input_fock_m = 1;
  double eta1 = 1.0;
  double T = 0.95;
  double epsilon = 1.0;
  double overlap_M = 1.0;
  TmdConfig tmd_generation;
  TmdConfig tmd_reconstruction;
  std::vector<double> alpha_grid;
  std::int64_t events_per_run = 1'000'000;
  int runs = 10;
  std::uint64_t rng_seed = 1;
  double reliability_threshold = kDefaultNegativityThreshold;
  double overflow_limit = kDefaultOverflowLimit;
  SamplingLevel sampling = SamplingLevel::photon;
  /// Photon-number cutoff of the exact forward statistics.
  int forward_cutoff = 64;

  double eta_total() const { return epsilon * T * eta1; }
  int bins() const { return tmd_reconstruction.bins(); }
  void validate() const;
};

/// Noise-free statistics of one phase-space point.
struct ExactPoint {
  double alpha = 0.0;
  PhotonDistribution degraded;  // detected photon numbers, full cutoff
  PhotonDistribution target;    // loss-free statistics the inversion aims at
  Vector detected_head;         // degraded restricted to n <= B, renormalised
  ClickDistribution clicks;     // generation response to detected_head
  double overflow_mass = 0.0;   // target mass above n = B
};

ExactPoint exact_point(const ExperimentScenario& scn, double alpha);

struct WignerSample {
  double alpha = 0.0;
  double W_degraded_mean = 0.0;
  double W_degraded_std = 0.0;
  double W_reconstructed_mean = 0.0;
  double W_reconstructed_std = 0.0;
  ReliabilityReport reliability;
  double condition_number = 1.0;
  std::vector<double> W_reconstructed_runs;
  Vector degraded_pooled;  // C^-1 p of the pooled clicks
  Vector inverted_pooled;  // (C L)^-1 p of the pooled clicks
  Vector target;           // analytic loss-free statistics, n <= B
  std::string diagnostics;
};

struct ScanResult {
  std::vector<WignerSample> samples;
  std::optional<double> boundary;
  std::optional<double> first_reliable;
  bool origin_reliable = false;
};

/// Stream seed for (seed, point, run): two rounds of the splitmix64 finaliser
/// over golden-ratio increments of the point and run counters.
std::uint64_t derive_stream_seed(std::uint64_t seed, std::uint64_t point, std::uint64_t run);

/// Multinomial counts by per-event inverse-CDF lookup on a uniform built from
/// the top 53 bits of each draw. Bit-identical wherever mt19937_64 is.
Vector sample_counts(const Vector& probs, std::int64_t events, std::mt19937_64& rng);

/// Empirical click frequencies of `events` draws from a normalised distribution.
ClickDistribution sample_clicks(const ClickDistribution& dist, std::int64_t events,
                                std::mt19937_64& rng);

WignerSample run_point(const ExperimentScenario& scn, double alpha, std::uint64_t point_index = 0);

/// Runs every grid point; `threads` = 0 uses the hardware concurrency.
ScanResult scan(const ExperimentScenario& scn, unsigned threads = 0);

struct Boundary {
  std::optional<double> alpha;
  std::optional<double> first_reliable;
};

/// Upper end of the first contiguous run of reliable grid points.
Boundary reliability_boundary(std::span<const WignerSample> samples);

void write_scan_csv(std::ostream& out, const ScanResult& result);
void write_points_json(std::ostream& out, const ScanResult& result);

}  // namespace wigprobe
