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

#include "wigprobe/montecarlo.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <limits>
#include <ostream>
#include <thread>

#include <fmt/format.h>
#include <fmt/ostream.h>
#include <json.hpp>

namespace wigprobe {

void ExperimentScenario::validate() const {
  if (input_fock_m < 0 || input_fock_m > 8) throw std::invalid_argument("input Fock state must lie in [0, 8]");
  if (!(eta1 > 0.0 && eta1 <= 1.0)) throw std::invalid_argument("eta1 must lie in (0, 1]");
  if (!(T > 0.0 && T <= 1.0)) throw std::invalid_argument("T must lie in (0, 1]");
  if (!(epsilon > 0.0 && epsilon <= 1.0)) throw std::invalid_argument("epsilon must lie in (0, 1]");
  if (!(overlap_M >= 0.0 && overlap_M <= 1.0)) throw std::invalid_argument("overlap M must lie in [0, 1]");
  if (overlap_M < 1.0 && T >= 1.0)
    throw std::invalid_argument("imperfect overlap needs a displacing beamsplitter with T < 1");
  tmd_generation.validate();
  tmd_reconstruction.validate();
  if (tmd_generation.bins() != tmd_reconstruction.bins())
    throw std::invalid_argument("generation and reconstruction TMDs must have the same bin count");
  if (events_per_run < 1) throw std::invalid_argument("events per run must be at least 1");
  if (runs < 2) throw std::invalid_argument("at least two runs are needed for a spread");
  if (alpha_grid.empty()) throw std::invalid_argument("displacement grid is empty");
  for (std::size_t k = 0; k < alpha_grid.size(); ++k) {
    if (!(alpha_grid[k] >= 0.0) || !std::isfinite(alpha_grid[k]))
      throw std::invalid_argument("displacement grid values must be non-negative");
    if (k > 0 && !(alpha_grid[k] > alpha_grid[k - 1]))
      throw std::invalid_argument("displacement grid must be strictly ascending");
  }
  if (forward_cutoff < bins()) throw std::invalid_argument("forward cutoff must cover the TMD bins");
  if (!(overflow_limit >= 0.0)) throw std::invalid_argument("overflow limit must be non-negative");
}

ExactPoint exact_point(const ExperimentScenario& scn, double alpha) {
  const int cutoff = scn.forward_cutoff;
  const int bins = scn.bins();
  const double M = scn.overlap_M;
  const int m = scn.input_fock_m;

  ExactPoint point;
  point.alpha = alpha;

  PhotonDistribution detected;
  if (M >= 1.0) {
    // Loss eta1 T on the Fock state, displacement gamma, then detector loss.
    const double transfer = scn.eta1 * scn.T;
    detected = lossy_displaced_fock(m, alpha * std::sqrt(transfer), transfer, cutoff);
  } else {
    // Pre-loss on the Fock state, then the mismatched displacement.
    const DisplacementSpec d = DisplacementSpec::from_alpha(alpha, scn.T, scn.eta1);
    const PhotonDistribution signal = attenuate(PhotonDistribution::fock(m), scn.eta1);
    detected = mismatch_distribution(signal, d.beta, scn.T, M, cutoff);
  }
  point.degraded = scn.epsilon < 1.0 ? attenuate(detected, scn.epsilon) : detected;
  point.target = convolve(displaced_fock(m, std::sqrt(M) * alpha, cutoff),
                          poisson((1.0 - M) * alpha * alpha, cutoff));
  const Vector& tp = point.target.probs();
  point.overflow_mass = std::max(0.0, tp.tail(std::max<Index>(0, tp.size() - bins - 1)).sum());

  point.detected_head = point.degraded.probs().head(bins + 1);
  point.detected_head /= point.detected_head.sum();
  const ConvolutionMatrix C_gen = build_convolution_matrix(scn.tmd_generation, bins);
  point.clicks = ClickDistribution(C_gen.entries * point.detected_head);
  return point;
}

std::uint64_t derive_stream_seed(std::uint64_t seed, std::uint64_t point, std::uint64_t run) {
  const auto mix = [](std::uint64_t z) {
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  };
  constexpr std::uint64_t kGolden = 0x9e3779b97f4a7c15ULL;
  std::uint64_t h = mix(seed + kGolden * (point + 1));
  return mix(h + kGolden * (run + 1));
}

Vector sample_counts(const Vector& probs, std::int64_t events, std::mt19937_64& rng) {
  const Index size = probs.size();
  if (size == 0) throw std::invalid_argument("cannot sample an empty distribution");
  if ((probs.array() < 0.0).any()) throw std::invalid_argument("cannot sample negative probabilities");
  const double total = probs.sum();
  if (!(total > 0.0)) throw std::invalid_argument("cannot sample a zero distribution");

  Index last = size - 1;
  while (last > 0 && probs[last] == 0.0) --last;
  std::vector<double> cdf(static_cast<std::size_t>(last + 1));
  double acc = 0.0;
  for (Index i = 0; i <= last; ++i) cdf[static_cast<std::size_t>(i)] = (acc += probs[i] / total);
  cdf.back() = 2.0;  // every uniform lands at or before the last populated bin

  std::vector<std::int64_t> counts(static_cast<std::size_t>(size), 0);
  constexpr double kScale = 0x1.0p-53;
  for (std::int64_t e = 0; e < events; ++e) {
    const double u = static_cast<double>(rng() >> 11) * kScale;
    std::size_t i = 0;
    while (u >= cdf[i]) ++i;
    ++counts[i];
  }
  Vector out(size);
  for (Index i = 0; i < size; ++i) out[i] = static_cast<double>(counts[static_cast<std::size_t>(i)]);
  return out;
}

ClickDistribution sample_clicks(const ClickDistribution& dist, std::int64_t events,
                                std::mt19937_64& rng) {
  if (events < 1) throw std::invalid_argument("need at least one event");
  if (std::abs(dist.probs().sum() - 1.0) > 1e-9)
    throw std::invalid_argument("sample_clicks needs a normalised distribution");
  return ClickDistribution(sample_counts(dist.probs(), events, rng) / static_cast<double>(events));
}

namespace {

struct Pipeline {
  ConvolutionMatrix C_gen;
  ConvolutionMatrix C_recon;
  LossMatrix L;

  explicit Pipeline(const ExperimentScenario& scn)
      : C_gen(build_convolution_matrix(scn.tmd_generation, scn.bins())),
        C_recon(build_convolution_matrix(scn.tmd_reconstruction, scn.bins())),
        L(loss_matrix(scn.eta_total(), scn.bins() + 1)) {}
};

std::pair<double, double> mean_and_std(const std::vector<double>& xs) {
  double mean = 0.0;
  for (double x : xs) mean += x;
  mean /= static_cast<double>(xs.size());
  double ss = 0.0;
  for (double x : xs) ss += (x - mean) * (x - mean);
  return {mean, std::sqrt(ss / static_cast<double>(xs.size() - 1))};
}

WignerSample run_point_with(const ExperimentScenario& scn, const Pipeline& pipe, double alpha,
                            std::uint64_t point_index) {
  const ExactPoint exact = exact_point(scn, alpha);
  const int bins = scn.bins();

  WignerSample sample;
  sample.alpha = alpha;
  sample.target = exact.target.probs().head(bins + 1);

  const Vector& draw_from =
      scn.sampling == SamplingLevel::photon ? exact.detected_head : exact.clicks.probs();
  const auto to_clicks = [&](const Vector& counts) {
    const Vector freq = counts / counts.sum();
    return scn.sampling == SamplingLevel::photon ? ClickDistribution(pipe.C_gen.entries * freq)
                                                 : ClickDistribution(freq);
  };

  std::vector<double> w_degraded;
  std::vector<double> w_reconstructed;
  Vector pooled = Vector::Zero(bins + 1);
  try {
    for (int r = 0; r < scn.runs; ++r) {
      std::mt19937_64 rng(derive_stream_seed(scn.rng_seed, point_index, static_cast<std::uint64_t>(r)));
      const Vector counts = sample_counts(draw_from, scn.events_per_run, rng);
      pooled += counts;
      const ClickDistribution p = to_clicks(counts);
      w_reconstructed.push_back(parity_from_quasi(invert_clicks(p, pipe.C_recon, pipe.L)));
      w_degraded.push_back(parity_wigner(deconvolve_clicks(p, pipe.C_recon)));
    }
    const ClickDistribution p_all = to_clicks(pooled);
    const QuasiDistribution rho = invert_clicks(p_all, pipe.C_recon, pipe.L);
    sample.inverted_pooled = rho.values();
    sample.degraded_pooled = deconvolve_clicks(p_all, pipe.C_recon).values();
    sample.condition_number = rho.condition_number();
    sample.reliability =
        reliability(rho, scn.reliability_threshold, exact.overflow_mass, scn.overflow_limit);
  } catch (const SingularSystemError& e) {
    constexpr double nan = std::numeric_limits<double>::quiet_NaN();
    sample.W_degraded_mean = sample.W_degraded_std = nan;
    sample.W_reconstructed_mean = sample.W_reconstructed_std = nan;
    sample.condition_number = e.condition_number();
    sample.reliability.threshold = scn.reliability_threshold;
    sample.reliability.overflow_mass = exact.overflow_mass;
    sample.reliability.overflow_limit = scn.overflow_limit;
    sample.reliability.min_component = nan;
    sample.reliability.reliable = false;
    sample.diagnostics = e.what();
    return sample;
  }
  std::tie(sample.W_degraded_mean, sample.W_degraded_std) = mean_and_std(w_degraded);
  std::tie(sample.W_reconstructed_mean, sample.W_reconstructed_std) = mean_and_std(w_reconstructed);
  sample.W_reconstructed_runs = std::move(w_reconstructed);
  return sample;
}

}  // namespace

WignerSample run_point(const ExperimentScenario& scn, double alpha, std::uint64_t point_index) {
  scn.validate();
  const Pipeline pipe(scn);
  return run_point_with(scn, pipe, alpha, point_index);
}

ScanResult scan(const ExperimentScenario& scn, unsigned threads) {
  scn.validate();
  const Pipeline pipe(scn);
  const std::size_t points = scn.alpha_grid.size();
  ScanResult result;
  result.samples.resize(points);

  if (threads == 0) threads = std::max(1u, std::thread::hardware_concurrency());
  threads = static_cast<unsigned>(std::min<std::size_t>(threads, points));

  std::atomic<std::size_t> next{0};
  const auto worker = [&] {
    for (std::size_t k = next++; k < points; k = next++)
      result.samples[k] = run_point_with(scn, pipe, scn.alpha_grid[k], k);
  };
  if (threads <= 1) {
    worker();
  } else {
    std::vector<std::jthread> pool;
    for (unsigned t = 0; t < threads; ++t) pool.emplace_back(worker);
  }

  const Boundary b = reliability_boundary(result.samples);
  result.boundary = b.alpha;
  result.first_reliable = b.first_reliable;
  result.origin_reliable = !result.samples.empty() && result.samples.front().reliability.reliable;
  return result;
}

Boundary reliability_boundary(std::span<const WignerSample> samples) {
  Boundary b;
  for (const WignerSample& s : samples) {
    if (s.reliability.reliable) {
      if (!b.first_reliable) b.first_reliable = s.alpha;
      b.alpha = s.alpha;
    } else if (b.first_reliable) {
      break;
    }
  }
  return b;
}

void write_scan_csv(std::ostream& out, const ScanResult& result) {
  out << "alpha,W_degraded_mean,W_degraded_std,W_reconstructed_mean,W_reconstructed_std,"
         "min_component,overflow_mass,reliable\n";
  for (const WignerSample& s : result.samples) {
    fmt::print(out, "{:.6g},{:.10g},{:.10g},{:.10g},{:.10g},{:.10g},{:.10g},{}\n", s.alpha,
               s.W_degraded_mean, s.W_degraded_std, s.W_reconstructed_mean, s.W_reconstructed_std,
               s.reliability.min_component, s.reliability.overflow_mass,
               s.reliability.reliable ? 1 : 0);
  }
}

void write_points_json(std::ostream& out, const ScanResult& result) {
  using json = nlohmann::ordered_json;
  const auto to_array = [](const Vector& v) {
    json a = json::array();
    for (Index i = 0; i < v.size(); ++i) a.push_back(v[i]);
    return a;
  };
  json points = json::array();
  for (const WignerSample& s : result.samples) {
    json p;
    p["alpha"] = s.alpha;
    p["degraded"] = to_array(s.degraded_pooled);
    p["inverted"] = to_array(s.inverted_pooled);
    p["analytic"] = to_array(s.target);
    p["reliable"] = s.reliability.reliable;
    if (!s.diagnostics.empty()) p["diagnostics"] = s.diagnostics;
    points.push_back(std::move(p));
  }
  out << points.dump(2) << '\n';
}

}  // namespace wigprobe
