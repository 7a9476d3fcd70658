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

#include "wigprobe/detector_model.hpp"

#include <ostream>

#include <fmt/format.h>
#include <fmt/ostream.h>

namespace wigprobe {

TmdConfig TmdConfig::uniform(int stages, double ratio, double efficiency) {
  TmdConfig cfg;
  cfg.stages = stages;
  cfg.coupler_ratios.assign(static_cast<std::size_t>(std::max(stages, 0)), ratio);
  cfg.detection_efficiency = efficiency;
  cfg.validate();
  return cfg;
}

bool TmdConfig::balanced() const {
  for (double r : coupler_ratios)
    if (r != 0.5) return false;
  return true;
}

void TmdConfig::validate() const {
  if (stages < 1 || stages > 12) throw std::invalid_argument("TMD stages must lie in [1, 12]");
  if (static_cast<int>(coupler_ratios.size()) != stages)
    throw std::invalid_argument("TMD needs one coupler ratio per stage");
  for (double r : coupler_ratios)
    if (!(r > 0.0 && r < 1.0)) throw std::invalid_argument("coupler ratios must lie in (0, 1)");
  if (!(detection_efficiency > 0.0 && detection_efficiency <= 1.0))
    throw std::invalid_argument("detection efficiency must lie in (0, 1]");
}

Vector bin_probabilities(const TmdConfig& cfg) {
  cfg.validate();
  const int bins = cfg.bins();
  Vector p(bins);
  for (int b = 0; b < bins; ++b) {
    double prob = 1.0;
    for (int s = 0; s < cfg.stages; ++s) {
      const bool second_branch = (b >> (cfg.stages - 1 - s)) & 1;
      const double r = cfg.coupler_ratios[static_cast<std::size_t>(s)];
      prob *= second_branch ? 1.0 - r : r;
    }
    p[b] = prob;
  }
  return p;
}

ConvolutionMatrix build_convolution_matrix(const TmdConfig& cfg, int n_max) {
  if (n_max < 0) throw std::invalid_argument("n_max must be non-negative");
  ConvolutionMatrix C;
  C.bin_probs = bin_probabilities(cfg);
  const int bins = cfg.bins();
  C.entries = Matrix::Zero(bins + 1, n_max + 1);

  Matrix pascal = Matrix::Zero(n_max + 1, n_max + 1);
  for (int r = 0; r <= n_max; ++r) {
    pascal(r, 0) = 1.0;
    for (int k = 1; k <= r; ++k) pascal(r, k) = pascal(r - 1, k - 1) + (k < r ? pascal(r - 1, k) : 0.0);
  }

  Vector suffix(bins);
  double acc = 0.0;
  for (int i = bins - 1; i >= 0; --i) suffix[i] = (acc += C.bin_probs[i]);

  // state(r, c): probability that r photons remain unplaced with c clicks so far.
  Matrix state(n_max + 1, bins + 1);
  Matrix next(n_max + 1, bins + 1);
  for (int n = 0; n <= n_max; ++n) {
    state.setZero();
    state(n, 0) = 1.0;
    for (int i = 0; i < bins - 1; ++i) {
      const double q = std::min(1.0, C.bin_probs[i] / suffix[i]);
      next.setZero();
      for (int r = 0; r <= n; ++r) {
        for (int c = 0; c <= std::min(i, n); ++c) {
          const double w = state(r, c);
          if (w == 0.0) continue;
          for (int k = 0; k <= r; ++k) {
            const double place = pascal(r, k) * std::pow(q, k) * std::pow(1.0 - q, r - k);
            next(r - k, c + (k > 0 ? 1 : 0)) += w * place;
          }
        }
      }
      state.swap(next);
    }
    // the last bin receives every remaining photon
    for (int r = 0; r <= n; ++r)
      for (int c = 0; c <= bins - 1; ++c) C.entries(c + (r > 0 ? 1 : 0), n) += state(r, c);
  }
  return C;
}

LossMatrix loss_matrix(double eta, int size) {
  if (size < 1) throw std::invalid_argument("loss matrix size must be positive");
  return {eta, loss_matrix_entries<double>(eta, size)};
}

ClickDistribution forward_clicks(const PhotonDistribution& stats, const ConvolutionMatrix& C,
                                 const LossMatrix& L) {
  if (L.size() != C.entries.cols())
    throw std::invalid_argument("forward_clicks: loss matrix size " + std::to_string(L.size()) +
                                " does not match convolution matrix columns " +
                                std::to_string(C.entries.cols()));
  Vector s = Vector::Zero(L.size());
  const Index n = std::min<Index>(L.size(), stats.probs().size());
  s.head(n) = stats.probs().head(n);
  return ClickDistribution(C.entries * (L.entries * s));
}

void write_matrix_csv(std::ostream& out, const Matrix& m, const char* row_label,
                      const char* col_label) {
  fmt::print(out, "{}\\{}", row_label, col_label);
  for (Index j = 0; j < m.cols(); ++j) fmt::print(out, ",{}", j);
  out << '\n';
  for (Index i = 0; i < m.rows(); ++i) {
    fmt::print(out, "{}", i);
    for (Index j = 0; j < m.cols(); ++j) fmt::print(out, ",{:.17g}", m(i, j));
    out << '\n';
  }
}

}  // namespace wigprobe
