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

#include <cmath>
#include <iosfwd>
#include <stdexcept>
#include <vector>

#include <Eigen/Core>

#include "wigprobe/distributions.hpp"

namespace wigprobe {

template <typename Scalar>
using MatrixX = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;

/// Time-multiplexed detector: a binary tree of `stages` couplers feeding
/// 2^stages time bins, each read by a click/no-click detector.
struct TmdConfig {
  int stages = 3;
  /// Transmission of the coupler at each stage (0.5 is balanced).
  std::vector<double> coupler_ratios = {0.5, 0.5, 0.5};
  double detection_efficiency = 1.0;

  static TmdConfig uniform(int stages, double ratio, double efficiency = 1.0);

  int bins() const { return 1 << stages; }
  bool balanced() const;
  /// Throws std::invalid_argument on a malformed configuration.
  void validate() const;
};

/// Probability that a single photon lands in each bin. Bit s of the bin
/// index (most significant first) selects the branch taken at stage s.
Vector bin_probabilities(const TmdConfig& cfg);

/// Click-count response: entries(N, n) = P(N clicks | n photons).
struct ConvolutionMatrix {
  Matrix entries;
  Vector bin_probs;

  int bins() const { return static_cast<int>(bin_probs.size()); }
  int n_max() const { return static_cast<int>(entries.cols()) - 1; }
};

/// Exact click response for n = 0..n_max photons, by dynamic programming over
/// bins with binomial placement of the remaining photons.
ConvolutionMatrix build_convolution_matrix(const TmdConfig& cfg, int n_max);

/// Binomial-loss matrix, L(m, n) = C(n, m) eta^m (1 - eta)^(n - m) for m <= n.
template <typename Scalar = double>
MatrixX<Scalar> loss_matrix_entries(Scalar eta, Index size) {
  using std::pow;
  if (!(eta > Scalar(0) && eta <= Scalar(1))) throw std::invalid_argument("loss matrix: eta must lie in (0, 1]");
  MatrixX<Scalar> L = MatrixX<Scalar>::Zero(size, size);
  // Pascal's triangle keeps the coefficients exact to the scalar's precision.
  std::vector<Scalar> row(static_cast<std::size_t>(size), Scalar(0));
  for (Index n = 0; n < size; ++n) {
    for (Index k = n; k > 0; --k) row[k] += row[k - 1];
    row[0] = Scalar(1);
    for (Index m = 0; m <= n; ++m)
      L(m, n) = row[m] * pow(eta, Scalar(m)) * pow(Scalar(1) - eta, Scalar(n - m));
  }
  return L;
}

/// Analytic inverse, L^-1(m, n) = C(n, m) (eta - 1)^(n - m) / eta^n for m <= n.
template <typename Scalar = double>
MatrixX<Scalar> loss_matrix_inverse(Scalar eta, Index size) {
  using std::pow;
  if (!(eta > Scalar(0) && eta <= Scalar(1)))
    throw std::invalid_argument("loss matrix inverse: eta must lie in (0, 1]");
  MatrixX<Scalar> inv = MatrixX<Scalar>::Zero(size, size);
  std::vector<Scalar> row(static_cast<std::size_t>(size), Scalar(0));
  for (Index n = 0; n < size; ++n) {
    for (Index k = n; k > 0; --k) row[k] += row[k - 1];
    row[0] = Scalar(1);
    for (Index m = 0; m <= n; ++m)
      inv(m, n) = row[m] * pow(eta - Scalar(1), Scalar(n - m)) / pow(eta, Scalar(n));
  }
  return inv;
}

struct LossMatrix {
  double eta = 1.0;
  Matrix entries;

  int size() const { return static_cast<int>(entries.rows()); }
};

LossMatrix loss_matrix(double eta, int size);

/// p = C (L stats). Statistics longer than L are truncated; shorter ones are
/// zero-padded. Throws std::invalid_argument if L does not match C's columns.
ClickDistribution forward_clicks(const PhotonDistribution& stats, const ConvolutionMatrix& C,
                                 const LossMatrix& L);

/// Writes a matrix as CSV; the header row labels columns `col_label`0.. and
/// each row starts with its index.
void write_matrix_csv(std::ostream& out, const Matrix& m, const char* row_label,
                      const char* col_label);

}  // namespace wigprobe
