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

#include "wigprobe/reconstruction.hpp"

#include <cmath>
#include <numbers>
#include <string>

#include <Eigen/LU>

#include "numeric_util.hpp"

namespace wigprobe {

namespace {

// Below this reciprocal condition number the LU solve is treated as singular.
constexpr double kMinRcond = 1e-14;

void require_square_system(const ConvolutionMatrix& C, Index rhs_size) {
  if (C.entries.rows() != C.entries.cols())
    throw std::invalid_argument("reconstruction needs a square convolution matrix (n_max = B)");
  if (rhs_size != C.entries.rows())
    throw std::invalid_argument("click distribution has " + std::to_string(rhs_size) +
                                " entries, convolution matrix expects " +
                                std::to_string(C.entries.rows()));
}

}  // namespace

EffectiveParams effective_params(double eta1, double T, double epsilon, Complex gamma) {
  detail::require_unit_interval(eta1, "eta1");
  detail::require_unit_interval(T, "T");
  detail::require_unit_interval(epsilon, "epsilon");
  EffectiveParams p;
  p.eta1 = eta1;
  p.T = T;
  p.epsilon = epsilon;
  p.eta_total = epsilon * T * eta1;
  p.alpha_total = gamma / std::sqrt(eta1 * T);
  return p;
}

QuasiDistribution invert_clicks(const ClickDistribution& p, const ConvolutionMatrix& C_recon,
                                const LossMatrix& L) {
  require_square_system(C_recon, p.probs().size());
  if (L.size() != C_recon.entries.cols())
    throw std::invalid_argument("loss matrix does not match the convolution matrix");

  const Matrix system = C_recon.entries * L.entries;
  const Eigen::PartialPivLU<Matrix> lu(system);
  const double rcond = lu.rcond();
  if (!(rcond > kMinRcond)) {
    throw SingularSystemError("click inversion is numerically singular (rcond " +
                                  std::to_string(rcond) + ")",
                              rcond > 0.0 ? 1.0 / rcond : INFINITY);
  }
  Vector rho = lu.solve(p.probs());
  if (!rho.allFinite()) throw SingularSystemError("click inversion produced non-finite values", 1.0 / rcond);
  return QuasiDistribution(std::move(rho), QuasiDistribution::Source::inverted, 1.0 / rcond);
}

QuasiDistribution deconvolve_clicks(const ClickDistribution& p, const ConvolutionMatrix& C_recon) {
  require_square_system(C_recon, p.probs().size());
  // C is upper triangular: clicks never exceed photons.
  Vector degraded = C_recon.entries.triangularView<Eigen::Upper>().solve(p.probs());
  return QuasiDistribution(std::move(degraded), QuasiDistribution::Source::inverted);
}

QuasiDistribution invert_loss(const Vector& degraded, double eta) {
  const Matrix L = loss_matrix_entries<double>(eta, degraded.size());
  Vector rho = L.triangularView<Eigen::Upper>().solve(degraded);
  return QuasiDistribution(std::move(rho), QuasiDistribution::Source::inverted);
}

double wigner_from_degraded(const Vector& pL, double eta, int N) {
  detail::require_unit_interval(eta, "eta");
  if (N < 0 || N >= pL.size())
    throw std::invalid_argument("wigner_from_degraded: N exceeds the statistics length");
  const double ratio = -(2.0 - eta) / eta;
  double factor = 1.0;
  double sum = 0.0;
  for (int n = 0; n <= N; ++n) {
    sum += factor * pL[n];
    factor *= ratio;
  }
  return 2.0 / std::numbers::pi * sum;
}

double analytic_wigner_fock1(Complex gamma, double T) {
  detail::require_unit_interval(T, "T");
  const double x = std::norm(gamma) / T;
  return 2.0 / std::numbers::pi * std::exp(-2.0 * x) * (4.0 * x - 1.0);
}

double analytic_wigner_fock(int m, Complex alpha) {
  if (m < 0) throw std::invalid_argument("analytic_wigner_fock: negative photon number");
  const double x = 4.0 * std::norm(alpha);
  double prev = 1.0;
  double lag = 1.0;
  if (m >= 1) {
    lag = 1.0 - x;
    for (int j = 1; j < m; ++j) {
      const double next = ((2.0 * j + 1.0 - x) * lag - j * prev) / (j + 1.0);
      prev = lag;
      lag = next;
    }
  }
  const double sign = m % 2 == 0 ? 1.0 : -1.0;
  return 2.0 / std::numbers::pi * sign * std::exp(-0.5 * x) * lag;
}

ReliabilityReport reliability(const QuasiDistribution& rho, double threshold,
                              double overflow_mass, double overflow_limit) {
  ReliabilityReport report;
  report.min_component = rho.min_component();
  report.threshold = threshold;
  report.overflow_mass = overflow_mass;
  report.overflow_limit = overflow_limit;
  report.reliable = report.min_component > threshold && overflow_mass <= overflow_limit;
  return report;
}

}  // namespace wigprobe
