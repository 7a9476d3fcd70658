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

#include "wigprobe/photon_statistics.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "numeric_util.hpp"

namespace wigprobe {

PhotonDistribution::PhotonDistribution(Vector probs, double tail_tol) : probs_(std::move(probs)) {
  if (probs_.size() == 0) throw std::invalid_argument("PhotonDistribution: empty vector");
  if (!probs_.allFinite()) throw std::invalid_argument("PhotonDistribution: non-finite entry");
  if (probs_.minCoeff() < -1e-14)
    throw std::invalid_argument("PhotonDistribution: negative probability");
  probs_ = probs_.cwiseMax(0.0);
  const double total = probs_.sum();
  if (total > 1.0 + 1e-12) throw std::invalid_argument("PhotonDistribution: total exceeds one");
  if (total < 1.0 - tail_tol) {
    throw TruncationError("PhotonDistribution: mass " + std::to_string(total) +
                              " below truncation budget",
                          1.0 - total);
  }
}

PhotonDistribution PhotonDistribution::fock(int m) {
  if (m < 0) throw std::invalid_argument("fock: negative photon number");
  Vector p = Vector::Zero(m + 1);
  p[m] = 1.0;
  return PhotonDistribution(std::move(p));
}

ClickDistribution::ClickDistribution(Vector probs) : probs_(std::move(probs)) {
  if (probs_.size() == 0) throw std::invalid_argument("ClickDistribution: empty vector");
  if (!probs_.allFinite()) throw std::invalid_argument("ClickDistribution: non-finite entry");
}

DisplacementSpec DisplacementSpec::from_beta(Complex beta, double T, double eta1) {
  detail::require_unit_interval(T, "T");
  detail::require_unit_interval(eta1, "eta1");
  const Complex gamma = std::sqrt(1.0 - T) * beta;
  return {gamma, beta, gamma / std::sqrt(eta1 * T)};
}

DisplacementSpec DisplacementSpec::from_alpha(Complex alpha, double T, double eta1) {
  detail::require_unit_interval(T, "T");
  detail::require_unit_interval(eta1, "eta1");
  const Complex gamma = alpha * std::sqrt(eta1 * T);
  if (T >= 1.0) {
    if (std::abs(alpha) > 0.0)
      throw std::invalid_argument("from_alpha: T = 1 cannot produce a displacement");
    return {gamma, Complex{}, alpha};
  }
  return {gamma, gamma / std::sqrt(1.0 - T), alpha};
}

OverlapModel OverlapModel::from_beta(Complex beta, double T, double M) {
  detail::require_unit_interval(T, "T");
  if (!(M >= 0.0 && M <= 1.0)) throw std::invalid_argument("overlap M must lie in [0, 1]");
  OverlapModel model;
  model.overlap_M = M;
  model.xi = std::sqrt(M) * std::sqrt((1.0 - T) / T) * beta;
  model.zeta_sq = (1.0 - M) * (1.0 - T) * std::norm(beta);
  return model;
}

double displaced_fock_probability(int n, int m, double abs_gamma_sq) {
  if (n < 0 || m < 0) throw std::invalid_argument("displaced_fock_probability: negative index");
  const double x = abs_gamma_sq;
  if (x == 0.0) return n == m ? 1.0 : 0.0;

  const int lo = std::min(n, m);
  const int k = std::abs(n - m);

  // L_lo^{(k)}(x) by upward recurrence in the degree.
  double prev = 1.0;
  double lag = 1.0;
  if (lo >= 1) {
    lag = 1.0 + k - x;
    for (int j = 1; j < lo; ++j) {
      const double next = ((2.0 * j + 1.0 + k - x) * lag - (j + k) * prev) / (j + 1.0);
      prev = lag;
      lag = next;
    }
  }
  const double log_prefactor =
      std::lgamma(lo + 1.0) - std::lgamma(lo + k + 1.0) + k * std::log(x) - x;
  return std::exp(log_prefactor) * lag * lag;
}

namespace {

void check_cutoff(int cutoff) {
  if (cutoff < 0) throw std::invalid_argument("cutoff must be non-negative");
}

PhotonDistribution finish(Vector probs, double tail_tol, const char* who) {
  const double deficit = 1.0 - probs.sum();
  if (deficit > tail_tol) {
    throw TruncationError(std::string(who) + ": cutoff " + std::to_string(probs.size() - 1) +
                              " leaves " + std::to_string(deficit) + " of the mass truncated",
                          deficit);
  }
  return PhotonDistribution(std::move(probs), tail_tol);
}

}  // namespace

PhotonDistribution displaced_fock(int m, Complex gamma, int cutoff, double tail_tol) {
  if (m < 0) throw std::invalid_argument("displaced_fock: negative photon number");
  check_cutoff(cutoff);
  const double x = std::norm(gamma);
  Vector probs(cutoff + 1);
  for (int n = 0; n <= cutoff; ++n) probs[n] = displaced_fock_probability(n, m, x);
  return finish(std::move(probs), tail_tol, "displaced_fock");
}

PhotonDistribution lossy_displaced_fock(int m, Complex gamma, double T, int cutoff,
                                        double tail_tol) {
  if (m < 0) throw std::invalid_argument("lossy_displaced_fock: negative photon number");
  if (!(T > 0.0 && T <= 1.0))
    throw std::invalid_argument("lossy_displaced_fock: T must lie in (0, 1]; model T = 0 as vacuum");
  check_cutoff(cutoff);
  const double x = std::norm(gamma);
  Vector probs = Vector::Zero(cutoff + 1);
  for (int j = 0; j <= m; ++j) {
    const double w = detail::binomial(m, j) * std::pow(T, j) * std::pow(1.0 - T, m - j);
    if (w == 0.0) continue;
    for (int n = 0; n <= cutoff; ++n) probs[n] += w * displaced_fock_probability(n, j, x);
  }
  return finish(std::move(probs), tail_tol, "lossy_displaced_fock");
}

namespace {

// x^n / n!
double poisson_weight(double x, int n) {
  if (n == 0) return 1.0;
  if (x == 0.0) return 0.0;
  return std::exp(n * std::log(x) - std::lgamma(n + 1.0));
}

// x^n/n! * (n - x)^2 / x, with the x -> 0 limit expanded.
double single_photon_term(double x, int n) {
  if (n == 0) return x;
  const double d = n - x;
  return poisson_weight(x, n - 1) / n * d * d;
}

// x^n/n! * ((n - x)^2 - n)^2 / (2 x^2), with the x -> 0 limit expanded.
double two_photon_term(double x, int n) {
  if (n == 0) return 0.5 * x * x;
  if (n == 1) return 0.5 * x * (x - 2.0) * (x - 2.0);
  const double d = (n - x) * (n - x) - n;
  return poisson_weight(x, n - 2) / (n * (n - 1.0)) * 0.5 * d * d;
}

}  // namespace

double closed_form_fock1(Complex gamma, double T, int n) {
  detail::require_unit_interval(T, "T");
  if (n < 0) return 0.0;
  const double x = std::norm(gamma);
  return std::exp(-x) * ((1.0 - T) * poisson_weight(x, n) + T * single_photon_term(x, n));
}

double closed_form_fock2(Complex gamma, double T, int n) {
  detail::require_unit_interval(T, "T");
  if (n < 0) return 0.0;
  const double x = std::norm(gamma);
  const double r = 1.0 - T;
  return std::exp(-x) * (r * r * poisson_weight(x, n) + 2.0 * r * T * single_photon_term(x, n) +
                         T * T * two_photon_term(x, n));
}

PhotonDistribution poisson(double mean, int cutoff, double tail_tol) {
  if (!(mean >= 0.0) || !std::isfinite(mean))
    throw std::invalid_argument("poisson: mean must be non-negative");
  check_cutoff(cutoff);
  Vector probs(cutoff + 1);
  for (int k = 0; k <= cutoff; ++k) probs[k] = std::exp(-mean) * poisson_weight(mean, k);
  return finish(std::move(probs), tail_tol, "poisson");
}

PhotonDistribution convolve(const PhotonDistribution& a, const PhotonDistribution& b) {
  const int cutoff = std::max(a.cutoff(), b.cutoff());
  Vector c = Vector::Zero(cutoff + 1);
  for (int j = 0; j <= a.cutoff(); ++j) {
    if (a[j] == 0.0) continue;
    for (int k = 0; k <= b.cutoff() && j + k <= cutoff; ++k) c[j + k] += a[j] * b[k];
  }
  const double allowed = (1.0 - a.total()) + (1.0 - b.total()) + kDefaultTailTol;
  return finish(std::move(c), allowed, "convolve");
}

PhotonDistribution attenuate(const PhotonDistribution& input, double eta) {
  if (!(eta >= 0.0 && eta <= 1.0)) throw std::invalid_argument("attenuate: eta must lie in [0, 1]");
  const int cutoff = input.cutoff();
  Vector out = Vector::Zero(cutoff + 1);
  for (int n = 0; n <= cutoff; ++n) {
    if (input[n] == 0.0) continue;
    for (int k = 0; k <= n; ++k)
      out[k] += detail::binomial(n, k) * std::pow(eta, k) * std::pow(1.0 - eta, n - k) * input[n];
  }
  return PhotonDistribution(std::move(out), 1.0 - input.total() + kDefaultTailTol);
}

PhotonDistribution mismatch_distribution(const PhotonDistribution& input, Complex beta, double T,
                                         double M, int cutoff, double tail_tol) {
  check_cutoff(cutoff);
  const OverlapModel overlap = OverlapModel::from_beta(beta, T, M);
  // D(xi) followed by loss T equals loss T followed by D(sqrt(T) xi).
  const Complex gamma = std::sqrt(T) * overlap.xi;

  Vector signal = Vector::Zero(cutoff + 1);
  for (int j = 0; j <= input.cutoff(); ++j) {
    if (input[j] == 0.0) continue;
    signal += input[j] * lossy_displaced_fock(j, gamma, T, cutoff, tail_tol).probs();
  }
  const PhotonDistribution displaced(std::move(signal), tail_tol + 1.0 - input.total());
  return convolve(displaced, poisson(overlap.zeta_sq, cutoff, tail_tol));
}

}  // namespace wigprobe
