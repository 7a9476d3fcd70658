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

// Independent reference computations used by the tests. Nothing here calls
// into the library.

#pragma once

#include <cmath>
#include <numbers>
#include <random>
#include <vector>

#include <Eigen/Dense>
#include <unsupported/Eigen/MatrixFunctions>

namespace oracle {

inline constexpr double kTwoOverPi = 2.0 / std::numbers::pi;

inline double factorial(int n) {
  double f = 1.0;
  for (int k = 2; k <= n; ++k) f *= k;
  return f;
}

inline double choose(int n, int k) {
  if (k < 0 || k > n) return 0.0;
  return factorial(n) / (factorial(k) * factorial(n - k));
}

/// |<n|exp(g a^dag - g a)|m>|^2 for real g, from a truncated matrix exponential.
inline Eigen::MatrixXd displacement_probabilities(double g, int dim = 64) {
  Eigen::MatrixXd gen = Eigen::MatrixXd::Zero(dim, dim);
  for (int n = 1; n < dim; ++n) {
    gen(n, n - 1) = g * std::sqrt(static_cast<double>(n));   // g a^dag
    gen(n - 1, n) = -g * std::sqrt(static_cast<double>(n));  // -g a
  }
  const Eigen::MatrixXd D = gen.exp();
  return D.cwiseAbs2();
}

/// P(n) of |1> or |2> through loss T then displacement by gamma, as printed in
/// the closed forms (x = |gamma|^2 > 0).
inline double fock1_closed(double x, double T, int n) {
  return std::exp(-x) * std::pow(x, n) / factorial(n) * (1 - T + T * (n - x) * (n - x) / x);
}
inline double fock2_closed(double x, double T, int n) {
  const double d = (n - x) * (n - x);
  return std::exp(-x) * std::pow(x, n) / factorial(n) *
         ((1 - T) * (1 - T) + 2 * (1 - T) * T * d / x + T * T * (d - n) * (d - n) / (2 * x * x));
}

/// Overlap expressions for the first two detected components of |1>.
inline double overlap_p0(double T, double M, double b2) {
  return std::exp(-(1 - T) * b2) * (1 - T) * (1 + T * M * b2);
}
inline double overlap_p1(double T, double M, double b2) {
  return std::exp(-(1 - T) * b2) *
         (T + (1 - T) * b2 * (1 - T - 2 * M * T) + (1 - T) * (1 - T) * b2 * b2 * M * T);
}

/// Stirling numbers of the second kind S(n, k), n, k <= size-1.
inline Eigen::MatrixXd stirling2(int size) {
  Eigen::MatrixXd S = Eigen::MatrixXd::Zero(size, size);
  S(0, 0) = 1.0;
  for (int n = 1; n < size; ++n)
    for (int k = 1; k <= n; ++k) S(n, k) = k * S(n - 1, k) + S(n - 1, k - 1);
  return S;
}

/// P(N clicks | n photons) of a balanced B-bin detector: C(B, N) N! S(n, N) / B^n.
inline double balanced_click_probability(int B, int N, int n) {
  const Eigen::MatrixXd S = stirling2(n + 1);
  if (N > n || N > B) return 0.0;
  return choose(B, N) * factorial(N) * S(n, N) / std::pow(static_cast<double>(B), n);
}

/// Enumerates every assignment of n photons to bins.
inline std::vector<double> enumerate_clicks(const std::vector<double>& bin_probs, int n) {
  const int B = static_cast<int>(bin_probs.size());
  std::vector<double> out(static_cast<std::size_t>(B + 1), 0.0);
  std::vector<int> assign(static_cast<std::size_t>(n), 0);
  while (true) {
    double p = 1.0;
    std::vector<bool> hit(static_cast<std::size_t>(B), false);
    for (int a : assign) {
      p *= bin_probs[static_cast<std::size_t>(a)];
      hit[static_cast<std::size_t>(a)] = true;
    }
    int clicks = 0;
    for (bool h : hit) clicks += h ? 1 : 0;
    out[static_cast<std::size_t>(clicks)] += p;
    int k = 0;
    while (k < n && ++assign[static_cast<std::size_t>(k)] == B) assign[static_cast<std::size_t>(k++)] = 0;
    if (k == n) break;
  }
  return out;
}

/// Binomial thinning straight from the definition.
inline Eigen::VectorXd thin(const Eigen::VectorXd& p, double eta) {
  Eigen::VectorXd out = Eigen::VectorXd::Zero(p.size());
  for (int n = 0; n < p.size(); ++n)
    for (int k = 0; k <= n; ++k)
      out[k] += p[n] * choose(n, k) * std::pow(eta, k) * std::pow(1 - eta, n - k);
  return out;
}

inline Eigen::VectorXd poisson(double mean, int size) {
  Eigen::VectorXd p(size);
  for (int k = 0; k < size; ++k) p[k] = std::exp(-mean) * std::pow(mean, k) / factorial(k);
  return p;
}

inline Eigen::VectorXd convolve(const Eigen::VectorXd& a, const Eigen::VectorXd& b) {
  const Eigen::Index size = std::max(a.size(), b.size());
  Eigen::VectorXd c = Eigen::VectorXd::Zero(size);
  for (Eigen::Index i = 0; i < a.size(); ++i)
    for (Eigen::Index j = 0; j < b.size() && i + j < size; ++j) c[i + j] += a[i] * b[j];
  return c;
}

/// Small deterministic generator for property tests.
struct Gen {
  std::mt19937_64 rng;
  explicit Gen(std::uint64_t seed) : rng(seed) {}
  double uniform(double lo, double hi) { return std::uniform_real_distribution<double>(lo, hi)(rng); }
  int integer(int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(rng); }
};

}  // namespace oracle
