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

#include <complex>
#include <numbers>

#include "wigprobe/distributions.hpp"

namespace wigprobe {

using Complex = std::complex<double>;

/// Displacement realised by mixing the signal with a reference field
/// |beta> on a beamsplitter of transmittance T, after a pre-loss eta1.
struct DisplacementSpec {
  Complex gamma;        // applied at the beamsplitter, sqrt(1-T) beta
  Complex beta;         // reference-field amplitude
  Complex alpha_total;  // effective displacement after loss inversion

  static DisplacementSpec from_beta(Complex beta, double T, double eta1 = 1.0);
  static DisplacementSpec from_alpha(Complex alpha, double T, double eta1 = 1.0);
};

/// Imperfect mode overlap between signal and reference: the detected field is
/// the signal displaced by xi plus an incoherent Poissonian of mean zeta_sq.
struct OverlapModel {
  double overlap_M = 1.0;
  Complex xi;
  double zeta_sq = 0.0;

  static OverlapModel from_beta(Complex beta, double T, double M);
};

/// |<n|D(gamma)|m>|^2 for a single (n, m), via the associated Laguerre form.
double displaced_fock_probability(int n, int m, double abs_gamma_sq);

/// Photon statistics of D(gamma)|m>, n = 0..cutoff.
/// Throws TruncationError if more than `tail_tol` of the mass lies above cutoff.
PhotonDistribution displaced_fock(int m, Complex gamma, int cutoff,
                                  double tail_tol = kDefaultTailTol);

/// |m> sent through a beamsplitter of transmittance T, then displaced by gamma:
/// a binomial mixture of displaced Fock states.
PhotonDistribution lossy_displaced_fock(int m, Complex gamma, double T, int cutoff,
                                        double tail_tol = kDefaultTailTol);

/// Closed forms of lossy_displaced_fock for |1> and |2>, with the gamma -> 0
/// limit taken analytically.
double closed_form_fock1(Complex gamma, double T, int n);
double closed_form_fock2(Complex gamma, double T, int n);

PhotonDistribution poisson(double mean, int cutoff, double tail_tol = kDefaultTailTol);

/// Discrete convolution, truncated at the larger of the two cutoffs.
PhotonDistribution convolve(const PhotonDistribution& a, const PhotonDistribution& b);

/// Binomial thinning of a photon distribution with survival probability eta.
PhotonDistribution attenuate(const PhotonDistribution& input, double eta);

/// Detected statistics of a Fock-diagonal input mixed with |beta> at a
/// beamsplitter of transmittance T with mode overlap M: the input displaced by
/// xi and attenuated by T, convolved with a Poissonian of mean zeta_sq.
PhotonDistribution mismatch_distribution(const PhotonDistribution& input, Complex beta, double T,
                                         double M, int cutoff,
                                         double tail_tol = kDefaultTailTol);

/// (2/pi) * sum_n (-1)^n stats[n].
template <typename Derived>
double parity_wigner(const Eigen::MatrixBase<Derived>& stats) {
  double sum = 0.0;
  for (Index n = 0; n < stats.size(); ++n) sum += (n % 2 == 0 ? 1.0 : -1.0) * stats[n];
  return 2.0 / std::numbers::pi * sum;
}

inline double parity_wigner(const PhotonDistribution& stats) {
  return parity_wigner(stats.probs());
}

inline double parity_wigner(const QuasiDistribution& stats) {
  return parity_wigner(stats.values());
}

}  // namespace wigprobe
