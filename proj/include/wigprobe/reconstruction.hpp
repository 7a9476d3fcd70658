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

#include "wigprobe/detector_model.hpp"
#include "wigprobe/photon_statistics.hpp"

namespace wigprobe {

inline constexpr double kDefaultNegativityThreshold = -0.001;
inline constexpr double kMismatchNegativityThreshold = -0.003;
inline constexpr double kDefaultOverflowLimit = 0.025;

/// Lab parameters folded into the two numbers the reconstruction needs: the
/// overall efficiency and the effective phase-space displacement.
struct EffectiveParams {
  double eta_total = 1.0;
  Complex alpha_total;
  double eta1 = 1.0;
  double T = 1.0;
  double epsilon = 1.0;
};

EffectiveParams effective_params(double eta1, double T, double epsilon, Complex gamma);

/// Solves (C L) rho = p with partial-pivot LU. Negative components are kept.
/// Throws SingularSystemError when the system is numerically singular.
QuasiDistribution invert_clicks(const ClickDistribution& p, const ConvolutionMatrix& C_recon,
                                const LossMatrix& L);

/// Solves C P = p for the loss-degraded photon statistics (no loss inversion).
QuasiDistribution deconvolve_clicks(const ClickDistribution& p, const ConvolutionMatrix& C_recon);

/// Loss inversion of photon statistics by triangular back-substitution.
QuasiDistribution invert_loss(const Vector& degraded, double eta);

/// Parity of the loss-corrected state read straight off degraded statistics:
/// (2/pi) sum_{n <= N} (-(2 - eta)/eta)^n pL[n].
double wigner_from_degraded(const Vector& pL, double eta, int N);

/// Wigner function of |1> at gamma / sqrt(T).
double analytic_wigner_fock1(Complex gamma, double T);

/// Wigner function of |m> at alpha: (2/pi) (-1)^m e^{-2|alpha|^2} L_m(4|alpha|^2).
double analytic_wigner_fock(int m, Complex alpha);

struct ReliabilityReport {
  double min_component = 0.0;
  double threshold = kDefaultNegativityThreshold;
  double overflow_mass = 0.0;
  double overflow_limit = kDefaultOverflowLimit;
  bool reliable = true;
};

ReliabilityReport reliability(const QuasiDistribution& rho, double threshold,
                              double overflow_mass, double overflow_limit);

inline double parity_from_quasi(const QuasiDistribution& rho) { return parity_wigner(rho); }

}  // namespace wigprobe
