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

#include <sstream>

#include <boost/multiprecision/cpp_bin_float.hpp>
#include <boost/multiprecision/eigen.hpp>
#include <doctest.h>

#include "oracles.hpp"
#include "wigprobe/detector_model.hpp"

using namespace wigprobe;
using Big = boost::multiprecision::number<boost::multiprecision::cpp_bin_float<50>,
                                          boost::multiprecision::et_off>;

TEST_CASE("bin probabilities follow the coupler tree") {
  const Vector one = bin_probabilities(TmdConfig::uniform(1, 0.5));
  CHECK(one.size() == 2);
  CHECK(one[0] == 0.5);
  CHECK(one[1] == 0.5);
  const Vector four = bin_probabilities(TmdConfig::uniform(2, 0.5));
  for (int i = 0; i < 4; ++i) CHECK(four[i] == 0.25);
  const Vector tilted = bin_probabilities(TmdConfig::uniform(2, 0.45));
  CHECK(tilted[0] == doctest::Approx(0.2025).epsilon(1e-15));
  CHECK(tilted[1] == doctest::Approx(0.2475).epsilon(1e-15));
  CHECK(tilted[2] == doctest::Approx(0.2475).epsilon(1e-15));
  CHECK(tilted[3] == doctest::Approx(0.3025).epsilon(1e-15));
  CHECK(bin_probabilities(TmdConfig::uniform(4, 0.37)).sum() == doctest::Approx(1.0).epsilon(1e-15));
}

TEST_CASE("tmd configuration validation") {
  TmdConfig cfg;
  CHECK(cfg.bins() == 8);
  CHECK(cfg.balanced());
  cfg.coupler_ratios = {0.5, 0.5};
  CHECK_THROWS_AS(cfg.validate(), std::invalid_argument);
  CHECK_THROWS_AS(TmdConfig::uniform(3, 1.0), std::invalid_argument);
  CHECK_THROWS_AS(TmdConfig::uniform(0, 0.5), std::invalid_argument);
  CHECK_FALSE(TmdConfig::uniform(3, 0.45).balanced());
}

TEST_CASE("small convolution matrices by hand") {
  const ConvolutionMatrix c1 = build_convolution_matrix(TmdConfig::uniform(1, 0.5), 2);
  CHECK(c1.entries(0, 0) == 1.0);
  CHECK(c1.entries(1, 2) == doctest::Approx(0.5).epsilon(1e-15));
  CHECK(c1.entries(2, 2) == doctest::Approx(0.5).epsilon(1e-15));
  const ConvolutionMatrix c2 = build_convolution_matrix(TmdConfig::uniform(2, 0.5), 2);
  CHECK(c2.entries(1, 2) == doctest::Approx(0.25).epsilon(1e-15));
  CHECK(c2.entries(2, 2) == doctest::Approx(0.75).epsilon(1e-15));
}

TEST_CASE("balanced convolution matrix matches the occupancy formula") {
  for (int stages : {1, 2, 3, 4}) {
    const int B = 1 << stages;
    const int n_max = 2 * B;
    const ConvolutionMatrix C = build_convolution_matrix(TmdConfig::uniform(stages, 0.5), n_max);
    CHECK(C.bins() == B);
    CHECK(C.n_max() == n_max);
    for (int n = 0; n <= n_max; ++n)
      for (int N = 0; N <= B; ++N)
        CHECK(std::abs(C.entries(N, n) - oracle::balanced_click_probability(B, N, n)) < 1e-12);
  }
}

TEST_CASE("unbalanced convolution matrix matches brute-force enumeration") {
  TmdConfig cfg;
  cfg.stages = 2;
  cfg.coupler_ratios = {0.45, 0.6};
  const ConvolutionMatrix C = build_convolution_matrix(cfg, 7);
  const Vector bp = bin_probabilities(cfg);
  const std::vector<double> probs(bp.data(), bp.data() + bp.size());
  for (int n = 0; n <= 7; ++n) {
    const std::vector<double> ref = oracle::enumerate_clicks(probs, n);
    for (int N = 0; N <= 4; ++N) CHECK(std::abs(C.entries(N, n) - ref[static_cast<std::size_t>(N)]) < 1e-13);
  }
  const ConvolutionMatrix C8 = build_convolution_matrix(TmdConfig::uniform(3, 0.45), 6);
  const Vector bp8 = bin_probabilities(TmdConfig::uniform(3, 0.45));
  const std::vector<double> probs8(bp8.data(), bp8.data() + bp8.size());
  for (int n = 0; n <= 6; ++n) {
    const std::vector<double> ref = oracle::enumerate_clicks(probs8, n);
    // the enumeration sums 8^6 products, so its own rounding sits near 1e-13
    for (int N = 0; N <= 8; ++N) CHECK(std::abs(C8.entries(N, n) - ref[static_cast<std::size_t>(N)]) < 1e-12);
  }
}

TEST_CASE("convolution matrix structure") {
  oracle::Gen gen(21);
  for (int k = 0; k < 10; ++k) {
    const int stages = gen.integer(1, 4);
    TmdConfig cfg;
    cfg.stages = stages;
    cfg.coupler_ratios.clear();
    for (int s = 0; s < stages; ++s) cfg.coupler_ratios.push_back(gen.uniform(0.3, 0.7));
    const int B = cfg.bins();
    const ConvolutionMatrix C = build_convolution_matrix(cfg, B + 4);
    for (int n = 0; n <= B + 4; ++n) {
      CHECK(C.entries.col(n).sum() == doctest::Approx(1.0).epsilon(1e-12));
      for (int N = n + 1; N <= B; ++N) CHECK(C.entries(N, n) == 0.0);
      if (n <= B) CHECK(C.entries(n, n) > 0.0);
    }
  }
}

TEST_CASE("no-collision probability falls with photon number") {
  const ConvolutionMatrix C = build_convolution_matrix(TmdConfig::uniform(3, 0.5), 8);
  CHECK(C.entries(0, 0) == 1.0);
  CHECK(C.entries(1, 1) == 1.0);
  for (int n = 2; n <= 8; ++n) CHECK(C.entries(n, n) < C.entries(n - 1, n - 1));
}

TEST_CASE("loss matrix examples") {
  const LossMatrix id = loss_matrix(1.0, 5);
  CHECK(id.entries.isIdentity(0.0));
  const LossMatrix half = loss_matrix(0.5, 2);
  CHECK(half.entries(0, 0) == 1.0);
  CHECK(half.entries(0, 1) == 0.5);
  CHECK(half.entries(1, 0) == 0.0);
  CHECK(half.entries(1, 1) == 0.5);
  const LossMatrix l3 = loss_matrix(0.3, 8);
  for (int n = 0; n < 8; ++n) CHECK(l3.entries.col(n).sum() == doctest::Approx(1.0).epsilon(1e-12));
  CHECK_THROWS_AS(loss_matrix(0.0, 4), std::invalid_argument);
  CHECK_THROWS_AS(loss_matrix(-0.2, 4), std::invalid_argument);
  // entries straight from the binomial law
  for (int n = 0; n < 8; ++n)
    for (int m = 0; m <= n; ++m)
      CHECK(l3.entries(m, n) ==
            doctest::Approx(oracle::choose(n, m) * std::pow(0.3, m) * std::pow(0.7, n - m)).epsilon(1e-13));
}

TEST_CASE("loss matrix inverse") {
  CHECK(loss_matrix_inverse(1.0, 6).isIdentity(0.0));
  const Matrix half = loss_matrix_inverse(0.5, 2);
  CHECK(half(0, 0) == 1.0);
  CHECK(half(0, 1) == -1.0);
  CHECK(half(1, 1) == 2.0);
  const Matrix prod = loss_matrix_entries(0.3, 9) * loss_matrix_inverse(0.3, 9);
  CHECK((prod - Matrix::Identity(9, 9)).cwiseAbs().maxCoeff() < 1e-9);
  CHECK_THROWS_AS(loss_matrix_inverse(0.0, 4), std::invalid_argument);
}

TEST_CASE("loss matrices compose and invert") {
  oracle::Gen gen(99);
  for (int k = 0; k < 20; ++k) {
    const double a = gen.uniform(0.01, 1.0);
    const double b = gen.uniform(0.01, 1.0);
    const Matrix lhs = loss_matrix(a, 17).entries * loss_matrix(b, 17).entries;
    CHECK((lhs - loss_matrix(a * b, 17).entries).cwiseAbs().maxCoeff() < 1e-12);
  }
  // In double the product is limited by rounding of |L| |L^-1|, which reaches
  // ((2 - eta) / eta)^(size - 1); check against that scale.
  for (int k = 0; k < 20; ++k) {
    const double eta = gen.uniform(0.2, 1.0);
    const int size = gen.integer(1, 17);
    const Matrix L = loss_matrix_entries(eta, size);
    const Matrix inv = loss_matrix_inverse(eta, size);
    const Matrix scale = L.cwiseAbs() * inv.cwiseAbs();
    const Matrix err = (L * inv - Matrix::Identity(size, size)).cwiseAbs();
    CHECK((err.array() <= 4 * size * 1.1e-16 * scale.array() + 1e-15).all());
    if (std::pow((2 - eta) / eta, size - 1) < 1e5) CHECK(err.maxCoeff() < 1e-9);
  }
}

TEST_CASE("loss inverse is exact in 50-digit arithmetic") {
  oracle::Gen gen(100);
  for (int k = 0; k < 20; ++k) {
    const Big eta = Big(gen.uniform(0.2, 1.0));
    const int size = gen.integer(1, 17);
    const MatrixX<Big> prod = loss_matrix_entries<Big>(eta, size) * loss_matrix_inverse<Big>(eta, size);
    const MatrixX<Big> err = (prod - MatrixX<Big>::Identity(size, size)).cwiseAbs();
    CHECK(static_cast<double>(err.maxCoeff()) < 1e-9);
  }
  // worst corner of the range
  const MatrixX<Big> corner = loss_matrix_entries<Big>(Big(0.2), 17) * loss_matrix_inverse<Big>(Big(0.2), 17);
  CHECK(static_cast<double>((corner - MatrixX<Big>::Identity(17, 17)).cwiseAbs().maxCoeff()) < 1e-30);
}

TEST_CASE("loss matrix in extended precision") {
  using LD = long double;
  const MatrixX<LD> L = loss_matrix_entries<LD>(0.25L, 12);
  const MatrixX<LD> inv = loss_matrix_inverse<LD>(0.25L, 12);
  CHECK(static_cast<double>((L * inv - MatrixX<LD>::Identity(12, 12)).cwiseAbs().maxCoeff()) < 1e-12);
}

TEST_CASE("forward clicks") {
  const ConvolutionMatrix C = build_convolution_matrix(TmdConfig::uniform(3, 0.5), 8);
  const LossMatrix L1 = loss_matrix(1.0, 9);
  const ClickDistribution vac = forward_clicks(PhotonDistribution::fock(0), C, L1);
  CHECK(vac[0] == 1.0);
  CHECK(vac.probs().tail(8).cwiseAbs().maxCoeff() == 0.0);
  const ClickDistribution one = forward_clicks(PhotonDistribution::fock(1), C, L1);
  CHECK(one[1] == doctest::Approx(1.0).epsilon(1e-15));

  const ConvolutionMatrix C1 = build_convolution_matrix(TmdConfig::uniform(1, 0.5), 2);
  const ClickDistribution two = forward_clicks(PhotonDistribution::fock(2), C1, loss_matrix(1.0, 3));
  CHECK(two[1] == doctest::Approx(0.5).epsilon(1e-15));
  CHECK(two[2] == doctest::Approx(0.5).epsilon(1e-15));

  CHECK_THROWS_AS(forward_clicks(PhotonDistribution::fock(1), C, loss_matrix(1.0, 5)), std::invalid_argument);
}

TEST_CASE("matrix csv layout") {
  Matrix m(2, 2);
  m << 1.0, 0.5, 0.0, 0.25;
  std::ostringstream out;
  write_matrix_csv(out, m, "N", "n");
  CHECK(out.str() == "N\\n,0,1\n0,1,0.5\n1,0,0.25\n");
}
