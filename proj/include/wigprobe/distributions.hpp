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

#include <stdexcept>
#include <string>

#include <Eigen/Core>

namespace wigprobe {

using Vector = Eigen::VectorXd;
using Matrix = Eigen::MatrixXd;
using Index = Eigen::Index;

/// Default truncation budget for photon-number distributions.
inline constexpr double kDefaultTailTol = 1e-9;

/// Thrown when a cutoff is too small to hold a distribution within its tail budget.
class TruncationError : public std::runtime_error {
 public:
  TruncationError(const std::string& what, double deficit)
      : std::runtime_error(what), deficit_(deficit) {}
  double deficit() const noexcept { return deficit_; }

 private:
  double deficit_;
};

/// Thrown when a linear system cannot be solved reliably.
class SingularSystemError : public std::runtime_error {
 public:
  SingularSystemError(const std::string& what, double condition_number)
      : std::runtime_error(what), condition_number_(condition_number) {}
  double condition_number() const noexcept { return condition_number_; }

 private:
  double condition_number_;
};

/// Photon-number probabilities, index n = photon number.
///
/// Entries are non-negative and sum to within `tail_tol` of one. Only the
/// Fock-diagonal of a state is ever represented.
class PhotonDistribution {
 public:
  PhotonDistribution() : probs_(Vector::Ones(1)) {}
  explicit PhotonDistribution(Vector probs, double tail_tol = kDefaultTailTol);

  /// The pure Fock state |m>.
  static PhotonDistribution fock(int m);

  const Vector& probs() const noexcept { return probs_; }
  int cutoff() const noexcept { return static_cast<int>(probs_.size()) - 1; }
  double operator[](Index n) const { return n < probs_.size() ? probs_[n] : 0.0; }
  double total() const { return probs_.sum(); }

 private:
  Vector probs_;
};

/// Real vector over photon number that may carry negative entries.
class QuasiDistribution {
 public:
  enum class Source { inverted, analytic };

  QuasiDistribution() = default;
  QuasiDistribution(Vector values, Source source, double condition_number = 1.0)
      : values_(std::move(values)), source_(source), condition_number_(condition_number) {}

  const Vector& values() const noexcept { return values_; }
  Source source() const noexcept { return source_; }
  /// Condition estimate of the system that produced the values (1 for analytic).
  double condition_number() const noexcept { return condition_number_; }
  double operator[](Index n) const { return n < values_.size() ? values_[n] : 0.0; }
  double min_component() const { return values_.size() ? values_.minCoeff() : 0.0; }

 private:
  Vector values_;
  Source source_ = Source::analytic;
  double condition_number_ = 1.0;
};

/// Distribution over the number of clicks N in [0, B] of a B-bin detector.
class ClickDistribution {
 public:
  ClickDistribution() = default;
  explicit ClickDistribution(Vector probs);

  const Vector& probs() const noexcept { return probs_; }
  int bins() const noexcept { return static_cast<int>(probs_.size()) - 1; }
  double operator[](Index n) const { return n < probs_.size() ? probs_[n] : 0.0; }
  /// 1 - sum of probabilities; mass lost to truncation upstream.
  double deficit() const { return 1.0 - probs_.sum(); }

 private:
  Vector probs_;
};

}  // namespace wigprobe
