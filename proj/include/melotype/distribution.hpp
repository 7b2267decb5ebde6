#pragma once

#include <Eigen/Dense>

#include "melotype/token.hpp"

namespace melotype {

// Probability vector over a token vocabulary. Entries are non-negative and
// sum to one within kSumTolerance. Zero entries are allowed (one-hot and
// pruned distributions); model outputs are strictly positive by construction.
class CategoricalDistribution {
 public:
  static constexpr double kSumTolerance = 1e-12;

  // Validates and takes ownership; throws std::invalid_argument on negative
  // entries or a sum off by more than kSumTolerance.
  explicit CategoricalDistribution(Eigen::ArrayXd probs);

  int size() const { return static_cast<int>(probs_.size()); }
  double operator[](Token t) const { return probs_[t]; }
  const Eigen::ArrayXd& probs() const { return probs_; }

  bool operator==(const CategoricalDistribution& other) const {
    return probs_.size() == other.probs_.size() && (probs_ == other.probs_).all();
  }

 private:
  Eigen::ArrayXd probs_;
};

// Uniform distribution over `size` tokens.
CategoricalDistribution uniform_distribution(int size);

}  // namespace melotype
