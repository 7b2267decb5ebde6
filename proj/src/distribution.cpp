#include "melotype/distribution.hpp"

#include <cmath>
#include <stdexcept>
#include <string>
#include <utility>

namespace melotype {

CategoricalDistribution::CategoricalDistribution(Eigen::ArrayXd probs)
    : probs_(std::move(probs)) {
  if (probs_.size() == 0)
    throw std::invalid_argument("empty probability vector");
  if ((probs_ < 0.0).any())
    throw std::invalid_argument("negative probability entry");
  double sum = probs_.sum();
  if (std::abs(sum - 1.0) > kSumTolerance)
    throw std::invalid_argument("probabilities sum to " + std::to_string(sum) +
                                ", expected 1");
}

CategoricalDistribution uniform_distribution(int size) {
  return CategoricalDistribution(
      Eigen::ArrayXd::Constant(size, 1.0 / static_cast<double>(size)));
}

}  // namespace melotype
