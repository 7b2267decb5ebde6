#pragma once

#include <span>

#include "melotype/distribution.hpp"
#include "melotype/token.hpp"

namespace melotype {

// The conditional model q(x_t | x_<t): anything that maps a context to a
// full-support distribution over the next token. This is the only contract
// the sampler and the metrics depend on, so other model families can be
// slotted in behind it.
class SequenceModel {
 public:
  virtual ~SequenceModel() = default;

  virtual int vocab_size() const = 0;
  virtual Token eos_token() const = 0;

  // Distribution over the next token given the (possibly empty) context.
  // Throws std::invalid_argument on out-of-range context tokens.
  virtual CategoricalDistribution next_distribution(
      std::span<const Token> context) const = 0;
};

}  // namespace melotype
