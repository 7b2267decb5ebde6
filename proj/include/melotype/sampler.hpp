#pragma once

#include <cstdint>
#include <vector>

#include "melotype/distribution.hpp"
#include "melotype/model.hpp"
#include "melotype/rng.hpp"
#include "melotype/token.hpp"

namespace melotype {

enum class SamplingStrategy { conventional, typical };

struct SamplerConfig {
  SamplingStrategy strategy = SamplingStrategy::conventional;
  double tau = 1.0;   // only consulted for the typical strategy
  int max_len = 1024; // maximum number of drawn tokens before eos is forced
  std::uint64_t seed = 0;

  // Throws std::invalid_argument on tau outside (0,1] or max_len < 1.
  void validate() const;
};

struct SampledSequence {
  TokenSequence tokens;
  bool truncated = false;  // true when eos was forced at max_len
};

// Locally typical pruning: keep the smallest set V of symbols with lowest
// |H + log q_v| (ties broken by ascending id) whose cumulative probability
// reaches tau, zero the rest, renormalize. When V covers the whole support
// the input is returned unchanged, so tau = 1 is the exact identity.
CategoricalDistribution typical_prune(const CategoricalDistribution& dist, double tau);

// Inverse-CDF draw using one uniform deviate from `rng`.
Token draw_token(const CategoricalDistribution& dist, Pcg32& rng);

// Ancestral decoding: draws tokens (typical_prune'd first when configured)
// until eos is drawn or max_len tokens were drawn, in which case eos is
// appended and the sequence is flagged truncated. Identical (model, config)
// always yields the identical sequence.
SampledSequence sample_sequence(const SequenceModel& model, const SamplerConfig& config);

// Same, but on the RNG stream Pcg32(config.seed, item). sample_sequence is
// item 0; batch item i uses stream i, which makes batches reproducible and
// independent of worker count.
SampledSequence sample_sequence_item(const SequenceModel& model,
                                     const SamplerConfig& config, std::uint64_t item);

std::vector<SampledSequence> sample_batch(const SequenceModel& model,
                                          const SamplerConfig& config, int count,
                                          int workers = 1);

}  // namespace melotype
