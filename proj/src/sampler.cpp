#include "melotype/sampler.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "melotype/info_metrics.hpp"
#include "melotype/parallel.hpp"

namespace melotype {

void SamplerConfig::validate() const {
  if (strategy == SamplingStrategy::typical && !(tau > 0.0 && tau <= 1.0))
    throw std::invalid_argument("tau must be in (0, 1], got " + std::to_string(tau));
  if (max_len < 1)
    throw std::invalid_argument("max_len must be >= 1, got " + std::to_string(max_len));
}

CategoricalDistribution typical_prune(const CategoricalDistribution& dist, double tau) {
  if (!(tau > 0.0 && tau <= 1.0))
    throw std::invalid_argument("tau must be in (0, 1], got " + std::to_string(tau));

  double entropy = event_entropy(dist);

  struct Candidate {
    double epsilon;
    Token id;
    double prob;
  };
  std::vector<Candidate> candidates;
  candidates.reserve(static_cast<std::size_t>(dist.size()));
  for (Token v = 0; v < dist.size(); ++v) {
    double q = dist[v];
    if (q > 0.0) candidates.push_back({std::abs(entropy + std::log(q)), v, q});
  }
  if (candidates.empty())
    throw std::invalid_argument("cannot prune a distribution with no support");

  std::sort(candidates.begin(), candidates.end(),
            [](const Candidate& a, const Candidate& b) {
              if (a.epsilon != b.epsilon) return a.epsilon < b.epsilon;
              return a.id < b.id;
            });

  std::size_t taken = 0;
  double mass = 0.0;
  while (taken < candidates.size() && mass < tau) {
    mass += candidates[taken].prob;
    ++taken;
  }

  // Whole support kept: return the input untouched so tau = 1 is exact.
  if (taken == candidates.size()) return dist;

  Eigen::ArrayXd pruned = Eigen::ArrayXd::Zero(dist.size());
  for (std::size_t i = 0; i < taken; ++i)
    pruned[candidates[i].id] = candidates[i].prob / mass;
  return CategoricalDistribution(std::move(pruned));
}

Token draw_token(const CategoricalDistribution& dist, Pcg32& rng) {
  double u = rng.next_double();
  double cum = 0.0;
  Token last_positive = -1;
  for (Token v = 0; v < dist.size(); ++v) {
    double q = dist[v];
    if (q <= 0.0) continue;
    cum += q;
    last_positive = v;
    if (u < cum) return v;
  }
  return last_positive;  // guards the rare u >= fp-rounded total
}

SampledSequence sample_sequence_item(const SequenceModel& model,
                                     const SamplerConfig& config, std::uint64_t item) {
  config.validate();
  Pcg32 rng(config.seed, item);
  SampledSequence out;
  Token eos = model.eos_token();

  while (true) {
    CategoricalDistribution dist = model.next_distribution(
        std::span<const Token>(out.tokens.data(), out.tokens.size()));
    if (config.strategy == SamplingStrategy::typical)
      dist = typical_prune(dist, config.tau);
    Token tok = draw_token(dist, rng);
    out.tokens.push_back(tok);
    if (tok == eos) return out;
    if (static_cast<int>(out.tokens.size()) >= config.max_len) {
      out.tokens.push_back(eos);
      out.truncated = true;
      return out;
    }
  }
}

SampledSequence sample_sequence(const SequenceModel& model, const SamplerConfig& config) {
  return sample_sequence_item(model, config, 0);
}

std::vector<SampledSequence> sample_batch(const SequenceModel& model,
                                          const SamplerConfig& config, int count,
                                          int workers) {
  config.validate();
  if (count < 1)
    throw std::invalid_argument("count must be >= 1, got " + std::to_string(count));
  std::vector<SampledSequence> out(static_cast<std::size_t>(count));
  parallel_for(out.size(), workers, [&](std::size_t i) {
    out[i] = sample_sequence_item(model, config, static_cast<std::uint64_t>(i));
  });
  return out;
}

}  // namespace melotype
