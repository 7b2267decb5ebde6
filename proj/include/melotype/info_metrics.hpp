#pragma once

#include <cstdint>
#include <limits>
#include <ostream>
#include <span>
#include <string>
#include <vector>

#include "melotype/distribution.hpp"
#include "melotype/model.hpp"
#include "melotype/token.hpp"

namespace melotype {

// Per-event information record. epsilon is stored signed,
// epsilon = entropy - ic; the typicality divergence is |epsilon|.
struct EventTypicality {
  double ic = 0.0;       // -log q(x_t | x_<t), nats
  double entropy = 0.0;  // H(. | x_<t), nats
  double epsilon = 0.0;  // entropy - ic
};

// Per-sequence information record; id = total_ic / length with length
// counting every token including eos. epsilon_id = E[ID] - id is NaN until
// an expected ID has been supplied.
struct SequenceTypicality {
  double total_ic = 0.0;
  std::size_t length = 0;
  double id = 0.0;
  double epsilon_id = std::numeric_limits<double>::quiet_NaN();
};

// Surprisal of `token` under `dist`, in nats. A zero-probability token
// (possible only for externally built distributions) yields +infinity.
double event_ic(const CategoricalDistribution& dist, Token token);

// Shannon entropy of `dist` in nats, with 0 log 0 := 0.
double event_entropy(const CategoricalDistribution& dist);

// Per-position (ic, entropy, epsilon) under the model, over every position
// including eos.
std::vector<EventTypicality> analyze_events(const SequenceModel& model,
                                            const TokenSequence& tokens);

// Accumulated IC and information density of the whole sequence.
SequenceTypicality sequence_ic(const SequenceModel& model, const TokenSequence& tokens);

struct MeanWithError {
  double mean = 0.0;
  double std_error = 0.0;  // sample stdev / sqrt(n); 0 when n == 1
  std::size_t count = 0;
};

// Reference-mode E[ID]: arithmetic mean of ID over the given pieces.
// Throws std::invalid_argument on an empty corpus.
MeanWithError expected_id(const SequenceModel& model,
                          const std::vector<TokenSequence>& pieces);

// Monte-Carlo E[ID]: mean ID over `sample_count` sequences ancestrally
// sampled from the model (conventional strategy, per-item RNG streams).
MeanWithError expected_id_monte_carlo(const SequenceModel& model, int sample_count,
                                      int max_len, std::uint64_t seed,
                                      int workers = 1);

// Exact sequence-level statistics by exhaustive enumeration. Tractable only
// for tiny models; refuses vocab_size > 5 or max_len > 6.
struct ExactSequenceStats {
  double sequence_entropy = 0.0;  // H(x) = sum p(x) * -log p(x)
  double expected_ic = 0.0;       // E[IC(x)] with IC as the pipeline computes it
  double expected_id = 0.0;       // E[ID(x)] likewise
  double total_mass = 0.0;        // must be 1 within 1e-10
  std::size_t sequence_count = 0;
};
ExactSequenceStats enumerate_exact(const SequenceModel& model, int max_len);

// --- metric dumps -----------------------------------------------------------

struct EventRecord {
  std::string piece_id;
  int position = 0;
  Token token = 0;
  EventTypicality typ;
};

struct SequenceRecord {
  std::string piece_id;
  SequenceTypicality typ;
  bool truncated = false;
};

// CSV columns: piece_id,position,token_id,ic,entropy,epsilon.
// unit_scale multiplies every information value (1/ln2 reports bits).
void write_event_metrics_csv(std::ostream& out, std::span<const EventRecord> records,
                             double unit_scale = 1.0);

// CSV columns: piece_id,length,total_ic,id,epsilon_id.
void write_sequence_metrics_csv(std::ostream& out,
                                std::span<const SequenceRecord> records,
                                double unit_scale = 1.0);

// 1.0 for "nats", 1/ln2 for "bits"; throws std::invalid_argument otherwise.
double unit_scale_for(const std::string& units);

}  // namespace melotype
