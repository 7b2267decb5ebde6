#include "melotype/info_metrics.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

#include "melotype/format.hpp"
#include "melotype/parallel.hpp"
#include "melotype/sampler.hpp"

namespace melotype {

double event_ic(const CategoricalDistribution& dist, Token token) {
  if (token < 0 || token >= dist.size())
    throw std::invalid_argument("token id " + std::to_string(token) +
                                " outside distribution of size " +
                                std::to_string(dist.size()));
  double p = dist[token];
  if (p <= 0.0) return std::numeric_limits<double>::infinity();
  return -std::log(p);
}

double event_entropy(const CategoricalDistribution& dist) {
  const Eigen::ArrayXd& p = dist.probs();
  return -((p > 0.0).select(p * p.log(), 0.0)).sum();
}

std::vector<EventTypicality> analyze_events(const SequenceModel& model,
                                            const TokenSequence& tokens) {
  std::vector<EventTypicality> out;
  out.reserve(tokens.size());
  for (std::size_t t = 0; t < tokens.size(); ++t) {
    CategoricalDistribution dist =
        model.next_distribution(std::span<const Token>(tokens.data(), t));
    EventTypicality e;
    e.ic = event_ic(dist, tokens[t]);
    e.entropy = event_entropy(dist);
    e.epsilon = e.entropy - e.ic;
    out.push_back(e);
  }
  return out;
}

SequenceTypicality sequence_ic(const SequenceModel& model, const TokenSequence& tokens) {
  if (tokens.empty()) throw std::invalid_argument("empty token sequence");
  SequenceTypicality s;
  for (std::size_t t = 0; t < tokens.size(); ++t) {
    CategoricalDistribution dist =
        model.next_distribution(std::span<const Token>(tokens.data(), t));
    s.total_ic += event_ic(dist, tokens[t]);
  }
  s.length = tokens.size();
  s.id = s.total_ic / static_cast<double>(s.length);
  return s;
}

namespace {

MeanWithError mean_with_error(const std::vector<double>& values) {
  MeanWithError m;
  m.count = values.size();
  double sum = 0.0;
  for (double v : values) sum += v;
  m.mean = sum / static_cast<double>(values.size());
  if (values.size() > 1) {
    double ss = 0.0;
    for (double v : values) ss += (v - m.mean) * (v - m.mean);
    double var = ss / static_cast<double>(values.size() - 1);
    m.std_error = std::sqrt(var / static_cast<double>(values.size()));
  }
  return m;
}

}  // namespace

MeanWithError expected_id(const SequenceModel& model,
                          const std::vector<TokenSequence>& pieces) {
  if (pieces.empty()) throw std::invalid_argument("empty reference corpus");
  std::vector<double> ids(pieces.size());
  for (std::size_t i = 0; i < pieces.size(); ++i)
    ids[i] = sequence_ic(model, pieces[i]).id;
  return mean_with_error(ids);
}

MeanWithError expected_id_monte_carlo(const SequenceModel& model, int sample_count,
                                      int max_len, std::uint64_t seed, int workers) {
  if (sample_count < 1) throw std::invalid_argument("sample_count must be >= 1");
  SamplerConfig cfg;
  cfg.strategy = SamplingStrategy::conventional;
  cfg.max_len = max_len;
  cfg.seed = seed;
  std::vector<SampledSequence> batch = sample_batch(model, cfg, sample_count, workers);
  std::vector<double> ids(batch.size());
  parallel_for(batch.size(), workers, [&](std::size_t i) {
    ids[i] = sequence_ic(model, batch[i].tokens).id;
  });
  return mean_with_error(ids);
}

namespace {

struct EnumerationState {
  const SequenceModel* model;
  Token eos;
  int max_len;
  ExactSequenceStats stats;
  TokenSequence prefix;

  // prob and neg_log_prob track the generation probability of the prefix.
  void walk(double prob, double neg_log_prob) {
    CategoricalDistribution dist = model->next_distribution(
        std::span<const Token>(prefix.data(), prefix.size()));
    for (Token v = 0; v < model->vocab_size(); ++v) {
      double q = dist[v];
      if (q <= 0.0) continue;
      double p = prob * q;
      double ic = neg_log_prob - std::log(q);
      if (v == eos) {
        double len = static_cast<double>(prefix.size() + 1);
        stats.sequence_entropy += p * ic;
        stats.expected_ic += p * ic;
        stats.expected_id += p * (ic / len);
        stats.total_mass += p;
        stats.sequence_count += 1;
      } else if (static_cast<int>(prefix.size()) + 1 < max_len) {
        prefix.push_back(v);
        walk(p, ic);
        prefix.pop_back();
      } else {
        // max_len tokens drawn without eos: eos is forced, contributing IC
        // under the model but no generation probability.
        prefix.push_back(v);
        CategoricalDistribution tail = model->next_distribution(
            std::span<const Token>(prefix.data(), prefix.size()));
        prefix.pop_back();
        double eos_ic = event_ic(tail, eos);  // +inf if the model never ends
        double len = static_cast<double>(max_len + 1);
        stats.sequence_entropy += p * ic;
        stats.expected_ic += p * (ic + eos_ic);
        stats.expected_id += p * ((ic + eos_ic) / len);
        stats.total_mass += p;
        stats.sequence_count += 1;
      }
    }
  }
};

}  // namespace

ExactSequenceStats enumerate_exact(const SequenceModel& model, int max_len) {
  if (model.vocab_size() > 5)
    throw std::invalid_argument("enumerate_exact refused: vocab size " +
                                std::to_string(model.vocab_size()) +
                                " exceeds the tractability cap of 5");
  if (max_len > 6 || max_len < 1)
    throw std::invalid_argument("enumerate_exact refused: max_len " +
                                std::to_string(max_len) + " outside 1..6");
  EnumerationState state;
  state.model = &model;
  state.eos = model.eos_token();
  state.max_len = max_len;
  state.walk(1.0, 0.0);
  return state.stats;
}

void write_event_metrics_csv(std::ostream& out, std::span<const EventRecord> records,
                             double unit_scale) {
  out << "piece_id,position,token_id,ic,entropy,epsilon\n";
  for (const EventRecord& r : records) {
    out << csv_field(r.piece_id) << ',' << r.position << ',' << r.token << ','
        << format_double(r.typ.ic * unit_scale) << ','
        << format_double(r.typ.entropy * unit_scale) << ','
        << format_double(r.typ.epsilon * unit_scale) << '\n';
  }
}

void write_sequence_metrics_csv(std::ostream& out,
                                std::span<const SequenceRecord> records,
                                double unit_scale) {
  out << "piece_id,length,total_ic,id,epsilon_id\n";
  for (const SequenceRecord& r : records) {
    out << csv_field(r.piece_id) << ',' << r.typ.length << ','
        << format_double(r.typ.total_ic * unit_scale) << ','
        << format_double(r.typ.id * unit_scale) << ','
        << format_double(r.typ.epsilon_id * unit_scale) << '\n';
  }
}

double unit_scale_for(const std::string& units) {
  if (units == "nats") return 1.0;
  if (units == "bits") return 1.0 / std::numbers::ln2;
  throw std::invalid_argument("units must be 'nats' or 'bits', got '" + units + "'");
}

}  // namespace melotype
