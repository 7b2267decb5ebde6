// Acceptance suite: one pass/fail line per criterion, nonzero exit when any
// criterion fails. Everything is fixed-seed; see configs/toy.cfg for the
// matching command-line run.

#include <chrono>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include "melotype/experiment.hpp"
#include "melotype/info_metrics.hpp"
#include "melotype/ngram_model.hpp"
#include "melotype/sampler.hpp"
#include "melotype/tokenizer.hpp"
#include "melotype/toy_corpus.hpp"

using namespace melotype;
namespace fs = std::filesystem;

namespace {

struct Failure {
  std::string detail;
};

void require(bool ok, const std::string& detail) {
  if (!ok) throw Failure{detail};
}

std::string fmt(double v) {
  std::ostringstream out;
  out.precision(6);
  out << v;
  return out.str();
}

double seconds_since(std::chrono::steady_clock::time_point start) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - start)
      .count();
}

NGramModel oracle_model() {
  // vocab {0, 1, eos=2}, order 2; starts are balanced so the pruned first
  // distribution keeps more than one token and the frequency check bites
  std::vector<TokenSequence> seqs = {{0, 1, 0, 1, 2}, {1, 0, 1, 2}, {0, 0, 1, 2},
                                     {1, 1, 0, 2},    {0, 1, 2},    {1, 0, 2}};
  return NGramModel::train(seqs, 2, 1.0, 3, 2);
}

// --- shared experiment run (AC-2, AC-3, AC-4, AC-8) -------------------------

struct ExperimentFixture {
  ReportBundle bundle;
  TrendSummary trends;
  double run_seconds = 0.0;
  std::map<std::string, std::string> first_run_csvs;
  std::map<std::string, std::string> second_run_csvs;
};

std::map<std::string, std::string> read_csvs(const fs::path& dir) {
  std::map<std::string, std::string> out;
  for (const auto& entry : fs::directory_iterator(dir)) {
    if (entry.path().extension() != ".csv") continue;
    std::ifstream in(entry.path(), std::ios::binary);
    out[entry.path().filename().string()] =
        std::string((std::istreambuf_iterator<char>(in)),
                    std::istreambuf_iterator<char>());
  }
  return out;
}

ExperimentFixture& experiment_fixture() {
  static ExperimentFixture fixture = [] {
    ExperimentFixture f;
    fs::path corpus = fs::temp_directory_path() / "melotype_acc_corpus.jsonl";
    save_jsonl(make_toy_corpus(200, 7), corpus);
    fs::path out = fs::temp_directory_path() / "melotype_acc_out";
    fs::remove_all(out);

    ExperimentConfig cfg;
    cfg.corpus_path = corpus.string();
    cfg.split_seed = 1;
    cfg.order = 3;
    cfg.alpha = 1.0;
    cfg.tau_grid = {0.9, 0.5, 0.2};
    cfg.sample_count = 300;
    cfg.sample_max_len = 120;
    cfg.sample_seed = 42;
    cfg.out_dir = out.string();

    auto start = std::chrono::steady_clock::now();
    f.bundle = run_experiment(cfg, RunOptions{1});
    f.run_seconds = seconds_since(start);
    f.trends = compare_conditions(f.bundle);
    f.first_run_csvs = read_csvs(out);

    // second invocation from the same manifest, different worker count
    run_experiment(cfg, RunOptions{4});
    f.second_run_csvs = read_csvs(out);
    return f;
  }();
  return fixture;
}

// --- criteria ---------------------------------------------------------------

std::string ac1_oracle_equivalence() {
  auto start = std::chrono::steady_clock::now();
  NGramModel model = oracle_model();

  ExactSequenceStats exact = enumerate_exact(model, 4);
  require(std::abs(exact.total_mass - 1.0) <= 1e-10,
          "enumeration mass " + fmt(exact.total_mass) + " not 1 within 1e-10");

  MeanWithError mc = expected_id_monte_carlo(model, 100000, 4, 20240, 4);
  double rel = std::abs(mc.mean - exact.expected_id) / exact.expected_id;
  require(rel < 0.01, "MC E[ID] " + fmt(mc.mean) + " vs exact " +
                          fmt(exact.expected_id) + ", rel err " + fmt(rel));

  CategoricalDistribution pruned = typical_prune(model.next_distribution({}), 0.5);
  SamplerConfig cfg;
  cfg.strategy = SamplingStrategy::typical;
  cfg.tau = 0.5;
  cfg.max_len = 4;
  cfg.seed = 99;
  std::vector<SampledSequence> batch = sample_batch(model, cfg, 1000000, 4);
  Eigen::ArrayXd freq = Eigen::ArrayXd::Zero(3);
  for (const SampledSequence& s : batch) freq[s.tokens[0]] += 1.0;
  freq /= static_cast<double>(batch.size());
  double tv = 0.5 * (freq - pruned.probs()).abs().sum();
  require(tv < 0.005, "first-token TV distance " + fmt(tv) + " >= 0.005");

  double elapsed = seconds_since(start);
  require(elapsed < 30.0, "runtime " + fmt(elapsed) + "s >= 30s");
  return "MC E[ID] " + fmt(mc.mean) + " vs exact " + fmt(exact.expected_id) +
         " (rel " + fmt(rel) + "); first-token TV " + fmt(tv) + "; " +
         fmt(elapsed) + "s";
}

std::string ac2_typicality_concentration() {
  ExperimentFixture& f = experiment_fixture();
  const std::vector<double>& stdev = f.trends.epsilon_sym_stdev;
  require(stdev.size() == 4, "expected 4 sampled conditions");
  for (std::size_t i = 1; i < stdev.size(); ++i) {
    require(stdev[i] <= stdev[i - 1],
            "stdev rose from " + fmt(stdev[i - 1]) + " to " + fmt(stdev[i]) +
                " at " + f.trends.series[i]);
    require(stdev[i] <= stdev[0], f.trends.series[i] + " stdev " + fmt(stdev[i]) +
                                      " exceeds conventional " + fmt(stdev[0]));
  }
  require(f.run_seconds < 60.0, "runtime " + fmt(f.run_seconds) + "s >= 60s");
  std::string detail = "stdev(eps_sym):";
  for (std::size_t i = 0; i < stdev.size(); ++i)
    detail += " " + f.trends.series[i] + "=" + fmt(stdev[i]);
  return detail + "; " + fmt(f.run_seconds) + "s";
}

std::string ac3_probability_shift() {
  ExperimentFixture& f = experiment_fixture();
  const std::vector<double>& mean = f.trends.mean_id;
  const std::vector<double>& se = f.trends.mean_id_std_error;
  for (std::size_t i = 1; i < mean.size(); ++i) {
    double margin = mean[i - 1] - mean[i];
    double combined = 2.0 * std::sqrt(se[i - 1] * se[i - 1] + se[i] * se[i]);
    require(margin > combined, "margin " + fmt(margin) + " at " +
                                   f.trends.series[i] + " not above 2*se " +
                                   fmt(combined));
  }
  std::string detail = "mean ID:";
  for (std::size_t i = 0; i < mean.size(); ++i)
    detail += " " + f.trends.series[i] + "=" + fmt(mean[i]);
  return detail;
}

std::string ac4_conventional_proximity() {
  ExperimentFixture& f = experiment_fixture();
  double conv = f.trends.reference_event_w1_conventional;
  double typ02 = f.trends.reference_event_w1_typical.back();  // tau = 0.2
  require(f.trends.series.back() == "typical@0.2", "condition ordering broken");
  require(conv < typ02, "W1(conventional, reference) " + fmt(conv) +
                            " not below W1(typical@0.2, reference) " + fmt(typ02));
  return "W1 conventional " + fmt(conv) + " < typical@0.2 " + fmt(typ02);
}

std::string ac5_zero_mean_epsilon() {
  Corpus toy = make_toy_corpus(200, 7);
  std::vector<TokenSequence> train;
  for (const TokenPiece& p : tokenize_corpus(toy))
    if (split_of(p.id, 1) == Split::train) train.push_back(p.tokens);
  NGramModel model = NGramModel::train(train, 3, 1.0);

  SamplerConfig cfg;
  cfg.max_len = 120;
  cfg.seed = 777;
  std::vector<SampledSequence> batch = sample_batch(model, cfg, 2600, 4);

  double sum = 0.0, sumsq = 0.0;
  std::size_t n = 0;
  for (const SampledSequence& s : batch) {
    if (n >= 100000) break;
    std::size_t drawn = s.tokens.size() - (s.truncated ? 1 : 0);
    std::vector<EventTypicality> events = analyze_events(model, s.tokens);
    for (std::size_t t = 0; t < drawn && n < 100000; ++t) {
      sum += events[t].epsilon;
      sumsq += events[t].epsilon * events[t].epsilon;
      ++n;
    }
  }
  require(n == 100000, "only gathered " + std::to_string(n) + " events");
  double mean = sum / static_cast<double>(n);
  double se = std::sqrt((sumsq / n - mean * mean) / static_cast<double>(n));
  require(std::abs(mean) < 3.0 * se, "mean signed epsilon " + fmt(mean) +
                                         " outside 3 se (" + fmt(3.0 * se) + ")");
  return "mean signed epsilon " + fmt(mean) + " within 3 se (" + fmt(3.0 * se) +
         ") over 1e5 events";
}

std::string ac6_round_trip() {
  auto check = [](const std::vector<NoteEvent>& events) {
    // expected: input with >= 10 ms gaps materialized as rests
    std::vector<NoteEvent> expected;
    std::int64_t cursor = 0;
    for (const NoteEvent& e : events) {
      if (e.onset_ms - cursor >= 10)
        expected.push_back(NoteEvent::rest(cursor, e.onset_ms - cursor));
      expected.push_back(e);
      cursor = e.onset_ms + e.dur_ms;
    }
    std::vector<NoteEvent> decoded = decode(encode(events));
    require(decoded.size() == expected.size(), "event count changed");
    for (std::size_t i = 0; i < expected.size(); ++i) {
      require(decoded[i].is_rest() == expected[i].is_rest(), "kind changed");
      if (!expected[i].is_rest())
        require(decoded[i].pitch == expected[i].pitch, "pitch changed");
      std::int64_t want = expected[i].dur_ms;
      std::int64_t got = decoded[i].dur_ms;
      if (want < 10)
        require(got == 10, "sub-10ms duration not clamped to 10");
      else
        require(std::llabs(got - want) <= 5, "duration off by more than 5 ms");
    }
  };

  Corpus toy = make_toy_corpus(200, 7);
  for (const Piece& piece : toy.pieces) check(piece.events);

  Pcg32 rng(4242, 0);
  for (int trial = 0; trial < 1000; ++trial) {
    std::vector<NoteEvent> events;
    std::int64_t cursor = rng.next_below(60);
    int n = 1 + static_cast<int>(rng.next_below(15));
    for (int i = 0; i < n; ++i) {
      std::int64_t dur = 1 + rng.next_below(3000);
      if (rng.next_below(7) == 0)
        events.push_back(NoteEvent::rest(cursor, dur));
      else
        events.push_back(
            NoteEvent::note(static_cast<int>(rng.next_below(128)), cursor, dur));
      cursor += dur + rng.next_below(50);
    }
    check(events);
  }
  return "200 toy pieces + 1000 random event lists round-tripped";
}

std::string ac7_exact_identities() {
  Eigen::ArrayXd p(4);
  p << 0.4, 0.3, 0.2, 0.1;
  CategoricalDistribution dist(std::move(p));
  require(typical_prune(dist, 1.0) == dist, "tau=1 prune is not the identity");

  Eigen::ArrayXd q = Eigen::ArrayXd::Zero(230);
  q[60] = 1.0;
  CategoricalDistribution onehot(std::move(q));
  require(event_entropy(onehot) == 0.0, "one-hot entropy not 0");
  require(event_ic(onehot, 60) == 0.0, "one-hot mode IC not 0");
  require(event_entropy(onehot) - event_ic(onehot, 60) == 0.0,
          "one-hot epsilon not 0");

  double h = event_entropy(uniform_distribution(230));
  require(std::abs(h - std::log(230.0)) <= 1e-12,
          "uniform entropy " + fmt(h) + " differs from ln 230");
  return "tau=1 identity, one-hot zeros, uniform entropy ln 230 within 1e-12";
}

std::string ac8_determinism() {
  ExperimentFixture& f = experiment_fixture();
  require(f.first_run_csvs.size() >= 13,
          "expected at least 13 metric CSVs, found " +
              std::to_string(f.first_run_csvs.size()));
  require(f.first_run_csvs.size() == f.second_run_csvs.size(),
          "re-run produced a different set of CSV files");
  for (const auto& [name, bytes] : f.first_run_csvs) {
    auto it = f.second_run_csvs.find(name);
    require(it != f.second_run_csvs.end(), "missing " + name + " on re-run");
    require(it->second == bytes, name + " differs between runs");
  }
  return std::to_string(f.first_run_csvs.size()) +
         " CSVs byte-identical across re-run with workers 1 vs 4";
}

}  // namespace

int main() {
  struct Criterion {
    const char* name;
    std::function<std::string()> run;
  };
  std::vector<Criterion> criteria = {
      {"AC-1 oracle equivalence", ac1_oracle_equivalence},
      {"AC-2 typicality concentration", ac2_typicality_concentration},
      {"AC-3 probability shift", ac3_probability_shift},
      {"AC-4 conventional-vs-reference proximity", ac4_conventional_proximity},
      {"AC-5 zero-mean signed epsilon", ac5_zero_mean_epsilon},
      {"AC-6 tokenizer round trip", ac6_round_trip},
      {"AC-7 exact identities", ac7_exact_identities},
      {"AC-8 determinism", ac8_determinism},
  };

  int failures = 0;
  for (const Criterion& c : criteria) {
    try {
      std::string detail = c.run();
      std::cout << "[PASS] " << c.name << ": " << detail << "\n";
    } catch (const Failure& f) {
      ++failures;
      std::cout << "[FAIL] " << c.name << ": " << f.detail << "\n";
    } catch (const std::exception& e) {
      ++failures;
      std::cout << "[FAIL] " << c.name << ": unexpected error: " << e.what() << "\n";
    }
  }
  if (failures > 0) std::cout << failures << " criteria failed\n";
  return failures == 0 ? 0 : 1;
}
