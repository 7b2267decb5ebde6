#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "json.hpp"
#include "melotype/corpus.hpp"
#include "melotype/histogram.hpp"
#include "melotype/info_metrics.hpp"
#include "melotype/ngram_model.hpp"

namespace melotype {

// Flat key = value config ('#' starts a comment). Unknown or duplicate keys
// are errors, as are out-of-range values; every error names the key.
//
// Keys: corpus, corpus_format (jsonl|abc-dir), split_seed, order, alpha,
// tau_grid (comma-separated, each in (0,1]), sample_count (0 = test-set
// size), sample_max_len (0 = test-set max length), sample_seed, units
// (nats|bits), out_dir, max_len_filter (0 = keep all pieces).
struct ExperimentConfig {
  std::string corpus_path;
  std::string corpus_format = "jsonl";
  std::uint64_t split_seed = 1;
  // order 3 fits the bundled corpus scale well; larger orders overfit it and
  // the sampled conditions drift away from the reference distributions
  int order = 3;
  double alpha = 1.0;
  std::vector<double> tau_grid = {0.9, 0.5, 0.2};
  int sample_count = 0;
  int sample_max_len = 0;
  std::uint64_t sample_seed = 42;
  std::string units = "nats";
  std::string out_dir = "melotype-out";
  int max_len_filter = 0;

  static ExperimentConfig from_file(const std::filesystem::path& path);
  static ExperimentConfig from_text(const std::string& text);

  void validate() const;
  nlohmann::json to_json() const;
};

// One analyzed condition: the reference test split, conventional sampling,
// or typical sampling at a given tau.
struct ConditionResult {
  std::string label;      // "reference", "conventional", "typical@0.5"
  bool sampled = false;
  double tau = 1.0;       // only meaningful for typical conditions
  std::uint64_t seed = 0; // stream base used by the sampler
  std::vector<EventRecord> events;
  std::vector<SequenceRecord> sequences;
  std::size_t truncated_count = 0;
};

struct ReportBundle {
  ExperimentConfig config;
  double unit_scale = 1.0;
  MeanWithError reference_expected_id;  // in the configured units
  std::vector<ConditionResult> conditions;
  std::vector<Histogram> event_histograms;     // shared edges across series
  std::vector<Histogram> sequence_histograms;  // likewise
  nlohmann::json manifest;
};

struct RunOptions {
  int workers = 1;
};

// The full pipeline: ingest, tokenize, split, train, sample, analyze, then
// write the report bundle (metric CSVs, histogram CSVs, summary CSV,
// manifest, model, samples) into config.out_dir. Inputs and config are
// validated before anything is written; the bundle is a pure function of
// (corpus bytes, config), independent of the worker count.
ReportBundle run_experiment(const ExperimentConfig& config, const RunOptions& opts = {});

// Trend extraction mirroring the distribution claims the report is after:
// series are ordered conventional first, then typical with decreasing tau.
struct TrendSummary {
  std::vector<std::string> series;
  std::vector<double> epsilon_sym_stdev;
  bool stdev_nonincreasing = false;

  std::vector<double> mean_id;
  std::vector<double> mean_id_std_error;
  bool mean_id_nonincreasing = false;
  // consecutive mean-ID drops all exceed twice the combined standard error
  bool mean_id_margins_exceed_2se = false;

  double reference_event_w1_conventional = 0.0;
  std::vector<double> reference_event_w1_typical;  // matches typical series order
  bool conventional_closest = false;

  nlohmann::json to_json() const;
};

// Throws std::invalid_argument unless the bundle holds conventional plus at
// least two typical conditions.
TrendSummary compare_conditions(const ReportBundle& bundle);

// Loads a corpus per config.corpus_format ("jsonl" file or "abc-dir" of one
// tune per *.abc file, ordered by filename).
Corpus load_corpus_for(const std::string& path, const std::string& format);

}  // namespace melotype
