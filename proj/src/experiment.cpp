#include "melotype/experiment.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <set>
#include <sstream>
#include <stdexcept>

#include "melotype/abc_parser.hpp"
#include "melotype/errors.hpp"
#include "melotype/format.hpp"
#include "melotype/hash.hpp"
#include "melotype/parallel.hpp"
#include "melotype/sampler.hpp"
#include "melotype/tokenizer.hpp"
#include "melotype/version.hpp"

namespace melotype {

namespace {

std::string trim(const std::string& s) {
  std::size_t a = s.find_first_not_of(" \t\r");
  if (a == std::string::npos) return "";
  std::size_t b = s.find_last_not_of(" \t\r");
  return s.substr(a, b - a + 1);
}

std::uint64_t parse_u64(const std::string& key, const std::string& value) {
  try {
    std::size_t used = 0;
    unsigned long long v = std::stoull(value, &used);
    if (used != value.size()) throw std::invalid_argument("trailing characters");
    return v;
  } catch (const std::exception&) {
    throw ConfigError(key, "expected a non-negative integer, got '" + value + "'");
  }
}

int parse_int(const std::string& key, const std::string& value) {
  try {
    std::size_t used = 0;
    long v = std::stol(value, &used);
    if (used != value.size()) throw std::invalid_argument("trailing characters");
    return static_cast<int>(v);
  } catch (const std::exception&) {
    throw ConfigError(key, "expected an integer, got '" + value + "'");
  }
}

double parse_real(const std::string& key, const std::string& value) {
  try {
    std::size_t used = 0;
    double v = std::stod(value, &used);
    if (used != value.size()) throw std::invalid_argument("trailing characters");
    return v;
  } catch (const std::exception&) {
    throw ConfigError(key, "expected a number, got '" + value + "'");
  }
}

std::vector<double> parse_tau_grid(const std::string& value) {
  std::vector<double> taus;
  std::stringstream ss(value);
  std::string item;
  while (std::getline(ss, item, ',')) {
    item = trim(item);
    if (item.empty()) throw ConfigError("tau_grid", "empty entry in '" + value + "'");
    taus.push_back(parse_real("tau_grid", item));
  }
  if (taus.empty()) throw ConfigError("tau_grid", "no values given");
  return taus;
}

std::string tau_label(double tau) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "typical@%g", tau);
  return buf;
}

std::string file_tag(const std::string& label) {
  std::string tag = label;
  std::replace(tag.begin(), tag.end(), '@', '_');
  return tag;
}

std::uint64_t hash_file_bytes(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw LoadError("cannot open file: " + path.string());
  std::string bytes((std::istreambuf_iterator<char>(in)),
                    std::istreambuf_iterator<char>());
  return fnv1a64(bytes);
}

std::string hex64(std::uint64_t v) {
  char buf[17];
  std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(v));
  return buf;
}

}  // namespace

ExperimentConfig ExperimentConfig::from_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw LoadError("cannot open config file: " + path.string());
  std::string text((std::istreambuf_iterator<char>(in)),
                   std::istreambuf_iterator<char>());
  return from_text(text);
}

ExperimentConfig ExperimentConfig::from_text(const std::string& text) {
  ExperimentConfig cfg;
  std::set<std::string> seen;
  std::stringstream ss(text);
  std::string line;
  while (std::getline(ss, line)) {
    std::size_t hash = line.find('#');
    if (hash != std::string::npos) line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) continue;
    std::size_t eq = line.find('=');
    if (eq == std::string::npos)
      throw ConfigError(line, "expected 'key = value'");
    std::string key = trim(line.substr(0, eq));
    std::string value = trim(line.substr(eq + 1));
    if (!seen.insert(key).second) throw ConfigError(key, "duplicate key");

    if (key == "corpus") cfg.corpus_path = value;
    else if (key == "corpus_format") cfg.corpus_format = value;
    else if (key == "split_seed") cfg.split_seed = parse_u64(key, value);
    else if (key == "order") cfg.order = parse_int(key, value);
    else if (key == "alpha") cfg.alpha = parse_real(key, value);
    else if (key == "tau_grid") cfg.tau_grid = parse_tau_grid(value);
    else if (key == "sample_count") cfg.sample_count = parse_int(key, value);
    else if (key == "sample_max_len") cfg.sample_max_len = parse_int(key, value);
    else if (key == "sample_seed") cfg.sample_seed = parse_u64(key, value);
    else if (key == "units") cfg.units = value;
    else if (key == "out_dir") cfg.out_dir = value;
    else if (key == "max_len_filter") cfg.max_len_filter = parse_int(key, value);
    else throw ConfigError(key, "unknown key");
  }
  cfg.validate();
  return cfg;
}

void ExperimentConfig::validate() const {
  if (corpus_path.empty()) throw ConfigError("corpus", "required");
  if (corpus_format != "jsonl" && corpus_format != "abc-dir")
    throw ConfigError("corpus_format", "must be 'jsonl' or 'abc-dir', got '" +
                                           corpus_format + "'");
  if (order < 1) throw ConfigError("order", "must be >= 1");
  if (!(alpha > 0.0)) throw ConfigError("alpha", "must be positive");
  if (tau_grid.empty()) throw ConfigError("tau_grid", "no values given");
  for (double tau : tau_grid)
    if (!(tau > 0.0 && tau <= 1.0))
      throw ConfigError("tau_grid", "tau " + format_double(tau) + " outside (0, 1]");
  std::set<double> unique(tau_grid.begin(), tau_grid.end());
  if (unique.size() != tau_grid.size())
    throw ConfigError("tau_grid", "duplicate tau values");
  if (sample_count < 0) throw ConfigError("sample_count", "must be >= 0");
  if (sample_max_len < 0) throw ConfigError("sample_max_len", "must be >= 0");
  if (units != "nats" && units != "bits")
    throw ConfigError("units", "must be 'nats' or 'bits', got '" + units + "'");
  if (out_dir.empty()) throw ConfigError("out_dir", "required");
  if (max_len_filter < 0) throw ConfigError("max_len_filter", "must be >= 0");
}

nlohmann::json ExperimentConfig::to_json() const {
  return nlohmann::json{{"corpus", corpus_path},
                        {"corpus_format", corpus_format},
                        {"split_seed", split_seed},
                        {"order", order},
                        {"alpha", alpha},
                        {"tau_grid", tau_grid},
                        {"sample_count", sample_count},
                        {"sample_max_len", sample_max_len},
                        {"sample_seed", sample_seed},
                        {"units", units},
                        {"out_dir", out_dir},
                        {"max_len_filter", max_len_filter}};
}

Corpus load_corpus_for(const std::string& path, const std::string& format) {
  if (format == "jsonl") return load_jsonl(path);
  if (format != "abc-dir")
    throw std::invalid_argument("unknown corpus format '" + format + "'");

  if (!std::filesystem::is_directory(path))
    throw LoadError("abc-dir corpus path is not a directory: " + path);
  std::vector<std::filesystem::path> files;
  for (const auto& entry : std::filesystem::directory_iterator(path))
    if (entry.is_regular_file() && entry.path().extension() == ".abc")
      files.push_back(entry.path());
  std::sort(files.begin(), files.end());

  Corpus corpus;
  for (const auto& file : files) {
    std::ifstream in(file);
    if (!in) throw LoadError("cannot open ABC file: " + file.string());
    std::string text((std::istreambuf_iterator<char>(in)),
                     std::istreambuf_iterator<char>());
    AbcTune tune;
    try {
      tune = parse_abc(text);
    } catch (const ParseError& e) {
      throw LoadError(file.string() + ": " + e.what());
    }
    if (tune.events.empty())
      throw LoadError("ABC file has no notes: " + file.string());
    corpus.pieces.push_back(Piece{file.stem().string(), std::move(tune.events)});
  }
  return corpus;
}

namespace {

// Analyzes every sequence of a condition; slot-per-sequence keeps the
// outcome independent of the worker count.
ConditionResult analyze_condition(const NGramModel& model, const std::string& label,
                                  bool sampled, double tau, std::uint64_t seed,
                                  const std::vector<TokenPiece>& pieces, int workers) {
  ConditionResult cond;
  cond.label = label;
  cond.sampled = sampled;
  cond.tau = tau;
  cond.seed = seed;

  std::vector<std::vector<EventRecord>> event_slots(pieces.size());
  std::vector<SequenceRecord> sequence_slots(pieces.size());
  parallel_for(pieces.size(), workers, [&](std::size_t i) {
    const TokenPiece& piece = pieces[i];
    std::vector<EventTypicality> events = analyze_events(model, piece.tokens);
    // A truncated sequence ends in a forced eos that the sampler never drew;
    // it still counts toward sequence IC/ID (the token stream is grammar-
    // complete) but is not an event of the decoding process, so it stays out
    // of the per-event records.
    std::size_t event_count = events.size();
    if (piece.truncated && event_count > 0) --event_count;
    std::vector<EventRecord>& out = event_slots[i];
    out.reserve(event_count);
    double total_ic = 0.0;
    for (std::size_t t = 0; t < events.size(); ++t) {
      if (t < event_count)
        out.push_back(EventRecord{piece.id, static_cast<int>(t), piece.tokens[t],
                                  events[t]});
      total_ic += events[t].ic;
    }
    SequenceRecord seq;
    seq.piece_id = piece.id;
    seq.typ.total_ic = total_ic;
    seq.typ.length = piece.tokens.size();
    seq.typ.id = total_ic / static_cast<double>(piece.tokens.size());
    seq.truncated = piece.truncated;
    sequence_slots[i] = std::move(seq);
  });

  for (auto& slot : event_slots)
    cond.events.insert(cond.events.end(), slot.begin(), slot.end());
  cond.sequences = std::move(sequence_slots);
  for (const SequenceRecord& r : cond.sequences)
    if (r.truncated) ++cond.truncated_count;
  return cond;
}

std::vector<TokenPiece> batch_to_pieces(const std::vector<SampledSequence>& batch,
                                        const std::string& label) {
  std::vector<TokenPiece> pieces(batch.size());
  for (std::size_t i = 0; i < batch.size(); ++i) {
    char name[64];
    std::snprintf(name, sizeof(name), "%s-%05zu", label.c_str(), i);
    pieces[i] = TokenPiece{name, batch[i].tokens, batch[i].truncated};
  }
  return pieces;
}

std::vector<double> scaled_event_epsilons(const ConditionResult& cond, double scale) {
  std::vector<double> out;
  out.reserve(cond.events.size());
  for (const EventRecord& r : cond.events) out.push_back(r.typ.epsilon * scale);
  return out;
}

std::vector<double> scaled_sequence_epsilon_ids(const ConditionResult& cond,
                                                double scale) {
  std::vector<double> out;
  out.reserve(cond.sequences.size());
  for (const SequenceRecord& r : cond.sequences)
    out.push_back(r.typ.epsilon_id * scale);
  return out;
}

std::vector<Histogram> shared_histograms(
    const std::vector<std::pair<std::string, std::vector<double>>>& series,
    const std::vector<double>& reference_values) {
  double width = freedman_diaconis_width(reference_values);
  double lo = reference_values[0];
  double hi = reference_values[0];
  for (const auto& [label, values] : series) {
    for (double v : values) {
      lo = std::min(lo, v);
      hi = std::max(hi, v);
    }
  }
  Eigen::ArrayXd edges = uniform_edges(lo, hi, width);
  std::vector<Histogram> out;
  out.reserve(series.size());
  for (const auto& [label, values] : series)
    out.push_back(make_histogram(values, edges, label));
  return out;
}

void write_histogram_csv(std::ostream& out, const std::vector<Histogram>& histograms) {
  out << "bin_left,bin_right,count,density,series\n";
  for (const Histogram& h : histograms) {
    double total = static_cast<double>(h.total());
    double width = h.bin_width();
    for (int i = 0; i < h.bins(); ++i) {
      double density = total > 0.0 ? h.counts[i] / (total * width) : 0.0;
      out << format_double(h.bin_edges[i]) << ',' << format_double(h.bin_edges[i + 1])
          << ',' << h.counts[i] << ',' << format_double(density) << ','
          << csv_field(h.series) << '\n';
    }
  }
}

void write_summary_csv(std::ostream& out, const ReportBundle& bundle) {
  out << "family,series,count,truncated,mean,median,stdev,iqr\n";
  auto emit = [&out](const std::string& family, const std::string& series,
                     std::size_t truncated, const std::vector<double>& values) {
    SummaryStats s = summarize(values);
    out << family << ',' << csv_field(series) << ',' << s.count << ',' << truncated
        << ',' << format_double(s.mean) << ',' << format_double(s.median) << ','
        << format_double(s.stdev) << ',' << format_double(s.iqr) << '\n';
  };
  for (const ConditionResult& cond : bundle.conditions)
    emit("event_epsilon", cond.label, cond.truncated_count,
         scaled_event_epsilons(cond, bundle.unit_scale));
  for (const ConditionResult& cond : bundle.conditions)
    emit("sequence_epsilon_id", cond.label, cond.truncated_count,
         scaled_sequence_epsilon_ids(cond, bundle.unit_scale));
}

void write_samples_jsonl(const std::filesystem::path& path,
                         const ConditionResult& cond,
                         const std::vector<TokenPiece>& pieces,
                         const std::string& model_hash,
                         const std::string& config_hash, int max_len) {
  TokenFile file;
  file.meta = nlohmann::json{
      {"strategy", cond.label == "conventional" ? "conventional" : "typical"},
      {"seed", cond.seed},
      {"model_hash", model_hash},
      {"config_hash", config_hash},
      {"count", pieces.size()},
      {"max_len", max_len},
      {"truncated_count", cond.truncated_count}};
  if (cond.label != "conventional") file.meta["tau"] = cond.tau;
  file.pieces = pieces;
  write_token_file(path, file);
}

}  // namespace

ReportBundle run_experiment(const ExperimentConfig& config, const RunOptions& opts) {
  config.validate();
  if (opts.workers < 1) throw std::invalid_argument("workers must be >= 1");

  // --- ingest and split (validating everything before any output) ---
  Corpus corpus = load_corpus_for(config.corpus_path, config.corpus_format);
  if (corpus.pieces.empty())
    throw LoadError("corpus is empty: " + config.corpus_path);

  std::vector<TokenPiece> all_tokens = tokenize_corpus(corpus);
  if (config.max_len_filter > 0) {
    std::erase_if(all_tokens, [&](const TokenPiece& p) {
      return static_cast<int>(p.tokens.size()) > config.max_len_filter;
    });
    if (all_tokens.empty())
      throw LoadError("max_len_filter removed every piece");
  }

  std::vector<TokenPiece> train_pieces;
  std::vector<TokenPiece> test_pieces;
  std::size_t validation_count = 0;
  for (const TokenPiece& piece : all_tokens) {
    switch (split_of(piece.id, config.split_seed)) {
      case Split::train: train_pieces.push_back(piece); break;
      case Split::validation: ++validation_count; break;
      case Split::test: test_pieces.push_back(piece); break;
    }
  }
  if (train_pieces.empty()) throw LoadError("training split is empty");
  if (test_pieces.empty()) throw LoadError("test split is empty");

  // --- output directory must be usable before we start writing ---
  std::filesystem::path out_dir(config.out_dir);
  std::filesystem::create_directories(out_dir);
  {
    std::ofstream probe(out_dir / ".write-probe");
    if (!probe) throw LoadError("output directory not writable: " + config.out_dir);
  }
  std::filesystem::remove(out_dir / ".write-probe");

  // --- train ---
  std::vector<TokenSequence> train_seqs;
  train_seqs.reserve(train_pieces.size());
  for (const TokenPiece& p : train_pieces) train_seqs.push_back(p.tokens);
  NGramModel model = NGramModel::train(train_seqs, config.order, config.alpha);
  std::string model_hash = model.content_hash();

  int sample_count = config.sample_count > 0 ? config.sample_count
                                             : static_cast<int>(test_pieces.size());
  int max_len = config.sample_max_len;
  if (max_len == 0) {
    std::size_t longest = 0;
    for (const TokenPiece& p : test_pieces) longest = std::max(longest, p.tokens.size());
    max_len = static_cast<int>(longest);
  }

  // --- analyze conditions ---
  ReportBundle bundle;
  bundle.config = config;
  bundle.unit_scale = unit_scale_for(config.units);

  bundle.conditions.push_back(analyze_condition(model, "reference", false, 1.0, 0,
                                                test_pieces, opts.workers));

  std::vector<std::vector<TokenPiece>> sampled_pieces;
  std::vector<double> condition_taus = {1.0};
  std::vector<std::string> sampled_labels = {"conventional"};
  std::vector<double> sorted_taus = config.tau_grid;
  std::sort(sorted_taus.begin(), sorted_taus.end(), std::greater<>());
  for (double tau : sorted_taus) {
    condition_taus.push_back(tau);
    sampled_labels.push_back(tau_label(tau));
  }

  for (std::size_t c = 0; c < sampled_labels.size(); ++c) {
    const std::string& label = sampled_labels[c];
    SamplerConfig scfg;
    scfg.strategy = c == 0 ? SamplingStrategy::conventional : SamplingStrategy::typical;
    scfg.tau = condition_taus[c];
    scfg.max_len = max_len;
    scfg.seed = splitmix64(config.sample_seed ^ fnv1a64(label));
    std::vector<SampledSequence> batch =
        sample_batch(model, scfg, sample_count, opts.workers);
    std::vector<TokenPiece> pieces = batch_to_pieces(batch, label);
    bundle.conditions.push_back(analyze_condition(model, label, true, scfg.tau,
                                                  scfg.seed, pieces, opts.workers));
    sampled_pieces.push_back(std::move(pieces));
  }

  // --- reference E[ID], then epsilon_id for every condition against it ---
  {
    std::vector<double> ids;
    for (const SequenceRecord& r : bundle.conditions[0].sequences)
      ids.push_back(r.typ.id);
    SummaryStats s = summarize(ids);
    bundle.reference_expected_id.mean = s.mean * bundle.unit_scale;
    bundle.reference_expected_id.std_error =
        (ids.size() > 1 ? s.stdev / std::sqrt(static_cast<double>(ids.size())) : 0.0) *
        bundle.unit_scale;
    bundle.reference_expected_id.count = ids.size();
    for (ConditionResult& cond : bundle.conditions)
      for (SequenceRecord& r : cond.sequences)
        r.typ.epsilon_id = s.mean - r.typ.id;
  }

  // --- histograms on shared Freedman-Diaconis bins from the reference ---
  std::vector<std::pair<std::string, std::vector<double>>> event_series;
  std::vector<std::pair<std::string, std::vector<double>>> sequence_series;
  for (const ConditionResult& cond : bundle.conditions) {
    event_series.emplace_back(cond.label,
                              scaled_event_epsilons(cond, bundle.unit_scale));
    sequence_series.emplace_back(cond.label,
                                 scaled_sequence_epsilon_ids(cond, bundle.unit_scale));
  }
  bundle.event_histograms = shared_histograms(event_series, event_series[0].second);
  bundle.sequence_histograms =
      shared_histograms(sequence_series, sequence_series[0].second);

  // --- manifest ---
  nlohmann::json conditions_j = nlohmann::json::array();
  for (const ConditionResult& cond : bundle.conditions) {
    nlohmann::json cj{{"label", cond.label},
                      {"sequences", cond.sequences.size()},
                      {"events", cond.events.size()},
                      {"truncated", cond.truncated_count}};
    if (cond.sampled) {
      cj["seed"] = cond.seed;
      cj["tau"] = cond.tau;
      cj["max_len"] = max_len;
    }
    conditions_j.push_back(std::move(cj));
  }
  std::uint64_t corpus_hash = 0;
  if (config.corpus_format == "jsonl") {
    corpus_hash = hash_file_bytes(config.corpus_path);
  } else {
    std::string acc;
    for (const Piece& p : corpus.pieces) {
      acc += p.id;
      acc += '\0';
      for (const NoteEvent& e : p.events)
        acc += std::to_string(e.pitch) + ':' + std::to_string(e.onset_ms) + ':' +
               std::to_string(e.dur_ms) + ';';
    }
    corpus_hash = fnv1a64(acc);
  }
  std::string config_hash = hex64(fnv1a64(config.to_json().dump()));
  std::vector<std::string> artifacts = {"manifest.json", "model.json",
                                        "hist_events.csv", "hist_sequences.csv",
                                        "summary.csv"};
  for (const ConditionResult& cond : bundle.conditions) {
    artifacts.push_back("events_" + file_tag(cond.label) + ".csv");
    artifacts.push_back("sequences_" + file_tag(cond.label) + ".csv");
    if (cond.sampled)
      artifacts.push_back("samples_" + file_tag(cond.label) + ".jsonl");
  }
  std::sort(artifacts.begin(), artifacts.end());

  bundle.manifest = nlohmann::json{
      {"tool_version", kToolVersion},
      {"config", config.to_json()},
      {"config_hash", config_hash},
      {"corpus_hash", hex64(corpus_hash)},
      {"model_hash", model_hash},
      {"split_seed", config.split_seed},
      {"sample_seed", config.sample_seed},
      {"tau_grid", sorted_taus},
      {"units", config.units},
      {"expected_id_reference",
       {{"mean", bundle.reference_expected_id.mean},
        {"std_error", bundle.reference_expected_id.std_error},
        {"count", bundle.reference_expected_id.count}}},
      {"splits",
       {{"train", train_pieces.size()},
        {"validation", validation_count},
        {"test", test_pieces.size()}}},
      {"artifacts", artifacts},
      {"conditions", conditions_j}};

  // --- write the bundle ---
  auto open_out = [&out_dir](const std::string& name) {
    std::ofstream out(out_dir / name, std::ios::binary);
    if (!out) throw LoadError("cannot write output file: " + name);
    return out;
  };

  model.save(out_dir / "model.json");
  {
    auto out = open_out("manifest.json");
    out << bundle.manifest.dump(2) << '\n';
  }
  for (const ConditionResult& cond : bundle.conditions) {
    {
      auto out = open_out("events_" + file_tag(cond.label) + ".csv");
      write_event_metrics_csv(out, cond.events, bundle.unit_scale);
    }
    {
      auto out = open_out("sequences_" + file_tag(cond.label) + ".csv");
      write_sequence_metrics_csv(out, cond.sequences, bundle.unit_scale);
    }
  }
  for (std::size_t c = 0; c + 1 < bundle.conditions.size(); ++c) {
    const ConditionResult& cond = bundle.conditions[c + 1];
    write_samples_jsonl(out_dir / ("samples_" + file_tag(cond.label) + ".jsonl"), cond,
                        sampled_pieces[c], model_hash, max_len);
  }
  {
    auto out = open_out("hist_events.csv");
    write_histogram_csv(out, bundle.event_histograms);
  }
  {
    auto out = open_out("hist_sequences.csv");
    write_histogram_csv(out, bundle.sequence_histograms);
  }
  {
    auto out = open_out("summary.csv");
    write_summary_csv(out, bundle);
  }

  return bundle;
}

TrendSummary compare_conditions(const ReportBundle& bundle) {
  const ConditionResult* reference = nullptr;
  const ConditionResult* conventional = nullptr;
  std::vector<const ConditionResult*> typical;
  for (const ConditionResult& cond : bundle.conditions) {
    if (cond.label == "reference") reference = &cond;
    else if (cond.label == "conventional") conventional = &cond;
    else typical.push_back(&cond);
  }
  if (reference == nullptr || conventional == nullptr || typical.size() < 2)
    throw std::invalid_argument(
        "compare_conditions needs reference, conventional, and at least two typical "
        "conditions");
  std::sort(typical.begin(), typical.end(),
            [](const ConditionResult* a, const ConditionResult* b) {
              return a->tau > b->tau;
            });

  TrendSummary t;
  std::vector<const ConditionResult*> ordered{conventional};
  ordered.insert(ordered.end(), typical.begin(), typical.end());

  for (const ConditionResult* cond : ordered) {
    t.series.push_back(cond->label);
    t.epsilon_sym_stdev.push_back(
        summarize(scaled_event_epsilons(*cond, bundle.unit_scale)).stdev);
    std::vector<double> ids;
    ids.reserve(cond->sequences.size());
    for (const SequenceRecord& r : cond->sequences)
      ids.push_back(r.typ.id * bundle.unit_scale);
    SummaryStats s = summarize(ids);
    t.mean_id.push_back(s.mean);
    t.mean_id_std_error.push_back(
        ids.size() > 1 ? s.stdev / std::sqrt(static_cast<double>(ids.size())) : 0.0);
  }

  t.stdev_nonincreasing = true;
  for (std::size_t i = 0; i + 1 < t.epsilon_sym_stdev.size(); ++i)
    if (t.epsilon_sym_stdev[i + 1] > t.epsilon_sym_stdev[i])
      t.stdev_nonincreasing = false;

  t.mean_id_nonincreasing = true;
  t.mean_id_margins_exceed_2se = true;
  for (std::size_t i = 0; i + 1 < t.mean_id.size(); ++i) {
    double margin = t.mean_id[i] - t.mean_id[i + 1];
    if (margin < 0.0) t.mean_id_nonincreasing = false;
    double combined_se = std::sqrt(t.mean_id_std_error[i] * t.mean_id_std_error[i] +
                                   t.mean_id_std_error[i + 1] * t.mean_id_std_error[i + 1]);
    if (!(margin > 2.0 * combined_se)) t.mean_id_margins_exceed_2se = false;
  }

  // Wasserstein distances against the reference event histogram.
  auto hist_for = [&bundle](const std::string& label) -> const Histogram& {
    for (const Histogram& h : bundle.event_histograms)
      if (h.series == label) return h;
    throw std::invalid_argument("missing histogram for series " + label);
  };
  const Histogram& ref_hist = hist_for("reference");
  t.reference_event_w1_conventional = wasserstein1(hist_for("conventional"), ref_hist);
  t.conventional_closest = true;
  for (const ConditionResult* cond : typical) {
    double w = wasserstein1(hist_for(cond->label), ref_hist);
    t.reference_event_w1_typical.push_back(w);
    if (!(t.reference_event_w1_conventional < w)) t.conventional_closest = false;
  }
  return t;
}

nlohmann::json TrendSummary::to_json() const {
  return nlohmann::json{
      {"series", series},
      {"epsilon_sym_stdev", epsilon_sym_stdev},
      {"stdev_nonincreasing", stdev_nonincreasing},
      {"mean_id", mean_id},
      {"mean_id_std_error", mean_id_std_error},
      {"mean_id_nonincreasing", mean_id_nonincreasing},
      {"mean_id_margins_exceed_2se", mean_id_margins_exceed_2se},
      {"reference_event_w1_conventional", reference_event_w1_conventional},
      {"reference_event_w1_typical", reference_event_w1_typical},
      {"conventional_closest", conventional_closest}};
}

}  // namespace melotype
