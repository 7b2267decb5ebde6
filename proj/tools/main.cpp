// Command-line front end for the melotype library: corpus generation and
// ingestion, tokenization, splits, n-gram training, sampling, information
// metrics, and the full report pipeline.

#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include "CLI11.hpp"
#include "melotype/abc_parser.hpp"
#include "melotype/corpus.hpp"
#include "melotype/errors.hpp"
#include "melotype/experiment.hpp"
#include "melotype/format.hpp"
#include "melotype/info_metrics.hpp"
#include "melotype/ngram_model.hpp"
#include "melotype/sampler.hpp"
#include "melotype/tokenizer.hpp"
#include "melotype/toy_corpus.hpp"
#include "melotype/version.hpp"

namespace fs = std::filesystem;
using namespace melotype;

namespace {

struct GlobalOpts {
  std::optional<std::uint64_t> seed;
  std::string units = "nats";
  std::string config_path;
  std::string out_dir;
};

std::ofstream open_output(const fs::path& path) {
  if (path.has_parent_path()) fs::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary);
  if (!out) throw LoadError("cannot open output file: " + path.string());
  return out;
}

std::vector<TokenPiece> load_pieces_as_tokens(const std::string& corpus_path,
                                              const std::string& tokens_path) {
  if (!tokens_path.empty()) return read_token_file(tokens_path).pieces;
  if (!corpus_path.empty()) return tokenize_corpus(load_jsonl(corpus_path));
  throw std::invalid_argument("need --in <corpus.jsonl> or --tokens <tokens.jsonl>");
}

int cmd_gen_toy_corpus(const GlobalOpts& g, int count, std::uint64_t gen_seed,
                       const std::string& out_file) {
  std::uint64_t seed = g.seed.value_or(gen_seed);
  Corpus corpus = make_toy_corpus(count, seed);
  save_jsonl(corpus, out_file);
  std::cout << "wrote " << corpus.pieces.size() << " pieces to " << out_file << "\n";
  return 0;
}

int cmd_tokenize(const std::string& in_file, const std::string& abc_path,
                 const std::string& out_file, int max_len) {
  Corpus corpus;
  nlohmann::json meta;
  if (!abc_path.empty()) {
    if (fs::is_directory(abc_path)) {
      corpus = load_corpus_for(abc_path, "abc-dir");
    } else {
      std::ifstream in(abc_path);
      if (!in) throw LoadError("cannot open ABC file: " + abc_path);
      std::string text((std::istreambuf_iterator<char>(in)),
                       std::istreambuf_iterator<char>());
      AbcTune tune = parse_abc(text);
      for (const std::string& w : tune.warnings) std::cerr << "warning: " << w << "\n";
      if (tune.events.empty()) throw LoadError("ABC file has no notes: " + abc_path);
      corpus.pieces.push_back(Piece{fs::path(abc_path).stem().string(), tune.events});
      meta = nlohmann::json{{"source", "abc"},
                            {"key_signature_ignored", tune.key_signature_ignored}};
    }
  } else if (!in_file.empty()) {
    corpus = load_jsonl(in_file);
  } else {
    throw std::invalid_argument("need --in <corpus.jsonl> or --abc <file-or-dir>");
  }

  TokenFile tokens;
  tokens.meta = meta;
  tokens.pieces = tokenize_corpus(corpus);
  if (max_len > 0) {
    std::erase_if(tokens.pieces, [max_len](const TokenPiece& p) {
      return static_cast<int>(p.tokens.size()) > max_len;
    });
  }
  write_token_file(out_file, tokens);
  std::cout << "wrote " << tokens.pieces.size() << " token sequences to " << out_file
            << "\n";
  return 0;
}

int cmd_split(const std::string& in_file, std::uint64_t split_seed,
              const std::string& out_file) {
  Corpus corpus = load_jsonl(in_file);
  SplitAssignment assignment = split(corpus, split_seed);
  auto out = open_output(out_file);
  write_split_csv(out, assignment);
  std::cout << "wrote split assignment for " << assignment.by_id.size()
            << " pieces to " << out_file << "\n";
  return 0;
}

int cmd_train(const std::string& in_file, const std::string& tokens_file,
              std::uint64_t split_seed, const std::string& subset, int order,
              double alpha, int max_len, const std::string& out_file) {
  std::vector<TokenPiece> pieces = load_pieces_as_tokens(in_file, tokens_file);
  if (max_len > 0) {
    std::erase_if(pieces, [max_len](const TokenPiece& p) {
      return static_cast<int>(p.tokens.size()) > max_len;
    });
  }
  std::vector<TokenSequence> seqs;
  for (const TokenPiece& p : pieces) {
    if (subset == "all" ||
        split_name(split_of(p.id, split_seed)) == subset)
      seqs.push_back(p.tokens);
  }
  if (seqs.empty())
    throw std::invalid_argument("no sequences selected for subset '" + subset + "'");
  NGramModel model = NGramModel::train(seqs, order, alpha);
  model.save(out_file);
  std::cout << "trained order-" << order << " model on " << seqs.size()
            << " sequences (" << model.total_tokens() << " tokens), hash "
            << model.content_hash() << ", saved to " << out_file << "\n";
  return 0;
}

int cmd_sample(const GlobalOpts& g, const std::string& model_file, int count,
               int max_len, std::optional<double> tau, std::uint64_t sample_seed,
               int workers, const std::string& out_file) {
  NGramModel model = NGramModel::load(model_file);
  SamplerConfig cfg;
  cfg.strategy = tau.has_value() ? SamplingStrategy::typical
                                 : SamplingStrategy::conventional;
  if (tau.has_value()) cfg.tau = *tau;
  cfg.max_len = max_len;
  cfg.seed = g.seed.value_or(sample_seed);
  std::vector<SampledSequence> batch = sample_batch(model, cfg, count, workers);

  TokenFile file;
  file.meta = nlohmann::json{
      {"strategy", tau.has_value() ? "typical" : "conventional"},
      {"seed", cfg.seed},
      {"model_hash", model.content_hash()},
      {"count", count},
      {"max_len", max_len}};
  if (tau.has_value()) file.meta["tau"] = *tau;
  std::size_t truncated = 0;
  for (std::size_t i = 0; i < batch.size(); ++i) {
    char name[32];
    std::snprintf(name, sizeof(name), "sample-%05zu", i);
    file.pieces.push_back(TokenPiece{name, batch[i].tokens, batch[i].truncated});
    if (batch[i].truncated) ++truncated;
  }
  file.meta["truncated_count"] = truncated;
  write_token_file(out_file, file);
  std::cout << "sampled " << batch.size() << " sequences (" << truncated
            << " truncated) to " << out_file << "\n";
  return 0;
}

int cmd_analyze(const GlobalOpts& g, const std::string& model_file,
                const std::string& tokens_file, const std::string& reference_file,
                std::optional<double> expected_id_override, std::string out_dir) {
  if (out_dir.empty()) out_dir = g.out_dir.empty() ? "." : g.out_dir;
  NGramModel model = NGramModel::load(model_file);
  std::vector<TokenPiece> pieces = read_token_file(tokens_file).pieces;
  if (pieces.empty()) throw LoadError("no token sequences in " + tokens_file);

  double unit_scale = unit_scale_for(g.units);

  std::vector<EventRecord> events;
  std::vector<SequenceRecord> sequences;
  for (const TokenPiece& piece : pieces) {
    std::vector<EventTypicality> typ = analyze_events(model, piece.tokens);
    double total_ic = 0.0;
    for (std::size_t t = 0; t < typ.size(); ++t) {
      events.push_back(
          EventRecord{piece.id, static_cast<int>(t), piece.tokens[t], typ[t]});
      total_ic += typ[t].ic;
    }
    SequenceRecord r;
    r.piece_id = piece.id;
    r.typ.total_ic = total_ic;
    r.typ.length = piece.tokens.size();
    r.typ.id = total_ic / static_cast<double>(piece.tokens.size());
    r.truncated = piece.truncated;
    sequences.push_back(std::move(r));
  }

  // epsilon_id needs an expected ID: an explicit value, a reference token
  // file, or (fallback) the mean ID of the analyzed file itself.
  double expected;
  if (expected_id_override.has_value()) {
    expected = *expected_id_override;
  } else if (!reference_file.empty()) {
    std::vector<TokenPiece> ref = read_token_file(reference_file).pieces;
    std::vector<TokenSequence> seqs;
    for (const TokenPiece& p : ref) seqs.push_back(p.tokens);
    expected = expected_id(model, seqs).mean;
  } else {
    double sum = 0.0;
    for (const SequenceRecord& r : sequences) sum += r.typ.id;
    expected = sum / static_cast<double>(sequences.size());
  }
  for (SequenceRecord& r : sequences) r.typ.epsilon_id = expected - r.typ.id;

  fs::create_directories(out_dir);
  {
    auto out = open_output(fs::path(out_dir) / "events.csv");
    write_event_metrics_csv(out, events, unit_scale);
  }
  {
    auto out = open_output(fs::path(out_dir) / "sequences.csv");
    write_sequence_metrics_csv(out, sequences, unit_scale);
  }
  std::cout << "analyzed " << sequences.size() << " sequences / " << events.size()
            << " events; expected ID " << format_double(expected * unit_scale) << " "
            << g.units << "; wrote events.csv and sequences.csv to " << out_dir
            << "\n";
  return 0;
}

int cmd_report(const GlobalOpts& g, std::string config_path, int workers) {
  if (config_path.empty()) config_path = g.config_path;
  if (config_path.empty())
    throw std::invalid_argument("report needs --config <file>");
  ExperimentConfig cfg = ExperimentConfig::from_file(config_path);
  if (!g.out_dir.empty()) cfg.out_dir = g.out_dir;
  if (g.units != "nats") cfg.units = g.units;
  if (g.seed.has_value()) cfg.sample_seed = *g.seed;

  RunOptions opts;
  opts.workers = workers;
  ReportBundle bundle = run_experiment(cfg, opts);
  TrendSummary trends = compare_conditions(bundle);
  {
    auto out = open_output(fs::path(cfg.out_dir) / "trends.json");
    out << trends.to_json().dump(2) << '\n';
  }

  std::cout << "report written to " << cfg.out_dir << "\n";
  std::cout << "reference E[ID] = " << format_double(bundle.reference_expected_id.mean)
            << " " << cfg.units << " (se "
            << format_double(bundle.reference_expected_id.std_error) << ", n="
            << bundle.reference_expected_id.count << ")\n";
  for (std::size_t i = 0; i < trends.series.size(); ++i) {
    std::cout << "  " << trends.series[i]
              << ": stdev(eps_sym) = " << format_double(trends.epsilon_sym_stdev[i])
              << ", mean ID = " << format_double(trends.mean_id[i]) << " (se "
              << format_double(trends.mean_id_std_error[i]) << ")\n";
  }
  std::cout << "trends: stdev non-increasing with decreasing tau: "
            << (trends.stdev_nonincreasing ? "yes" : "no") << "\n"
            << "trends: mean ID non-increasing with decreasing tau: "
            << (trends.mean_id_nonincreasing ? "yes" : "no")
            << (trends.mean_id_margins_exceed_2se ? " (margins > 2 se)" : "") << "\n"
            << "trends: conventional closest to reference (W1): "
            << (trends.conventional_closest ? "yes" : "no") << "\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"typicality analysis for monophonic symbolic music"};
  app.set_version_flag("--version", kToolVersion);
  app.require_subcommand(1);
  app.fallthrough();

  GlobalOpts g;
  app.add_option("--seed", g.seed, "override sampling/generation seeds");
  app.add_option("--units", g.units, "report units: nats or bits")
      ->check(CLI::IsMember({"nats", "bits"}));
  app.add_option("--config", g.config_path, "experiment config file");
  app.add_option("--out", g.out_dir, "output directory override");

  // gen-toy-corpus
  auto* gen = app.add_subcommand("gen-toy-corpus", "generate the synthetic corpus");
  int gen_count = 200;
  std::uint64_t gen_seed = 7;
  std::string gen_out = "toy_corpus.jsonl";
  gen->add_option("--count", gen_count, "number of pieces")->check(CLI::PositiveNumber);
  gen->add_option("--gen-seed", gen_seed, "generator seed");
  gen->add_option("--out-file", gen_out, "output corpus JSONL");

  // tokenize
  auto* tok = app.add_subcommand("tokenize", "convert a corpus to token sequences");
  std::string tok_in, tok_abc, tok_out = "tokens.jsonl";
  int tok_max_len = 0;
  tok->add_option("--in", tok_in, "corpus JSONL");
  tok->add_option("--abc", tok_abc, "ABC file or directory of .abc files");
  tok->add_option("--out-file", tok_out, "output token JSONL");
  tok->add_option("--max-len", tok_max_len, "drop pieces longer than this many tokens");

  // split
  auto* spl = app.add_subcommand("split", "deterministic train/validation/test split");
  std::string spl_in, spl_out = "splits.csv";
  std::uint64_t spl_seed = 1;
  spl->add_option("--in", spl_in, "corpus JSONL")->required();
  spl->add_option("--split-seed", spl_seed, "split seed");
  spl->add_option("--out-file", spl_out, "output CSV (piece_id,split)");

  // train
  auto* trn = app.add_subcommand("train", "fit the n-gram model");
  std::string trn_in, trn_tokens, trn_subset = "train", trn_out = "model.json";
  std::uint64_t trn_seed = 1;
  int trn_order = 5, trn_max_len = 0;
  double trn_alpha = 1.0;
  trn->add_option("--in", trn_in, "corpus JSONL");
  trn->add_option("--tokens", trn_tokens, "token JSONL (alternative input)");
  trn->add_option("--split-seed", trn_seed, "split seed");
  trn->add_option("--subset", trn_subset, "train, validation, test, or all")
      ->check(CLI::IsMember({"train", "validation", "test", "all"}));
  trn->add_option("--order", trn_order, "model order")->check(CLI::PositiveNumber);
  trn->add_option("--alpha", trn_alpha, "interpolation strength");
  trn->add_option("--max-len", trn_max_len, "drop pieces longer than this many tokens");
  trn->add_option("--out-file", trn_out, "output model file");

  // sample
  auto* smp = app.add_subcommand("sample", "draw sequences from a model");
  std::string smp_model, smp_out = "samples.jsonl";
  int smp_count = 100, smp_max_len = 1024, smp_workers = 1;
  std::optional<double> smp_tau;
  std::uint64_t smp_seed = 42;
  smp->add_option("--model", smp_model, "model file")->required();
  smp->add_option("--count", smp_count, "number of sequences")->check(CLI::PositiveNumber);
  smp->add_option("--max-len", smp_max_len, "maximum drawn tokens before forced eos")
      ->check(CLI::PositiveNumber);
  smp->add_option("--tau", smp_tau, "typical sampling tau in (0,1]; omit for conventional");
  smp->add_option("--sample-seed", smp_seed, "sampling seed");
  smp->add_option("--workers", smp_workers, "worker threads")->check(CLI::PositiveNumber);
  smp->add_option("--out-file", smp_out, "output token JSONL");

  // analyze
  auto* ana = app.add_subcommand("analyze", "per-event and per-sequence metrics");
  std::string ana_model, ana_tokens, ana_reference, ana_out;
  std::optional<double> ana_expected;
  ana->add_option("--model", ana_model, "model file")->required();
  ana->add_option("--tokens", ana_tokens, "token JSONL to analyze")->required();
  ana->add_option("--reference", ana_reference,
                  "token JSONL whose mean ID anchors epsilon_id");
  ana->add_option("--expected-id", ana_expected, "explicit expected ID (nats)");
  ana->add_option("--out", ana_out, "output directory");

  // report
  auto* rep = app.add_subcommand("report", "full pipeline and trend report");
  std::string rep_config;
  int rep_workers = 1;
  rep->add_option("--config", rep_config, "experiment config file");
  rep->add_option("--workers", rep_workers, "worker threads")->check(CLI::PositiveNumber);

  CLI11_PARSE(app, argc, argv);

  try {
    if (gen->parsed()) return cmd_gen_toy_corpus(g, gen_count, gen_seed, gen_out);
    if (tok->parsed()) return cmd_tokenize(tok_in, tok_abc, tok_out, tok_max_len);
    if (spl->parsed()) return cmd_split(spl_in, spl_seed, spl_out);
    if (trn->parsed())
      return cmd_train(trn_in, trn_tokens, trn_seed, trn_subset, trn_order, trn_alpha,
                       trn_max_len, trn_out);
    if (smp->parsed())
      return cmd_sample(g, smp_model, smp_count, smp_max_len, smp_tau, smp_seed,
                        smp_workers, smp_out);
    if (ana->parsed())
      return cmd_analyze(g, ana_model, ana_tokens, ana_reference, ana_expected, ana_out);
    if (rep->parsed()) return cmd_report(g, rep_config, rep_workers);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
