#include <filesystem>
#include <fstream>

#include "doctest.h"
#include "melotype/corpus.hpp"
#include "melotype/errors.hpp"
#include "melotype/info_metrics.hpp"
#include "melotype/ngram_model.hpp"
#include "melotype/rng.hpp"
#include "melotype/toy_corpus.hpp"

using namespace melotype;
namespace fs = std::filesystem;

namespace {

TokenSequence random_context(Pcg32& rng, int max_len, int vocab) {
  TokenSequence ctx(rng.next_below(static_cast<std::uint32_t>(max_len) + 1));
  for (Token& t : ctx) t = static_cast<Token>(rng.next_below(vocab));
  return ctx;
}

std::vector<TokenSequence> toy_token_split(Split wanted, std::uint64_t split_seed) {
  Corpus toy = make_toy_corpus(200, 7);
  std::vector<TokenSequence> out;
  for (const TokenPiece& p : tokenize_corpus(toy))
    if (split_of(p.id, split_seed) == wanted) out.push_back(p.tokens);
  return out;
}

}  // namespace

TEST_CASE("unigram probabilities are hand-countable") {
  // one sequence of three tokens: q_0(v) = (c(v) + 1) / (3 + 230)
  TokenSequence seq{60, 178, 229};
  NGramModel model = NGramModel::train({seq}, 1, 1.0);
  CHECK(model.total_tokens() == 3);
  CategoricalDistribution dist = model.next_distribution({});
  CHECK(dist[60] == doctest::Approx(2.0 / 233.0).epsilon(1e-15));
  CHECK(dist[178] == doctest::Approx(2.0 / 233.0).epsilon(1e-15));
  CHECK(dist[229] == doctest::Approx(2.0 / 233.0).epsilon(1e-15));
  CHECK(dist[0] == doctest::Approx(1.0 / 233.0).epsilon(1e-15));
}

TEST_CASE("order-1 model ignores context") {
  NGramModel model = NGramModel::train({{60, 178, 229}}, 1, 2.5);
  CategoricalDistribution a = model.next_distribution({});
  TokenSequence ctx{5, 9, 100};
  CategoricalDistribution b = model.next_distribution(ctx);
  CHECK(a == b);
}

TEST_CASE("two identical sequences double every count") {
  TokenSequence seq{60, 178, 60, 178, 229};
  NGramModel one = NGramModel::train({seq}, 3, 1.0);
  NGramModel two = NGramModel::train({seq, seq}, 3, 1.0);
  CHECK(two.total_tokens() == 2 * one.total_tokens());
  for (int v = 0; v < vocab::kSize; ++v)
    CHECK(two.unigram_counts()[v] == 2 * one.unigram_counts()[v]);
}

TEST_CASE("unseen context collapses to the lower order exactly") {
  std::vector<TokenSequence> seqs = {{60, 178, 61, 178, 229}, {60, 153, 60, 178, 229}};
  NGramModel model = NGramModel::train(seqs, 3, 1.0);
  // a context never seen in training at any order > 0
  TokenSequence unseen{200, 201};
  CategoricalDistribution fallback = model.next_distribution(unseen);

  NGramModel unigram = NGramModel::train(seqs, 1, 1.0);
  CategoricalDistribution q0 = unigram.next_distribution({});
  CHECK(fallback == q0);
}

TEST_CASE("near-uniform training data yields near-uniform output") {
  Pcg32 rng(123, 0);
  std::vector<TokenSequence> seqs;
  TokenSequence seq;
  for (int i = 0; i < 100000; ++i) seq.push_back(rng.next_below(vocab::kSize));
  seq.push_back(vocab::kEos);
  seqs.push_back(std::move(seq));
  NGramModel model = NGramModel::train(seqs, 1, 1.0);
  CategoricalDistribution dist = model.next_distribution({});
  double uniform = 1.0 / vocab::kSize;
  CHECK((dist.probs() - uniform).abs().maxCoeff() < 0.01);

  // an order-2 model falls back to the same near-uniform unigram on any
  // context it never saw
  NGramModel bigram = NGramModel::train(seqs, 2, 1.0);
  TokenSequence ctx{0};
  CategoricalDistribution unseen = bigram.next_distribution(ctx);
  CHECK((unseen.probs() - uniform).abs().maxCoeff() < 0.05);
}

TEST_CASE("distributions are normalized and strictly positive") {
  std::vector<TokenSequence> seqs = toy_token_split(Split::train, 1);
  NGramModel model = NGramModel::train(seqs, 4, 1.0);
  Pcg32 rng(5, 0);
  for (int trial = 0; trial < 1000; ++trial) {
    TokenSequence ctx = random_context(rng, 6, vocab::kSize);
    CategoricalDistribution dist = model.next_distribution(ctx);
    CHECK(std::abs(dist.probs().sum() - 1.0) <= 1e-12);
    CHECK(dist.probs().minCoeff() > 0.0);
  }
}

TEST_CASE("context validation") {
  NGramModel model = NGramModel::train({{60, 229}}, 2, 1.0);
  TokenSequence bad{60, 230};
  CHECK_THROWS_AS(model.next_distribution(bad), std::invalid_argument);
}

TEST_CASE("large alpha converges to the lower order") {
  std::vector<TokenSequence> seqs = {{60, 178, 61, 178, 229}, {62, 153, 60, 178, 229}};
  NGramModel strong = NGramModel::train(seqs, 2, 1e12);
  NGramModel unigram = NGramModel::train(seqs, 1, 1.0);
  TokenSequence ctx{178};  // seen context
  Eigen::ArrayXd diff = strong.next_distribution(ctx).probs() -
                        unigram.next_distribution({}).probs();
  CHECK(diff.abs().maxCoeff() < 1e-9);
}

TEST_CASE("training errors") {
  CHECK_THROWS_AS(NGramModel::train({}, 2, 1.0), std::invalid_argument);
  CHECK_THROWS_AS(NGramModel::train({{}}, 2, 1.0), std::invalid_argument);
  CHECK_THROWS_AS(NGramModel::train({{60, 61}}, 2, 1.0), std::invalid_argument);
  CHECK_THROWS_AS(NGramModel::train({{60, 777, 229}}, 2, 1.0), std::invalid_argument);
  CHECK_THROWS_AS(NGramModel::train({{60, 229}}, 0, 1.0), std::invalid_argument);
  CHECK_THROWS_AS(NGramModel::train({{60, 229}}, 2, 0.0), std::invalid_argument);
}

TEST_CASE("pad contexts make the sequence start learnable") {
  NGramModel model = NGramModel::train({{5, 9, 2, 229}, {5, 7, 2, 229}}, 3, 0.01,
                                       /*vocab_size=*/230, /*eos=*/229);
  CategoricalDistribution start = model.next_distribution({});
  int argmax = 0;
  start.probs().maxCoeff(&argmax);
  CHECK(argmax == 5);
}

TEST_CASE("save/load round trips bit-exactly") {
  std::vector<TokenSequence> seqs = toy_token_split(Split::train, 1);
  seqs.resize(20);
  NGramModel model = NGramModel::train(seqs, 3, 1.5);
  fs::path path = fs::temp_directory_path() / "melotype_test_model.json";
  model.save(path);
  NGramModel loaded = NGramModel::load(path);

  CHECK(loaded.order() == model.order());
  CHECK(loaded.alpha() == model.alpha());
  CHECK(loaded.total_tokens() == model.total_tokens());
  CHECK(loaded.content_hash() == model.content_hash());

  Pcg32 rng(17, 0);
  for (int trial = 0; trial < 100; ++trial) {
    TokenSequence ctx = random_context(rng, 5, vocab::kSize);
    CHECK(model.next_distribution(ctx) == loaded.next_distribution(ctx));
  }
}

TEST_CASE("model load failures are loud") {
  fs::path dir = fs::temp_directory_path();

  NGramModel model = NGramModel::train({{60, 229}}, 2, 1.0);
  fs::path good = dir / "melotype_test_model_good.json";
  model.save(good);

  // truncated file
  std::string text;
  {
    std::ifstream in(good);
    std::getline(in, text);
  }
  fs::path truncated = dir / "melotype_test_model_trunc.json";
  {
    std::ofstream out(truncated);
    out << text.substr(0, text.size() / 2);
  }
  CHECK_THROWS_AS(NGramModel::load(truncated), LoadError);

  // future version must be a version error, not a silent misread
  nlohmann::json j = nlohmann::json::parse(text);
  j["version"] = 999;
  fs::path future = dir / "melotype_test_model_future.json";
  {
    std::ofstream out(future);
    out << j.dump();
  }
  CHECK_THROWS_WITH_AS(NGramModel::load(future), doctest::Contains("version"),
                       LoadError);

  // wrong container entirely
  j["format"] = "something-else";
  j["version"] = 1;
  fs::path alien = dir / "melotype_test_model_alien.json";
  {
    std::ofstream out(alien);
    out << j.dump();
  }
  CHECK_THROWS_AS(NGramModel::load(alien), LoadError);

  CHECK_THROWS_AS(NGramModel::load(dir / "melotype_test_model_missing.json"),
                  LoadError);
}

TEST_CASE("higher order improves held-out information density") {
  std::vector<TokenSequence> train = toy_token_split(Split::train, 1);
  std::vector<TokenSequence> held_out = toy_token_split(Split::test, 1);
  REQUIRE(!held_out.empty());

  NGramModel order1 = NGramModel::train(train, 1, 1.0);
  NGramModel order3 = NGramModel::train(train, 3, 1.0);
  double id1 = expected_id(order1, held_out).mean;
  double id3 = expected_id(order3, held_out).mean;
  CHECK(id3 <= id1);
}

TEST_CASE("configurable vocabulary for oracle-scale models") {
  NGramModel tiny = NGramModel::train({{0, 1, 0, 2}, {1, 0, 2}}, 2, 1.0,
                                      /*vocab_size=*/3, /*eos=*/2);
  CHECK(tiny.vocab_size() == 3);
  CHECK(tiny.eos_token() == 2);
  CategoricalDistribution dist = tiny.next_distribution({});
  CHECK(dist.size() == 3);
  CHECK(std::abs(dist.probs().sum() - 1.0) <= 1e-12);
}
