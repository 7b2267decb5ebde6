#include "melotype/ngram_model.hpp"

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <stdexcept>

#include "json.hpp"
#include "melotype/errors.hpp"
#include "melotype/hash.hpp"

namespace melotype {

namespace {

// Two bytes per entry, little endian; the pad symbol maps to 0xFFFF.
void append_key_entry(std::string& key, int value) {
  std::uint16_t v =
      value == NGramModel::kPadSymbol ? 0xFFFF : static_cast<std::uint16_t>(value);
  key.push_back(static_cast<char>(v & 0xFF));
  key.push_back(static_cast<char>(v >> 8));
}

std::vector<int> key_to_context(const std::string& key) {
  std::vector<int> out;
  for (std::size_t i = 0; i + 1 < key.size(); i += 2) {
    std::uint16_t v = static_cast<std::uint8_t>(key[i]) |
                      (static_cast<std::uint16_t>(static_cast<std::uint8_t>(key[i + 1])) << 8);
    out.push_back(v == 0xFFFF ? NGramModel::kPadSymbol : static_cast<int>(v));
  }
  return out;
}

}  // namespace

NGramModel::NGramModel(int order, double alpha, int vocab_size, Token eos)
    : order_(order), alpha_(alpha), vocab_(vocab_size), eos_(eos) {
  if (order_ < 1) throw std::invalid_argument("order must be >= 1");
  if (!(alpha_ > 0.0)) throw std::invalid_argument("alpha must be positive");
  if (vocab_ < 1 || vocab_ > 0xFFFE)
    throw std::invalid_argument("vocab_size out of supported range");
  if (eos_ < 0 || eos_ >= vocab_)
    throw std::invalid_argument("eos token outside the vocabulary");
  unigram_.assign(static_cast<std::size_t>(vocab_), 0);
  tables_.resize(static_cast<std::size_t>(order_ - 1));
}

std::string NGramModel::context_key(std::span<const Token> context, int length) const {
  std::string key;
  key.reserve(static_cast<std::size_t>(length) * 2);
  int pad = length - static_cast<int>(context.size());
  for (int i = 0; i < pad; ++i) append_key_entry(key, kPadSymbol);
  std::size_t start = pad > 0 ? 0 : context.size() - static_cast<std::size_t>(length);
  for (std::size_t i = start; i < context.size(); ++i)
    append_key_entry(key, context[i]);
  return key;
}

NGramModel NGramModel::train(const std::vector<TokenSequence>& sequences, int order,
                             double alpha, int vocab_size, Token eos) {
  NGramModel model(order, alpha, vocab_size, eos);

  bool any = false;
  for (std::size_t s = 0; s < sequences.size(); ++s) {
    const TokenSequence& seq = sequences[s];
    if (seq.empty())
      throw std::invalid_argument("training sequence " + std::to_string(s) + " is empty");
    if (seq.back() != eos)
      throw std::invalid_argument("training sequence " + std::to_string(s) +
                                  " does not end with eos");
    any = true;
    for (std::size_t t = 0; t < seq.size(); ++t) {
      Token x = seq[t];
      if (x < 0 || x >= vocab_size)
        throw std::invalid_argument("invalid token id " + std::to_string(x) +
                                    " in training sequence " + std::to_string(s));
      model.unigram_[static_cast<std::size_t>(x)] += 1;
      model.total_ += 1;
      std::span<const Token> prefix(seq.data(), t);
      for (int k = 1; k < order; ++k) {
        Row& row = model.tables_[static_cast<std::size_t>(k - 1)]
                                [model.context_key(prefix, k)];
        row.counts[x] += 1;
        row.total += 1;
      }
    }
  }
  if (!any) throw std::invalid_argument("empty training corpus");
  return model;
}

CategoricalDistribution NGramModel::next_distribution(
    std::span<const Token> context) const {
  for (std::size_t i = 0; i < context.size(); ++i)
    if (context[i] < 0 || context[i] >= vocab_)
      throw std::invalid_argument("invalid token id " + std::to_string(context[i]) +
                                  " in context position " + std::to_string(i));

  Eigen::ArrayXd q(vocab_);
  double denom0 = static_cast<double>(total_) + static_cast<double>(vocab_);
  for (int v = 0; v < vocab_; ++v)
    q[v] = (static_cast<double>(unigram_[static_cast<std::size_t>(v)]) + 1.0) / denom0;

  for (int k = 1; k < order_; ++k) {
    const auto& table = tables_[static_cast<std::size_t>(k - 1)];
    auto it = table.find(context_key(context, k));
    if (it == table.end()) continue;  // c(ctx .) = 0 collapses to q_{k-1}
    const Row& row = it->second;
    double denom = static_cast<double>(row.total) + alpha_;
    q *= alpha_ / denom;
    for (const auto& [tok, count] : row.counts)
      q[tok] += static_cast<double>(count) / denom;
  }
  return CategoricalDistribution(std::move(q));
}

std::string NGramModel::serialize() const {
  nlohmann::json j;
  j["format"] = "melotype-ngram";
  j["version"] = kFormatVersion;
  j["order"] = order_;
  j["alpha"] = alpha_;
  j["vocab_size"] = vocab_;
  j["eos_token"] = eos_;
  j["total_tokens"] = total_;
  j["unigram_counts"] = unigram_;

  nlohmann::json tables = nlohmann::json::array();
  for (int k = 1; k < order_; ++k) {
    const auto& table = tables_[static_cast<std::size_t>(k - 1)];
    std::vector<std::string> keys;
    keys.reserve(table.size());
    for (const auto& [key, row] : table) keys.push_back(key);
    std::sort(keys.begin(), keys.end());

    nlohmann::json rows = nlohmann::json::array();
    for (const std::string& key : keys) {
      const Row& row = table.at(key);
      nlohmann::json counts = nlohmann::json::array();
      for (const auto& [tok, count] : row.counts)
        counts.push_back({tok, count});
      rows.push_back({{"context", key_to_context(key)}, {"counts", counts}});
    }
    tables.push_back({{"context_length", k}, {"rows", rows}});
  }
  j["context_tables"] = tables;
  return j.dump();
}

NGramModel NGramModel::deserialize(const std::string& text) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    throw LoadError(std::string("corrupt model file: ") + e.what());
  }
  try {
    if (j.at("format").get<std::string>() != "melotype-ngram")
      throw LoadError("not a melotype n-gram model file");
    int version = j.at("version").get<int>();
    if (version != kFormatVersion)
      throw LoadError("unsupported model file version " + std::to_string(version) +
                      " (expected " + std::to_string(kFormatVersion) + ")");

    NGramModel model(j.at("order").get<int>(), j.at("alpha").get<double>(),
                     j.at("vocab_size").get<int>(), j.at("eos_token").get<Token>());
    model.total_ = j.at("total_tokens").get<std::uint64_t>();
    model.unigram_ = j.at("unigram_counts").get<std::vector<std::uint64_t>>();
    if (model.unigram_.size() != static_cast<std::size_t>(model.vocab_))
      throw LoadError("unigram table size does not match vocab_size");

    for (const auto& table_j : j.at("context_tables")) {
      int k = table_j.at("context_length").get<int>();
      if (k < 1 || k >= model.order_)
        throw LoadError("context_length " + std::to_string(k) + " out of range");
      auto& table = model.tables_[static_cast<std::size_t>(k - 1)];
      for (const auto& row_j : table_j.at("rows")) {
        auto ctx = row_j.at("context").get<std::vector<int>>();
        if (static_cast<int>(ctx.size()) != k)
          throw LoadError("context entry length does not match context_length");
        std::string key;
        for (int v : ctx) append_key_entry(key, v);
        Row& row = table[key];
        for (const auto& pair : row_j.at("counts")) {
          Token tok = pair.at(0).get<Token>();
          std::uint64_t count = pair.at(1).get<std::uint64_t>();
          row.counts[tok] = count;
          row.total += count;
        }
      }
    }
    return model;
  } catch (const nlohmann::json::exception& e) {
    throw LoadError(std::string("corrupt model file: ") + e.what());
  }
}

void NGramModel::save(const std::filesystem::path& path) const {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw LoadError("cannot open model file for writing: " + path.string());
  out << serialize() << '\n';
  if (!out) throw LoadError("failed writing model file: " + path.string());
}

NGramModel NGramModel::load(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw LoadError("cannot open model file: " + path.string());
  std::string text((std::istreambuf_iterator<char>(in)),
                   std::istreambuf_iterator<char>());
  return deserialize(text);
}

std::string NGramModel::content_hash() const {
  char buf[17];
  std::snprintf(buf, sizeof(buf), "%016llx",
                static_cast<unsigned long long>(fnv1a64(serialize())));
  return std::string(buf);
}

}  // namespace melotype
