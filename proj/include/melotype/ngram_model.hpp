#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <string>
#include <unordered_map>
#include <vector>

#include "melotype/model.hpp"

namespace melotype {

// Interpolated additively-smoothed n-gram model.
//
// The unigram level is add-one smoothed,
//     q_0(v) = (c(v) + 1) / (C + K),
// and each higher order interpolates recursively with strength alpha,
//     q_k(v | ctx_k) = (c(ctx_k v) + alpha * q_{k-1}(v | ctx_{k-1}))
//                      / (c(ctx_k .) + alpha),
// where ctx_k is the last k context tokens, left-padded with a distinguished
// pad symbol (not a vocabulary token) near the sequence start.
// next_distribution returns q_{order-1}; every output has full support.
class NGramModel final : public SequenceModel {
 public:
  static constexpr int kFormatVersion = 1;
  static constexpr int kPadSymbol = -1;

  // Counts all n-grams of context length < order over the given sequences.
  // Every sequence must be nonempty, end with the eos token, and contain only
  // valid ids; an empty corpus is a training error (std::invalid_argument).
  static NGramModel train(const std::vector<TokenSequence>& sequences, int order,
                          double alpha, int vocab_size = vocab::kSize,
                          Token eos = vocab::kEos);

  int vocab_size() const override { return vocab_; }
  Token eos_token() const override { return eos_; }
  CategoricalDistribution next_distribution(std::span<const Token> context) const override;

  int order() const { return order_; }
  double alpha() const { return alpha_; }
  std::uint64_t total_tokens() const { return total_; }
  const std::vector<std::uint64_t>& unigram_counts() const { return unigram_; }

  // Versioned JSON container; load(save(m)) reproduces identical
  // next_distribution outputs bit for bit.
  void save(const std::filesystem::path& path) const;
  static NGramModel load(const std::filesystem::path& path);
  std::string serialize() const;
  static NGramModel deserialize(const std::string& text);

  // FNV-1a fingerprint of the serialized form, as 16 hex digits.
  std::string content_hash() const;

 private:
  struct Row {
    std::map<Token, std::uint64_t> counts;
    std::uint64_t total = 0;
  };

  NGramModel(int order, double alpha, int vocab_size, Token eos);

  // Packs the last `length` context tokens (left-padded) into a map key.
  std::string context_key(std::span<const Token> context, int length) const;

  int order_;
  double alpha_;
  int vocab_;
  Token eos_;
  std::uint64_t total_ = 0;
  std::vector<std::uint64_t> unigram_;
  // tables_[k-1] holds contexts of length k, for k = 1..order-1
  std::vector<std::unordered_map<std::string, Row>> tables_;
};

}  // namespace melotype
