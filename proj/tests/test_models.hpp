#pragma once

#include <utility>
#include <vector>

#include "melotype/model.hpp"

namespace melotype::testing {

// Emits a fixed distribution at every step; handy for degenerate and
// i.i.d. cases. The distribution may contain zeros (external distributions
// are allowed to), including a zero eos.
class FixedModel final : public SequenceModel {
 public:
  FixedModel(CategoricalDistribution dist, Token eos)
      : dist_(std::move(dist)), eos_(eos) {}

  int vocab_size() const override { return dist_.size(); }
  Token eos_token() const override { return eos_; }
  CategoricalDistribution next_distribution(std::span<const Token>) const override {
    return dist_;
  }

 private:
  CategoricalDistribution dist_;
  Token eos_;
};

// Plays a fixed script: at context length t the distribution is one-hot on
// script[t]; past the end it is one-hot on eos. A fully deterministic model.
class ScriptedModel final : public SequenceModel {
 public:
  ScriptedModel(std::vector<Token> script, int vocab, Token eos)
      : script_(std::move(script)), vocab_(vocab), eos_(eos) {}

  int vocab_size() const override { return vocab_; }
  Token eos_token() const override { return eos_; }
  CategoricalDistribution next_distribution(std::span<const Token> ctx) const override {
    Token target = ctx.size() < script_.size() ? script_[ctx.size()] : eos_;
    Eigen::ArrayXd p = Eigen::ArrayXd::Zero(vocab_);
    p[target] = 1.0;
    return CategoricalDistribution(std::move(p));
  }

 private:
  std::vector<Token> script_;
  int vocab_;
  Token eos_;
};

}  // namespace melotype::testing
