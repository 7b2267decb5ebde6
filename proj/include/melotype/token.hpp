#pragma once

#include <vector>

namespace melotype {

using Token = int;
using TokenSequence = std::vector<Token>;

// Vocabulary layout (frozen; serialized corpora depend on it):
//   0..127   change-pitch tokens, id == MIDI pitch (C-1 through G9)
//   128      rest token
//   129..228 duration tokens d_0..d_99
//   229      end-of-sequence
namespace vocab {

inline constexpr int kPitchCount = 128;
inline constexpr Token kRest = 128;
inline constexpr int kDurationCount = 100;
inline constexpr Token kFirstDuration = 129;
inline constexpr Token kEos = 229;
inline constexpr int kSize = 230;

constexpr bool is_pitch(Token t) { return t >= 0 && t < kPitchCount; }
constexpr bool is_rest(Token t) { return t == kRest; }
constexpr bool is_duration(Token t) {
  return t >= kFirstDuration && t < kFirstDuration + kDurationCount;
}
constexpr bool is_eos(Token t) { return t == kEos; }
constexpr bool is_valid(Token t) { return t >= 0 && t < kSize; }

// Index i of a duration token d_i; caller must check is_duration first.
constexpr int duration_index(Token t) { return t - kFirstDuration; }

constexpr Token duration_token(int index) { return kFirstDuration + index; }

}  // namespace vocab
}  // namespace melotype
