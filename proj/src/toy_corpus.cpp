#include "melotype/toy_corpus.hpp"

#include <array>
#include <cstdio>
#include <span>
#include <stdexcept>

#include "melotype/rng.hpp"

namespace melotype {

namespace {

// C major, C3..C6
constexpr std::array<int, 22> kScale = {48, 50, 52, 53, 55, 57, 59, 60, 62, 64, 65,
                                        67, 69, 71, 72, 74, 76, 77, 79, 81, 83, 84};
constexpr int kTonicDegree = 7;  // middle C

// includes off-bin (333) and >1000 ms values so quantization gets exercised
constexpr std::array<std::int64_t, 6> kDurations = {250, 500, 1000, 480, 333, 1500};
constexpr std::array<std::uint32_t, 6> kDurationWeights = {32, 40, 9, 10, 6, 3};

constexpr std::array<std::int64_t, 2> kPauses = {250, 500};

std::size_t weighted_pick(Pcg32& rng, std::span<const std::uint32_t> weights) {
  std::uint32_t total = 0;
  for (std::uint32_t w : weights) total += w;
  std::uint32_t roll = rng.next_below(total);
  for (std::size_t i = 0; i < weights.size(); ++i) {
    if (roll < weights[i]) return i;
    roll -= weights[i];
  }
  return weights.size() - 1;
}

int clamp_degree(int degree) {
  if (degree < 0) return 0;
  if (degree >= static_cast<int>(kScale.size()))
    return static_cast<int>(kScale.size()) - 1;
  return degree;
}

}  // namespace

// Momentum walks in short phrases: within a phrase the melodic direction
// persists and the duration usually repeats, so short contexts are strongly
// predictive; a long note (>= 1000 ms) closes the phrase and the next one
// starts somewhere new. Every piece ends with a stepwise cadence onto a held
// tonic, which gives end-of-sequence a recognizable context.
Corpus make_toy_corpus(int piece_count, std::uint64_t seed) {
  if (piece_count < 1) throw std::invalid_argument("piece_count must be >= 1");

  Corpus corpus;
  corpus.pieces.reserve(static_cast<std::size_t>(piece_count));
  for (int p = 0; p < piece_count; ++p) {
    Pcg32 rng(seed, static_cast<std::uint64_t>(p));
    Piece piece;
    char name[16];
    std::snprintf(name, sizeof(name), "toy-%04d", p);
    piece.id = name;

    int degree = 4 + static_cast<int>(rng.next_below(12));
    int direction = rng.next_below(2) == 0 ? 1 : -1;
    std::int64_t dur = kDurations[weighted_pick(rng, kDurationWeights)];
    int body_count = 26 + static_cast<int>(rng.next_below(27));
    std::int64_t cursor = 0;
    bool phrase_break = false;

    for (int n = 0; n < body_count; ++n) {
      std::uint32_t pause_roll = rng.next_below(40);
      if (pause_roll < 2) {  // silent gap; becomes a rest token on encode
        cursor += kPauses[rng.next_below(2)];
      } else if (pause_roll == 2) {  // explicit rest event
        std::int64_t rest_dur = kPauses[rng.next_below(2)];
        piece.events.push_back(NoteEvent::rest(cursor, rest_dur));
        cursor += rest_dur;
      }

      if (phrase_break) {  // fresh phrase: new register, new direction
        degree = 2 + static_cast<int>(rng.next_below(18));
        direction = rng.next_below(2) == 0 ? 1 : -1;
      } else {
        if (rng.next_below(100) < 8) direction = -direction;
        int step = direction;
        std::uint32_t leap_roll = rng.next_below(100);
        if (leap_roll < 2) step = direction * 3;
        else if (leap_roll < 12) step = direction * 2;
        degree += step;
        if (degree < 0) {
          degree = -degree;
          direction = 1;
        }
        if (degree >= static_cast<int>(kScale.size())) {
          degree = 2 * static_cast<int>(kScale.size()) - 2 - degree;
          direction = -1;
        }
      }

      if (rng.next_below(100) >= 88)  // usually hold the previous duration
        dur = kDurations[weighted_pick(rng, kDurationWeights)];
      piece.events.push_back(
          NoteEvent::note(kScale[static_cast<std::size_t>(degree)], cursor, dur));
      cursor += dur;
      phrase_break = dur >= 1000;
    }

    // cadence: step down to the tonic and hold it
    while (degree != kTonicDegree) {
      degree += degree > kTonicDegree ? -1 : 1;
      degree = clamp_degree(degree);
      piece.events.push_back(
          NoteEvent::note(kScale[static_cast<std::size_t>(degree)], cursor, 250));
      cursor += 250;
    }
    piece.events.push_back(NoteEvent::note(kScale[kTonicDegree], cursor, 1500));

    corpus.pieces.push_back(std::move(piece));
  }
  return corpus;
}

}  // namespace melotype
