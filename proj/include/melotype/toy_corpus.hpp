#pragma once

#include <cstdint>

#include "melotype/corpus.hpp"

namespace melotype {

// Synthetic stand-in corpus: random-walk melodies over a C-major scale with
// durations from a small set (some off-bin and some above 1000 ms, so the
// duration quantizer gets exercised), occasional rests and silent gaps.
// Deterministic: piece i is generated on RNG stream (seed, i).
Corpus make_toy_corpus(int piece_count = 200, std::uint64_t seed = 7);

}  // namespace melotype
