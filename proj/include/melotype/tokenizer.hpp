#pragma once

#include <span>
#include <vector>

#include "melotype/note_event.hpp"
#include "melotype/token.hpp"

namespace melotype {

// Millisecond value of duration token d_index: 10*(index+1), i.e. the 100
// values 10, 20, ..., 1000. Throws std::invalid_argument out of range.
int duration_token_value(int index);

// Encodes a positive duration as one or more duration tokens: greedy 1000 ms
// chunks (d_99), then the nearest bin for the remainder r when r >= 5 (ties
// round up). Remainders below 5 ms are dropped, except that a bare sub-10 ms
// duration clamps up to d_0 so no event vanishes. Never returns empty; the
// decoded sum is within 5 ms of dur_ms (10 ms floor for sub-10 ms inputs).
std::vector<Token> encode_duration(std::int64_t dur_ms);

// Serializes events as ((pitch|rest) duration+)* eos. Silent gaps of at least
// 10 ms, including one before the first event, become synthetic rest events;
// shorter gaps are absorbed. Throws std::invalid_argument on unsorted or
// overlapping input.
TokenSequence encode(std::span<const NoteEvent> events);

// Inverse of encode: onsets are accumulated from the decoded durations.
// Throws ParseError naming the offending token index on grammar violations.
std::vector<NoteEvent> decode(std::span<const Token> tokens);

}  // namespace melotype
