#include "melotype/tokenizer.hpp"

#include <stdexcept>
#include <string>

#include "melotype/errors.hpp"

namespace melotype {

namespace {

constexpr std::int64_t kMinBinMs = 10;
constexpr std::int64_t kMaxBinMs = 1000;

}  // namespace

void validate_events(std::span<const NoteEvent> events) {
  std::int64_t prev_end = 0;
  for (std::size_t i = 0; i < events.size(); ++i) {
    const NoteEvent& e = events[i];
    if (!e.is_rest() && (e.pitch < 0 || e.pitch > 127))
      throw std::invalid_argument("event " + std::to_string(i) + ": pitch " +
                                  std::to_string(e.pitch) + " outside MIDI range 0..127");
    if (e.dur_ms < 1)
      throw std::invalid_argument("event " + std::to_string(i) + ": dur_ms must be >= 1");
    if (e.onset_ms < 0)
      throw std::invalid_argument("event " + std::to_string(i) + ": negative onset_ms");
    if (i > 0 && e.onset_ms < prev_end)
      throw std::invalid_argument("event " + std::to_string(i) +
                                  ": overlaps or precedes the previous event");
    prev_end = e.onset_ms + e.dur_ms;
  }
}

int duration_token_value(int index) {
  if (index < 0 || index >= vocab::kDurationCount)
    throw std::invalid_argument("duration token index " + std::to_string(index) +
                                " outside 0..99");
  return 10 * (index + 1);
}

std::vector<Token> encode_duration(std::int64_t dur_ms) {
  if (dur_ms <= 0)
    throw std::invalid_argument("dur_ms must be positive, got " + std::to_string(dur_ms));

  std::vector<Token> out;
  std::int64_t chunks = dur_ms / kMaxBinMs;
  for (std::int64_t i = 0; i < chunks; ++i)
    out.push_back(vocab::duration_token(vocab::kDurationCount - 1));

  std::int64_t r = dur_ms % kMaxBinMs;
  if (r >= 5) {
    // nearest bin among 10,20,...,1000; exact midpoints round up
    int index = static_cast<int>((r + 5) / kMinBinMs) - 1;
    if (index < 0) index = 0;
    out.push_back(vocab::duration_token(index));
  } else if (out.empty()) {
    out.push_back(vocab::duration_token(0));  // clamp sub-10 ms up to 10 ms
  }
  return out;
}

TokenSequence encode(std::span<const NoteEvent> events) {
  validate_events(events);

  TokenSequence out;
  auto emit = [&out](Token head, std::int64_t dur_ms) {
    out.push_back(head);
    for (Token t : encode_duration(dur_ms)) out.push_back(t);
  };

  std::int64_t cursor = 0;
  for (const NoteEvent& e : events) {
    std::int64_t gap = e.onset_ms - cursor;
    if (gap >= kMinBinMs) emit(vocab::kRest, gap);
    emit(e.is_rest() ? vocab::kRest : e.pitch, e.dur_ms);
    cursor = e.onset_ms + e.dur_ms;
  }
  out.push_back(vocab::kEos);
  return out;
}

std::vector<NoteEvent> decode(std::span<const Token> tokens) {
  std::vector<NoteEvent> out;
  std::int64_t cursor = 0;
  std::size_t i = 0;

  while (i < tokens.size()) {
    Token head = tokens[i];
    if (!vocab::is_valid(head))
      throw ParseError("invalid token id " + std::to_string(head), i);
    if (vocab::is_eos(head)) {
      if (i + 1 != tokens.size())
        throw ParseError("token after end-of-sequence", i + 1);
      return out;
    }
    if (vocab::is_duration(head))
      throw ParseError("duration token without a preceding pitch or rest", i);

    // head is a pitch or rest; one or more duration tokens must follow
    std::size_t head_index = i;
    ++i;
    std::int64_t dur_ms = 0;
    while (i < tokens.size() && vocab::is_duration(tokens[i])) {
      dur_ms += duration_token_value(vocab::duration_index(tokens[i]));
      ++i;
    }
    if (dur_ms == 0)
      throw ParseError("pitch or rest token not followed by a duration", head_index + 1);

    if (vocab::is_rest(head))
      out.push_back(NoteEvent::rest(cursor, dur_ms));
    else
      out.push_back(NoteEvent::note(head, cursor, dur_ms));
    cursor += dur_ms;
  }
  throw ParseError("sequence does not end with end-of-sequence", tokens.size());
}

}  // namespace melotype
