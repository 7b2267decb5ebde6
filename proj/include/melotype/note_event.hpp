#pragma once

#include <cstdint>
#include <span>
#include <vector>

namespace melotype {

// One monophonic event: a pitched note or a rest, with absolute onset and
// duration in integer milliseconds.
struct NoteEvent {
  static constexpr int kRestPitch = -1;

  int pitch = kRestPitch;  // MIDI 0..127, or kRestPitch
  std::int64_t onset_ms = 0;
  std::int64_t dur_ms = 1;

  bool is_rest() const { return pitch == kRestPitch; }

  static NoteEvent note(int midi_pitch, std::int64_t onset_ms, std::int64_t dur_ms) {
    return NoteEvent{midi_pitch, onset_ms, dur_ms};
  }
  static NoteEvent rest(std::int64_t onset_ms, std::int64_t dur_ms) {
    return NoteEvent{kRestPitch, onset_ms, dur_ms};
  }

  bool operator==(const NoteEvent&) const = default;
};

// Checks the sequence invariants: valid pitch range, dur_ms >= 1,
// onset_ms >= 0, sorted by onset, no overlap (monophony).
// Throws std::invalid_argument naming the first offending event.
void validate_events(std::span<const NoteEvent> events);

}  // namespace melotype
