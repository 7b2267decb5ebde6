#pragma once

#include <string>
#include <vector>

#include "melotype/note_event.hpp"

namespace melotype {

// Result of parsing one tune from a restricted ABC subset.
//
// Supported: header fields X: T: M: K: L: Q: (L defaults to 1/8, Q to
// quarter = 120 bpm), notes A-G/a-g with explicit accidentals ^ _ =,
// octave marks ' and ,, duration multipliers (integer, /, /n, n/m),
// rests z (Z = whole-bar rest via M:, default 4/4), bar lines, whitespace,
// % comments. Key-signature accidentals are parsed but never applied;
// `key_signature_ignored` flags when that could matter.
//
// Chords, inline fields, ties, slurs, tuplets, repeats, grace notes and
// anything else raise ParseError naming the construct and byte offset.
struct AbcTune {
  std::vector<NoteEvent> events;
  std::string title;
  std::string key;
  bool key_signature_ignored = false;
  std::vector<std::string> warnings;
};

AbcTune parse_abc(const std::string& text);

// Just the events; the operation the tokenizer pipeline consumes.
std::vector<NoteEvent> parse_abc_subset(const std::string& text);

}  // namespace melotype
