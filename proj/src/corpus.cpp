#include "melotype/corpus.hpp"

#include <algorithm>
#include <fstream>
#include <set>
#include <stdexcept>

#include "melotype/errors.hpp"
#include "melotype/hash.hpp"
#include "melotype/tokenizer.hpp"

namespace melotype {

namespace {

NoteEvent parse_note(const nlohmann::json& note_j, std::size_t line) {
  if (!note_j.is_object()) throw LoadError("note entry is not an object", line);
  NoteEvent e;
  const auto& pitch_j = note_j.at("pitch");
  if (pitch_j.is_null()) {
    e.pitch = NoteEvent::kRestPitch;
  } else {
    int pitch = pitch_j.get<int>();
    if (pitch < 0 || pitch > 127)
      throw LoadError("pitch " + std::to_string(pitch) + " outside MIDI range 0..127",
                      line);
    e.pitch = pitch;
  }
  e.onset_ms = note_j.at("onset_ms").get<std::int64_t>();
  e.dur_ms = note_j.at("dur_ms").get<std::int64_t>();
  if (e.onset_ms < 0) throw LoadError("negative onset_ms", line);
  if (e.dur_ms < 1) throw LoadError("dur_ms must be >= 1", line);
  return e;
}

}  // namespace

Corpus load_jsonl(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw LoadError("cannot open corpus file: " + path.string());

  Corpus corpus;
  std::set<std::string> seen_ids;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    nlohmann::json j;
    try {
      j = nlohmann::json::parse(line);
    } catch (const nlohmann::json::exception& e) {
      throw LoadError(std::string("malformed JSON: ") + e.what(), line_no);
    }
    try {
      Piece piece;
      piece.id = j.at("id").get<std::string>();
      if (!seen_ids.insert(piece.id).second)
        throw LoadError("duplicate piece id '" + piece.id + "'", line_no);
      for (const auto& note_j : j.at("notes"))
        piece.events.push_back(parse_note(note_j, line_no));
      if (piece.events.empty())
        throw LoadError("piece '" + piece.id + "' has no notes", line_no);

      std::stable_sort(piece.events.begin(), piece.events.end(),
                       [](const NoteEvent& a, const NoteEvent& b) {
                         return a.onset_ms < b.onset_ms;
                       });
      try {
        validate_events(piece.events);
      } catch (const std::invalid_argument& e) {
        throw LoadError(std::string("piece '") + piece.id + "': " + e.what(), line_no);
      }
      corpus.pieces.push_back(std::move(piece));
    } catch (const nlohmann::json::exception& e) {
      throw LoadError(std::string("malformed corpus line: ") + e.what(), line_no);
    }
  }
  return corpus;
}

void save_jsonl(const Corpus& corpus, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw LoadError("cannot open corpus file for writing: " + path.string());
  for (const Piece& piece : corpus.pieces) {
    nlohmann::json notes = nlohmann::json::array();
    for (const NoteEvent& e : piece.events) {
      nlohmann::json note;
      if (e.is_rest())
        note["pitch"] = nullptr;
      else
        note["pitch"] = e.pitch;
      note["onset_ms"] = e.onset_ms;
      note["dur_ms"] = e.dur_ms;
      notes.push_back(std::move(note));
    }
    out << nlohmann::json{{"id", piece.id}, {"notes", std::move(notes)}}.dump() << '\n';
  }
}

std::string_view split_name(Split s) {
  switch (s) {
    case Split::train: return "train";
    case Split::validation: return "validation";
    case Split::test: return "test";
  }
  return "?";
}

Split split_of(std::string_view piece_id, std::uint64_t split_seed) {
  std::uint64_t bucket = splitmix64(fnv1a64(piece_id) ^ split_seed) % 12;
  if (bucket < 10) return Split::train;
  if (bucket == 10) return Split::validation;
  return Split::test;
}

SplitAssignment split(const Corpus& corpus, std::uint64_t split_seed) {
  if (corpus.pieces.empty()) throw std::invalid_argument("cannot split an empty corpus");
  SplitAssignment assignment;
  for (const Piece& piece : corpus.pieces)
    assignment.by_id[piece.id] = split_of(piece.id, split_seed);
  return assignment;
}

void write_split_csv(std::ostream& out, const SplitAssignment& assignment) {
  out << "piece_id,split\n";
  for (const auto& [id, s] : assignment.by_id)
    out << id << ',' << split_name(s) << '\n';
}

void write_token_file(const std::filesystem::path& path, const TokenFile& file) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw LoadError("cannot open token file for writing: " + path.string());
  if (!file.meta.is_null())
    out << nlohmann::json{{"melotype_meta", file.meta}}.dump() << '\n';
  for (const TokenPiece& piece : file.pieces) {
    nlohmann::json j{{"id", piece.id}, {"tokens", piece.tokens}};
    if (piece.truncated) j["truncated"] = true;
    out << j.dump() << '\n';
  }
}

TokenFile read_token_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw LoadError("cannot open token file: " + path.string());
  TokenFile file;
  std::string line;
  std::size_t line_no = 0;
  bool first_content = true;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    nlohmann::json j;
    try {
      j = nlohmann::json::parse(line);
    } catch (const nlohmann::json::exception& e) {
      throw LoadError(std::string("malformed JSON: ") + e.what(), line_no);
    }
    bool was_first = first_content;
    first_content = false;
    try {
      if (was_first && j.contains("melotype_meta")) {
        file.meta = j.at("melotype_meta");
        continue;
      }
      TokenPiece piece;
      piece.id = j.at("id").get<std::string>();
      piece.tokens = j.at("tokens").get<TokenSequence>();
      piece.truncated = j.value("truncated", false);
      for (Token t : piece.tokens)
        if (!vocab::is_valid(t))
          throw LoadError("invalid token id " + std::to_string(t), line_no);
      file.pieces.push_back(std::move(piece));
    } catch (const nlohmann::json::exception& e) {
      throw LoadError(std::string("malformed token line: ") + e.what(), line_no);
    }
  }
  return file;
}

std::vector<TokenPiece> tokenize_corpus(const Corpus& corpus) {
  std::vector<TokenPiece> out;
  out.reserve(corpus.pieces.size());
  for (const Piece& piece : corpus.pieces)
    out.push_back(TokenPiece{piece.id, encode(piece.events), false});
  return out;
}

}  // namespace melotype
