#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <ostream>
#include <string>
#include <string_view>
#include <vector>

#include "json.hpp"
#include "melotype/note_event.hpp"
#include "melotype/token.hpp"

namespace melotype {

struct Piece {
  std::string id;
  std::vector<NoteEvent> events;
};

struct Corpus {
  std::vector<Piece> pieces;
};

// One JSON object per line:
//   {"id": "...", "notes": [{"pitch": 60|null, "onset_ms": 0, "dur_ms": 500}, ...]}
// pitch null encodes a rest. Notes are sorted by onset and validated for
// monophony; violations raise LoadError naming the line. An empty file is an
// empty corpus.
Corpus load_jsonl(const std::filesystem::path& path);
void save_jsonl(const Corpus& corpus, const std::filesystem::path& path);

enum class Split { train, validation, test };

std::string_view split_name(Split s);

// Stable hash of (piece_id, seed) into 12 buckets: 0-9 train, 10 validation,
// 11 test. A pure function, identical across runs and platforms.
Split split_of(std::string_view piece_id, std::uint64_t split_seed);

struct SplitAssignment {
  std::map<std::string, Split> by_id;
};

// Throws std::invalid_argument on an empty corpus.
SplitAssignment split(const Corpus& corpus, std::uint64_t split_seed);

// CSV with columns piece_id,split (rows sorted by piece_id).
void write_split_csv(std::ostream& out, const SplitAssignment& assignment);

// --- token stream container --------------------------------------------------
// The same JSONL shape stores tokenized corpora and sampled batches. Token
// streams are newline-free JSON integer arrays. An optional first line
//   {"melotype_meta": {...}}
// carries batch metadata (strategy, tau, seed, model hash, ...).

struct TokenPiece {
  std::string id;
  TokenSequence tokens;
  bool truncated = false;
};

struct TokenFile {
  nlohmann::json meta;  // null when absent
  std::vector<TokenPiece> pieces;
};

void write_token_file(const std::filesystem::path& path, const TokenFile& file);
TokenFile read_token_file(const std::filesystem::path& path);

// encode() applied piece-wise, keeping ids.
std::vector<TokenPiece> tokenize_corpus(const Corpus& corpus);

}  // namespace melotype
