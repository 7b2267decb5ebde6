#include "melotype/abc_parser.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <string_view>

#include "melotype/errors.hpp"

namespace melotype {

namespace {

struct Fraction {
  long num = 1;
  long den = 1;
  double value() const { return static_cast<double>(num) / static_cast<double>(den); }
};

int base_pitch(char letter) {
  // C = middle C (MIDI 60); lowercase letters sit one octave up.
  switch (std::toupper(static_cast<unsigned char>(letter))) {
    case 'C': return 60;
    case 'D': return 62;
    case 'E': return 64;
    case 'F': return 65;
    case 'G': return 67;
    case 'A': return 69;
    case 'B': return 71;
  }
  return -1;
}

bool accidental_free_key(std::string key) {
  key.erase(std::remove_if(key.begin(), key.end(),
                           [](unsigned char c) { return std::isspace(c); }),
            key.end());
  std::transform(key.begin(), key.end(), key.begin(),
                 [](unsigned char c) { return std::tolower(c); });
  return key.empty() || key == "c" || key == "cmaj" || key == "cmajor" ||
         key == "am" || key == "amin" || key == "aminor" || key == "none";
}

class AbcParser {
 public:
  explicit AbcParser(const std::string& text) : text_(text) {}

  AbcTune parse() {
    parse_header();
    parse_body();
    return std::move(tune_);
  }

 private:
  [[noreturn]] void fail(const std::string& msg, std::size_t offset) {
    throw ParseError(msg, offset);
  }

  // --- header ---------------------------------------------------------------

  void parse_header() {
    while (pos_ < text_.size()) {
      std::size_t line_start = pos_;
      std::size_t eol = text_.find('\n', pos_);
      if (eol == std::string::npos) eol = text_.size();
      std::string_view line(text_.data() + line_start, eol - line_start);

      if (line.size() < 2 || !std::isalpha(static_cast<unsigned char>(line[0])) ||
          line[1] != ':') {
        body_start_ = line_start;
        return;
      }
      char field = line[0];
      std::string value(line.substr(2));
      // trim
      while (!value.empty() && std::isspace(static_cast<unsigned char>(value.front())))
        value.erase(value.begin());
      while (!value.empty() && std::isspace(static_cast<unsigned char>(value.back())))
        value.pop_back();
      std::size_t value_offset = line_start + 2;

      switch (field) {
        case 'X': break;
        case 'T': tune_.title = value; break;
        case 'L': default_length_ = parse_fraction_field(value, value_offset); break;
        case 'M': meter_ = parse_meter(value, value_offset); break;
        case 'Q': quarter_ms_ = parse_tempo(value, value_offset); break;
        case 'K':
          tune_.key = value;
          tune_.key_signature_ignored = !accidental_free_key(value);
          if (tune_.key_signature_ignored)
            tune_.warnings.push_back("key signature '" + value +
                                     "' parsed but not applied to accidentals");
          break;
        default:
          tune_.warnings.push_back(std::string("ignored header field ") + field + ":");
          break;
      }
      pos_ = eol < text_.size() ? eol + 1 : eol;
      if (field == 'K') {  // K: conventionally ends the header
        body_start_ = pos_;
        return;
      }
    }
    body_start_ = pos_;
  }

  Fraction parse_fraction_field(const std::string& value, std::size_t offset) {
    Fraction f;
    std::size_t i = 0;
    f.num = read_long(value, i, offset);
    if (i >= value.size() || value[i] != '/')
      fail("invalid fraction '" + value + "'", offset);
    ++i;
    f.den = read_long(value, i, offset);
    if (i != value.size() || f.num <= 0 || f.den <= 0)
      fail("invalid fraction '" + value + "'", offset);
    return f;
  }

  Fraction parse_meter(const std::string& value, std::size_t offset) {
    if (value == "C") return Fraction{4, 4};
    if (value == "C|") return Fraction{2, 2};
    if (value == "none") return Fraction{4, 4};
    return parse_fraction_field(value, offset);
  }

  // "n/m=k" sets the beat note and bpm; a bare "k" means quarter = k bpm.
  double parse_tempo(const std::string& value, std::size_t offset) {
    std::size_t eq = value.find('=');
    if (eq == std::string::npos) {
      std::size_t i = 0;
      long bpm = read_long(value, i, offset);
      if (i != value.size() || bpm <= 0) fail("invalid tempo '" + value + "'", offset);
      return 60000.0 / static_cast<double>(bpm);
    }
    Fraction beat = parse_fraction_field(value.substr(0, eq), offset);
    std::size_t i = 0;
    std::string bpm_text = value.substr(eq + 1);
    long bpm = read_long(bpm_text, i, offset + eq + 1);
    if (i != bpm_text.size() || bpm <= 0) fail("invalid tempo '" + value + "'", offset);
    double beat_ms = 60000.0 / static_cast<double>(bpm);
    // quarter = beat scaled by how many quarters fit in one beat note
    return beat_ms / (beat.value() * 4.0);
  }

  long read_long(const std::string& s, std::size_t& i, std::size_t offset) {
    if (i >= s.size() || !std::isdigit(static_cast<unsigned char>(s[i])))
      fail("expected a number in '" + s + "'", offset);
    long v = 0;
    while (i < s.size() && std::isdigit(static_cast<unsigned char>(s[i]))) {
      v = v * 10 + (s[i] - '0');
      ++i;
    }
    return v;
  }

  // --- body -----------------------------------------------------------------

  void parse_body() {
    pos_ = body_start_;
    while (pos_ < text_.size()) {
      char c = text_[pos_];
      if (std::isspace(static_cast<unsigned char>(c))) {
        ++pos_;
      } else if (c == '%') {
        std::size_t eol = text_.find('\n', pos_);
        pos_ = eol == std::string::npos ? text_.size() : eol + 1;
      } else if (c == '|') {
        if (peek(1) == ':') fail("repeats unsupported", pos_);
        pos_ += (peek(1) == '|' || peek(1) == ']') ? 2 : 1;
      } else if (c == ':') {
        fail("repeats unsupported", pos_);
      } else if (c == '[') {
        if (peek(1) == '|') {
          pos_ += 2;
        } else if (std::isalpha(static_cast<unsigned char>(peek(1))) && peek(2) == ':') {
          fail("inline fields unsupported", pos_);
        } else {
          fail("chords unsupported", pos_);
        }
      } else if (c == '{') {
        fail("grace notes unsupported", pos_);
      } else if (c == '(') {
        if (std::isdigit(static_cast<unsigned char>(peek(1))))
          fail("tuplets unsupported", pos_);
        fail("slurs unsupported", pos_);
      } else if (c == '-') {
        fail("ties unsupported", pos_);
      } else if (c == '^' || c == '_' || c == '=' || base_pitch(c) >= 0) {
        parse_note();
      } else if (c == 'z' || c == 'Z') {
        parse_rest();
      } else {
        fail(std::string("unsupported construct '") + c + "'", pos_);
      }
    }
  }

  char peek(std::size_t ahead) const {
    return pos_ + ahead < text_.size() ? text_[pos_ + ahead] : '\0';
  }

  void parse_note() {
    std::size_t start = pos_;
    int accidental = 0;
    char c = text_[pos_];
    if (c == '^' || c == '_') {
      int step = c == '^' ? 1 : -1;
      accidental = step;
      ++pos_;
      if (pos_ < text_.size() && text_[pos_] == c) {  // double sharp/flat
        accidental += step;
        ++pos_;
      }
    } else if (c == '=') {
      ++pos_;
    }
    if (pos_ >= text_.size() || base_pitch(text_[pos_]) < 0)
      fail("accidental not followed by a note letter", start);

    char letter = text_[pos_];
    ++pos_;
    int pitch = base_pitch(letter) + accidental;
    if (std::islower(static_cast<unsigned char>(letter))) pitch += 12;
    while (pos_ < text_.size() && (text_[pos_] == '\'' || text_[pos_] == ',')) {
      pitch += text_[pos_] == '\'' ? 12 : -12;
      ++pos_;
    }
    if (pitch < 0 || pitch > 127) fail("pitch outside MIDI range 0..127", start);

    std::int64_t dur = scaled_duration(default_note_ms(), start);
    tune_.events.push_back(NoteEvent::note(pitch, cursor_ms_, dur));
    cursor_ms_ += dur;
  }

  void parse_rest() {
    std::size_t start = pos_;
    bool bar_rest = text_[pos_] == 'Z';
    ++pos_;
    double unit = bar_rest ? whole_ms() * meter_.value() : default_note_ms();
    std::int64_t dur = scaled_duration(unit, start);
    tune_.events.push_back(NoteEvent::rest(cursor_ms_, dur));
    cursor_ms_ += dur;
  }

  // Reads the multiplier suffix (integer, /, /n, n/m, //...) and applies it.
  std::int64_t scaled_duration(double unit_ms, std::size_t start) {
    long num = 1;
    long den = 1;
    if (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_]))) {
      std::size_t i = pos_;
      num = read_long(text_, i, pos_);
      pos_ = i;
    }
    while (pos_ < text_.size() && text_[pos_] == '/') {
      ++pos_;
      if (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_]))) {
        std::size_t i = pos_;
        den *= read_long(text_, i, pos_);
        pos_ = i;
      } else {
        den *= 2;
      }
    }
    double ms = unit_ms * static_cast<double>(num) / static_cast<double>(den);
    std::int64_t rounded = std::llround(ms);
    if (rounded < 1) fail("duration rounds to zero milliseconds", start);
    return rounded;
  }

  double whole_ms() const { return quarter_ms_ * 4.0; }
  double default_note_ms() const { return whole_ms() * default_length_.value(); }

  const std::string& text_;
  std::size_t pos_ = 0;
  std::size_t body_start_ = 0;
  AbcTune tune_;
  Fraction default_length_{1, 8};
  Fraction meter_{4, 4};
  double quarter_ms_ = 500.0;  // quarter = 120 bpm
  std::int64_t cursor_ms_ = 0;
};

}  // namespace

AbcTune parse_abc(const std::string& text) { return AbcParser(text).parse(); }

std::vector<NoteEvent> parse_abc_subset(const std::string& text) {
  return parse_abc(text).events;
}

}  // namespace melotype
