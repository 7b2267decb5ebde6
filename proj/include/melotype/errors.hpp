#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace melotype {

// Thrown when a token stream or text input violates its grammar. `offset` is
// a token index for token streams and a byte offset for text inputs.
class ParseError : public std::runtime_error {
 public:
  ParseError(const std::string& msg, std::size_t offset)
      : std::runtime_error(msg + " (at offset " + std::to_string(offset) + ")"),
        offset_(offset) {}

  std::size_t offset() const { return offset_; }

 private:
  std::size_t offset_;
};

// Thrown on malformed corpus or model files. `line` is 1-based, 0 if the
// error is not tied to a particular line.
class LoadError : public std::runtime_error {
 public:
  explicit LoadError(const std::string& msg, std::size_t line = 0)
      : std::runtime_error(line > 0 ? msg + " (line " + std::to_string(line) + ")"
                                    : msg),
        line_(line) {}

  std::size_t line() const { return line_; }

 private:
  std::size_t line_;
};

// Thrown on invalid experiment configuration; names the offending key.
class ConfigError : public std::runtime_error {
 public:
  ConfigError(const std::string& key, const std::string& msg)
      : std::runtime_error("config key '" + key + "': " + msg), key_(key) {}

  const std::string& key() const { return key_; }

 private:
  std::string key_;
};

}  // namespace melotype
