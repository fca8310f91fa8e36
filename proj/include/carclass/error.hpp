#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace carclass {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Malformed input line; carries the 1-based line number.
class ParseError : public Error {
 public:
  ParseError(std::size_t line, const std::string& what)
      : Error("line " + std::to_string(line) + ": " + what), line_(line) {}
  std::size_t line() const noexcept { return line_; }

 private:
  std::size_t line_;
};

/// Well-formed input that violates a required field or cross-reference.
class SchemaError : public Error {
 public:
  using Error::Error;
};

/// Dependency heads that do not form a single-rooted tree.
class TreeError : public Error {
 public:
  TreeError(std::string sentence_id, const std::string& what)
      : Error("sentence " + sentence_id + ": " + what), sentence_id_(std::move(sentence_id)) {}
  const std::string& sentence_id() const noexcept { return sentence_id_; }

 private:
  std::string sentence_id_;
};

/// Argument outside an operation's domain (empty database, absent lemma, ...).
class DomainError : public Error {
 public:
  using Error::Error;
};

/// Invalid user configuration (strategy strings, missing paths, mismatched rule files).
class ConfigError : public Error {
 public:
  using Error::Error;
};

}  // namespace carclass
