#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace maxlog {

/// Invalid construction parameters (register count, width, ...).
class ConfigError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Two sketches built with different (k, w, seed) were compared or merged.
class IncompatibleSketchError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// An estimate was requested from a sketch that never saw an item.
class EmptySketchError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Too little shared information to form an estimate (no register pair is
/// usable).
class InsufficientDataError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Argument outside the mathematical domain of an analysis function.
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// Requested more distinct elements than the universe holds.
class CapacityError : public std::length_error {
 public:
  using std::length_error::length_error;
};

/// A user id that the store has never seen.
class UnknownUserError : public std::out_of_range {
 public:
  using std::out_of_range::out_of_range;
};

/// Malformed input text or binary data. `line()` is 1-based, 0 when not
/// applicable (binary snapshots).
class ParseError : public std::runtime_error {
 public:
  ParseError(std::size_t line, const std::string& what)
      : std::runtime_error(line == 0 ? what : "line " + std::to_string(line) + ": " + what),
        line_(line) {}

  std::size_t line() const noexcept { return line_; }

 private:
  std::size_t line_;
};

}  // namespace maxlog
