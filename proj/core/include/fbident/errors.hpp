#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace fbident {

// Malformed input file (CSV or config). The message carries the location of
// the offending row/column so the user can fix the file.
class ParseError : public std::runtime_error {
 public:
  explicit ParseError(std::string message) : std::runtime_error(std::move(message)) {}
};

// Invalid experiment configuration; the message names the offending field.
class ConfigError : public std::runtime_error {
 public:
  explicit ConfigError(std::string message) : std::runtime_error(std::move(message)) {}
};

// A symmetric factorization hit a pivot that is not safely positive, so the
// normal equations cannot be solved as posed. `column` identifies the
// regressor at which the factorization failed.
class RankDeficiencyError : public std::runtime_error {
 public:
  RankDeficiencyError(std::string message, std::size_t column)
      : std::runtime_error(std::move(message)), column_(column) {}

  std::size_t column() const noexcept { return column_; }

 private:
  std::size_t column_;
};

}  // namespace fbident
