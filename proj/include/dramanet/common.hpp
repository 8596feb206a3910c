#pragma once

#include <array>
#include <cstddef>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>

namespace dramanet {

/// Persona cluster / sentiment class. The numeric order (positive, neutral,
/// negative) is the fixed order of every probability vector on the wire.
enum class SentimentLabel { kPositive = 0, kNeutral = 1, kNegative = 2 };

inline constexpr std::array<SentimentLabel, 3> kAllLabels = {
    SentimentLabel::kPositive, SentimentLabel::kNeutral, SentimentLabel::kNegative};

std::string_view to_string(SentimentLabel label);
std::optional<SentimentLabel> parse_label(std::string_view text);
SentimentLabel label_or_throw(std::string_view text);

inline std::size_t index_of(SentimentLabel label) { return static_cast<std::size_t>(label); }

/// Speaker role in training documents and generation history.
enum class Role { kFocus, kOther };

std::string_view to_string(Role role);
std::optional<Role> parse_role(std::string_view text);

// Error hierarchy. The CLI maps ConfigError/FormatError to exit code 2 and
// AdapterError (and subclasses) to exit code 3.

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class ConfigError : public Error {
 public:
  using Error::Error;
};

class FormatError : public Error {
 public:
  using Error::Error;
};

class DegenerateStateError : public Error {
 public:
  using Error::Error;
};

class UndefinedScoreError : public Error {
 public:
  using Error::Error;
};

class AdapterError : public Error {
 public:
  using Error::Error;
};

/// Connection failures, timeouts, 5xx. Retryable.
class TransportError : public AdapterError {
 public:
  using AdapterError::AdapterError;
};

/// Malformed or contract-violating response. Never retried.
class ProtocolError : public AdapterError {
 public:
  using AdapterError::AdapterError;
};

/// Generator produced nothing usable after sanitizing.
class GenerationError : public AdapterError {
 public:
  using AdapterError::AdapterError;
};

std::string trim(std::string_view text);
std::string to_upper(std::string_view text);
std::string to_lower(std::string_view text);

}  // namespace dramanet
