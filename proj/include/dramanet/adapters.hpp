#pragma once

// Model-inference boundary. Every model call in the pipeline goes through one
// of the four interfaces below. The public entry points are non-virtual and
// enforce the operation contract (arity, simplex, sanitizing) so that every
// backend (stub, fixture replay, HTTP) is held to the same rules.

#include <array>
#include <cstdint>
#include <memory>
#include <string>
#include <vector>

#include "dramanet/common.hpp"

namespace dramanet::adapters {

/// Probabilities in (positive, neutral, negative) order.
using SentimentProbs = std::array<double, 3>;

struct SentimentResult {
  SentimentLabel label = SentimentLabel::kNeutral;
  SentimentProbs probs{0.0, 1.0, 0.0};

  friend bool operator==(const SentimentResult&, const SentimentResult&) = default;
};

struct NliTriple {
  double entailment = 0.0;
  double neutral = 0.0;
  double contradiction = 0.0;

  friend bool operator==(const NliTriple&, const NliTriple&) = default;
};

struct HistoryLine {
  Role role = Role::kOther;
  std::string text;

  friend bool operator==(const HistoryLine&, const HistoryLine&) = default;
};

struct GenerationRequest {
  SentimentLabel cluster = SentimentLabel::kNeutral;
  std::vector<HistoryLine> history;
  std::uint32_t max_new_tokens = 40;
  /// Sampling seed forwarded to the server; bumped on retry.
  std::uint64_t seed = 0;

  friend bool operator==(const GenerationRequest&, const GenerationRequest&) = default;
};

struct TokenScore {
  std::uint64_t tokens = 0;
  /// Natural log.
  double total_log_probability = 0.0;

  double perplexity() const;
};

/// Index of the largest probability; earliest index wins ties.
SentimentLabel argmax_label(const SentimentProbs& probs);

class SentimentAdapter {
 public:
  virtual ~SentimentAdapter() = default;

  /// One result per text, in order. Each text is classified on its own.
  std::vector<SentimentResult> classify(const std::vector<std::string>& texts);

 protected:
  virtual std::vector<SentimentResult> do_classify(const std::vector<std::string>& texts) = 0;
};

class NliAdapter {
 public:
  virtual ~NliAdapter() = default;

  NliTriple infer(const std::string& premise, const std::string& hypothesis);

 protected:
  virtual NliTriple do_infer(const std::string& premise, const std::string& hypothesis) = 0;
};

class Generator {
 public:
  virtual ~Generator() = default;

  /// Returns a single trimmed line with no role prefix. Throws
  /// GenerationError if nothing remains after sanitizing.
  std::string generate(const GenerationRequest& request);

 protected:
  virtual std::string do_generate(const GenerationRequest& request) = 0;
};

class Scorer {
 public:
  virtual ~Scorer() = default;

  TokenScore score(const std::string& text);

 protected:
  virtual TokenScore do_score(const std::string& text) = 0;
};

/// Reduces raw generator output to one utterance: first non-empty line,
/// trimmed, with any leading "focus:"/"other:" prefix removed (any case).
std::string sanitize_generation(const std::string& raw);

/// Throws ProtocolError unless each entry is in [0,1] and the sum is 1 within 1e-6.
void check_nli_triple(const NliTriple& triple);

/// Must be called from inside a catch block. Rethrows the active adapter
/// error as the same type with `context` prepended; other exceptions are
/// rethrown unchanged.
[[noreturn]] void rethrow_with_context(const std::string& context);

struct AdapterSet {
  std::shared_ptr<SentimentAdapter> sentiment;
  std::shared_ptr<NliAdapter> nli;
  std::shared_ptr<Generator> generator;
  std::shared_ptr<Scorer> scorer;
};

}  // namespace dramanet::adapters
