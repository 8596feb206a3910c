#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "dramanet/adapters.hpp"
#include "dramanet/orchestration.hpp"

namespace dramanet::metrics {

/// Lower-cases ASCII, splits on whitespace, and emits every ASCII punctuation
/// character as its own token.
std::vector<std::string> tokenize(std::string_view text);

struct DialogueDiversity {
  std::uint64_t words = 0;
  std::uint64_t distinct_unigrams = 0;
  std::uint64_t distinct_bigrams = 0;
  std::optional<double> perplexity;
};

struct DiversityReport {
  std::vector<DialogueDiversity> dialogues;
  double mean_words = 0.0;
  double mean_distinct_unigrams = 0.0;
  double mean_distinct_bigrams = 0.0;
  /// Mean over dialogues that have a perplexity; empty if none do.
  std::optional<double> mean_perplexity;
};

/// Counts over one token sequence. Bigrams span utterance boundaries.
DialogueDiversity count_diversity(const std::vector<std::string>& tokens);

/// One entry per dialogue, each a list of utterance texts (no speaker names).
/// Perplexity is requested from `scorer` when non-null, on the utterances
/// joined by newlines, and skipped for dialogues with no words.
DiversityReport diversity(const std::vector<std::vector<std::string>>& dialogues,
                          adapters::Scorer* scorer);

/// rows: target cluster of the speaking character; columns: classified label.
using SentimentMatrix = std::array<std::array<std::uint64_t, 3>, 3>;

struct TargetedUtterance {
  SentimentLabel target = SentimentLabel::kNeutral;
  std::string text;
};

SentimentMatrix sentiment_consistency(const std::vector<TargetedUtterance>& utterances,
                                      adapters::SentimentAdapter& classifier,
                                      std::size_t batch_size = 32);

/// Uses each script's roster to attribute utterances to clusters.
SentimentMatrix sentiment_consistency(const std::vector<orchestration::Script>& scripts,
                                      adapters::SentimentAdapter& classifier);

/// Splits after runs of '.', '!' or '?' that are followed by whitespace or
/// the end of the text. Pieces are trimmed; empty pieces dropped.
std::vector<std::string> split_sentences(std::string_view text);

/// Sentences of every utterance, in order; utterance ends are boundaries.
std::vector<std::string> dialogue_sentences(const std::vector<std::string>& utterances);

/// Last at most `max_chars` bytes of `text`, advanced to a UTF-8 boundary.
std::string truncate_context(std::string_view text, std::size_t max_chars);

struct NliScoreReport {
  /// Neutral probability of sentence i+1 against sentences 0..i.
  std::vector<double> step_neutral;
  double score = 0.0;
};

/// Mean neutral-class probability of each sentence given all previous
/// sentences (joined by single spaces, truncated from the start to
/// `max_context_chars`). Exactly n-1 adapter calls. Throws
/// UndefinedScoreError for fewer than two sentences.
NliScoreReport nli_score(const std::vector<std::string>& sentences, adapters::NliAdapter& nli,
                         std::size_t max_context_chars = 2000);

struct DialogueRecord {
  std::string name;
  DialogueDiversity diversity;
  std::size_t sentences = 0;
  std::optional<double> nli_score;
};

/// Metrics for one set of generated dialogues (one row of the summary table).
struct CorpusReport {
  std::string label;
  std::vector<DialogueRecord> dialogues;
  DiversityReport diversity;
  /// Mean over dialogues with a defined score.
  std::optional<double> mean_nli_score;
  std::optional<SentimentMatrix> sentiment;
};

struct EvaluationOptions {
  std::size_t max_context_chars = 2000;
  std::size_t sentiment_batch_size = 32;
};

struct NamedScript {
  std::string name;
  orchestration::Script script;
};

/// Null adapters are skipped (perplexity, NLI or sentiment columns left empty).
CorpusReport evaluate_corpus(const std::string& label, const std::vector<NamedScript>& scripts,
                             const adapters::AdapterSet& adapters, const EvaluationOptions& options = {});

/// Column names of the summary table after the leading "Model" column.
inline constexpr std::array<std::string_view, 5> kSummaryColumns = {
    "Perplexity", "1-gram Vocab", "2-gram Vocab", "Words", "NLI-Score"};

/// Markdown-style table, two decimals, "-" for undefined values.
std::string render_summary_table(const std::vector<CorpusReport>& reports);

/// Tab-separated per-dialogue records with a header line.
std::string render_dialogue_records(const std::vector<CorpusReport>& reports);

/// Tab-separated sentiment matrices: model, target, positive, neutral, negative.
std::string render_sentiment_matrices(const std::vector<CorpusReport>& reports);

}  // namespace dramanet::metrics
