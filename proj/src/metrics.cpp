#include "dramanet/metrics.hpp"

#include <algorithm>
#include <cctype>
#include <cstdio>
#include <set>
#include <sstream>

#include "dramanet/clustering.hpp"

namespace dramanet::metrics {

namespace {

bool is_space(char c) { return std::isspace(static_cast<unsigned char>(c)) != 0; }

bool is_ascii_punct(char c) {
  const auto u = static_cast<unsigned char>(c);
  return u < 0x80 && std::ispunct(u) != 0;
}

std::string format_fixed(double value, int decimals) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.*f", decimals, value);
  return buf;
}

std::string format_optional(const std::optional<double>& value, int decimals, const char* missing) {
  return value ? format_fixed(*value, decimals) : std::string(missing);
}

std::vector<TargetedUtterance> targeted_utterances(const orchestration::Script& script) {
  std::vector<TargetedUtterance> out;
  for (const auto& line : script.lines) {
    auto it = std::find_if(script.roster.begin(), script.roster.end(),
                           [&](const auto& c) { return c.id == line.speaker_id; });
    if (it == script.roster.end()) {
      throw ConfigError("speaker '" + line.speaker_id + "' has no cluster in the roster");
    }
    out.push_back({it->cluster, line.text});
  }
  return out;
}

}  // namespace

std::vector<std::string> tokenize(std::string_view text) {
  std::vector<std::string> tokens;
  std::string current;
  auto flush = [&] {
    if (!current.empty()) tokens.push_back(std::move(current));
    current.clear();
  };
  for (char c : text) {
    if (is_space(c)) {
      flush();
    } else if (is_ascii_punct(c)) {
      flush();
      tokens.emplace_back(1, c);
    } else {
      current.push_back(static_cast<char>(std::tolower(static_cast<unsigned char>(c))));
    }
  }
  flush();
  return tokens;
}

DialogueDiversity count_diversity(const std::vector<std::string>& tokens) {
  DialogueDiversity d;
  d.words = tokens.size();
  d.distinct_unigrams = std::set<std::string>(tokens.begin(), tokens.end()).size();
  std::set<std::pair<std::string, std::string>> bigrams;
  for (std::size_t i = 1; i < tokens.size(); ++i) bigrams.emplace(tokens[i - 1], tokens[i]);
  d.distinct_bigrams = bigrams.size();
  return d;
}

DiversityReport diversity(const std::vector<std::vector<std::string>>& dialogues,
                          adapters::Scorer* scorer) {
  if (dialogues.empty()) throw ConfigError("diversity needs at least one dialogue");
  DiversityReport report;
  double perplexity_sum = 0.0;
  std::size_t perplexity_count = 0;
  for (std::size_t i = 0; i < dialogues.size(); ++i) {
    std::vector<std::string> tokens;
    std::string joined;
    for (const auto& utterance : dialogues[i]) {
      auto t = tokenize(utterance);
      tokens.insert(tokens.end(), t.begin(), t.end());
      if (!joined.empty()) joined += '\n';
      joined += utterance;
    }
    auto d = count_diversity(tokens);
    if (scorer != nullptr && d.words > 0) {
      try {
        d.perplexity = scorer->score(joined).perplexity();
      } catch (const AdapterError&) {
        adapters::rethrow_with_context("scoring dialogue " + std::to_string(i + 1));
      }
      perplexity_sum += *d.perplexity;
      ++perplexity_count;
    }
    report.mean_words += static_cast<double>(d.words);
    report.mean_distinct_unigrams += static_cast<double>(d.distinct_unigrams);
    report.mean_distinct_bigrams += static_cast<double>(d.distinct_bigrams);
    report.dialogues.push_back(d);
  }
  const auto n = static_cast<double>(dialogues.size());
  report.mean_words /= n;
  report.mean_distinct_unigrams /= n;
  report.mean_distinct_bigrams /= n;
  if (perplexity_count > 0) {
    report.mean_perplexity = perplexity_sum / static_cast<double>(perplexity_count);
  }
  return report;
}

SentimentMatrix sentiment_consistency(const std::vector<TargetedUtterance>& utterances,
                                      adapters::SentimentAdapter& classifier, std::size_t batch_size) {
  std::vector<std::string> texts;
  texts.reserve(utterances.size());
  for (const auto& u : utterances) texts.push_back(u.text);
  const auto labels = clustering::label_utterances(texts, classifier, batch_size);
  SentimentMatrix matrix{};
  for (std::size_t i = 0; i < utterances.size(); ++i) {
    ++matrix[index_of(utterances[i].target)][index_of(labels[i])];
  }
  return matrix;
}

SentimentMatrix sentiment_consistency(const std::vector<orchestration::Script>& scripts,
                                      adapters::SentimentAdapter& classifier) {
  std::vector<TargetedUtterance> utterances;
  for (const auto& script : scripts) {
    auto targeted = targeted_utterances(script);
    utterances.insert(utterances.end(), targeted.begin(), targeted.end());
  }
  return sentiment_consistency(utterances, classifier);
}

std::vector<std::string> split_sentences(std::string_view text) {
  std::vector<std::string> sentences;
  std::size_t start = 0;
  auto emit = [&](std::size_t end) {
    auto piece = trim(text.substr(start, end - start));
    if (!piece.empty()) sentences.push_back(std::move(piece));
    start = end;
  };
  for (std::size_t i = 0; i < text.size(); ++i) {
    const char c = text[i];
    if ((c == '.' || c == '!' || c == '?') && (i + 1 == text.size() || is_space(text[i + 1]))) {
      emit(i + 1);
    }
  }
  emit(text.size());
  return sentences;
}

std::vector<std::string> dialogue_sentences(const std::vector<std::string>& utterances) {
  std::vector<std::string> out;
  for (const auto& u : utterances) {
    auto s = split_sentences(u);
    out.insert(out.end(), s.begin(), s.end());
  }
  return out;
}

std::string truncate_context(std::string_view text, std::size_t max_chars) {
  if (text.size() <= max_chars) return std::string(text);
  std::size_t start = text.size() - max_chars;
  // Skip UTF-8 continuation bytes so the suffix starts on a code point.
  while (start < text.size() && (static_cast<unsigned char>(text[start]) & 0xC0) == 0x80) ++start;
  return std::string(text.substr(start));
}

NliScoreReport nli_score(const std::vector<std::string>& sentences, adapters::NliAdapter& nli,
                         std::size_t max_context_chars) {
  if (sentences.size() < 2) {
    throw UndefinedScoreError("NLI score needs at least 2 sentences, got " +
                              std::to_string(sentences.size()));
  }
  NliScoreReport report;
  std::string context = sentences.front();
  double sum = 0.0;
  for (std::size_t i = 1; i < sentences.size(); ++i) {
    const auto premise = truncate_context(context, max_context_chars);
    adapters::NliTriple triple;
    try {
      triple = nli.infer(premise, sentences[i]);
    } catch (const AdapterError&) {
      adapters::rethrow_with_context("NLI step " + std::to_string(i + 1));
    }
    report.step_neutral.push_back(triple.neutral);
    sum += triple.neutral;
    context += ' ';
    context += sentences[i];
  }
  report.score = sum / static_cast<double>(report.step_neutral.size());
  return report;
}

CorpusReport evaluate_corpus(const std::string& label, const std::vector<NamedScript>& scripts,
                             const adapters::AdapterSet& adapters, const EvaluationOptions& options) {
  if (scripts.empty()) throw ConfigError("no scripts to evaluate for '" + label + "'");
  CorpusReport report;
  report.label = label;

  std::vector<std::vector<std::string>> dialogues;
  for (const auto& s : scripts) {
    std::vector<std::string> utterances;
    for (const auto& line : s.script.lines) utterances.push_back(line.text);
    dialogues.push_back(std::move(utterances));
  }
  report.diversity = diversity(dialogues, adapters.scorer.get());

  double nli_sum = 0.0;
  std::size_t nli_count = 0;
  for (std::size_t i = 0; i < scripts.size(); ++i) {
    DialogueRecord record;
    record.name = scripts[i].name;
    record.diversity = report.diversity.dialogues[i];
    const auto sentences = dialogue_sentences(dialogues[i]);
    record.sentences = sentences.size();
    if (adapters.nli && sentences.size() >= 2) {
      try {
        record.nli_score = nli_score(sentences, *adapters.nli, options.max_context_chars).score;
      } catch (const AdapterError&) {
        adapters::rethrow_with_context(scripts[i].name);
      }
      nli_sum += *record.nli_score;
      ++nli_count;
    }
    report.dialogues.push_back(std::move(record));
  }
  if (nli_count > 0) report.mean_nli_score = nli_sum / static_cast<double>(nli_count);

  if (adapters.sentiment) {
    std::vector<TargetedUtterance> utterances;
    for (const auto& s : scripts) {
      auto targeted = targeted_utterances(s.script);
      utterances.insert(utterances.end(), targeted.begin(), targeted.end());
    }
    report.sentiment = sentiment_consistency(utterances, *adapters.sentiment,
                                             options.sentiment_batch_size);
  }
  return report;
}

std::string render_summary_table(const std::vector<CorpusReport>& reports) {
  std::vector<std::vector<std::string>> rows;
  std::vector<std::string> header{"Model"};
  for (auto c : kSummaryColumns) header.emplace_back(c);
  rows.push_back(header);
  for (const auto& r : reports) {
    rows.push_back({r.label, format_optional(r.diversity.mean_perplexity, 2, "-"),
                    format_fixed(r.diversity.mean_distinct_unigrams, 2),
                    format_fixed(r.diversity.mean_distinct_bigrams, 2),
                    format_fixed(r.diversity.mean_words, 2), format_optional(r.mean_nli_score, 2, "-")});
  }
  std::vector<std::size_t> width(header.size(), 0);
  for (const auto& row : rows) {
    for (std::size_t k = 0; k < row.size(); ++k) width[k] = std::max(width[k], row[k].size());
  }
  std::string out;
  auto emit_row = [&](const std::vector<std::string>& row) {
    out += '|';
    for (std::size_t k = 0; k < row.size(); ++k) {
      out += ' ';
      out += row[k];
      out.append(width[k] - row[k].size(), ' ');
      out += " |";
    }
    out += '\n';
  };
  emit_row(rows[0]);
  out += '|';
  for (auto w : width) {
    out.append(w + 2, '-');
    out += '|';
  }
  out += '\n';
  for (std::size_t i = 1; i < rows.size(); ++i) emit_row(rows[i]);
  return out;
}

std::string render_dialogue_records(const std::vector<CorpusReport>& reports) {
  std::ostringstream out;
  out << "model\tdialogue\twords\tdistinct_1\tdistinct_2\tperplexity\tsentences\tnli_score\n";
  for (const auto& r : reports) {
    for (const auto& d : r.dialogues) {
      out << r.label << '\t' << d.name << '\t' << d.diversity.words << '\t'
          << d.diversity.distinct_unigrams << '\t' << d.diversity.distinct_bigrams << '\t'
          << format_optional(d.diversity.perplexity, 6, "NA") << '\t' << d.sentences << '\t'
          << format_optional(d.nli_score, 6, "NA") << '\n';
    }
  }
  return out.str();
}

std::string render_sentiment_matrices(const std::vector<CorpusReport>& reports) {
  std::ostringstream out;
  out << "model\ttarget\tpositive\tneutral\tnegative\n";
  for (const auto& r : reports) {
    if (!r.sentiment) continue;
    for (auto target : kAllLabels) {
      const auto& row = (*r.sentiment)[index_of(target)];
      out << r.label << '\t' << to_string(target) << '\t' << row[0] << '\t' << row[1] << '\t'
          << row[2] << '\n';
    }
  }
  return out.str();
}

}  // namespace dramanet::metrics
