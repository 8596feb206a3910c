#include "dramanet/adapters.hpp"

#include <cmath>
#include <stdexcept>

namespace dramanet::adapters {

namespace {

bool in_unit_interval(double p) { return std::isfinite(p) && p >= 0.0 && p <= 1.0; }

bool blank(const std::string& text) { return trim(text).empty(); }

}  // namespace

double TokenScore::perplexity() const {
  return std::exp(-total_log_probability / static_cast<double>(tokens));
}

SentimentLabel argmax_label(const SentimentProbs& probs) {
  std::size_t best = 0;
  for (std::size_t i = 1; i < probs.size(); ++i) {
    if (probs[i] > probs[best]) best = i;
  }
  return kAllLabels[best];
}

std::vector<SentimentResult> SentimentAdapter::classify(const std::vector<std::string>& texts) {
  if (texts.empty()) return {};
  for (const auto& text : texts) {
    if (blank(text)) throw std::invalid_argument("sentiment: texts must be non-empty");
  }
  auto results = do_classify(texts);
  if (results.size() != texts.size()) {
    throw ProtocolError("sentiment: expected " + std::to_string(texts.size()) + " results, got " +
                        std::to_string(results.size()));
  }
  for (std::size_t i = 0; i < results.size(); ++i) {
    const auto& r = results[i];
    for (double p : r.probs) {
      if (!in_unit_interval(p)) {
        throw ProtocolError("sentiment: probability out of range at index " + std::to_string(i));
      }
    }
    // Ties are accepted: the label only has to reach the maximum.
    if (r.probs[index_of(r.label)] < r.probs[index_of(argmax_label(r.probs))]) {
      throw ProtocolError("sentiment: label at index " + std::to_string(i) +
                          " is not the argmax of its probabilities");
    }
  }
  return results;
}

void check_nli_triple(const NliTriple& t) {
  if (!in_unit_interval(t.entailment) || !in_unit_interval(t.neutral) ||
      !in_unit_interval(t.contradiction)) {
    throw ProtocolError("nli: class probability outside [0,1]");
  }
  if (std::abs(t.entailment + t.neutral + t.contradiction - 1.0) > 1e-6) {
    throw ProtocolError("nli: class probabilities do not sum to 1");
  }
}

NliTriple NliAdapter::infer(const std::string& premise, const std::string& hypothesis) {
  if (blank(premise) || blank(hypothesis)) {
    throw std::invalid_argument("nli: premise and hypothesis must be non-empty");
  }
  auto triple = do_infer(premise, hypothesis);
  check_nli_triple(triple);
  return triple;
}

std::string sanitize_generation(const std::string& raw) {
  std::size_t start = 0;
  while (start <= raw.size()) {
    auto end = raw.find_first_of("\r\n", start);
    std::string line = trim(std::string_view(raw).substr(start, end == std::string::npos
                                                                     ? std::string::npos
                                                                     : end - start));
    for (std::string_view prefix : {"focus:", "other:"}) {
      if (to_lower(std::string_view(line).substr(0, prefix.size())) == prefix) {
        line = trim(std::string_view(line).substr(prefix.size()));
        break;
      }
    }
    if (!line.empty()) return line;
    if (end == std::string::npos) break;
    start = end + 1;
  }
  return {};
}

std::string Generator::generate(const GenerationRequest& request) {
  if (request.max_new_tokens < 1) {
    throw std::invalid_argument("generate: max_new_tokens must be at least 1");
  }
  auto text = sanitize_generation(do_generate(request));
  if (text.empty()) throw GenerationError("generate: empty utterance after sanitizing");
  return text;
}

TokenScore Scorer::score(const std::string& text) {
  if (blank(text)) throw std::invalid_argument("score: text must be non-empty");
  auto result = do_score(text);
  if (result.tokens < 1) throw ProtocolError("score: token count must be at least 1");
  if (!std::isfinite(result.total_log_probability) || result.total_log_probability > 0.0) {
    throw ProtocolError("score: total log probability must be finite and non-positive");
  }
  return result;
}

void rethrow_with_context(const std::string& context) {
  try {
    throw;
  } catch (const TransportError& e) {
    throw TransportError(context + ": " + e.what());
  } catch (const GenerationError& e) {
    throw GenerationError(context + ": " + e.what());
  } catch (const ProtocolError& e) {
    throw ProtocolError(context + ": " + e.what());
  } catch (const AdapterError& e) {
    throw AdapterError(context + ": " + e.what());
  }
}

}  // namespace dramanet::adapters
