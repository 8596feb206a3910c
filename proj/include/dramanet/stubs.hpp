#pragma once

// Deterministic in-process adapters. All are pure functions of their input
// except ScriptedNliStub, which replays a fixed sequence.

#include <atomic>
#include <map>
#include <string>
#include <vector>

#include "dramanet/adapters.hpp"

namespace dramanet::stubs {

/// Case-insensitive substring match: any negative keyword -> negative, else
/// any positive keyword -> positive, else neutral. The winning class gets
/// probability 0.8, the other two 0.1 each.
class KeywordSentimentStub : public adapters::SentimentAdapter {
 public:
  KeywordSentimentStub(std::vector<std::string> positive, std::vector<std::string> negative);

  /// Keyword lists used by the CLI's stub mode.
  static KeywordSentimentStub defaults();

  adapters::SentimentResult classify_one(const std::string& text) const;

 protected:
  std::vector<adapters::SentimentResult> do_classify(const std::vector<std::string>& texts) override;

 private:
  std::vector<std::string> positive_;
  std::vector<std::string> negative_;
};

class ConstantNliStub : public adapters::NliAdapter {
 public:
  explicit ConstantNliStub(adapters::NliTriple triple = {0.0, 1.0, 0.0}) : triple_(triple) {}

 protected:
  adapters::NliTriple do_infer(const std::string&, const std::string&) override { return triple_; }

 private:
  adapters::NliTriple triple_;
};

/// (1,0,0) when premise == hypothesis, (0,1,0) otherwise.
class IdentityEntailmentNliStub : public adapters::NliAdapter {
 protected:
  adapters::NliTriple do_infer(const std::string& premise, const std::string& hypothesis) override;
};

/// Lexical-overlap heuristic. With o the fraction of hypothesis words found in
/// the premise (lower-cased, edge punctuation stripped):
/// entailment = 0.8 o, contradiction = 0.1 (1 - o), neutral = the rest.
class OverlapNliStub : public adapters::NliAdapter {
 public:
  static double overlap(const std::string& premise, const std::string& hypothesis);

 protected:
  adapters::NliTriple do_infer(const std::string& premise, const std::string& hypothesis) override;
};

/// Returns neutral = neutrals[k] on the k-th call (entailment takes the
/// remainder). Throws ProtocolError once the sequence is exhausted.
class ScriptedNliStub : public adapters::NliAdapter {
 public:
  explicit ScriptedNliStub(std::vector<double> neutrals) : neutrals_(std::move(neutrals)) {}

  std::size_t calls() const { return calls_; }

 protected:
  adapters::NliTriple do_infer(const std::string&, const std::string&) override;

 private:
  std::vector<double> neutrals_;
  std::atomic<std::size_t> calls_{0};
};

/// Emits a fixed utterance per cluster regardless of history.
class TemplateGenerator : public adapters::Generator {
 public:
  explicit TemplateGenerator(std::map<SentimentLabel, std::string> templates);

  static TemplateGenerator defaults();

  const std::string& template_for(SentimentLabel cluster) const { return templates_.at(cluster); }

 protected:
  std::string do_generate(const adapters::GenerationRequest& request) override;

 private:
  std::map<SentimentLabel, std::string> templates_;
};

/// Echoes the last history line reversed byte-wise; "..." on empty history.
class ReverseEchoGenerator : public adapters::Generator {
 protected:
  std::string do_generate(const adapters::GenerationRequest& request) override;
};

/// Every whitespace-separated token receives the same log-probability.
class UniformScoreStub : public adapters::Scorer {
 public:
  explicit UniformScoreStub(double log_prob_per_token) : log_prob_(log_prob_per_token) {}

 protected:
  adapters::TokenScore do_score(const std::string& text) override;

 private:
  double log_prob_;
};

/// Keyword sentiment, overlap NLI, template generator, uniform ln(1/2) scorer.
adapters::AdapterSet default_stub_set();

}  // namespace dramanet::stubs
