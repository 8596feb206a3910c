#pragma once

// Recorded adapter responses. A FixtureStore is a JSON document holding one
// list per endpoint:
//
//   {"sentiment": [{"text", "label", "probs"}],
//    "nli":       [{"premise", "hypothesis", "entailment", "neutral", "contradiction"}],
//    "generate":  [{"request": <generate request body>, "text"}],
//    "score":     [{"text", "tokens", "total_log_prob"}]}
//
// Sentiment entries are keyed per text so replay does not depend on how
// texts were batched when recording.

#include <filesystem>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <utility>

#include "dramanet/adapters.hpp"
#include "json.hpp"

namespace dramanet::adapters {

class FixtureStore {
 public:
  static FixtureStore load(const std::filesystem::path& path);
  static FixtureStore from_json(const nlohmann::json& doc);

  nlohmann::json to_json() const;
  void save(const std::filesystem::path& path) const;

  /// Adds every entry of `other`; its entries win on conflicting keys.
  void merge(const FixtureStore& other);

  void put_sentiment(const std::string& text, const SentimentResult& result);
  void put_nli(const std::string& premise, const std::string& hypothesis, const NliTriple& triple);
  void put_generate(const GenerationRequest& request, const std::string& text);
  void put_score(const std::string& text, const TokenScore& score);

  std::optional<SentimentResult> sentiment(const std::string& text) const;
  std::optional<NliTriple> nli(const std::string& premise, const std::string& hypothesis) const;
  std::optional<std::string> generate(const GenerationRequest& request) const;
  std::optional<TokenScore> score(const std::string& text) const;

 private:
  std::map<std::string, SentimentResult> sentiment_;
  std::map<std::pair<std::string, std::string>, NliTriple> nli_;
  std::map<std::string, std::string> generate_;  // keyed by canonical request JSON
  std::map<std::string, TokenScore> score_;
};

/// Replays a FixtureStore. Unrecorded requests raise ProtocolError.
class FixtureAdapter : public SentimentAdapter, public NliAdapter, public Generator, public Scorer {
 public:
  explicit FixtureAdapter(std::shared_ptr<const FixtureStore> store) : store_(std::move(store)) {}

 protected:
  std::vector<SentimentResult> do_classify(const std::vector<std::string>& texts) override;
  NliTriple do_infer(const std::string& premise, const std::string& hypothesis) override;
  std::string do_generate(const GenerationRequest& request) override;
  TokenScore do_score(const std::string& text) override;

 private:
  std::shared_ptr<const FixtureStore> store_;
};

/// Forwards to an underlying AdapterSet and records every validated response.
class RecordingAdapter : public SentimentAdapter, public NliAdapter, public Generator, public Scorer {
 public:
  explicit RecordingAdapter(AdapterSet inner) : inner_(std::move(inner)) {}

  FixtureStore snapshot() const;

  /// An AdapterSet whose four members all point at `recorder`.
  static AdapterSet as_set(const std::shared_ptr<RecordingAdapter>& recorder);

 protected:
  std::vector<SentimentResult> do_classify(const std::vector<std::string>& texts) override;
  NliTriple do_infer(const std::string& premise, const std::string& hypothesis) override;
  std::string do_generate(const GenerationRequest& request) override;
  TokenScore do_score(const std::string& text) override;

 private:
  AdapterSet inner_;
  mutable std::mutex mutex_;
  FixtureStore store_;
};

}  // namespace dramanet::adapters
