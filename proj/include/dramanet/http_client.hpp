#pragma once

#include <chrono>
#include <string>

#include "dramanet/adapters.hpp"
#include "json.hpp"

namespace dramanet::adapters {

struct EndpointPaths {
  std::string sentiment = "/sentiment";
  std::string nli = "/nli";
  std::string generate = "/generate";
  std::string score = "/score";
};

struct HttpClientOptions {
  /// e.g. "http://localhost:8000" or "http://host:8000/api/v1".
  std::string base_url;
  EndpointPaths paths;
  std::chrono::milliseconds timeout{30'000};
  /// Extra attempts after the first, for transport failures only.
  unsigned retries = 3;
  /// Delay before retry k (0-based) is backoff * 2^k.
  std::chrono::milliseconds backoff{200};
};

/// Client for the JSON-over-HTTP model protocol. Stateless between calls, so
/// one instance may be shared across threads.
class HttpClient : public SentimentAdapter, public NliAdapter, public Generator, public Scorer {
 public:
  explicit HttpClient(HttpClientOptions options);

  /// POSTs `body` to `path` (relative to the base URL) with retry/backoff.
  nlohmann::json post(const std::string& path, const nlohmann::json& body) const;

  const HttpClientOptions& options() const { return options_; }

 protected:
  std::vector<SentimentResult> do_classify(const std::vector<std::string>& texts) override;
  NliTriple do_infer(const std::string& premise, const std::string& hypothesis) override;
  std::string do_generate(const GenerationRequest& request) override;
  TokenScore do_score(const std::string& text) override;

 private:
  nlohmann::json post_once(const std::string& path, const std::string& payload) const;

  HttpClientOptions options_;
  std::string scheme_host_port_;
  std::string path_prefix_;
};

}  // namespace dramanet::adapters
