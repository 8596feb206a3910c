#include "dramanet/http_client.hpp"

#include <thread>

#include "dramanet/wire.hpp"
#include "httplib.h"

namespace dramanet::adapters {

HttpClient::HttpClient(HttpClientOptions options) : options_(std::move(options)) {
  const auto& url = options_.base_url;
  const auto scheme_end = url.find("://");
  if (url.empty() || scheme_end == std::string::npos) {
    throw ConfigError("model URL must look like http://host:port[/prefix], got '" + url + "'");
  }
  if (url.compare(0, scheme_end, "http") != 0) {
    throw ConfigError("only plain http model URLs are supported, got '" + url + "'");
  }
  const auto path_start = url.find('/', scheme_end + 3);
  scheme_host_port_ = url.substr(0, path_start);
  if (path_start != std::string::npos) {
    path_prefix_ = url.substr(path_start);
    while (!path_prefix_.empty() && path_prefix_.back() == '/') path_prefix_.pop_back();
  }
}

nlohmann::json HttpClient::post_once(const std::string& path, const std::string& payload) const {
  httplib::Client client(scheme_host_port_);
  const auto seconds = std::chrono::duration_cast<std::chrono::seconds>(options_.timeout);
  const auto micros = std::chrono::duration_cast<std::chrono::microseconds>(options_.timeout - seconds);
  client.set_connection_timeout(seconds.count(), micros.count());
  client.set_read_timeout(seconds.count(), micros.count());
  client.set_write_timeout(seconds.count(), micros.count());

  const std::string full_path = path_prefix_ + path;
  auto res = client.Post(full_path, payload, "application/json");
  if (!res) {
    throw TransportError("POST " + full_path + ": " + httplib::to_string(res.error()));
  }
  if (res->status >= 500 || res->status == 429) {
    throw TransportError("POST " + full_path + ": HTTP " + std::to_string(res->status));
  }
  if (res->status != 200) {
    throw ProtocolError("POST " + full_path + ": HTTP " + std::to_string(res->status) + " " +
                        res->body);
  }
  auto body = nlohmann::json::parse(res->body, nullptr, false);
  if (body.is_discarded()) throw ProtocolError("POST " + full_path + ": response is not JSON");
  return body;
}

nlohmann::json HttpClient::post(const std::string& path, const nlohmann::json& body) const {
  const std::string payload = body.dump();
  for (unsigned attempt = 0;; ++attempt) {
    try {
      return post_once(path, payload);
    } catch (const TransportError&) {
      if (attempt >= options_.retries) throw;
      std::this_thread::sleep_for(options_.backoff * (1u << std::min(attempt, 16u)));
    }
  }
}

std::vector<SentimentResult> HttpClient::do_classify(const std::vector<std::string>& texts) {
  return wire::decode_sentiment_response(
      post(options_.paths.sentiment, wire::encode_sentiment_request(texts)));
}

NliTriple HttpClient::do_infer(const std::string& premise, const std::string& hypothesis) {
  return wire::decode_nli_response(post(options_.paths.nli, wire::encode_nli_request(premise, hypothesis)));
}

std::string HttpClient::do_generate(const GenerationRequest& request) {
  return wire::decode_generate_response(
      post(options_.paths.generate, wire::encode_generate_request(request)));
}

TokenScore HttpClient::do_score(const std::string& text) {
  return wire::decode_score_response(post(options_.paths.score, wire::encode_score_request(text)));
}

}  // namespace dramanet::adapters
