#pragma once

// JSON encoding of the adapter protocol. Field names are fixed:
//
//   POST /sentiment {"texts":[...]}
//        -> {"labels":[...], "probs":[[pos,neu,neg], ...]}
//   POST /nli {"premise":..., "hypothesis":...}
//        -> {"entailment":..., "neutral":..., "contradiction":...}
//   POST /generate {"cluster":..., "history":[{"role":..., "text":...}],
//                   "max_new_tokens":..., "seed":...}
//        -> {"text":...}
//   POST /score {"text":...} -> {"tokens":..., "total_log_prob":...}
//
// Decoders throw ProtocolError on missing or mistyped fields.

#include <string>
#include <vector>

#include "dramanet/adapters.hpp"
#include "json.hpp"

namespace dramanet::wire {

using nlohmann::json;

json encode_sentiment_request(const std::vector<std::string>& texts);
std::vector<std::string> decode_sentiment_request(const json& body);
json encode_sentiment_response(const std::vector<adapters::SentimentResult>& results);
std::vector<adapters::SentimentResult> decode_sentiment_response(const json& body);

json encode_nli_request(const std::string& premise, const std::string& hypothesis);
std::pair<std::string, std::string> decode_nli_request(const json& body);
json encode_nli_response(const adapters::NliTriple& triple);
adapters::NliTriple decode_nli_response(const json& body);

json encode_generate_request(const adapters::GenerationRequest& request);
adapters::GenerationRequest decode_generate_request(const json& body);
json encode_generate_response(const std::string& text);
std::string decode_generate_response(const json& body);

json encode_score_request(const std::string& text);
std::string decode_score_request(const json& body);
json encode_score_response(const adapters::TokenScore& score);
adapters::TokenScore decode_score_response(const json& body);

}  // namespace dramanet::wire
