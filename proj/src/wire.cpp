#include "dramanet/wire.hpp"

namespace dramanet::wire {

namespace {

const json& field(const json& body, const char* name) {
  if (!body.is_object()) throw ProtocolError("expected a JSON object");
  auto it = body.find(name);
  if (it == body.end()) throw ProtocolError(std::string("missing field '") + name + "'");
  return *it;
}

std::string string_field(const json& body, const char* name) {
  const auto& value = field(body, name);
  if (!value.is_string()) throw ProtocolError(std::string("field '") + name + "' must be a string");
  return value.get<std::string>();
}

double number_field(const json& body, const char* name) {
  const auto& value = field(body, name);
  if (!value.is_number()) throw ProtocolError(std::string("field '") + name + "' must be a number");
  return value.get<double>();
}

SentimentLabel label_field(const json& value) {
  if (!value.is_string()) throw ProtocolError("label must be a string");
  auto label = parse_label(value.get<std::string>());
  if (!label) throw ProtocolError("unknown label '" + value.get<std::string>() + "'");
  return *label;
}

}  // namespace

json encode_sentiment_request(const std::vector<std::string>& texts) { return {{"texts", texts}}; }

std::vector<std::string> decode_sentiment_request(const json& body) {
  const auto& texts = field(body, "texts");
  if (!texts.is_array()) throw ProtocolError("'texts' must be an array");
  std::vector<std::string> out;
  for (const auto& t : texts) {
    if (!t.is_string()) throw ProtocolError("'texts' entries must be strings");
    out.push_back(t.get<std::string>());
  }
  return out;
}

json encode_sentiment_response(const std::vector<adapters::SentimentResult>& results) {
  json labels = json::array();
  json probs = json::array();
  for (const auto& r : results) {
    labels.push_back(std::string(to_string(r.label)));
    probs.push_back({r.probs[0], r.probs[1], r.probs[2]});
  }
  return {{"labels", labels}, {"probs", probs}};
}

std::vector<adapters::SentimentResult> decode_sentiment_response(const json& body) {
  const auto& labels = field(body, "labels");
  const auto& probs = field(body, "probs");
  if (!labels.is_array() || !probs.is_array()) {
    throw ProtocolError("'labels' and 'probs' must be arrays");
  }
  if (labels.size() != probs.size()) throw ProtocolError("'labels' and 'probs' differ in length");
  std::vector<adapters::SentimentResult> out;
  for (std::size_t i = 0; i < labels.size(); ++i) {
    adapters::SentimentResult r;
    r.label = label_field(labels[i]);
    const auto& vec = probs[i];
    if (!vec.is_array() || vec.size() != 3) {
      throw ProtocolError("each probability vector must have 3 entries");
    }
    for (std::size_t k = 0; k < 3; ++k) {
      if (!vec[k].is_number()) throw ProtocolError("probabilities must be numbers");
      r.probs[k] = vec[k].get<double>();
    }
    out.push_back(r);
  }
  return out;
}

json encode_nli_request(const std::string& premise, const std::string& hypothesis) {
  return {{"premise", premise}, {"hypothesis", hypothesis}};
}

std::pair<std::string, std::string> decode_nli_request(const json& body) {
  return {string_field(body, "premise"), string_field(body, "hypothesis")};
}

json encode_nli_response(const adapters::NliTriple& t) {
  return {{"entailment", t.entailment}, {"neutral", t.neutral}, {"contradiction", t.contradiction}};
}

adapters::NliTriple decode_nli_response(const json& body) {
  return {number_field(body, "entailment"), number_field(body, "neutral"),
          number_field(body, "contradiction")};
}

json encode_generate_request(const adapters::GenerationRequest& request) {
  json history = json::array();
  for (const auto& line : request.history) {
    history.push_back({{"role", std::string(to_string(line.role))}, {"text", line.text}});
  }
  return {{"cluster", std::string(to_string(request.cluster))},
          {"history", history},
          {"max_new_tokens", request.max_new_tokens},
          {"seed", request.seed}};
}

adapters::GenerationRequest decode_generate_request(const json& body) {
  adapters::GenerationRequest request;
  request.cluster = label_field(field(body, "cluster"));
  const auto& history = field(body, "history");
  if (!history.is_array()) throw ProtocolError("'history' must be an array");
  for (const auto& entry : history) {
    auto role = parse_role(string_field(entry, "role"));
    if (!role) throw ProtocolError("history role must be 'focus' or 'other'");
    request.history.push_back({*role, string_field(entry, "text")});
  }
  const auto& max_tokens = field(body, "max_new_tokens");
  if (!max_tokens.is_number_unsigned()) {
    throw ProtocolError("'max_new_tokens' must be a non-negative integer");
  }
  request.max_new_tokens = max_tokens.get<std::uint32_t>();
  if (auto it = body.find("seed"); it != body.end()) {
    if (!it->is_number_unsigned()) throw ProtocolError("'seed' must be a non-negative integer");
    request.seed = it->get<std::uint64_t>();
  }
  return request;
}

json encode_generate_response(const std::string& text) { return {{"text", text}}; }

std::string decode_generate_response(const json& body) { return string_field(body, "text"); }

json encode_score_request(const std::string& text) { return {{"text", text}}; }

std::string decode_score_request(const json& body) { return string_field(body, "text"); }

json encode_score_response(const adapters::TokenScore& score) {
  return {{"tokens", score.tokens}, {"total_log_prob", score.total_log_probability}};
}

adapters::TokenScore decode_score_response(const json& body) {
  const auto& tokens = field(body, "tokens");
  if (!tokens.is_number_integer() || tokens.get<std::int64_t>() < 0) {
    throw ProtocolError("'tokens' must be a non-negative integer");
  }
  return {tokens.get<std::uint64_t>(), number_field(body, "total_log_prob")};
}

}  // namespace dramanet::wire
