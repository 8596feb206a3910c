#include "dramanet/fixture.hpp"

#include <fstream>

#include "dramanet/io.hpp"
#include "dramanet/wire.hpp"

namespace dramanet::adapters {

using nlohmann::json;

namespace {

std::string request_key(const GenerationRequest& request) {
  return wire::encode_generate_request(request).dump();
}

const json& list(const json& doc, const char* name) {
  static const json empty = json::array();
  auto it = doc.find(name);
  if (it == doc.end()) return empty;
  if (!it->is_array()) throw FormatError(std::string("fixture field '") + name + "' must be a list");
  return *it;
}

}  // namespace

FixtureStore FixtureStore::from_json(const json& doc) {
  if (!doc.is_object()) throw FormatError("fixture document must be a JSON object");
  FixtureStore store;
  try {
    for (const auto& e : list(doc, "sentiment")) {
      auto decoded = wire::decode_sentiment_response(
          json{{"labels", json::array({e.at("label")})}, {"probs", json::array({e.at("probs")})}});
      store.put_sentiment(e.at("text").get<std::string>(), decoded.at(0));
    }
    for (const auto& e : list(doc, "nli")) {
      store.put_nli(e.at("premise").get<std::string>(), e.at("hypothesis").get<std::string>(),
                    wire::decode_nli_response(e));
    }
    for (const auto& e : list(doc, "generate")) {
      store.put_generate(wire::decode_generate_request(e.at("request")),
                         e.at("text").get<std::string>());
    }
    for (const auto& e : list(doc, "score")) {
      store.put_score(e.at("text").get<std::string>(), wire::decode_score_response(e));
    }
  } catch (const json::exception& ex) {
    throw FormatError(std::string("malformed fixture: ") + ex.what());
  } catch (const ProtocolError& ex) {
    throw FormatError(std::string("malformed fixture: ") + ex.what());
  }
  return store;
}

FixtureStore FixtureStore::load(const std::filesystem::path& path) {
  const auto text = io::read_file(path);
  auto doc = json::parse(text, nullptr, false);
  if (doc.is_discarded()) throw FormatError("fixture " + path.string() + " is not valid JSON");
  return from_json(doc);
}

json FixtureStore::to_json() const {
  json doc = {{"sentiment", json::array()},
              {"nli", json::array()},
              {"generate", json::array()},
              {"score", json::array()}};
  for (const auto& [text, r] : sentiment_) {
    doc["sentiment"].push_back({{"text", text},
                                {"label", std::string(dramanet::to_string(r.label))},
                                {"probs", {r.probs[0], r.probs[1], r.probs[2]}}});
  }
  for (const auto& [key, t] : nli_) {
    json e = wire::encode_nli_response(t);
    e["premise"] = key.first;
    e["hypothesis"] = key.second;
    doc["nli"].push_back(e);
  }
  for (const auto& [key, text] : generate_) {
    doc["generate"].push_back({{"request", json::parse(key)}, {"text", text}});
  }
  for (const auto& [text, s] : score_) {
    json e = wire::encode_score_response(s);
    e["text"] = text;
    doc["score"].push_back(e);
  }
  return doc;
}

void FixtureStore::save(const std::filesystem::path& path) const {
  io::write_file_atomic(path, to_json().dump(2) + "\n");
}

void FixtureStore::merge(const FixtureStore& other) {
  for (const auto& [k, v] : other.sentiment_) sentiment_[k] = v;
  for (const auto& [k, v] : other.nli_) nli_[k] = v;
  for (const auto& [k, v] : other.generate_) generate_[k] = v;
  for (const auto& [k, v] : other.score_) score_[k] = v;
}

void FixtureStore::put_sentiment(const std::string& text, const SentimentResult& result) {
  sentiment_[text] = result;
}

void FixtureStore::put_nli(const std::string& premise, const std::string& hypothesis,
                           const NliTriple& triple) {
  nli_[{premise, hypothesis}] = triple;
}

void FixtureStore::put_generate(const GenerationRequest& request, const std::string& text) {
  generate_[request_key(request)] = text;
}

void FixtureStore::put_score(const std::string& text, const TokenScore& score) { score_[text] = score; }

std::optional<SentimentResult> FixtureStore::sentiment(const std::string& text) const {
  auto it = sentiment_.find(text);
  if (it == sentiment_.end()) return std::nullopt;
  return it->second;
}

std::optional<NliTriple> FixtureStore::nli(const std::string& premise,
                                           const std::string& hypothesis) const {
  auto it = nli_.find({premise, hypothesis});
  if (it == nli_.end()) return std::nullopt;
  return it->second;
}

std::optional<std::string> FixtureStore::generate(const GenerationRequest& request) const {
  auto it = generate_.find(request_key(request));
  if (it == generate_.end()) return std::nullopt;
  return it->second;
}

std::optional<TokenScore> FixtureStore::score(const std::string& text) const {
  auto it = score_.find(text);
  if (it == score_.end()) return std::nullopt;
  return it->second;
}

std::vector<SentimentResult> FixtureAdapter::do_classify(const std::vector<std::string>& texts) {
  std::vector<SentimentResult> out;
  out.reserve(texts.size());
  for (const auto& text : texts) {
    auto r = store_->sentiment(text);
    if (!r) throw ProtocolError("fixture has no sentiment for '" + text + "'");
    out.push_back(*r);
  }
  return out;
}

NliTriple FixtureAdapter::do_infer(const std::string& premise, const std::string& hypothesis) {
  auto r = store_->nli(premise, hypothesis);
  if (!r) throw ProtocolError("fixture has no NLI result for hypothesis '" + hypothesis + "'");
  return *r;
}

std::string FixtureAdapter::do_generate(const GenerationRequest& request) {
  auto r = store_->generate(request);
  if (!r) throw ProtocolError("fixture has no generation for the request");
  return *r;
}

TokenScore FixtureAdapter::do_score(const std::string& text) {
  auto r = store_->score(text);
  if (!r) throw ProtocolError("fixture has no score for the text");
  return *r;
}

FixtureStore RecordingAdapter::snapshot() const {
  std::lock_guard lock(mutex_);
  return store_;
}

AdapterSet RecordingAdapter::as_set(const std::shared_ptr<RecordingAdapter>& recorder) {
  return {recorder, recorder, recorder, recorder};
}

std::vector<SentimentResult> RecordingAdapter::do_classify(const std::vector<std::string>& texts) {
  auto results = inner_.sentiment->classify(texts);
  std::lock_guard lock(mutex_);
  for (std::size_t i = 0; i < texts.size(); ++i) store_.put_sentiment(texts[i], results[i]);
  return results;
}

NliTriple RecordingAdapter::do_infer(const std::string& premise, const std::string& hypothesis) {
  auto triple = inner_.nli->infer(premise, hypothesis);
  std::lock_guard lock(mutex_);
  store_.put_nli(premise, hypothesis, triple);
  return triple;
}

std::string RecordingAdapter::do_generate(const GenerationRequest& request) {
  auto text = inner_.generator->generate(request);
  std::lock_guard lock(mutex_);
  store_.put_generate(request, text);
  return text;
}

TokenScore RecordingAdapter::do_score(const std::string& text) {
  auto score = inner_.scorer->score(text);
  std::lock_guard lock(mutex_);
  store_.put_score(text, score);
  return score;
}

}  // namespace dramanet::adapters
