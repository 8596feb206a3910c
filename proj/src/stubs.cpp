#include "dramanet/stubs.hpp"

#include <cctype>
#include <cmath>
#include <set>
#include <sstream>

namespace dramanet::stubs {

namespace {

bool contains_keyword(const std::string& lowered, const std::vector<std::string>& keywords) {
  for (const auto& k : keywords) {
    if (!k.empty() && lowered.find(k) != std::string::npos) return true;
  }
  return false;
}

std::vector<std::string> words(const std::string& text) {
  std::vector<std::string> out;
  std::istringstream in(to_lower(text));
  std::string w;
  while (in >> w) {
    std::size_t b = 0;
    std::size_t e = w.size();
    while (b < e && std::ispunct(static_cast<unsigned char>(w[b]))) ++b;
    while (e > b && std::ispunct(static_cast<unsigned char>(w[e - 1]))) --e;
    if (b < e) out.push_back(w.substr(b, e - b));
  }
  return out;
}

std::vector<std::string> lowered(std::vector<std::string> keywords) {
  for (auto& k : keywords) k = to_lower(k);
  return keywords;
}

}  // namespace

KeywordSentimentStub::KeywordSentimentStub(std::vector<std::string> positive,
                                           std::vector<std::string> negative)
    : positive_(lowered(std::move(positive))), negative_(lowered(std::move(negative))) {}

KeywordSentimentStub KeywordSentimentStub::defaults() {
  return KeywordSentimentStub(
      {"great", "wonderful", "love", "happy", "glad", "thank", "lovely", "delight"},
      {"terrible", "hate", "awful", "horrible", "angry", "worst", "disgust", "furious"});
}

adapters::SentimentResult KeywordSentimentStub::classify_one(const std::string& text) const {
  const auto lower = to_lower(text);
  SentimentLabel label = SentimentLabel::kNeutral;
  if (contains_keyword(lower, negative_)) {
    label = SentimentLabel::kNegative;
  } else if (contains_keyword(lower, positive_)) {
    label = SentimentLabel::kPositive;
  }
  adapters::SentimentResult r;
  r.label = label;
  r.probs = {0.1, 0.1, 0.1};
  r.probs[index_of(label)] = 0.8;
  return r;
}

std::vector<adapters::SentimentResult> KeywordSentimentStub::do_classify(
    const std::vector<std::string>& texts) {
  std::vector<adapters::SentimentResult> out;
  out.reserve(texts.size());
  for (const auto& t : texts) out.push_back(classify_one(t));
  return out;
}

adapters::NliTriple IdentityEntailmentNliStub::do_infer(const std::string& premise,
                                                        const std::string& hypothesis) {
  if (premise == hypothesis) return {1.0, 0.0, 0.0};
  return {0.0, 1.0, 0.0};
}

double OverlapNliStub::overlap(const std::string& premise, const std::string& hypothesis) {
  const auto hyp = words(hypothesis);
  if (hyp.empty()) return 0.0;
  const auto prem = words(premise);
  const std::set<std::string> vocab(prem.begin(), prem.end());
  std::size_t hits = 0;
  for (const auto& w : hyp) hits += vocab.count(w);
  return static_cast<double>(hits) / static_cast<double>(hyp.size());
}

adapters::NliTriple OverlapNliStub::do_infer(const std::string& premise,
                                             const std::string& hypothesis) {
  const double o = overlap(premise, hypothesis);
  const double entailment = 0.8 * o;
  const double contradiction = 0.1 * (1.0 - o);
  return {entailment, 1.0 - entailment - contradiction, contradiction};
}

adapters::NliTriple ScriptedNliStub::do_infer(const std::string&, const std::string&) {
  const std::size_t k = calls_.fetch_add(1);
  if (k >= neutrals_.size()) throw ProtocolError("scripted NLI stub exhausted");
  return {1.0 - neutrals_[k], neutrals_[k], 0.0};
}

TemplateGenerator::TemplateGenerator(std::map<SentimentLabel, std::string> templates)
    : templates_(std::move(templates)) {
  for (auto label : kAllLabels) {
    if (!templates_.count(label)) {
      throw ConfigError("template generator is missing cluster '" + std::string(to_string(label)) +
                        "'");
    }
  }
}

TemplateGenerator TemplateGenerator::defaults() {
  return TemplateGenerator({{SentimentLabel::kPositive, "that sounds wonderful."},
                            {SentimentLabel::kNeutral, "i see what you mean."},
                            {SentimentLabel::kNegative, "this is terrible."}});
}

std::string TemplateGenerator::do_generate(const adapters::GenerationRequest& request) {
  return templates_.at(request.cluster);
}

std::string ReverseEchoGenerator::do_generate(const adapters::GenerationRequest& request) {
  if (request.history.empty()) return "...";
  const auto& last = request.history.back().text;
  return std::string(last.rbegin(), last.rend());
}

adapters::TokenScore UniformScoreStub::do_score(const std::string& text) {
  std::istringstream in(text);
  std::string w;
  std::uint64_t n = 0;
  while (in >> w) ++n;
  return {n, log_prob_ * static_cast<double>(n)};
}

adapters::AdapterSet default_stub_set() {
  adapters::AdapterSet set;
  set.sentiment = std::make_shared<KeywordSentimentStub>(KeywordSentimentStub::defaults());
  set.nli = std::make_shared<OverlapNliStub>();
  set.generator = std::make_shared<TemplateGenerator>(TemplateGenerator::defaults());
  set.scorer = std::make_shared<UniformScoreStub>(-std::log(2.0));
  return set;
}

}  // namespace dramanet::stubs
