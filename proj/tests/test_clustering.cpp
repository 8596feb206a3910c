#include <algorithm>
#include <random>
#include <set>

#include "doctest.h"
#include "dramanet/clustering.hpp"
#include "dramanet/fixture.hpp"
#include "dramanet/stubs.hpp"

using namespace dramanet;
using namespace dramanet::clustering;
using preprocess::parse_script;

namespace {

stubs::KeywordSentimentStub great_stub() { return stubs::KeywordSentimentStub({"great"}, {"awful"}); }

// Counts how many texts it has been asked to classify, per call.
class CountingSentiment : public adapters::SentimentAdapter {
 public:
  std::vector<std::size_t> batch_sizes;

 protected:
  std::vector<adapters::SentimentResult> do_classify(const std::vector<std::string>& texts) override {
    batch_sizes.push_back(texts.size());
    std::vector<adapters::SentimentResult> out;
    for (const auto& t : texts) out.push_back(stubs::KeywordSentimentStub::defaults().classify_one(t));
    return out;
  }
};

}  // namespace

TEST_CASE("label_utterances with a keyword stub") {
  auto stub = great_stub();
  CHECK(label_utterances({"great day", "ok"}, stub) ==
        std::vector<SentimentLabel>{SentimentLabel::kPositive, SentimentLabel::kNeutral});
  CHECK(label_utterances({}, stub).empty());
}

TEST_CASE("label_utterances batches but never merges texts") {
  CountingSentiment counting;
  std::vector<std::string> texts(70, "hello");
  auto labels = label_utterances(texts, counting, 32);
  CHECK(labels.size() == 70);
  CHECK(counting.batch_sizes == std::vector<std::size_t>{32, 32, 6});
}

TEST_CASE("label_utterances replays recorded fixture labels in order") {
  auto store = std::make_shared<adapters::FixtureStore>();
  store->put_sentiment("one", {SentimentLabel::kNegative, {0.1, 0.2, 0.7}});
  store->put_sentiment("two", {SentimentLabel::kPositive, {0.6, 0.3, 0.1}});
  store->put_sentiment("three", {SentimentLabel::kNeutral, {0.2, 0.5, 0.3}});
  adapters::FixtureAdapter replay(store);
  CHECK(label_utterances({"two", "three", "one"}, replay, 2) ==
        std::vector<SentimentLabel>{SentimentLabel::kPositive, SentimentLabel::kNeutral, SentimentLabel::kNegative});
  CHECK_THROWS_AS(label_utterances({"four"}, replay), ProtocolError);
}

TEST_CASE("assign_cluster: majority and tie-breaks") {
  CHECK(assign_cluster({2, 1, 0}) == SentimentLabel::kPositive);
  CHECK(assign_cluster({1, 0, 1}) == SentimentLabel::kPositive);
  CHECK(assign_cluster({2, 2, 1}) == SentimentLabel::kNeutral);
  CHECK(assign_cluster({0, 1, 1}) == SentimentLabel::kNeutral);
  CHECK(assign_cluster({1, 1, 1}) == SentimentLabel::kNeutral);
  CHECK(assign_cluster({0, 0, 3}) == SentimentLabel::kNegative);
  CHECK_THROWS_AS(assign_cluster({0, 0, 0}), ConfigError);
}

TEST_CASE("cluster_corpus: single all-positive character") {
  auto stub = great_stub();
  auto table = cluster_corpus({parse_script("A: great\nA: so great", "s")}, stub);
  REQUIRE(table.profiles.size() == 1);
  CHECK(table.profiles[0].character_id == "A");
  CHECK(table.profiles[0].assigned_cluster == SentimentLabel::kPositive);
  CHECK(table.for_script("s") == preprocess::ClusterMap{{"A", SentimentLabel::kPositive}});
}

TEST_CASE("cluster_corpus: pooling across scripts") {
  auto stub = great_stub();
  std::vector<preprocess::RawScript> corpus = {
      parse_script("A: great\nB: awful", "s1"),
      parse_script("A: awful\nA: awful\nB: great", "s2"),
  };
  auto separate = cluster_corpus(corpus, stub);
  CHECK(separate.for_script("s1").at("A") == SentimentLabel::kPositive);
  CHECK(separate.for_script("s2").at("A") == SentimentLabel::kNegative);

  auto pooled = cluster_corpus(corpus, stub, {.pool_across_scripts = true});
  CHECK(pooled.pooled);
  // A: 1 positive + 2 negative -> negative; B: 1 + 1 tie -> positive
  CHECK(pooled.for_script("s1").at("A") == SentimentLabel::kNegative);
  CHECK(pooled.for_script("s2").at("A") == SentimentLabel::kNegative);
  CHECK(pooled.for_script("s1").at("B") == SentimentLabel::kPositive);
  REQUIRE(pooled.profiles.size() == 2);
  CHECK(pooled.profiles[0].label_counts == LabelCounts{1, 0, 2});
}

TEST_CASE("property: partition, purity and permutation invariance") {
  std::mt19937 gen(8);
  const std::vector<std::string> words = {"great", "awful", "fine", "meh", "love", "hate"};
  const std::vector<std::string> names = {"A", "B", "C", "D"};
  auto stub = stubs::KeywordSentimentStub::defaults();
  for (int trial = 0; trial < 50; ++trial) {
    std::vector<std::pair<std::string, std::string>> lines;
    const int n = 1 + static_cast<int>(gen() % 15);
    for (int i = 0; i < n; ++i) lines.emplace_back(names[gen() % names.size()], words[gen() % words.size()]);
    auto render = [&] {
      std::string raw;
      for (const auto& [who, what] : lines) raw += who + ": " + what + "\n";
      return parse_script(raw, "x");
    };
    auto first = cluster_corpus({render()}, stub);
    CHECK(cluster_corpus({render()}, stub) == first);

    std::set<std::string> speaking;
    for (const auto& [who, what] : lines) speaking.insert(who);
    std::set<std::string> clustered;
    for (const auto& p : first.profiles) CHECK(clustered.insert(p.character_id).second);
    CHECK(clustered == speaking);

    std::shuffle(lines.begin(), lines.end(), gen);
    CHECK(cluster_corpus({render()}, stub).for_script("x") == first.for_script("x"));
  }
}

TEST_CASE("cluster table round trip") {
  auto stub = great_stub();
  auto table = cluster_corpus({parse_script("A: great\nB: x", "s1"), parse_script("A: awful", "s2")}, stub);
  auto text = render_cluster_table(table);
  CHECK(text.rfind("script_id\tcharacter\tpositive\tneutral\tnegative\tcluster\n", 0) == 0);
  CHECK(parse_cluster_table(text) == table);
  CHECK_THROWS_AS(parse_cluster_table("nonsense\n"), FormatError);
}
