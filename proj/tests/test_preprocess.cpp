#include <algorithm>
#include <filesystem>
#include <random>
#include <set>

#include "doctest.h"
#include "dramanet/io.hpp"
#include "dramanet/preprocess.hpp"

using namespace dramanet;
using namespace dramanet::preprocess;

namespace {

RawScript abc_script() {
  return parse_script("A: hello there\nB: hi\nC: go away\nA: fine\nB: ok then\n", "s1");
}

ClusterMap abc_clusters() {
  return {{"A", SentimentLabel::kPositive}, {"B", SentimentLabel::kPositive}, {"C", SentimentLabel::kNegative}};
}

}  // namespace

TEST_CASE("parse_script: two-line happy path") {
  auto s = parse_script("A: hi\nB: hello");
  CHECK(s.lines == std::vector<RawLine>{{"A", "hi"}, {"B", "hello"}});
}

TEST_CASE("parse_script: blank lines and stage directions are skipped") {
  auto s = parse_script("A: hi\n\n(door slams)\nB: hello");
  CHECK(s.lines == std::vector<RawLine>{{"A", "hi"}, {"B", "hello"}});
  auto t = parse_script("  mary :  well then  \r\n[exit]\nJOHN: (quietly) yes: indeed\n");
  CHECK(t.lines == std::vector<RawLine>{{"MARY", "well then"}, {"JOHN", "(quietly) yes: indeed"}});
}

TEST_CASE("parse_script: nothing parseable is a format error") {
  CHECK_THROWS_AS(parse_script(""), FormatError);
  CHECK_THROWS_AS(parse_script("\n\n(silence)\n"), FormatError);
}

TEST_CASE("render_script round trips") {
  auto s = abc_script();
  CHECK(parse_script(render_script(s), "s1") == s);
}

TEST_CASE("speakers are listed in order of first appearance") {
  CHECK(speakers(abc_script()) == std::vector<std::string>{"A", "B", "C"});
}

TEST_CASE("expand_instances: one instance per cluster member") {
  auto s = abc_script();
  auto pos = expand_instances(s, abc_clusters(), SentimentLabel::kPositive);
  REQUIRE(pos.size() == 2);
  CHECK(pos[0].focus_character == "A");
  CHECK(pos[1].focus_character == "B");
  auto neg = expand_instances(s, abc_clusters(), SentimentLabel::kNegative);
  REQUIRE(neg.size() == 1);
  CHECK(neg[0].focus_character == "C");
  CHECK(expand_instances(s, abc_clusters(), SentimentLabel::kNeutral).empty());

  // roles and verbatim text
  const auto& a = pos[0];
  REQUIRE(a.lines.size() == s.lines.size());
  for (std::size_t i = 0; i < s.lines.size(); ++i) {
    CHECK(a.lines[i].text == s.lines[i].text);
    CHECK((a.lines[i].role == Role::kFocus) == (s.lines[i].speaker == "A"));
  }
}

TEST_CASE("expand_instances: speaker without a cluster is a configuration error") {
  auto clusters = abc_clusters();
  clusters.erase("C");
  CHECK_THROWS_AS(expand_instances(abc_script(), clusters, SentimentLabel::kPositive), ConfigError);
}

TEST_CASE("property: count identity and role correctness on random scripts") {
  std::mt19937 gen(31);
  const std::vector<std::string> names = {"ANN", "BOB", "CY", "DEE", "ED"};
  for (int trial = 0; trial < 200; ++trial) {
    std::string raw;
    const int n_lines = 1 + static_cast<int>(gen() % 12);
    for (int i = 0; i < n_lines; ++i) raw += names[gen() % names.size()] + ": line " + std::to_string(i) + "\n";
    auto script = parse_script(raw, "t" + std::to_string(trial));
    ClusterMap clusters;
    for (const auto& n : names) clusters[n] = kAllLabels[gen() % 3];

    for (auto target : kAllLabels) {
      std::set<std::string> members;
      for (const auto& line : script.lines) {
        if (clusters.at(line.speaker) == target) members.insert(line.speaker);
      }
      auto instances = expand_instances(script, clusters, target);
      CHECK(instances.size() == members.size());
      for (const auto& inst : instances) {
        CHECK(inst.cluster == target);
        REQUIRE(inst.lines.size() == script.lines.size());
        for (std::size_t i = 0; i < inst.lines.size(); ++i) {
          CHECK((inst.lines[i].role == Role::kFocus) == (script.lines[i].speaker == inst.focus_character));
          CHECK(inst.lines[i].text == script.lines[i].text);
        }
      }
      // parse(emit(x)) == x, in the file's (script, focus) order
      std::sort(instances.begin(), instances.end(),
                [](const auto& l, const auto& r) { return l.focus_character < r.focus_character; });
      auto docs = parse_training_file(render_training_file(instances, target));
      REQUIRE(docs.size() == instances.size());
      for (std::size_t d = 0; d < docs.size(); ++d) CHECK(docs[d] == instances[d].lines);
    }
  }
}

TEST_CASE("render_training_file: layout and ordering") {
  TrainingInstance one{"s1", SentimentLabel::kPositive, "A", {{Role::kFocus, "hi"}, {Role::kOther, "hello"}}};
  CHECK(render_training_file({one}, SentimentLabel::kPositive) == "focus: hi\nother: hello\n\n");
  CHECK(render_training_file({}, SentimentLabel::kPositive).empty());

  TrainingInstance b{"s0", SentimentLabel::kPositive, "Z", {{Role::kFocus, "z"}}};
  TrainingInstance c{"s1", SentimentLabel::kPositive, "B", {{Role::kFocus, "b"}}};
  auto text = render_training_file({one, b, c}, SentimentLabel::kPositive);
  CHECK(text == "focus: z\n\nfocus: hi\nother: hello\n\nfocus: b\n\n");

  TrainingInstance wrong{"s1", SentimentLabel::kNegative, "C", {{Role::kFocus, "x"}}};
  CHECK_THROWS_AS(render_training_file({wrong}, SentimentLabel::kPositive), ConfigError);
}

TEST_CASE("parse_training_file rejects unprefixed lines") {
  CHECK_THROWS_AS(parse_training_file("focus: a\nnarrator: b\n\n"), FormatError);
  CHECK(parse_training_file("").empty());
}

TEST_CASE("emit_training_file and load_corpus use the filesystem") {
  const auto dir = std::filesystem::temp_directory_path() / "dramanet_test_preprocess";
  std::filesystem::remove_all(dir);
  io::write_file_atomic(dir / "b.txt", "A: two\n");
  io::write_file_atomic(dir / "a.txt", "A: one\nB: reply\n");
  io::write_file_atomic(dir / "notes.md", "ignored");
  auto corpus = load_corpus(dir);
  REQUIRE(corpus.size() == 2);
  CHECK(corpus[0].script_id == "a");
  CHECK(corpus[1].script_id == "b");

  auto instances = expand_instances(corpus[0], {{"A", SentimentLabel::kNeutral}, {"B", SentimentLabel::kNeutral}},
                                    SentimentLabel::kNeutral);
  emit_training_file(dir / "out" / "train.txt", instances, SentimentLabel::kNeutral);
  auto docs = parse_training_file(io::read_file(dir / "out" / "train.txt"));
  CHECK(docs.size() == 2);

  CHECK_THROWS_AS(load_corpus(dir / "missing"), ConfigError);
  std::filesystem::remove_all(dir);
}
