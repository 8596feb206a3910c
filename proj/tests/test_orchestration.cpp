#include <cmath>

#include "doctest.h"
#include "dramanet/orchestration.hpp"
#include "dramanet/stubs.hpp"

using namespace dramanet;
using namespace dramanet::orchestration;

namespace {

// Remembers every request and answers with a deterministic echo.
class LoggingGenerator : public adapters::Generator {
 public:
  std::vector<adapters::GenerationRequest> requests;

 protected:
  std::string do_generate(const adapters::GenerationRequest& request) override {
    requests.push_back(request);
    return std::string(to_string(request.cluster)) + " " + std::to_string(request.history.size());
  }
};

// Empty output for the first `empties` calls, then a fixed line.
class FlakyGenerator : public adapters::Generator {
 public:
  explicit FlakyGenerator(int empties) : empties_(empties) {}
  std::vector<std::uint64_t> seeds;

 protected:
  std::string do_generate(const adapters::GenerationRequest& request) override {
    seeds.push_back(request.seed);
    return static_cast<int>(seeds.size()) <= empties_ ? "  \n" : "fine.";
  }

 private:
  int empties_;
};

// Fails with a transport error on call `fail_at` (1-based).
class DyingGenerator : public adapters::Generator {
 public:
  explicit DyingGenerator(int fail_at) : fail_at_(fail_at) {}

 protected:
  std::string do_generate(const adapters::GenerationRequest&) override {
    if (++calls_ == fail_at_) throw TransportError("connection reset");
    return "ok.";
  }

 private:
  int fail_at_;
  int calls_ = 0;
};

dn::DnConfig seeded(std::uint64_t seed) {
  dn::DnConfig c;
  c.rng_seed = seed;
  return c;
}

}  // namespace

TEST_CASE("end_probability 1 gives one line in the initiator's cluster voice") {
  auto templates = stubs::TemplateGenerator::defaults();
  auto config = seeded(0);
  config.end_probability = 1.0;
  for (std::uint64_t s = 0; s < 20; ++s) {
    config.rng_seed = s;
    auto script = generate_script_dn(default_roster(), config, templates);
    REQUIRE(script.lines.size() == 1);
    const auto& line = script.lines[0];
    SentimentLabel cluster{};
    for (const auto& c : script.roster) {
      if (c.id == line.speaker_id) cluster = c.cluster;
    }
    CHECK(line.text == templates.template_for(cluster));
    CHECK(line.exchange_index == 0u);
    CHECK(line.addressee_id.has_value());
  }
}

TEST_CASE("fixed seed and stubs give identical scripts") {
  auto templates = stubs::TemplateGenerator::defaults();
  stubs::ReverseEchoGenerator echo;
  CHECK(generate_script_dn(default_roster(), seeded(17), templates) ==
        generate_script_dn(default_roster(), seeded(17), templates));
  CHECK(generate_script_dn(default_roster(), seeded(17), echo) ==
        generate_script_dn(default_roster(), seeded(17), echo));
  CHECK(generate_script_random(default_roster(), {}, echo, 17) ==
        generate_script_random(default_roster(), {}, echo, 17));
}

TEST_CASE("history for turn 4 of [A,B,A,C] from C's view is all other") {
  std::vector<ScriptLine> lines = {{"A", {}, {}, "one"}, {"B", {}, {}, "two"}, {"A", {}, {}, "three"}};
  auto history = render_history(lines, "C");
  REQUIRE(history.size() == 3);
  for (const auto& h : history) CHECK(h.role == Role::kOther);
  auto from_a = render_history(lines, "A");
  CHECK(from_a[0].role == Role::kFocus);
  CHECK(from_a[1].role == Role::kOther);
  CHECK(from_a[2].role == Role::kFocus);
  CHECK(from_a[2].text == "three");
}

TEST_CASE("property: every request carries the speaker's cluster and its own-lines-focus history") {
  for (auto mode : {OrderingMode::kDn, OrderingMode::kRandom}) {
    for (std::uint64_t seed = 0; seed < 30; ++seed) {
      LoggingGenerator gen;
      auto config = seeded(seed);
      config.end_probability = 0.1;
      auto script = mode == OrderingMode::kDn ? generate_script_dn(default_roster(), config, gen)
                                              : generate_script_random(default_roster(), {0.1, 200}, gen, seed);
      REQUIRE(gen.requests.size() == script.lines.size());
      for (std::size_t i = 0; i < script.lines.size(); ++i) {
        const auto& req = gen.requests[i];
        const auto& speaker = script.lines[i].speaker_id;
        for (const auto& c : script.roster) {
          if (c.id == speaker) CHECK(req.cluster == c.cluster);
        }
        REQUIRE(req.history.size() == i);
        for (std::size_t j = 0; j < i; ++j) {
          CHECK((req.history[j].role == Role::kFocus) == (script.lines[j].speaker_id == speaker));
          CHECK(req.history[j].text == script.lines[j].text);
        }
      }
    }
  }
}

TEST_CASE("utterance text depends only on cluster and history") {
  // Two different DN configurations; whenever the generator sees the same
  // request it must produce the same text.
  auto a = seeded(3);
  auto b = seeded(3);
  b.loyalty_boost = 4.0;
  b.reciprocity = {0.5, 0.9};
  LoggingGenerator ga;
  LoggingGenerator gb;
  auto sa = generate_script_dn(default_roster(), a, ga);
  auto sb = generate_script_dn(default_roster(), b, gb);
  for (std::size_t i = 0; i < std::min(sa.lines.size(), sb.lines.size()); ++i) {
    if (ga.requests[i].cluster == gb.requests[i].cluster && ga.requests[i].history == gb.requests[i].history) {
      CHECK(sa.lines[i].text == sb.lines[i].text);
    }
  }
}

TEST_CASE("random order: uniform speakers per position and geometric length") {
  Rng rng(2718);
  constexpr int kRuns = 100'000;
  std::array<std::array<double, 3>, 3> counts{};
  std::array<double, 3> totals{};
  double length = 0.0;
  for (int r = 0; r < kRuns; ++r) {
    auto order = sample_random_order(3, {}, rng);
    length += static_cast<double>(order.size());
    for (std::size_t pos = 0; pos < std::min<std::size_t>(order.size(), 3); ++pos) {
      counts[pos][order[pos]] += 1.0;
      totals[pos] += 1.0;
    }
  }
  CHECK(std::abs(length / kRuns - 5.0) <= 0.05);
  for (std::size_t pos = 0; pos < 3; ++pos) {
    for (std::size_t who = 0; who < 3; ++who) {
      CHECK(std::abs(counts[pos][who] / totals[pos] - 1.0 / 3) <= 0.01);
    }
  }
}

TEST_CASE("random scripts carry no exchange structure") {
  stubs::ReverseEchoGenerator echo;
  auto script = generate_script_random(default_roster(), {}, echo, 5);
  CHECK(script.provenance.mode == OrderingMode::kRandom);
  CHECK_FALSE(script.provenance.terminated_by.has_value());
  for (const auto& line : script.lines) {
    CHECK_FALSE(line.addressee_id.has_value());
    CHECK_FALSE(line.exchange_index.has_value());
  }
}

TEST_CASE("empty generations are retried with a bumped seed") {
  auto config = seeded(1);
  config.end_probability = 1.0;
  FlakyGenerator flaky(2);
  auto script = generate_script_dn(default_roster(), config, flaky);
  CHECK(script.lines.at(0).text == "fine.");
  REQUIRE(flaky.seeds.size() == 3);
  CHECK(flaky.seeds[1] == flaky.seeds[0] + 1);
  CHECK(flaky.seeds[2] == flaky.seeds[0] + 2);

  FlakyGenerator hopeless(100);
  CHECK_THROWS_AS(generate_script_dn(default_roster(), config, hopeless, {40, 3}), PartialScriptError);
  CHECK(hopeless.seeds.size() == 4);
}

TEST_CASE("adapter failure mid-script reports the completed prefix") {
  auto config = seeded(4);
  config.end_probability = 1e-6;
  config.max_lines = 10;
  DyingGenerator dying(4);
  try {
    generate_script_dn(default_roster(), config, dying);
    FAIL("expected PartialScriptError");
  } catch (const PartialScriptError& e) {
    CHECK(e.prefix().lines.size() == 3);
    CHECK(std::string(e.what()).find("line 4") != std::string::npos);
  }
}

TEST_CASE("roster validation") {
  stubs::ReverseEchoGenerator echo;
  CHECK_THROWS_AS(generate_script_dn({{"A", SentimentLabel::kPositive}}, seeded(0), echo), ConfigError);
  CHECK_THROWS_AS(
      generate_script_dn({{"a", SentimentLabel::kPositive}, {"B", SentimentLabel::kNeutral}}, seeded(0), echo),
      ConfigError);
  CHECK_THROWS_AS(
      generate_script_random({{"A", SentimentLabel::kPositive}, {"A", SentimentLabel::kNeutral}}, {}, echo, 0),
      ConfigError);
  CHECK(parse_mode("dn") == OrderingMode::kDn);
  CHECK_THROWS_AS(parse_mode("chaos"), ConfigError);
}

TEST_CASE("script text and sidecar round trip") {
  stubs::ReverseEchoGenerator echo;
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    auto dn_script = generate_script_dn(default_roster(), seeded(seed), echo);
    CHECK(read_script(render_script_text(dn_script), script_metadata(dn_script)) == dn_script);
    auto rnd = generate_script_random(default_roster(), {}, echo, seed);
    CHECK(read_script(render_script_text(rnd), script_metadata(rnd)) == rnd);
  }
  auto script = generate_script_dn(default_roster(), seeded(1), echo);
  auto meta = script_metadata(script);
  CHECK(meta.at("mode") == "dn");
  CHECK(meta.at("seed") == 1);
  auto text = render_script_text(script);
  CHECK(text.rfind(script.lines[0].speaker_id + ": ", 0) == 0);
  CHECK_THROWS_AS(read_script("Z: who\n", meta), FormatError);
}
