#include "dramanet/orchestration.hpp"

#include <set>

#include "dramanet/config.hpp"
#include "dramanet/preprocess.hpp"

namespace dramanet::orchestration {

using nlohmann::json;

namespace {

const dn::CharacterSpec& find_character(const std::vector<dn::CharacterSpec>& roster,
                                        const std::string& id) {
  for (const auto& c : roster) {
    if (c.id == id) return c;
  }
  throw ConfigError("speaker '" + id + "' is not in the roster");
}

// Generates the utterance for the next line, retrying empty generations with
// a bumped seed. Appends to script.lines; throws PartialScriptError on failure.
void fill_line(Script& script, ScriptLine line, adapters::Generator& generator,
               const GenerationOptions& options) {
  adapters::GenerationRequest request;
  request.cluster = find_character(script.roster, line.speaker_id).cluster;
  request.history = render_history(script.lines, line.speaker_id);
  request.max_new_tokens = options.max_new_tokens;
  request.seed = derive_seed(script.provenance.seed, script.lines.size());

  const std::string where = "line " + std::to_string(script.lines.size() + 1) + " (" +
                            line.speaker_id + ")";
  for (unsigned attempt = 0;; ++attempt) {
    try {
      line.text = generator.generate(request);
      break;
    } catch (const GenerationError& e) {
      if (attempt < options.retries) {
        ++request.seed;
        continue;
      }
      throw PartialScriptError(where + ": " + e.what(), script);
    } catch (const AdapterError& e) {
      throw PartialScriptError(where + ": " + e.what(), script);
    }
  }
  script.lines.push_back(std::move(line));
}

}  // namespace

std::string_view to_string(OrderingMode mode) { return mode == OrderingMode::kDn ? "dn" : "random"; }

OrderingMode parse_mode(std::string_view text) {
  if (text == "dn") return OrderingMode::kDn;
  if (text == "random") return OrderingMode::kRandom;
  throw ConfigError("ordering mode must be 'dn' or 'random', got '" + std::string(text) + "'");
}

std::vector<adapters::HistoryLine> render_history(const std::vector<ScriptLine>& lines,
                                                  const std::string& speaker) {
  std::vector<adapters::HistoryLine> history;
  history.reserve(lines.size());
  for (const auto& line : lines) {
    history.push_back({line.speaker_id == speaker ? Role::kFocus : Role::kOther, line.text});
  }
  return history;
}

std::vector<dn::CharacterSpec> default_roster() {
  return {{"A", SentimentLabel::kPositive},
          {"B", SentimentLabel::kNeutral},
          {"C", SentimentLabel::kNegative}};
}

void validate_roster(const std::vector<dn::CharacterSpec>& roster) {
  if (roster.size() < 2) throw ConfigError("roster needs at least 2 characters");
  std::set<std::string> seen;
  for (const auto& c : roster) {
    if (c.id.empty() || c.id != preprocess::normalize_speaker(c.id) ||
        c.id.find(':') != std::string::npos) {
      throw ConfigError("roster id '" + c.id +
                        "' must be an upper-case speaker name without ':' or surrounding spaces");
    }
    if (!seen.insert(c.id).second) throw ConfigError("duplicate roster id '" + c.id + "'");
  }
}

Script generate_script_dn(const std::vector<dn::CharacterSpec>& roster, const dn::DnConfig& dn_config,
                          adapters::Generator& generator, const GenerationOptions& options) {
  validate_roster(roster);
  auto simulation = dn::run_simulation(roster, dn_config);
  const auto& schedule = simulation.schedule;

  Script script;
  script.roster = roster;
  script.provenance.mode = OrderingMode::kDn;
  script.provenance.seed = dn_config.rng_seed;
  script.provenance.config = dn_config;
  script.provenance.terminated_by = schedule.terminated_by;
  for (const auto& turn : schedule.turns) {
    ScriptLine line;
    line.speaker_id = schedule.character_ids[turn.speaker];
    line.addressee_id = schedule.character_ids[turn.addressee];
    line.exchange_index = turn.exchange_index;
    fill_line(script, std::move(line), generator, options);
  }
  return script;
}

std::vector<std::size_t> sample_random_order(std::size_t roster_size, const RandomOrderConfig& config,
                                             Rng& rng) {
  if (roster_size == 0) throw ConfigError("roster is empty");
  const std::vector<double> uniform(roster_size, 1.0);
  std::vector<std::size_t> order;
  while (true) {
    order.push_back(rng.categorical(uniform));
    if (rng.bernoulli(config.end_probability)) break;
    if (order.size() >= config.max_lines) break;
  }
  return order;
}

Script generate_script_random(const std::vector<dn::CharacterSpec>& roster,
                              const RandomOrderConfig& length, adapters::Generator& generator,
                              std::uint64_t seed, const GenerationOptions& options) {
  validate_roster(roster);
  if (!(length.end_probability >= 0.0 && length.end_probability <= 1.0)) {
    throw ConfigError("end_probability must lie in [0,1]");
  }
  if (length.max_lines < 1) throw ConfigError("max_lines must be at least 1");

  Rng rng(seed);
  const auto order = sample_random_order(roster.size(), length, rng);

  Script script;
  script.roster = roster;
  script.provenance.mode = OrderingMode::kRandom;
  script.provenance.seed = seed;
  script.provenance.config = {{"end_probability", length.end_probability},
                              {"max_lines", length.max_lines}};
  for (auto index : order) {
    ScriptLine line;
    line.speaker_id = roster[index].id;
    fill_line(script, std::move(line), generator, options);
  }
  return script;
}

std::string render_script_text(const Script& script) {
  preprocess::RawScript raw;
  for (const auto& line : script.lines) raw.lines.push_back({line.speaker_id, line.text});
  return preprocess::render_script(raw);
}

json script_metadata(const Script& script) {
  json roster = json::array();
  for (const auto& c : script.roster) {
    roster.push_back({{"id", c.id}, {"cluster", std::string(dramanet::to_string(c.cluster))}});
  }
  json lines = json::array();
  for (const auto& line : script.lines) {
    json entry = {{"speaker", line.speaker_id}};
    entry["addressee"] = line.addressee_id ? json(*line.addressee_id) : json(nullptr);
    entry["exchange_index"] = line.exchange_index ? json(*line.exchange_index) : json(nullptr);
    lines.push_back(entry);
  }
  json meta = {{"mode", std::string(to_string(script.provenance.mode))},
               {"seed", script.provenance.seed},
               {"roster", roster},
               {"config", script.provenance.config},
               {"lines", lines}};
  meta["terminated_by"] = script.provenance.terminated_by
                              ? json(std::string(dn::to_string(*script.provenance.terminated_by)))
                              : json(nullptr);
  return meta;
}

Script read_script(std::string_view text, const json& metadata) {
  Script script;
  try {
    script.provenance.mode = parse_mode(metadata.at("mode").get<std::string>());
    script.provenance.seed = metadata.at("seed").get<std::uint64_t>();
    script.provenance.config = metadata.at("config");
    const auto& term = metadata.at("terminated_by");
    if (!term.is_null()) {
      script.provenance.terminated_by = term.get<std::string>() == "max_lines"
                                            ? dn::Termination::kMaxLines
                                            : dn::Termination::kEndProbability;
    }
    for (const auto& c : metadata.at("roster")) {
      script.roster.push_back(
          {c.at("id").get<std::string>(), label_or_throw(c.at("cluster").get<std::string>())});
    }
    const auto raw = preprocess::parse_script(text);
    const auto& lines = metadata.at("lines");
    if (lines.size() != raw.lines.size()) {
      throw FormatError("script text has " + std::to_string(raw.lines.size()) +
                        " lines but metadata lists " + std::to_string(lines.size()));
    }
    for (std::size_t i = 0; i < raw.lines.size(); ++i) {
      const auto& meta = lines[i];
      ScriptLine line;
      line.speaker_id = raw.lines[i].speaker;
      line.text = raw.lines[i].text;
      if (meta.at("speaker").get<std::string>() != line.speaker_id) {
        throw FormatError("speaker mismatch between text and metadata at line " +
                          std::to_string(i + 1));
      }
      if (!meta.at("addressee").is_null()) line.addressee_id = meta.at("addressee").get<std::string>();
      if (!meta.at("exchange_index").is_null()) {
        line.exchange_index = meta.at("exchange_index").get<std::uint32_t>();
      }
      find_character(script.roster, line.speaker_id);
      script.lines.push_back(std::move(line));
    }
  } catch (const json::exception& e) {
    throw FormatError(std::string("malformed script metadata: ") + e.what());
  } catch (const ConfigError& e) {
    throw FormatError(std::string("inconsistent script metadata: ") + e.what());
  }
  return script;
}

}  // namespace dramanet::orchestration
