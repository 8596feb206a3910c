#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "dramanet/adapters.hpp"
#include "dramanet/dn_engine.hpp"
#include "json.hpp"

namespace dramanet::orchestration {

enum class OrderingMode { kDn, kRandom };

std::string_view to_string(OrderingMode mode);
OrderingMode parse_mode(std::string_view text);

struct ScriptLine {
  std::string speaker_id;
  std::optional<std::string> addressee_id;
  std::optional<std::uint32_t> exchange_index;
  std::string text;

  friend bool operator==(const ScriptLine&, const ScriptLine&) = default;
};

struct Provenance {
  OrderingMode mode = OrderingMode::kDn;
  std::uint64_t seed = 0;
  /// Ordering parameters in effect (DN config, or random-mode length params).
  nlohmann::json config;
  std::optional<dn::Termination> terminated_by;

  friend bool operator==(const Provenance&, const Provenance&) = default;
};

struct Script {
  std::vector<ScriptLine> lines;
  std::vector<dn::CharacterSpec> roster;
  Provenance provenance;

  friend bool operator==(const Script&, const Script&) = default;
};

/// Raised when generation fails part-way; carries the lines completed so far.
class PartialScriptError : public AdapterError {
 public:
  PartialScriptError(const std::string& what, Script prefix)
      : AdapterError(what), prefix_(std::move(prefix)) {}

  const Script& prefix() const { return prefix_; }

 private:
  Script prefix_;
};

struct GenerationOptions {
  std::uint32_t max_new_tokens = 40;
  /// Extra attempts after a GenerationError, each with the request seed + 1.
  unsigned retries = 3;
};

/// History as seen by `speaker`: its own earlier lines are focus, all others other.
std::vector<adapters::HistoryLine> render_history(const std::vector<ScriptLine>& lines,
                                                  const std::string& speaker);

/// Three characters, one per cluster: A positive, B neutral, C negative.
std::vector<dn::CharacterSpec> default_roster();

/// Throws ConfigError unless ids are distinct, already normalized speaker
/// names, and there are at least two characters.
void validate_roster(const std::vector<dn::CharacterSpec>& roster);

/// Simulates a turn schedule with the DN engine (seeded by
/// dn_config.rng_seed), then fills each turn with a generated utterance.
Script generate_script_dn(const std::vector<dn::CharacterSpec>& roster, const dn::DnConfig& dn_config,
                          adapters::Generator& generator, const GenerationOptions& options = {});

struct RandomOrderConfig {
  double end_probability = 0.2;
  std::uint32_t max_lines = 200;
};

/// Speaker indices drawn i.i.d. uniform over the roster. After every line the
/// dialogue ends with probability end_probability (minimum one line).
std::vector<std::size_t> sample_random_order(std::size_t roster_size, const RandomOrderConfig& config,
                                             Rng& rng);

Script generate_script_random(const std::vector<dn::CharacterSpec>& roster,
                              const RandomOrderConfig& length, adapters::Generator& generator,
                              std::uint64_t seed, const GenerationOptions& options = {});

/// Corpus-format text ("NAME: utterance" per line).
std::string render_script_text(const Script& script);

/// Sidecar with mode, seed, roster, ordering config and per-line structure.
nlohmann::json script_metadata(const Script& script);

/// Rebuilds a Script from its corpus text and sidecar. Throws FormatError on
/// any disagreement between the two.
Script read_script(std::string_view text, const nlohmann::json& metadata);

}  // namespace dramanet::orchestration
