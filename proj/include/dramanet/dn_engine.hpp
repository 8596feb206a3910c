#pragma once

// Dramatic-network turn-taking model.
//
// Each character carries a centrality weight (chance of opening an exchange),
// a loyalty distribution over the other characters (choice of addressee) and
// a reciprocity probability (chance of replying when addressed). A dialogue
// is a sequence of exchanges; each exchange alternates between two characters
// until a reply check fails, and the whole dialogue ends after any line with
// a fixed probability.

#include <cstdint>
#include <iosfwd>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "dramanet/common.hpp"
#include "dramanet/rng.hpp"

namespace dramanet::dn {

struct ReciprocityParams {
  double init = 0.95;
  double decay = 2.0 / 3.0;
};

struct DnConfig {
  double end_probability = 0.2;
  double centrality_init = 1.0;
  double centrality_increment = 1.0;
  double loyalty_boost = 0.5;
  /// Default reciprocity parameters; individual characters may override.
  ReciprocityParams reciprocity;
  std::map<std::string, ReciprocityParams> reciprocity_overrides;
  std::uint32_t max_lines = 200;
  std::uint64_t rng_seed = 0;

  ReciprocityParams reciprocity_for(const std::string& character_id) const;

  /// Throws ConfigError on any out-of-range field.
  void validate() const;
};

struct CharacterSpec {
  std::string id;
  SentimentLabel cluster = SentimentLabel::kNeutral;

  friend bool operator==(const CharacterSpec&, const CharacterSpec&) = default;
};

using CharacterIndex = std::size_t;

struct CharacterState {
  std::string id;
  SentimentLabel cluster = SentimentLabel::kNeutral;
  /// Indices of the other characters, ascending; parallel to `loyalty`.
  std::vector<CharacterIndex> addressees;
  std::vector<double> loyalty;
  ReciprocityParams reciprocity_params;
  double reciprocity_current = 0.0;
  std::uint64_t lines_spoken = 0;
};

void decay_reciprocity(CharacterState& state);
void reset_reciprocity(CharacterState& state);

class NetworkState {
 public:
  /// Throws ConfigError for fewer than two characters, duplicate ids, or an
  /// invalid config.
  NetworkState(const std::vector<CharacterSpec>& characters, const DnConfig& config);

  std::size_t size() const { return characters_.size(); }
  const CharacterState& character(CharacterIndex i) const { return characters_.at(i); }
  CharacterState& character(CharacterIndex i) { return characters_.at(i); }
  const std::vector<CharacterState>& characters() const { return characters_; }
  CharacterIndex index_of(const std::string& id) const;

  /// Always init + increment * lines_spoken, so the bookkeeping identity is
  /// exact regardless of how many lines were recorded.
  double centrality(CharacterIndex i) const;
  std::vector<double> centralities() const;

  /// Loyalty weight of `speaker` toward `addressee` (0 for self).
  double loyalty(CharacterIndex speaker, CharacterIndex addressee) const;

  /// Bumps the speaker's centrality and boosts its loyalty toward the
  /// addressee (additive boost, then renormalize the row).
  void record_line(CharacterIndex speaker, CharacterIndex addressee);

  CharacterIndex select_initiator(Rng& rng) const;
  CharacterIndex select_addressee(CharacterIndex initiator, Rng& rng) const;

  const DnConfig& config() const { return config_; }

 private:
  DnConfig config_;
  std::vector<CharacterState> characters_;
};

enum class Termination { kEndProbability, kMaxLines };

std::string_view to_string(Termination termination);

struct Turn {
  CharacterIndex speaker = 0;
  CharacterIndex addressee = 0;
  std::uint32_t exchange_index = 0;

  friend bool operator==(const Turn&, const Turn&) = default;
};

struct TurnSchedule {
  /// Character ids, indexed by CharacterIndex.
  std::vector<std::string> character_ids;
  std::vector<Turn> turns;
  Termination terminated_by = Termination::kEndProbability;

  friend bool operator==(const TurnSchedule&, const TurnSchedule&) = default;
};

/// Lengths of consecutive exchanges, in order.
std::vector<std::uint32_t> exchange_lengths(const TurnSchedule& schedule);

/// Returns a description of the first violated schedule invariant, if any.
std::optional<std::string> check_schedule(const TurnSchedule& schedule, std::uint32_t max_lines);

struct SimulationResult {
  TurnSchedule schedule;
  NetworkState final_state;
};

/// Runs one dialogue seeded from config.rng_seed.
SimulationResult run_simulation(const std::vector<CharacterSpec>& characters, const DnConfig& config);

/// Same dynamics driven by a caller-owned generator.
SimulationResult run_simulation(const std::vector<CharacterSpec>& characters, const DnConfig& config,
                                Rng& rng);

/// Runs `count` independent dialogues; run i is seeded with
/// derive_seed(config.rng_seed, i). Output is independent of `threads`.
std::vector<SimulationResult> run_batch(const std::vector<CharacterSpec>& characters,
                                        const DnConfig& config, std::size_t count,
                                        unsigned threads = 0);

/// Line-oriented record format: "# characters<TAB>id..." and
/// "# terminated_by<TAB>value" headers, then one
/// "exchange_index<TAB>speaker_id<TAB>addressee_id" line per turn.
void write_schedule(std::ostream& out, const TurnSchedule& schedule);
TurnSchedule read_schedule(std::istream& in);

}  // namespace dramanet::dn
