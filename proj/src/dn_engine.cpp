#include "dramanet/dn_engine.hpp"

#include <algorithm>
#include <cmath>
#include <istream>
#include <ostream>
#include <set>
#include <thread>

namespace dramanet::dn {

namespace {

bool is_probability(double p) { return std::isfinite(p) && p >= 0.0 && p <= 1.0; }

void validate_reciprocity(const ReciprocityParams& params, const std::string& where) {
  if (!is_probability(params.init)) {
    throw ConfigError(where + ": reciprocity init must lie in [0,1]");
  }
  if (!(std::isfinite(params.decay) && params.decay > 0.0 && params.decay < 1.0)) {
    throw ConfigError(where + ": reciprocity decay must lie in (0,1)");
  }
}

std::vector<std::string> split_tabs(const std::string& line) {
  std::vector<std::string> fields;
  std::size_t start = 0;
  while (true) {
    auto tab = line.find('\t', start);
    fields.push_back(line.substr(start, tab - start));
    if (tab == std::string::npos) break;
    start = tab + 1;
  }
  return fields;
}

}  // namespace

ReciprocityParams DnConfig::reciprocity_for(const std::string& character_id) const {
  auto it = reciprocity_overrides.find(character_id);
  return it == reciprocity_overrides.end() ? reciprocity : it->second;
}

void DnConfig::validate() const {
  if (!is_probability(end_probability)) throw ConfigError("dn.end_probability must lie in [0,1]");
  if (!(std::isfinite(centrality_init) && centrality_init >= 0.0)) {
    throw ConfigError("dn.centrality_init must be non-negative");
  }
  if (!(std::isfinite(centrality_increment) && centrality_increment > 0.0)) {
    throw ConfigError("dn.centrality_increment must be positive");
  }
  // A zero boost is accepted as the identity update.
  if (!(std::isfinite(loyalty_boost) && loyalty_boost >= 0.0)) {
    throw ConfigError("dn.loyalty_boost must be non-negative");
  }
  if (max_lines < 1) throw ConfigError("dn.max_lines must be at least 1");
  validate_reciprocity(reciprocity, "dn");
  for (const auto& [id, params] : reciprocity_overrides) {
    validate_reciprocity(params, "dn.reciprocity_overrides." + id);
  }
}

void decay_reciprocity(CharacterState& state) {
  state.reciprocity_current *= state.reciprocity_params.decay;
}

void reset_reciprocity(CharacterState& state) {
  state.reciprocity_current = state.reciprocity_params.init;
}

NetworkState::NetworkState(const std::vector<CharacterSpec>& characters, const DnConfig& config)
    : config_(config) {
  config_.validate();
  if (characters.size() < 2) {
    throw ConfigError("a dramatic network needs at least 2 characters, got " +
                      std::to_string(characters.size()));
  }
  std::set<std::string> seen;
  for (const auto& spec : characters) {
    if (spec.id.empty()) throw ConfigError("character id must not be empty");
    if (!seen.insert(spec.id).second) throw ConfigError("duplicate character id '" + spec.id + "'");
  }
  for (const auto& [id, params] : config_.reciprocity_overrides) {
    if (!seen.count(id)) {
      throw ConfigError("reciprocity override for unknown character '" + id + "'");
    }
  }

  const std::size_t n = characters.size();
  characters_.reserve(n);
  for (CharacterIndex i = 0; i < n; ++i) {
    CharacterState state;
    state.id = characters[i].id;
    state.cluster = characters[i].cluster;
    for (CharacterIndex j = 0; j < n; ++j) {
      if (j != i) state.addressees.push_back(j);
    }
    state.loyalty.assign(n - 1, 1.0 / static_cast<double>(n - 1));
    state.reciprocity_params = config_.reciprocity_for(state.id);
    reset_reciprocity(state);
    characters_.push_back(std::move(state));
  }
}

CharacterIndex NetworkState::index_of(const std::string& id) const {
  for (CharacterIndex i = 0; i < characters_.size(); ++i) {
    if (characters_[i].id == id) return i;
  }
  throw ConfigError("unknown character '" + id + "'");
}

double NetworkState::centrality(CharacterIndex i) const {
  return config_.centrality_init +
         config_.centrality_increment * static_cast<double>(characters_.at(i).lines_spoken);
}

std::vector<double> NetworkState::centralities() const {
  std::vector<double> out(characters_.size());
  for (CharacterIndex i = 0; i < out.size(); ++i) out[i] = centrality(i);
  return out;
}

double NetworkState::loyalty(CharacterIndex speaker, CharacterIndex addressee) const {
  const auto& state = characters_.at(speaker);
  for (std::size_t k = 0; k < state.addressees.size(); ++k) {
    if (state.addressees[k] == addressee) return state.loyalty[k];
  }
  return 0.0;
}

void NetworkState::record_line(CharacterIndex speaker, CharacterIndex addressee) {
  auto& state = characters_.at(speaker);
  auto it = std::find(state.addressees.begin(), state.addressees.end(), addressee);
  if (it == state.addressees.end()) {
    throw ConfigError("character '" + state.id + "' cannot address itself or an unknown index");
  }
  const auto slot = static_cast<std::size_t>(it - state.addressees.begin());
  state.loyalty[slot] += config_.loyalty_boost;
  double sum = 0.0;
  for (double w : state.loyalty) sum += w;
  for (double& w : state.loyalty) w /= sum;
  ++state.lines_spoken;
}

CharacterIndex NetworkState::select_initiator(Rng& rng) const {
  const auto weights = centralities();
  try {
    return rng.categorical(weights);
  } catch (const DegenerateStateError&) {
    throw DegenerateStateError("all centralities are zero; no initiator can be chosen");
  }
}

CharacterIndex NetworkState::select_addressee(CharacterIndex initiator, Rng& rng) const {
  const auto& state = characters_.at(initiator);
  return state.addressees[rng.categorical(state.loyalty)];
}

std::string_view to_string(Termination termination) {
  return termination == Termination::kMaxLines ? "max_lines" : "end_probability";
}

std::vector<std::uint32_t> exchange_lengths(const TurnSchedule& schedule) {
  std::vector<std::uint32_t> lengths;
  for (std::size_t i = 0; i < schedule.turns.size(); ++i) {
    if (i == 0 || schedule.turns[i].exchange_index != schedule.turns[i - 1].exchange_index) {
      lengths.push_back(0);
    }
    ++lengths.back();
  }
  return lengths;
}

std::optional<std::string> check_schedule(const TurnSchedule& schedule, std::uint32_t max_lines) {
  const auto& turns = schedule.turns;
  if (turns.empty()) return "schedule is empty";
  if (turns.size() > max_lines) return "schedule longer than max_lines";
  if (turns.front().exchange_index != 0) return "first exchange index is not 0";
  for (std::size_t i = 0; i < turns.size(); ++i) {
    const auto& t = turns[i];
    if (t.speaker == t.addressee) return "turn " + std::to_string(i) + " addresses its speaker";
    if (i == 0) continue;
    const auto& prev = turns[i - 1];
    if (t.exchange_index == prev.exchange_index) {
      if (t.speaker != prev.addressee || t.addressee != prev.speaker) {
        return "turn " + std::to_string(i) + " breaks exchange alternation";
      }
    } else if (t.exchange_index != prev.exchange_index + 1) {
      return "turn " + std::to_string(i) + " skips an exchange index";
    }
  }
  return std::nullopt;
}

SimulationResult run_simulation(const std::vector<CharacterSpec>& characters, const DnConfig& config) {
  Rng rng(config.rng_seed);
  return run_simulation(characters, config, rng);
}

SimulationResult run_simulation(const std::vector<CharacterSpec>& characters, const DnConfig& config,
                                Rng& rng) {
  NetworkState state(characters, config);
  TurnSchedule schedule;
  for (const auto& c : state.characters()) schedule.character_ids.push_back(c.id);

  std::uint32_t exchange = 0;
  while (true) {
    CharacterIndex speaker = state.select_initiator(rng);
    CharacterIndex listener = state.select_addressee(speaker, rng);
    while (true) {
      schedule.turns.push_back({speaker, listener, exchange});
      state.record_line(speaker, listener);
      // The end check precedes the reply gate so the total line count is
      // geometric in end_probability.
      if (rng.bernoulli(config.end_probability)) {
        schedule.terminated_by = Termination::kEndProbability;
        return {std::move(schedule), std::move(state)};
      }
      if (schedule.turns.size() >= config.max_lines) {
        schedule.terminated_by = Termination::kMaxLines;
        return {std::move(schedule), std::move(state)};
      }
      // Reply gate uses the listener's reciprocity before this line's decay.
      if (rng.bernoulli(state.character(listener).reciprocity_current)) {
        decay_reciprocity(state.character(speaker));
        decay_reciprocity(state.character(listener));
        std::swap(speaker, listener);
        continue;
      }
      reset_reciprocity(state.character(speaker));
      reset_reciprocity(state.character(listener));
      ++exchange;
      break;
    }
  }
}

std::vector<SimulationResult> run_batch(const std::vector<CharacterSpec>& characters,
                                        const DnConfig& config, std::size_t count,
                                        unsigned threads) {
  // Validate once up front so worker threads never throw on config.
  NetworkState probe(characters, config);
  (void)probe;

  if (threads == 0) threads = std::max(1u, std::thread::hardware_concurrency());
  threads = static_cast<unsigned>(std::min<std::size_t>(threads, std::max<std::size_t>(count, 1)));

  std::vector<std::optional<SimulationResult>> slots(count);
  auto worker = [&](std::size_t begin, std::size_t end) {
    DnConfig local = config;
    for (std::size_t i = begin; i < end; ++i) {
      local.rng_seed = derive_seed(config.rng_seed, i);
      slots[i].emplace(run_simulation(characters, local));
    }
  };

  std::vector<std::thread> pool;
  const std::size_t chunk = (count + threads - 1) / std::max(threads, 1u);
  for (unsigned t = 0; t < threads; ++t) {
    const std::size_t begin = t * chunk;
    const std::size_t end = std::min(count, begin + chunk);
    if (begin >= end) break;
    pool.emplace_back(worker, begin, end);
  }
  for (auto& th : pool) th.join();

  std::vector<SimulationResult> results;
  results.reserve(count);
  for (auto& slot : slots) results.push_back(std::move(*slot));
  return results;
}

void write_schedule(std::ostream& out, const TurnSchedule& schedule) {
  out << "# characters";
  for (const auto& id : schedule.character_ids) out << '\t' << id;
  out << '\n';
  out << "# terminated_by\t" << to_string(schedule.terminated_by) << '\n';
  for (const auto& t : schedule.turns) {
    out << t.exchange_index << '\t' << schedule.character_ids.at(t.speaker) << '\t'
        << schedule.character_ids.at(t.addressee) << '\n';
  }
}

TurnSchedule read_schedule(std::istream& in) {
  TurnSchedule schedule;
  std::string line;
  std::size_t line_no = 0;
  auto index_of = [&](const std::string& id) -> CharacterIndex {
    auto it = std::find(schedule.character_ids.begin(), schedule.character_ids.end(), id);
    if (it == schedule.character_ids.end()) {
      throw FormatError("schedule line " + std::to_string(line_no) + ": unknown character '" + id +
                        "'");
    }
    return static_cast<CharacterIndex>(it - schedule.character_ids.begin());
  };
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    auto fields = split_tabs(line);
    if (fields[0] == "# characters") {
      schedule.character_ids.assign(fields.begin() + 1, fields.end());
      continue;
    }
    if (fields[0] == "# terminated_by") {
      if (fields.size() != 2) throw FormatError("malformed terminated_by header");
      if (fields[1] == "max_lines") {
        schedule.terminated_by = Termination::kMaxLines;
      } else if (fields[1] == "end_probability") {
        schedule.terminated_by = Termination::kEndProbability;
      } else {
        throw FormatError("unknown termination '" + fields[1] + "'");
      }
      continue;
    }
    if (fields.size() != 3) {
      throw FormatError("schedule line " + std::to_string(line_no) + ": expected 3 fields");
    }
    Turn turn;
    try {
      turn.exchange_index = static_cast<std::uint32_t>(std::stoul(fields[0]));
    } catch (const std::exception&) {
      throw FormatError("schedule line " + std::to_string(line_no) + ": bad exchange index");
    }
    turn.speaker = index_of(fields[1]);
    turn.addressee = index_of(fields[2]);
    schedule.turns.push_back(turn);
  }
  return schedule;
}

}  // namespace dramanet::dn
