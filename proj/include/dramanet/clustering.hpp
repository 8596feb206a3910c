#pragma once

#include <array>
#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "dramanet/adapters.hpp"
#include "dramanet/preprocess.hpp"

namespace dramanet::clustering {

/// Counts indexed by SentimentLabel (positive, neutral, negative).
using LabelCounts = std::array<std::uint64_t, 3>;

/// Labels each utterance on its own (never concatenated), in order. Texts are
/// sent in batches of `batch_size`.
std::vector<SentimentLabel> label_utterances(const std::vector<std::string>& utterances,
                                             adapters::SentimentAdapter& classifier,
                                             std::size_t batch_size = 32);

/// Prevailing label. Ties go to neutral when neutral is among the leaders,
/// otherwise to positive. Throws ConfigError on an all-zero count.
SentimentLabel assign_cluster(const LabelCounts& counts);

/// Script id used for records pooled across scripts.
inline constexpr std::string_view kPooledScriptId = "*";

struct CharacterProfile {
  std::string script_id;
  std::string character_id;
  LabelCounts label_counts{};
  SentimentLabel assigned_cluster = SentimentLabel::kNeutral;

  std::uint64_t utterance_count() const;

  friend bool operator==(const CharacterProfile&, const CharacterProfile&) = default;
};

struct ClusterTable {
  bool pooled = false;
  /// Sorted by (script_id, character_id).
  std::vector<CharacterProfile> profiles;

  /// Cluster of every character usable for the given script.
  preprocess::ClusterMap for_script(const std::string& script_id) const;

  friend bool operator==(const ClusterTable&, const ClusterTable&) = default;
};

struct ClusterOptions {
  /// Pool a character's counts over every script in which the same
  /// normalized name appears. Off: characters are per-script.
  bool pool_across_scripts = false;
  std::size_t batch_size = 32;
};

ClusterTable cluster_corpus(const std::vector<preprocess::RawScript>& corpus,
                            adapters::SentimentAdapter& classifier, const ClusterOptions& options = {});

/// Tab-separated with header
/// "script_id character positive neutral negative cluster".
std::string render_cluster_table(const ClusterTable& table);
ClusterTable parse_cluster_table(std::string_view text);

}  // namespace dramanet::clustering
