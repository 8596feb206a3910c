#pragma once

#include <filesystem>
#include <map>
#include <string>
#include <string_view>
#include <vector>

#include "dramanet/common.hpp"

namespace dramanet::preprocess {

struct RawLine {
  std::string speaker;  // normalized: trimmed, upper case
  std::string text;     // trimmed, non-empty

  friend bool operator==(const RawLine&, const RawLine&) = default;
};

struct RawScript {
  std::string script_id;
  std::vector<RawLine> lines;

  friend bool operator==(const RawScript&, const RawScript&) = default;
};

/// Trims and upper-cases a speaker name.
std::string normalize_speaker(std::string_view name);

/// Parses "NAME: utterance" lines. Blank lines and lines without a speaker
/// prefix (stage directions) are skipped. Throws FormatError when nothing
/// parseable remains.
RawScript parse_script(std::string_view raw, std::string script_id = {});

/// Inverse of parse_script for already-normalized scripts.
std::string render_script(const RawScript& script);

/// Every *.txt file in `dir`, sorted by filename; script_id is the file stem.
std::vector<RawScript> load_corpus(const std::filesystem::path& dir);

/// Distinct speakers in order of first appearance.
std::vector<std::string> speakers(const RawScript& script);

struct TrainingLine {
  Role role = Role::kOther;
  std::string text;

  friend bool operator==(const TrainingLine&, const TrainingLine&) = default;
};

struct TrainingInstance {
  std::string source_script_id;
  SentimentLabel cluster = SentimentLabel::kNeutral;
  std::string focus_character;
  std::vector<TrainingLine> lines;

  friend bool operator==(const TrainingInstance&, const TrainingInstance&) = default;
};

/// Speaker name -> cluster for the characters of one script.
using ClusterMap = std::map<std::string, SentimentLabel>;

/// One instance per speaker of `target` in the script, with that speaker's
/// lines marked focus and everyone else's marked other. Throws ConfigError if
/// a speaker has no cluster.
std::vector<TrainingInstance> expand_instances(const RawScript& script, const ClusterMap& clusters,
                                               SentimentLabel target);

/// "focus: <text>" / "other: <text>" lines; each document is followed by an
/// empty line. Documents are ordered by (source_script_id, focus_character).
/// Throws ConfigError if an instance belongs to another cluster.
std::string render_training_file(std::vector<TrainingInstance> instances, SentimentLabel cluster);

void emit_training_file(const std::filesystem::path& path, std::vector<TrainingInstance> instances,
                        SentimentLabel cluster);

/// Documents of a training file; throws FormatError on unprefixed lines.
std::vector<std::vector<TrainingLine>> parse_training_file(std::string_view text);

}  // namespace dramanet::preprocess
