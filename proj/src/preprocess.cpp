#include "dramanet/preprocess.hpp"

#include <algorithm>
#include <set>

#include "dramanet/io.hpp"

namespace dramanet::preprocess {

namespace {

constexpr std::size_t kMaxSpeakerLength = 48;

bool plausible_speaker(const std::string& name) {
  if (name.empty() || name.size() > kMaxSpeakerLength) return false;
  const char first = name.front();
  if (first == '(' || first == '[' || first == '"' || first == '\'') return false;
  return name.find_first_of("!?()[]") == std::string::npos;
}

std::vector<std::string_view> split_lines(std::string_view text) {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  while (start < text.size()) {
    auto end = text.find('\n', start);
    if (end == std::string_view::npos) end = text.size();
    auto line = text.substr(start, end - start);
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    out.push_back(line);
    start = end + 1;
  }
  return out;
}

}  // namespace

std::string normalize_speaker(std::string_view name) { return to_upper(trim(name)); }

RawScript parse_script(std::string_view raw, std::string script_id) {
  RawScript script;
  script.script_id = std::move(script_id);
  std::size_t line_no = 0;
  std::size_t skipped = 0;
  std::string first_skipped;
  for (auto line : split_lines(raw)) {
    ++line_no;
    const auto trimmed = trim(line);
    if (trimmed.empty()) continue;
    const auto colon = trimmed.find(':');
    if (colon != std::string::npos) {
      auto speaker = normalize_speaker(std::string_view(trimmed).substr(0, colon));
      auto text = trim(std::string_view(trimmed).substr(colon + 1));
      if (plausible_speaker(speaker) && !text.empty()) {
        script.lines.push_back({std::move(speaker), std::move(text)});
        continue;
      }
    }
    if (skipped++ == 0) first_skipped = "line " + std::to_string(line_no) + ": '" + trimmed + "'";
  }
  if (script.lines.empty()) {
    std::string where = script.script_id.empty() ? "script" : "script '" + script.script_id + "'";
    std::string msg = where + " has no 'NAME: utterance' lines (" + std::to_string(line_no) +
                      " lines read";
    if (skipped > 0) msg += ", first skipped " + first_skipped;
    throw FormatError(msg + ")");
  }
  return script;
}

std::string render_script(const RawScript& script) {
  std::string out;
  for (const auto& line : script.lines) {
    out += line.speaker;
    out += ": ";
    out += line.text;
    out += '\n';
  }
  return out;
}

std::vector<RawScript> load_corpus(const std::filesystem::path& dir) {
  std::vector<RawScript> corpus;
  for (const auto& path : io::list_files(dir, ".txt")) {
    corpus.push_back(parse_script(io::read_file(path), path.stem().string()));
  }
  if (corpus.empty()) throw ConfigError("no .txt scripts in " + dir.string());
  return corpus;
}

std::vector<std::string> speakers(const RawScript& script) {
  std::vector<std::string> out;
  std::set<std::string> seen;
  for (const auto& line : script.lines) {
    if (seen.insert(line.speaker).second) out.push_back(line.speaker);
  }
  return out;
}

std::vector<TrainingInstance> expand_instances(const RawScript& script, const ClusterMap& clusters,
                                               SentimentLabel target) {
  std::vector<TrainingInstance> instances;
  for (const auto& speaker : speakers(script)) {
    auto it = clusters.find(speaker);
    if (it == clusters.end()) {
      throw ConfigError("speaker '" + speaker + "' in script '" + script.script_id +
                        "' has no cluster assignment");
    }
    if (it->second != target) continue;
    TrainingInstance instance;
    instance.source_script_id = script.script_id;
    instance.cluster = target;
    instance.focus_character = speaker;
    instance.lines.reserve(script.lines.size());
    for (const auto& line : script.lines) {
      instance.lines.push_back({line.speaker == speaker ? Role::kFocus : Role::kOther, line.text});
    }
    instances.push_back(std::move(instance));
  }
  return instances;
}

std::string render_training_file(std::vector<TrainingInstance> instances, SentimentLabel cluster) {
  std::stable_sort(instances.begin(), instances.end(), [](const auto& a, const auto& b) {
    return std::tie(a.source_script_id, a.focus_character) <
           std::tie(b.source_script_id, b.focus_character);
  });
  std::string out;
  for (const auto& instance : instances) {
    if (instance.cluster != cluster) {
      throw ConfigError("instance for '" + instance.focus_character + "' belongs to cluster " +
                        std::string(to_string(instance.cluster)) + ", not " +
                        std::string(to_string(cluster)));
    }
    for (const auto& line : instance.lines) {
      out += to_string(line.role);
      out += ": ";
      out += line.text;
      out += '\n';
    }
    out += '\n';
  }
  return out;
}

void emit_training_file(const std::filesystem::path& path, std::vector<TrainingInstance> instances,
                        SentimentLabel cluster) {
  io::write_file_atomic(path, render_training_file(std::move(instances), cluster));
}

std::vector<std::vector<TrainingLine>> parse_training_file(std::string_view text) {
  std::vector<std::vector<TrainingLine>> documents;
  std::vector<TrainingLine> current;
  std::size_t line_no = 0;
  for (auto line : split_lines(text)) {
    ++line_no;
    if (line.empty()) {
      if (!current.empty()) documents.push_back(std::move(current));
      current.clear();
      continue;
    }
    const auto colon = line.find(':');
    auto role = colon == std::string_view::npos ? std::nullopt : parse_role(line.substr(0, colon));
    if (!role) {
      throw FormatError("training file line " + std::to_string(line_no) +
                        " lacks a focus:/other: prefix");
    }
    current.push_back({*role, trim(line.substr(colon + 1))});
  }
  if (!current.empty()) documents.push_back(std::move(current));
  return documents;
}

}  // namespace dramanet::preprocess
