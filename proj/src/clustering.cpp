#include "dramanet/clustering.hpp"

#include <algorithm>
#include <map>
#include <sstream>

namespace dramanet::clustering {

std::vector<SentimentLabel> label_utterances(const std::vector<std::string>& utterances,
                                             adapters::SentimentAdapter& classifier,
                                             std::size_t batch_size) {
  if (batch_size == 0) batch_size = 1;
  std::vector<SentimentLabel> labels;
  labels.reserve(utterances.size());
  for (std::size_t begin = 0; begin < utterances.size(); begin += batch_size) {
    const std::size_t end = std::min(utterances.size(), begin + batch_size);
    std::vector<std::string> batch(utterances.begin() + static_cast<std::ptrdiff_t>(begin),
                                   utterances.begin() + static_cast<std::ptrdiff_t>(end));
    for (const auto& result : classifier.classify(batch)) labels.push_back(result.label);
  }
  return labels;
}

SentimentLabel assign_cluster(const LabelCounts& counts) {
  const auto best = *std::max_element(counts.begin(), counts.end());
  if (best == 0) throw ConfigError("cannot assign a cluster to a character with no utterances");
  if (counts[index_of(SentimentLabel::kNeutral)] == best) return SentimentLabel::kNeutral;
  if (counts[index_of(SentimentLabel::kPositive)] == best) return SentimentLabel::kPositive;
  return SentimentLabel::kNegative;
}

std::uint64_t CharacterProfile::utterance_count() const {
  return label_counts[0] + label_counts[1] + label_counts[2];
}

preprocess::ClusterMap ClusterTable::for_script(const std::string& script_id) const {
  preprocess::ClusterMap out;
  const std::string_view wanted = pooled ? kPooledScriptId : std::string_view(script_id);
  for (const auto& p : profiles) {
    if (p.script_id == wanted) out.emplace(p.character_id, p.assigned_cluster);
  }
  return out;
}

ClusterTable cluster_corpus(const std::vector<preprocess::RawScript>& corpus,
                            adapters::SentimentAdapter& classifier, const ClusterOptions& options) {
  std::map<std::pair<std::string, std::string>, LabelCounts> counts;
  for (const auto& script : corpus) {
    std::vector<std::string> texts;
    texts.reserve(script.lines.size());
    for (const auto& line : script.lines) texts.push_back(line.text);
    std::vector<SentimentLabel> labels;
    try {
      labels = label_utterances(texts, classifier, options.batch_size);
    } catch (const AdapterError&) {
      adapters::rethrow_with_context("classifying script '" + script.script_id + "'");
    }
    const std::string key_script = options.pool_across_scripts ? std::string(kPooledScriptId)
                                                               : script.script_id;
    for (std::size_t i = 0; i < labels.size(); ++i) {
      auto& c = counts[{key_script, script.lines[i].speaker}];
      ++c[index_of(labels[i])];
    }
  }

  ClusterTable table;
  table.pooled = options.pool_across_scripts;
  for (const auto& [key, c] : counts) {
    table.profiles.push_back({key.first, key.second, c, assign_cluster(c)});
  }
  return table;
}

std::string render_cluster_table(const ClusterTable& table) {
  std::ostringstream out;
  out << "script_id\tcharacter\tpositive\tneutral\tnegative\tcluster\n";
  for (const auto& p : table.profiles) {
    out << p.script_id << '\t' << p.character_id << '\t' << p.label_counts[0] << '\t'
        << p.label_counts[1] << '\t' << p.label_counts[2] << '\t' << to_string(p.assigned_cluster)
        << '\n';
  }
  return out.str();
}

ClusterTable parse_cluster_table(std::string_view text) {
  ClusterTable table;
  std::istringstream in{std::string(text)};
  std::string line;
  std::size_t line_no = 0;
  bool any_pooled = false;
  bool any_local = false;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    if (line_no == 1 && line.rfind("script_id\t", 0) == 0) continue;
    std::vector<std::string> f;
    std::istringstream fields(line);
    std::string field;
    while (std::getline(fields, field, '\t')) f.push_back(field);
    if (f.size() != 6) {
      throw FormatError("cluster table line " + std::to_string(line_no) + ": expected 6 fields");
    }
    CharacterProfile p;
    p.script_id = f[0];
    p.character_id = f[1];
    try {
      for (std::size_t k = 0; k < 3; ++k) p.label_counts[k] = std::stoull(f[2 + k]);
    } catch (const std::exception&) {
      throw FormatError("cluster table line " + std::to_string(line_no) + ": bad count");
    }
    p.assigned_cluster = label_or_throw(f[5]);
    (p.script_id == kPooledScriptId ? any_pooled : any_local) = true;
    table.profiles.push_back(std::move(p));
  }
  if (any_pooled && any_local) throw FormatError("cluster table mixes pooled and per-script rows");
  table.pooled = any_pooled;
  std::sort(table.profiles.begin(), table.profiles.end(), [](const auto& a, const auto& b) {
    return std::tie(a.script_id, a.character_id) < std::tie(b.script_id, b.character_id);
  });
  return table;
}

}  // namespace dramanet::clustering
