#include "dramanet/config.hpp"

#include "dramanet/io.hpp"

namespace dramanet {

using nlohmann::json;

namespace dn {

void to_json(json& j, const DnConfig& c) {
  json overrides = json::object();
  for (const auto& [id, p] : c.reciprocity_overrides) {
    overrides[id] = {{"init", p.init}, {"decay", p.decay}};
  }
  j = {{"end_probability", c.end_probability},
       {"centrality_init", c.centrality_init},
       {"centrality_increment", c.centrality_increment},
       {"loyalty_boost", c.loyalty_boost},
       {"reciprocity_init", c.reciprocity.init},
       {"reciprocity_decay", c.reciprocity.decay},
       {"reciprocity_overrides", overrides},
       {"max_lines", c.max_lines}};
}

void from_json(const json& j, DnConfig& c) {
  j.at("end_probability").get_to(c.end_probability);
  j.at("centrality_init").get_to(c.centrality_init);
  j.at("centrality_increment").get_to(c.centrality_increment);
  j.at("loyalty_boost").get_to(c.loyalty_boost);
  j.at("reciprocity_init").get_to(c.reciprocity.init);
  j.at("reciprocity_decay").get_to(c.reciprocity.decay);
  j.at("max_lines").get_to(c.max_lines);
  c.reciprocity_overrides.clear();
  for (const auto& [id, p] : j.at("reciprocity_overrides").items()) {
    ReciprocityParams params = c.reciprocity;
    for (const auto& [key, value] : p.items()) {
      if (key == "init") {
        value.get_to(params.init);
      } else if (key == "decay") {
        value.get_to(params.decay);
      } else {
        throw ConfigError("unknown key dn.reciprocity_overrides." + id + "." + key);
      }
    }
    c.reciprocity_overrides[id] = params;
  }
}

}  // namespace dn

namespace {

// Keys under these paths hold free-form maps rather than fixed fields.
bool is_free_map(const std::string& path) { return path == "dn.reciprocity_overrides"; }

void merge_checked(json& base, const json& patch, const std::string& path) {
  if (!patch.is_object()) throw ConfigError("config section '" + path + "' must be an object");
  for (const auto& [key, value] : patch.items()) {
    const std::string child = path.empty() ? key : path + "." + key;
    auto it = base.find(key);
    if (it == base.end()) throw ConfigError("unknown config key '" + child + "'");
    if (it->is_object() && !is_free_map(child)) {
      merge_checked(*it, value, child);
    } else {
      *it = value;
    }
  }
}

AdapterMode parse_adapter_mode(const std::string& text) {
  if (text == "stub") return AdapterMode::kStub;
  if (text == "fixture") return AdapterMode::kFixture;
  if (text == "http") return AdapterMode::kHttp;
  throw ConfigError("adapter.mode must be stub, fixture or http, got '" + text + "'");
}

}  // namespace

std::string_view to_string(AdapterMode mode) {
  switch (mode) {
    case AdapterMode::kStub:
      return "stub";
    case AdapterMode::kFixture:
      return "fixture";
    case AdapterMode::kHttp:
      return "http";
  }
  return "stub";
}

std::filesystem::path PipelineConfig::resolved_cluster_table() const {
  return cluster_table.empty() ? out_dir / "clusters.tsv" : cluster_table;
}

std::vector<std::filesystem::path> PipelineConfig::resolved_script_dirs() const {
  if (script_dirs.empty()) return {out_dir / "scripts"};
  return script_dirs;
}

json default_config_json() { return config_to_json(PipelineConfig{}); }

json config_to_json(const PipelineConfig& c) {
  json roster = json::array();
  for (const auto& r : c.roster) {
    roster.push_back({{"id", r.id}, {"cluster", std::string(to_string(r.cluster))}});
  }
  json scripts = json::array();
  for (const auto& d : c.script_dirs) scripts.push_back(d.string());
  return {
      {"paths",
       {{"corpus", c.corpus_dir.string()},
        {"out", c.out_dir.string()},
        {"cluster_table", c.cluster_table.string()},
        {"scripts", scripts}}},
      {"seed", c.seed},
      {"mode", std::string(orchestration::to_string(c.mode))},
      {"roster", roster},
      {"dn", c.dn},
      {"adapter",
       {{"mode", std::string(to_string(c.adapter.mode))},
        {"base_url", c.adapter.base_url},
        {"fixture", c.adapter.fixture.string()},
        {"record", c.adapter.record.string()},
        {"paths",
         {{"sentiment", c.adapter.paths.sentiment},
          {"nli", c.adapter.paths.nli},
          {"generate", c.adapter.paths.generate},
          {"score", c.adapter.paths.score}}},
        {"timeout_s", c.adapter.timeout_s},
        {"retries", c.adapter.retries},
        {"backoff_ms", c.adapter.backoff_ms}}},
      {"clustering",
       {{"pool_across_scripts", c.pool_across_scripts}, {"batch_size", c.sentiment_batch_size}}},
      {"generation",
       {{"count", c.script_count},
        {"max_new_tokens", c.generation.max_new_tokens},
        {"retries", c.generation.retries}}},
      {"simulation", {{"count", c.simulation_count}, {"threads", c.threads}}},
      {"metrics", {{"max_context_chars", c.max_context_chars}}},
  };
}

PipelineConfig config_from_json(const json& input) {
  json doc = default_config_json();
  merge_checked(doc, input, "");
  PipelineConfig c;
  try {
    const auto& paths = doc.at("paths");
    c.corpus_dir = paths.at("corpus").get<std::string>();
    c.out_dir = paths.at("out").get<std::string>();
    c.cluster_table = paths.at("cluster_table").get<std::string>();
    for (const auto& d : paths.at("scripts")) c.script_dirs.emplace_back(d.get<std::string>());

    c.seed = doc.at("seed").get<std::uint64_t>();
    c.mode = orchestration::parse_mode(doc.at("mode").get<std::string>());

    c.roster.clear();
    for (const auto& r : doc.at("roster")) {
      c.roster.push_back(
          {r.at("id").get<std::string>(), label_or_throw(r.at("cluster").get<std::string>())});
    }
    orchestration::validate_roster(c.roster);

    c.dn = doc.at("dn").get<dn::DnConfig>();
    c.dn.rng_seed = c.seed;
    c.dn.validate();

    const auto& a = doc.at("adapter");
    c.adapter.mode = parse_adapter_mode(a.at("mode").get<std::string>());
    c.adapter.base_url = a.at("base_url").get<std::string>();
    c.adapter.fixture = a.at("fixture").get<std::string>();
    c.adapter.record = a.at("record").get<std::string>();
    const auto& p = a.at("paths");
    c.adapter.paths = {p.at("sentiment").get<std::string>(), p.at("nli").get<std::string>(),
                       p.at("generate").get<std::string>(), p.at("score").get<std::string>()};
    c.adapter.timeout_s = a.at("timeout_s").get<double>();
    c.adapter.retries = a.at("retries").get<unsigned>();
    c.adapter.backoff_ms = a.at("backoff_ms").get<unsigned>();
    if (!(c.adapter.timeout_s > 0.0)) throw ConfigError("adapter.timeout_s must be positive");

    c.pool_across_scripts = doc.at("clustering").at("pool_across_scripts").get<bool>();
    c.sentiment_batch_size = doc.at("clustering").at("batch_size").get<std::size_t>();
    if (c.sentiment_batch_size == 0) throw ConfigError("clustering.batch_size must be positive");

    const auto& g = doc.at("generation");
    c.script_count = g.at("count").get<std::size_t>();
    c.generation.max_new_tokens = g.at("max_new_tokens").get<std::uint32_t>();
    c.generation.retries = g.at("retries").get<unsigned>();
    if (c.generation.max_new_tokens < 1) throw ConfigError("generation.max_new_tokens must be >= 1");

    c.simulation_count = doc.at("simulation").at("count").get<std::size_t>();
    c.threads = doc.at("simulation").at("threads").get<unsigned>();

    c.max_context_chars = doc.at("metrics").at("max_context_chars").get<std::size_t>();
    if (c.max_context_chars == 0) throw ConfigError("metrics.max_context_chars must be positive");
  } catch (const json::exception& e) {
    throw ConfigError(std::string("invalid config: ") + e.what());
  }
  return c;
}

void apply_override(json& doc, const std::string& dotted, const std::string& raw_value) {
  json* node = &doc;
  std::string path;
  std::size_t start = 0;
  while (true) {
    const auto dot = dotted.find('.', start);
    const std::string key = dotted.substr(start, dot == std::string::npos ? std::string::npos : dot - start);
    if (key.empty()) throw ConfigError("malformed config key '" + dotted + "'");
    if (!node->is_object()) throw ConfigError("config key '" + dotted + "' does not name a field");
    const bool free = is_free_map(path);
    path = path.empty() ? key : path + "." + key;
    if (!node->contains(key)) {
      if (!free && !(path.rfind("dn.reciprocity_overrides.", 0) == 0)) {
        throw ConfigError("unknown config key '" + dotted + "'");
      }
      (*node)[key] = dot == std::string::npos ? json() : json::object();
    }
    node = &(*node)[key];
    if (dot == std::string::npos) break;
    start = dot + 1;
  }

  if (node->is_string()) {
    *node = raw_value;
    return;
  }
  json parsed = json::parse(raw_value, nullptr, false);
  if (parsed.is_discarded()) parsed = raw_value;
  if (node->is_array() && !parsed.is_array()) parsed = json::array({parsed});
  *node = parsed;
}

json load_config_json(const std::filesystem::path& path) {
  std::string text;
  try {
    text = io::read_file(path);
  } catch (const FormatError&) {
    throw ConfigError("cannot read config file " + path.string());
  }
  json doc = json::parse(text, nullptr, false, true);
  if (doc.is_discarded()) throw ConfigError("config file " + path.string() + " is not valid JSON");
  json merged = default_config_json();
  merge_checked(merged, doc, "");

  // Relative paths written in the file are relative to the file itself.
  const auto base = path.parent_path();
  auto anchor = [&](json& value) {
    if (!value.is_string()) return;
    const std::filesystem::path p = value.get<std::string>();
    if (!p.empty() && p.is_relative()) value = (base / p).lexically_normal().string();
  };
  if (doc.contains("paths") && doc["paths"].is_object()) {
    for (const auto& key : {"corpus", "out", "cluster_table"}) {
      if (doc["paths"].contains(key)) anchor(merged["paths"][key]);
    }
    if (doc["paths"].contains("scripts")) {
      for (auto& d : merged["paths"]["scripts"]) anchor(d);
    }
  }
  if (doc.contains("adapter") && doc["adapter"].is_object()) {
    for (const auto& key : {"fixture", "record"}) {
      if (doc["adapter"].contains(key)) anchor(merged["adapter"][key]);
    }
  }
  return merged;
}

}  // namespace dramanet
