#pragma once

// JSON configuration. Unknown keys are rejected so that typos surface as
// configuration errors instead of silently falling back to defaults.

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "dramanet/dn_engine.hpp"
#include "dramanet/http_client.hpp"
#include "dramanet/orchestration.hpp"
#include "json.hpp"

namespace dramanet {

namespace dn {
void to_json(nlohmann::json& j, const DnConfig& config);
void from_json(const nlohmann::json& j, DnConfig& config);
}  // namespace dn

enum class AdapterMode { kStub, kFixture, kHttp };

std::string_view to_string(AdapterMode mode);

struct AdapterConfig {
  AdapterMode mode = AdapterMode::kStub;
  std::string base_url;
  std::filesystem::path fixture;
  /// When set, every response is also written to this fixture file.
  std::filesystem::path record;
  adapters::EndpointPaths paths;
  double timeout_s = 30.0;
  unsigned retries = 3;
  unsigned backoff_ms = 200;
};

struct PipelineConfig {
  std::filesystem::path corpus_dir = "corpus";
  std::filesystem::path out_dir = "out";
  /// Defaults to <out_dir>/clusters.tsv.
  std::filesystem::path cluster_table;
  /// Script directories to evaluate; defaults to <out_dir>/scripts.
  std::vector<std::filesystem::path> script_dirs;

  std::uint64_t seed = 42;
  orchestration::OrderingMode mode = orchestration::OrderingMode::kDn;
  std::vector<dn::CharacterSpec> roster = orchestration::default_roster();
  dn::DnConfig dn;
  AdapterConfig adapter;

  bool pool_across_scripts = false;
  std::size_t sentiment_batch_size = 32;

  std::size_t script_count = 10;
  orchestration::GenerationOptions generation;

  std::size_t simulation_count = 1;
  unsigned threads = 0;

  std::size_t max_context_chars = 2000;

  std::filesystem::path resolved_cluster_table() const;
  std::vector<std::filesystem::path> resolved_script_dirs() const;
};

/// The full default configuration as JSON (the schema for overrides).
nlohmann::json default_config_json();

PipelineConfig config_from_json(const nlohmann::json& doc);
nlohmann::json config_to_json(const PipelineConfig& config);

/// Sets `dotted` (e.g. "dn.end_probability") in `doc`. The raw value is parsed
/// as JSON when possible, else taken as a string. Throws ConfigError for keys
/// outside the schema.
void apply_override(nlohmann::json& doc, const std::string& dotted, const std::string& raw_value);

/// Reads a JSON config file and merges it over the defaults. Relative paths
/// given in the file are resolved against the file's directory.
nlohmann::json load_config_json(const std::filesystem::path& path);

}  // namespace dramanet
