#include "dramanet/pipeline.hpp"

#include <cstdio>
#include <istream>
#include <map>
#include <ostream>
#include <sstream>

#include "dramanet/clustering.hpp"
#include "dramanet/http_client.hpp"
#include "dramanet/io.hpp"
#include "dramanet/metrics.hpp"
#include "dramanet/orchestration.hpp"
#include "dramanet/preprocess.hpp"
#include "dramanet/stubs.hpp"

namespace dramanet::pipeline {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

std::string script_name(std::size_t index) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "script_%04zu", index);
  return buf;
}

json network_state_json(const dn::NetworkState& state) {
  json characters = json::array();
  for (dn::CharacterIndex i = 0; i < state.size(); ++i) {
    const auto& c = state.character(i);
    json loyalty = json::object();
    for (std::size_t k = 0; k < c.addressees.size(); ++k) {
      loyalty[state.character(c.addressees[k]).id] = c.loyalty[k];
    }
    characters.push_back({{"id", c.id},
                          {"cluster", std::string(to_string(c.cluster))},
                          {"centrality", state.centrality(i)},
                          {"lines_spoken", c.lines_spoken},
                          {"loyalty", loyalty},
                          {"reciprocity", c.reciprocity_current}});
  }
  return characters;
}

}  // namespace

AdapterSession::AdapterSession(const AdapterConfig& config) {
  switch (config.mode) {
    case AdapterMode::kStub:
      set_ = stubs::default_stub_set();
      break;
    case AdapterMode::kFixture: {
      if (config.fixture.empty()) throw ConfigError("adapter.mode=fixture requires adapter.fixture");
      std::shared_ptr<const adapters::FixtureStore> store;
      try {
        store = std::make_shared<adapters::FixtureStore>(adapters::FixtureStore::load(config.fixture));
      } catch (const FormatError& e) {
        throw ConfigError(e.what());
      }
      auto fixture = std::make_shared<adapters::FixtureAdapter>(store);
      set_ = {fixture, fixture, fixture, fixture};
      break;
    }
    case AdapterMode::kHttp: {
      if (config.base_url.empty()) {
        throw ConfigError("adapter.mode=http requires a model URL (--model-url or DRAMANET_MODEL_URL)");
      }
      adapters::HttpClientOptions options;
      options.base_url = config.base_url;
      options.paths = config.paths;
      options.timeout = std::chrono::milliseconds(static_cast<long long>(config.timeout_s * 1000.0));
      options.retries = config.retries;
      options.backoff = std::chrono::milliseconds(config.backoff_ms);
      auto client = std::make_shared<adapters::HttpClient>(options);
      set_ = {client, client, client, client};
      break;
    }
  }
  if (!config.record.empty()) {
    recorder_ = std::make_shared<adapters::RecordingAdapter>(set_);
    record_path_ = config.record;
    set_ = adapters::RecordingAdapter::as_set(recorder_);
  }
}

void AdapterSession::finish() const {
  if (!recorder_) return;
  // Merge so several commands can record into one fixture file.
  auto store = std::filesystem::exists(record_path_) ? adapters::FixtureStore::load(record_path_)
                                                      : adapters::FixtureStore{};
  store.merge(recorder_->snapshot());
  store.save(record_path_);
}

std::string training_file_name(SentimentLabel cluster) {
  return "train_" + std::string(to_string(cluster)) + ".txt";
}

void cmd_cluster(const PipelineConfig& config, std::ostream& log) {
  const auto corpus = preprocess::load_corpus(config.corpus_dir);
  AdapterSession session(config.adapter);
  clustering::ClusterOptions options;
  options.pool_across_scripts = config.pool_across_scripts;
  options.batch_size = config.sentiment_batch_size;
  const auto table = clustering::cluster_corpus(corpus, *session.set().sentiment, options);

  const auto path = config.resolved_cluster_table();
  io::write_file_atomic(path, clustering::render_cluster_table(table));
  session.finish();

  std::array<std::size_t, 3> sizes{};
  for (const auto& p : table.profiles) ++sizes[index_of(p.assigned_cluster)];
  log << "clustered " << table.profiles.size() << " characters from " << corpus.size()
      << " scripts (positive " << sizes[0] << ", neutral " << sizes[1] << ", negative " << sizes[2]
      << ") -> " << path.string() << '\n';
}

void cmd_preprocess(const PipelineConfig& config, std::ostream& log) {
  const auto table_path = config.resolved_cluster_table();
  if (!fs::exists(table_path)) {
    throw ConfigError("cluster table " + table_path.string() + " not found; run 'cluster' first");
  }
  const auto table = clustering::parse_cluster_table(io::read_file(table_path));
  const auto corpus = preprocess::load_corpus(config.corpus_dir);

  for (auto cluster : kAllLabels) {
    std::vector<preprocess::TrainingInstance> instances;
    for (const auto& script : corpus) {
      auto expanded = preprocess::expand_instances(script, table.for_script(script.script_id), cluster);
      instances.insert(instances.end(), std::make_move_iterator(expanded.begin()),
                       std::make_move_iterator(expanded.end()));
    }
    const auto path = config.out_dir / training_file_name(cluster);
    const auto count = instances.size();
    preprocess::emit_training_file(path, std::move(instances), cluster);
    log << to_string(cluster) << ": " << count << " instances -> " << path.string() << '\n';
  }
}

void cmd_simulate(const PipelineConfig& config, std::ostream& log) {
  if (config.simulation_count < 1) throw ConfigError("simulation.count must be at least 1");
  const auto results = dn::run_batch(config.roster, config.dn, config.simulation_count, config.threads);

  std::ostringstream schedules;
  std::ostringstream states;
  std::uint64_t total_lines = 0;
  std::uint64_t total_exchanges = 0;
  std::uint64_t by_max_lines = 0;
  for (std::size_t i = 0; i < results.size(); ++i) {
    const auto& r = results[i];
    schedules << "# run\t" << i << '\n';
    dn::write_schedule(schedules, r.schedule);
    states << json{{"run", i}, {"characters", network_state_json(r.final_state)}}.dump() << '\n';
    total_lines += r.schedule.turns.size();
    total_exchanges += r.schedule.turns.back().exchange_index + 1;
    if (r.schedule.terminated_by == dn::Termination::kMaxLines) ++by_max_lines;
  }
  const double n = static_cast<double>(results.size());
  json summary = {{"runs", results.size()},
                  {"seed", config.seed},
                  {"mean_lines", static_cast<double>(total_lines) / n},
                  {"mean_exchanges", static_cast<double>(total_exchanges) / n},
                  {"terminated_by_end_probability", results.size() - by_max_lines},
                  {"terminated_by_max_lines", by_max_lines},
                  {"dn", config.dn}};

  io::write_file_atomic(config.out_dir / "schedules.tsv", schedules.str());
  io::write_file_atomic(config.out_dir / "network_states.jsonl", states.str());
  io::write_file_atomic(config.out_dir / "simulation_summary.json", summary.dump(2) + "\n");
  log << "simulated " << results.size() << " dialogues, mean length "
      << static_cast<double>(total_lines) / n << " lines -> " << config.out_dir.string() << '\n';
}

std::vector<dn::TurnSchedule> read_schedules(std::istream& in) {
  std::vector<dn::TurnSchedule> out;
  std::string line;
  std::string block;
  auto flush = [&] {
    if (block.empty()) return;
    std::istringstream b(block);
    out.push_back(dn::read_schedule(b));
    block.clear();
  };
  while (std::getline(in, line)) {
    if (line.rfind("# run\t", 0) == 0) {
      flush();
      continue;
    }
    block += line;
    block += '\n';
  }
  flush();
  return out;
}

void cmd_generate(const PipelineConfig& config, std::ostream& log) {
  if (config.script_count < 1) throw ConfigError("generation.count must be at least 1");
  orchestration::validate_roster(config.roster);
  AdapterSession session(config.adapter);
  auto& generator = *session.set().generator;

  // Everything is generated before anything is written, so a failure leaves
  // no partial output behind.
  std::vector<orchestration::Script> scripts;
  for (std::size_t i = 0; i < config.script_count; ++i) {
    const auto seed = derive_seed(config.seed, i);
    try {
      if (config.mode == orchestration::OrderingMode::kDn) {
        auto dn_config = config.dn;
        dn_config.rng_seed = seed;
        scripts.push_back(orchestration::generate_script_dn(config.roster, dn_config, generator,
                                                            config.generation));
      } else {
        orchestration::RandomOrderConfig length{config.dn.end_probability, config.dn.max_lines};
        scripts.push_back(orchestration::generate_script_random(config.roster, length, generator, seed,
                                                                config.generation));
      }
    } catch (const AdapterError&) {
      adapters::rethrow_with_context(script_name(i));
    }
  }

  const fs::path final_dir = config.out_dir / "scripts";
  const fs::path staging = config.out_dir / "scripts.staging";
  std::error_code ec;
  fs::remove_all(staging, ec);
  try {
    for (std::size_t i = 0; i < scripts.size(); ++i) {
      const auto name = script_name(i);
      io::write_file_atomic(staging / (name + ".txt"), orchestration::render_script_text(scripts[i]));
      io::write_file_atomic(staging / (name + ".json"),
                            orchestration::script_metadata(scripts[i]).dump(2) + "\n");
    }
    fs::remove_all(final_dir);
    fs::rename(staging, final_dir);
  } catch (...) {
    fs::remove_all(staging, ec);
    throw;
  }
  session.finish();

  std::size_t lines = 0;
  for (const auto& s : scripts) lines += s.lines.size();
  log << "generated " << scripts.size() << " scripts (" << orchestration::to_string(config.mode)
      << " ordering, " << lines << " lines) -> " << final_dir.string() << '\n';
}

LoadedScripts load_scripts(const fs::path& dir) {
  LoadedScripts loaded;
  for (const auto& path : io::list_files(dir, ".txt")) {
    auto sidecar = path;
    sidecar.replace_extension(".json");
    const auto text = io::read_file(path);
    orchestration::Script script;
    if (fs::exists(sidecar)) {
      auto meta = json::parse(io::read_file(sidecar), nullptr, false);
      if (meta.is_discarded()) throw FormatError(sidecar.string() + " is not valid JSON");
      script = orchestration::read_script(text, meta);
    } else {
      loaded.all_have_metadata = false;
      for (const auto& line : preprocess::parse_script(text, path.stem().string()).lines) {
        script.lines.push_back({line.speaker, std::nullopt, std::nullopt, line.text});
      }
    }
    loaded.names.push_back(path.stem().string());
    loaded.scripts.push_back(std::move(script));
  }
  if (loaded.scripts.empty()) throw ConfigError("no scripts found in " + dir.string());
  return loaded;
}

void cmd_evaluate(const PipelineConfig& config, std::ostream& log) {
  const auto dirs = config.resolved_script_dirs();
  std::vector<LoadedScripts> corpora;
  for (const auto& dir : dirs) corpora.push_back(load_scripts(dir));

  AdapterSession session(config.adapter);
  metrics::EvaluationOptions options;
  options.max_context_chars = config.max_context_chars;
  options.sentiment_batch_size = config.sentiment_batch_size;

  std::vector<metrics::CorpusReport> reports;
  std::map<std::string, int> label_uses;
  for (std::size_t d = 0; d < dirs.size(); ++d) {
    const auto& loaded = corpora[d];
    std::string label = dirs[d].filename().string();
    if (label.empty()) label = dirs[d].parent_path().filename().string();
    if (loaded.all_have_metadata) {
      const auto mode = loaded.scripts.front().provenance.mode;
      bool uniform = true;
      for (const auto& s : loaded.scripts) uniform = uniform && s.provenance.mode == mode;
      if (uniform) label = std::string(orchestration::to_string(mode));
    }
    if (label_uses[label]++ > 0) label += "#" + std::to_string(label_uses[label]);

    std::vector<metrics::NamedScript> named;
    for (std::size_t i = 0; i < loaded.scripts.size(); ++i) {
      named.push_back({loaded.names[i], loaded.scripts[i]});
    }
    auto set = session.set();
    if (!loaded.all_have_metadata) set.sentiment = nullptr;
    reports.push_back(metrics::evaluate_corpus(label, named, set, options));
  }

  const auto table = metrics::render_summary_table(reports);
  io::write_file_atomic(config.out_dir / "report.txt", table);
  io::write_file_atomic(config.out_dir / "dialogues.tsv", metrics::render_dialogue_records(reports));
  io::write_file_atomic(config.out_dir / "sentiment.tsv", metrics::render_sentiment_matrices(reports));
  session.finish();
  log << table;
}

int exit_code_for(const std::exception& error) {
  if (dynamic_cast<const ConfigError*>(&error) || dynamic_cast<const FormatError*>(&error)) return 2;
  if (dynamic_cast<const AdapterError*>(&error)) return 3;
  return 1;
}

}  // namespace dramanet::pipeline
