#pragma once

// The five pipeline commands. Each reads a PipelineConfig, writes its outputs
// atomically under config.out_dir, and reports progress to `log`.
//
//   cluster     corpus/*.txt              -> clusters.tsv
//   preprocess  corpus + clusters.tsv     -> train_{positive,neutral,negative}.txt
//   simulate    roster + dn config        -> schedules.tsv, network_states.jsonl,
//                                            simulation_summary.json
//   generate    roster + dn config        -> scripts/script_NNNN.{txt,json}
//   evaluate    one or more script dirs   -> report.txt, dialogues.tsv, sentiment.tsv

#include <exception>
#include <filesystem>
#include <iosfwd>
#include <memory>
#include <vector>

#include "dramanet/adapters.hpp"
#include "dramanet/config.hpp"
#include "dramanet/dn_engine.hpp"
#include "dramanet/fixture.hpp"

namespace dramanet::pipeline {

/// Adapters for the configured mode, plus an optional recorder whose store is
/// merged into the fixture file at config.record by finish().
class AdapterSession {
 public:
  explicit AdapterSession(const AdapterConfig& config);

  const adapters::AdapterSet& set() const { return set_; }

  void finish() const;

 private:
  adapters::AdapterSet set_;
  std::shared_ptr<adapters::RecordingAdapter> recorder_;
  std::filesystem::path record_path_;
};

void cmd_cluster(const PipelineConfig& config, std::ostream& log);
void cmd_preprocess(const PipelineConfig& config, std::ostream& log);
void cmd_simulate(const PipelineConfig& config, std::ostream& log);
void cmd_generate(const PipelineConfig& config, std::ostream& log);
void cmd_evaluate(const PipelineConfig& config, std::ostream& log);

/// Training-file name for a cluster, e.g. "train_positive.txt".
std::string training_file_name(SentimentLabel cluster);

/// Splits a multi-run schedules.tsv back into schedules (blocks start with
/// a "# run<TAB>i" line).
std::vector<dn::TurnSchedule> read_schedules(std::istream& in);

/// Loads every script_*.txt in `dir` with its optional .json sidecar.
struct LoadedScripts {
  std::vector<std::string> names;
  std::vector<orchestration::Script> scripts;
  /// True when every script had a sidecar (so clusters are known).
  bool all_have_metadata = true;
};
LoadedScripts load_scripts(const std::filesystem::path& dir);

/// 0 success, 2 config/input error, 3 adapter/transport error, 1 otherwise.
int exit_code_for(const std::exception& error);

}  // namespace dramanet::pipeline
