// dramanet: script-generation pipeline driver.
//
//   dramanet <cluster|preprocess|simulate|generate|evaluate> [--config PATH]
//            [--seed N] [--mode dn|random] [--adapter stub|fixture|http]
//            [--model-url URL] [--out DIR] [--<dotted.config.key> VALUE ...]
//
// Exit codes: 0 success, 2 configuration/input error, 3 adapter failure.

#include <cstdlib>
#include <functional>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "dramanet/config.hpp"
#include "dramanet/pipeline.hpp"

namespace {

struct CommonFlags {
  std::string config_path;
  std::optional<std::uint64_t> seed;
  std::optional<std::string> mode;
  std::optional<std::string> adapter;
  std::optional<std::string> model_url;
  std::optional<std::string> out;
  std::vector<std::string> scripts;
};

void add_common_flags(CLI::App* sub, CommonFlags& flags) {
  sub->add_option("--config", flags.config_path, "JSON config file");
  sub->add_option("--seed", flags.seed, "base seed for all randomness");
  sub->add_option("--mode", flags.mode, "ordering mode")->check(CLI::IsMember({"dn", "random"}));
  sub->add_option("--adapter", flags.adapter, "model adapter")
      ->check(CLI::IsMember({"stub", "fixture", "http"}));
  sub->add_option("--model-url", flags.model_url, "model server base URL");
  sub->add_option("--out", flags.out, "output directory");
  sub->allow_extras();
}

// Remaining "--a.b value" / "--a.b=value" arguments become config overrides.
void apply_dotted_overrides(nlohmann::json& doc, const std::vector<std::string>& extras) {
  for (std::size_t i = 0; i < extras.size(); ++i) {
    const auto& arg = extras[i];
    if (arg.rfind("--", 0) != 0 || arg.size() <= 2) {
      throw dramanet::ConfigError("unexpected argument '" + arg + "'");
    }
    auto key = arg.substr(2);
    std::string value;
    if (auto eq = key.find('='); eq != std::string::npos) {
      value = key.substr(eq + 1);
      key.resize(eq);
    } else {
      if (i + 1 >= extras.size()) throw dramanet::ConfigError("missing value for --" + key);
      value = extras[++i];
    }
    dramanet::apply_override(doc, key, value);
  }
}

dramanet::PipelineConfig resolve_config(const CommonFlags& flags, const std::vector<std::string>& extras) {
  auto doc = flags.config_path.empty() ? dramanet::default_config_json()
                                       : dramanet::load_config_json(flags.config_path);
  if (const char* env = std::getenv("DRAMANET_MODEL_URL"); env != nullptr && *env != '\0') {
    doc["adapter"]["base_url"] = env;
  }
  apply_dotted_overrides(doc, extras);
  if (flags.seed) doc["seed"] = *flags.seed;
  if (flags.mode) doc["mode"] = *flags.mode;
  if (flags.adapter) doc["adapter"]["mode"] = *flags.adapter;
  if (flags.model_url) doc["adapter"]["base_url"] = *flags.model_url;
  if (flags.out) doc["paths"]["out"] = *flags.out;
  if (!flags.scripts.empty()) doc["paths"]["scripts"] = flags.scripts;
  return dramanet::config_from_json(doc);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Dramatic-network script generation pipeline"};
  app.require_subcommand(1);

  CommonFlags flags;
  using Command = std::function<void(const dramanet::PipelineConfig&, std::ostream&)>;
  std::vector<std::pair<CLI::App*, Command>> commands;
  auto add = [&](const char* name, const char* help, Command command) {
    auto* sub = app.add_subcommand(name, help);
    add_common_flags(sub, flags);
    commands.emplace_back(sub, std::move(command));
    return sub;
  };
  add("cluster", "assign corpus characters to sentiment clusters", dramanet::pipeline::cmd_cluster);
  add("preprocess", "write focus/other training files per cluster", dramanet::pipeline::cmd_preprocess);
  add("simulate", "run the dramatic-network simulator (schedules only)",
      dramanet::pipeline::cmd_simulate);
  add("generate", "generate scripts with dn or random ordering", dramanet::pipeline::cmd_generate);
  auto* evaluate = add("evaluate", "compute diversity, sentiment and NLI metrics",
                       dramanet::pipeline::cmd_evaluate);
  evaluate->add_option("--scripts", flags.scripts, "script directory (repeatable)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  for (const auto& [sub, command] : commands) {
    if (!sub->parsed()) continue;
    try {
      const auto config = resolve_config(flags, sub->remaining());
      command(config, std::cout);
      return 0;
    } catch (const std::exception& e) {
      std::cerr << "dramanet " << sub->get_name() << ": " << e.what() << '\n';
      return dramanet::pipeline::exit_code_for(e);
    }
  }
  return 2;
}
