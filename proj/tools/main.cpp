#include <iostream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "runner.hpp"

#include <framelab/version.hpp>

using framelab::json;
namespace cli = framelab::cli;

namespace {

/// "key=value" with value read as JSON, falling back to a plain string.
json parse_params(const std::vector<std::string>& items) {
  json params = json::object();
  for (const auto& item : items) {
    const auto eq = item.find('=');
    if (eq == std::string::npos || eq == 0) throw CLI::ValidationError("--param", "expected key=value, got " + item);
    const auto key = item.substr(0, eq);
    const auto text = item.substr(eq + 1);
    params[key] = json::parse(text, nullptr, false);
    if (params[key].is_discarded()) params[key] = text;
  }
  return params;
}

void add_common_flags(CLI::App* cmd, cli::RunOptions& opts, std::string& out, std::uint64_t& seed, double& tol) {
  cmd->add_option("--out", out, "Report path prefix (writes <out>.json and <out>.csv)");
  cmd->add_option("--seed", seed, "Random seed (default 0)");
  cmd->add_option("--tol", tol, "Invariant tolerance");
  cmd->add_flag("--quiet", opts.quiet, "Suppress the summary on stdout");
  cmd->add_flag("--timing", opts.timing, "Record wall-clock columns (reports are then not byte-stable)");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"framelab: continuous Schauder frame experiments"};
  app.set_version_flag("--version", std::string(framelab::kVersion));
  app.require_subcommand(1);

  cli::RunOptions opts;
  std::string out;
  std::uint64_t seed = 0;
  double tol = 0.0;

  std::string config_path;
  auto* run = app.add_subcommand("run", "Run an experiment described by a JSON config file");
  run->add_option("config", config_path, "Config file")->required();
  add_common_flags(run, opts, out, seed, tol);

  std::vector<std::string> param_items;
  std::vector<std::pair<std::string, CLI::App*>> kind_cmds;
  for (const auto& kind : cli::experiment_kinds()) {
    auto* cmd = app.add_subcommand(kind, "Run the " + kind + " experiment");
    cmd->add_option("--param,-p", param_items, "Parameter as key=value (value parsed as JSON)");
    add_common_flags(cmd, opts, out, seed, tol);
    kind_cmds.emplace_back(kind, cmd);
  }

  CLI11_PARSE(app, argc, argv);

  CLI::App* chosen = app.get_subcommands().front();
  if (chosen->count("--out")) opts.out = out;
  if (chosen->count("--seed")) opts.seed = seed;
  if (chosen->count("--tol")) opts.tol = tol;

  if (chosen == run) return cli::run_config_file(config_path, opts);

  json config{{"kind", chosen->get_name()}};
  try {
    config["params"] = parse_params(param_items);
  } catch (const CLI::Error& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return cli::kExitParseError;
  }
  return cli::run_and_emit(std::move(config), opts);
}
