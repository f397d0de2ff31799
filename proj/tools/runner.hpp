#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <framelab/io.hpp>

namespace framelab::cli {

enum ExitCode : int {
  kExitOk = 0,
  kExitParseError = 1,
  kExitRejected = 2,
  kExitInvariant = 3,
};

/// Experiment kinds accepted in the "kind" field, in CLI order.
const std::vector<std::string>& experiment_kinds();

/// Command-line overrides applied on top of a config document.
struct RunOptions {
  std::optional<std::string> out;
  std::optional<std::uint64_t> seed;
  std::optional<double> tol;
  bool quiet = false;
  /// Record wall-clock columns; off by default so reports are byte-stable.
  bool timing = false;
};

struct Table {
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;
};

struct RunResult {
  int exit_code = kExitOk;
  json report;
  std::optional<Table> table;
  /// One-line human summary or the diagnostic on failure.
  std::string message;
};

/// Parses a config document. Syntax errors become ConfigError with
/// "line L, column C" in the location.
json parse_config_text(std::string_view text);

/// Runs one experiment. Never throws on bad input: parse and validation
/// problems come back as kExitParseError with the message filled in.
RunResult run_experiment(json config, const RunOptions& options = {});

/// Writes <out>.json and, for tabular kinds, <out>.csv. Returns the paths written.
std::vector<std::string> write_reports(const RunResult& result, const std::string& out);

/// run_experiment + write_reports, printing the summary to stdout and
/// diagnostics to stderr.
int run_and_emit(json config, const RunOptions& options);

/// Loads `path` and forwards to run_and_emit; unreadable or malformed files exit 1.
int run_config_file(const std::string& path, const RunOptions& options);

std::string sha256_hex(std::string_view data);

/// Shortest round-trip decimal form with '.' as separator.
std::string format_number(double value);

std::string render_csv(const Table& table);

}  // namespace framelab::cli
