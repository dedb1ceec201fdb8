#pragma once

#include <string>
#include <utility>
#include <vector>

#include "tractor/json_io.hpp"

namespace tractor {

// Parsed command line. The JSON form produced by config_to_json embeds every
// field, and config_from_json inverts it exactly, so a config survives a
// round trip through a report file byte-for-byte.
struct CommandConfig {
  std::string subcommand;
  std::vector<std::string> algebras;  // normalized "kind:params" specs
  std::string rep = "adjoint";        // adjoint | standard | both
  std::vector<int> degrees = {0, 1, 2, 3};
  std::string chart = "flat";  // flat | sphere | poly
  int n = 3;
  std::string suite = "all";
  std::vector<std::pair<std::string, double>> tol;  // sorted by name
  long long seed = 1;
  std::string out;  // report path; target directory for `fixtures`
  bool force = false;
};

// Throws std::invalid_argument on unknown flags, malformed values, or an
// unknown subcommand; the caller turns that into exit code 2 plus usage.
CommandConfig parse_command_line(const std::vector<std::string>& args);

JsonValue config_to_json(const CommandConfig& config);
CommandConfig config_from_json(const std::string& text);

// {"command", "config", "results", "pass"}; an empty result vector emits
// "results": [].
JsonValue report_envelope(const CommandConfig& config, std::vector<JsonValue> results, bool pass);

// Writes to the path, or to stdout when the path is empty. Throws
// std::runtime_error when the path cannot be written.
void emit_report(const JsonValue& report, const std::string& path);

std::string usage_text();

// Entry point shared by the tractorlab binary and the CLI tests.
// Returns 0 on success, 1 on a failed check, 2 on usage errors.
int cli_main(int argc, char** argv);

}  // namespace tractor
