#pragma once

#include <ostream>
#include <span>
#include <string>
#include <vector>

#include "qdepth/config.hpp"
#include "qdepth/selection.hpp"

namespace qdepth {

/// Process exit codes of the command-line tool.
enum ExitCode : int { kExitOk = 0, kExitRunFailure = 1, kExitConfigError = 2 };

// Table writers. All use '.' decimals, LF line endings and a leading
// "# qdepth <version> config_hash=<hash>" comment.
std::string baseline_csv(std::span<const BaselineRow> rows, const RunConfig& cfg);
std::string sweep_csv(const SweepResult& result, const RunConfig& cfg, bool hybrid);
std::string sweep_json(const SweepResult& result, const RunConfig& cfg);

int cmd_baseline(const RunConfig& cfg, std::ostream& out, std::ostream& err);
int cmd_sweep(const RunConfig& cfg, std::ostream& out, std::ostream& err);
int cmd_hybrid(const RunConfig& cfg, std::ostream& out, std::ostream& err);
int cmd_gen_graph(const RunConfig& cfg, std::ostream& out, std::ostream& err);
int cmd_verify(const RunConfig& cfg, std::ostream& out, std::ostream& err);

/// Full command-line entry point: parses flags and the optional config file,
/// then dispatches to one of the commands above.
int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace qdepth
