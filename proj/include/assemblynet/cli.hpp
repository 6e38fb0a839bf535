#pragma once

#include <cstdint>
#include <optional>
#include <ostream>
#include <string>

namespace assemblynet::cli {

// Exit codes shared by every subcommand: 0 the artifact is good, 1 it
// fails its check, 2 the invocation or the input file is unusable.
constexpr int kExitOk = 0;
constexpr int kExitFailed = 1;
constexpr int kExitUsage = 2;

/// Name of the environment variable consulted when neither the command
/// line nor the scenario file carries a seed.
extern const char* kSeedEnvVar;

/// `check <manifest>`: print the compliance report, exit 0 iff compliant.
int cmd_check(const std::string& manifest_path, std::ostream& out, std::ostream& err);

/// `simulate <scenario> [--out DIR] [--seed N]`: run, self-audit, print the
/// summary. Seed precedence: --seed, then the scenario file, then
/// ASSEMBLYNET_SEED; none at all is a usage error. With --out, writes
/// events.log, board.export, timeline.csv, and summary.txt into DIR.
int cmd_simulate(const std::string& scenario_path,
                 const std::optional<std::string>& out_dir,
                 std::optional<std::uint64_t> seed_override, std::ostream& out,
                 std::ostream& err);

/// `board-verify <export>`: exit 0 iff the exported chain verifies.
int cmd_board_verify(const std::string& board_path, std::ostream& out,
                     std::ostream& err);

}  // namespace assemblynet::cli
