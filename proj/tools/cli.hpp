#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

namespace ouhjb::cli {

enum class CommandKind { Solve, Estimate, Value, Delta, Fig1, Fig2, Endowment };

std::optional<CommandKind> parse_command_kind(const std::string& name);
std::string command_name(CommandKind kind);

struct Command {
    CommandKind kind = CommandKind::Solve;
    std::optional<std::filesystem::path> config;  ///< defaults apply when absent
    std::filesystem::path out_dir = "out";
    std::uint64_t seed = 1;
    std::vector<std::string> overrides;  ///< key=value, applied after the file
    unsigned threads = 0;                ///< 0 = hardware concurrency
};

enum ExitCode : int { Success = 0, ValidationFailure = 1, SolverFailure = 2 };

/// Runs one command, writing outputs and manifest.json under out_dir. Progress
/// goes to `out`, diagnostics to `err`.
int run(const Command& command, std::ostream& out, std::ostream& err);

/// Parses argv and dispatches to run().
int main_entry(int argc, char** argv);

}  // namespace ouhjb::cli
