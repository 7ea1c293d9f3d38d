#pragma once

#include <iosfwd>
#include <optional>
#include <string>

namespace gaprel {

/// Flag values shared by every command; unset means "command default".
struct CommandOptions {
  std::string model_path;
  std::optional<std::size_t> depth;
  std::optional<double> tol;
  std::optional<std::size_t> max_iter;
  std::optional<std::size_t> budget;
  std::optional<std::string> measure;
  /// a level number, or "inf" for construct-qi
  std::optional<std::string> level;
  std::optional<std::string> seed;
  std::optional<std::string> nu;
  std::optional<std::string> op;
  std::optional<std::string> output;
};

/// Exit codes: 0 all verdicts true or construction succeeded, 1 a verdict is
/// false or an iteration did not settle, 2 usage or model error.
enum ExitCode : int { kExitPass = 0, kExitFail = 1, kExitUsage = 2 };

/// Runs one command; the JSON report goes to `out` (or --output), diagnostics
/// to `err`.
int run_command(const std::string& command, const CommandOptions& opt, std::ostream& out, std::ostream& err);

/// argv front end: `gaprel <command> [flags]`.
int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace gaprel
