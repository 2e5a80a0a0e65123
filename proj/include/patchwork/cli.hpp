#pragma once

// Command-line front end: eval, surface, sweep, check and reproduce.

#include <filesystem>
#include <map>
#include <ostream>
#include <stdexcept>
#include <string>
#include <vector>

namespace patchwork {

/// A bad value for a specific command-line flag.
class FlagError : public std::invalid_argument {
 public:
  FlagError(std::string flag, const std::string& message, int status = 2)
      : std::invalid_argument(flag + ": " + message), flag_(std::move(flag)), status_(status) {}
  const std::string& flag() const noexcept { return flag_; }
  /// Exit status: 2 for bad input, 1 for an I/O failure tied to the flag.
  int status() const noexcept { return status_; }

 private:
  std::string flag_;
  int status_;
};

/// Flat "key=value" file; '#' starts a comment, blank lines are skipped.
std::map<std::string, std::string> load_config(const std::filesystem::path& path);

/// Runs one command. args excludes the program name. Returns the process
/// exit status: 0 success, 1 failed check or I/O error, 2 usage error.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace patchwork
