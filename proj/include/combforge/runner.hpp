#pragma once

#include <string>

namespace cf {

inline constexpr const char* kVersion = "0.1.0";

// Executes the task named by the subcommand with the given JSON config file.
// output_dir (if nonempty) overrides the config's output_dir. Returns the
// process exit code: 0 success, 1 config error, 2 numerical failure. Errors
// are reported as a JSON object on stderr.
int run_task(const std::string& task, const std::string& config_path,
             std::string output_dir, int threads);

// sha256 hex digest of a byte string
std::string sha256_hex(const std::string& bytes);

}  // namespace cf
