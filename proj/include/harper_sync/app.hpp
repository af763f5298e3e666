#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "harper_sync/config.hpp"
#include "harper_sync/output.hpp"

namespace harper::app {

inline constexpr int kExitOk = 0;
inline constexpr int kExitRuntime = 1;  ///< I/O and other unexpected failures
inline constexpr int kExitConfig = 2;
inline constexpr int kExitNumeric = 3;

/// Run the configured command and collect its artifacts (nothing is written).
io::Artifacts execute(const cli::RunConfig& cfg);

/// One-line human summary of the artifacts.
std::string summarize(const io::Artifacts& a);

/// Full CLI: parse, execute, write outputs. Returns the process exit code.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

} // namespace harper::app
