#pragma once

// Command-line surface: argument handling, result logs, manifests and the
// record verifier behind `verify-log`.

#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"

#include "fcp/search.hpp"

namespace fcp::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitFindings = 1;
inline constexpr int kExitUsage = 2;
inline constexpr int kExitRuntime = 3;

inline constexpr const char* kLogFormat = "fcp-result-log";
inline constexpr const char* kManifestFormat = "fcp-run-manifest";
inline constexpr int kLogVersion = 1;

/// Runs one invocation; argv[0] is the program name.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

/// Convenience wrapper for tests.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

/// FNV-1a 64 of the compact JSON text, 16 hex digits.
std::string json_digest(const nlohmann::json& j);

/// Checks one result-log line against the header it appeared under. Returns
/// an empty list when everything re-verifies.
std::vector<std::string> verify_line(const nlohmann::json& line, const nlohmann::json& header);

/// The record lines of a result log: everything after the header.
std::vector<std::string> record_section(const std::string& log_text);

}  // namespace fcp::cli
