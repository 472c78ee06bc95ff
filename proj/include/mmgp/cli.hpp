#pragma once

#include <iosfwd>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "mmgp/engine.hpp"

namespace mmgp::cli {

enum class EngineKind { kPooled, kNaive };

struct CliArgs {
  RunConfig config;
  EngineKind engine = EngineKind::kPooled;
  std::optional<std::string> csv_path;
  bool quiet = false;
  bool zero_time = false;
  std::vector<std::string> warnings;
};

/// Bad command line. what() names the offending flag.
class UsageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Parses argv[1..]. Throws UsageError on unknown flags or invalid values.
/// Returns nullopt when --help was requested (help text goes to `out`).
std::optional<CliArgs> parse_args(const std::vector<std::string>& argv, std::ostream& out);

/// key=value summary line (no trailing newline).
std::string summary_line(const CliArgs& args, const RunResult& result);

/// Whole program: parse, run, write CSV, print summary. Returns exit code.
int run(const std::vector<std::string>& argv, std::ostream& out, std::ostream& err);

}  // namespace mmgp::cli
