#pragma once

// Command dispatch shared by the C API and the command-line tool. A command
// takes a JSON request and produces an exit code, an output document and
// diagnostics.

#include <string>
#include <string_view>
#include <vector>

#include "core/serialize.hpp"

namespace fuglede {

struct CommandResult {
  int exit_code = 0;
  std::string output;
  std::string diagnostics;
};

/// Exit codes: 0 success, 1 usage/parse/IO, 2 property failed, 3 window or
/// evidence insufficient.
int exit_code_for(ErrorCode code) noexcept;

const std::vector<std::string>& command_names();

CommandResult run_command(std::string_view name, const Json& request);

/// Trace of the spectrum-to-tiling pipeline for a homogeneous digit set.
Json pipeline_trace(const DigitSet& set, std::int64_t window_exp);

/// Writes the census files, summary and pipeline traces into `dir`.
void write_gallery(const std::string& dir);

}  // namespace fuglede
