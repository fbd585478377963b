#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace ilpminer::cli {

constexpr int exit_ok = 0;
constexpr int exit_failure = 1;  // the pipeline raised an error
constexpr int exit_usage = 2;

/// `args` excludes the program name. Errors are reported on `err` as one JSON
/// object per line: {"error":"usage"|"pipeline","message":...}.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace ilpminer::cli
