// Copyright 2026 The fcpsep Authors
// License: Apache 2.0 (http://www.apache.org/licenses/LICENSE-2.0)

#ifndef FCPSEP_TOOLS_CLI_HPP_
#define FCPSEP_TOOLS_CLI_HPP_

#include <string>
#include <vector>

namespace fcpsep::cli
{

/// Exit codes: 0 success, 1 invalid configuration, 2 I/O failure,
/// 3 numerical failure.
int run(int argc, const char * const * argv);

/// Same as run(); args excludes the program name.
int run(const std::vector<std::string> & args);

}  // namespace fcpsep::cli

#endif  // FCPSEP_TOOLS_CLI_HPP_
