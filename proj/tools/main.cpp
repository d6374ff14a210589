// Copyright 2026 The fcpsep Authors
// License: Apache 2.0 (http://www.apache.org/licenses/LICENSE-2.0)

#include "cli.hpp"

int main(int argc, char ** argv) { return fcpsep::cli::run(argc, argv); }
