// Copyright 2026 The vhfasr Authors.
// License: Apache 2.0 (http://www.apache.org/licenses/LICENSE-2.0)

#include <iostream>

#include "cli/commands.h"

int main(int argc, char** argv) {
  return vhfasr::cli::RunCli(argc, argv, std::cout, std::cerr);
}
