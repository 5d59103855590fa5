// Copyright 2026 The latmap Authors
// SPDX-License-Identifier: Apache-2.0
#include <iostream>

#include "latmap/cli.hpp"

int main(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  return latmap::run_cli(args, std::cout, std::cerr);
}
