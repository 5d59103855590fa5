// Copyright 2026 The latmap Authors
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace latmap {

enum ExitCode { kExitOk = 0, kExitValidation = 2, kExitVerification = 3, kExitCap = 4 };

// Runs one command line. Results go to `out` (or --out), error records to `err`.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

// "a:b:n" (n evenly spaced values) or a comma list.
std::vector<double> parse_betas(const std::string& text);

}  // namespace latmap
