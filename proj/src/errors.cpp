// Copyright 2026 The latmap Authors
// SPDX-License-Identifier: Apache-2.0
#include "latmap/errors.hpp"

namespace latmap {

const char* to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::Validation: return "validation";
    case ErrorKind::Precondition: return "precondition";
    case ErrorKind::Unsupported: return "unsupported";
    case ErrorKind::Frustrated: return "frustrated";
    case ErrorKind::Cycle: return "cycle";
    case ErrorKind::Overlap: return "overlap";
    case ErrorKind::Obstruction: return "obstruction";
    case ErrorKind::CapExceeded: return "cap_exceeded";
    case ErrorKind::Verification: return "verification";
  }
  return "unknown";
}

void fail(ErrorKind kind, const std::string& what) { throw Error(kind, what); }

}  // namespace latmap
