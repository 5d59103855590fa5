// Copyright 2026 The latmap Authors
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <stdexcept>
#include <string>
#include <vector>

namespace latmap {

enum class ErrorKind {
  Validation,
  Precondition,
  Unsupported,
  Frustrated,
  Cycle,
  Overlap,
  Obstruction,
  CapExceeded,
  Verification,
};

const char* to_string(ErrorKind kind);

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what) : std::runtime_error(what), kind_(kind) {}
  ErrorKind kind() const { return kind_; }

 private:
  ErrorKind kind_;
};

// Inconsistent parity constraints. `certificate` lists the constraint rows
// whose sum reads 0 = 1.
class FrustratedError : public Error {
 public:
  FrustratedError(const std::string& what, std::vector<int> certificate)
      : Error(ErrorKind::Frustrated, what), certificate_(std::move(certificate)) {}
  const std::vector<int>& certificate() const { return certificate_; }

 private:
  std::vector<int> certificate_;
};

// Gauge fixing would close a loop. `cycle` holds edge ids of one offending cycle.
class CycleError : public Error {
 public:
  CycleError(const std::string& what, std::vector<int> cycle)
      : Error(ErrorKind::Cycle, what), cycle_(std::move(cycle)) {}
  const std::vector<int>& cycle() const { return cycle_; }

 private:
  std::vector<int> cycle_;
};

[[noreturn]] void fail(ErrorKind kind, const std::string& what);

inline void require(bool cond, ErrorKind kind, const std::string& what) {
  if (!cond) fail(kind, what);
}

}  // namespace latmap
