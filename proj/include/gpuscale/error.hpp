// Copyright 2026 The gpuscale Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <stdexcept>
#include <string>

namespace gpuscale {

// Maps onto the CLI exit codes: validation 1, io 2, analysis 3.
enum class ErrorKind { validation = 1, io = 2, analysis = 3 };

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(what), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }
  int exit_code() const noexcept { return static_cast<int>(kind_); }

 private:
  ErrorKind kind_;
};

inline Error validation_error(const std::string& what) {
  return Error(ErrorKind::validation, what);
}
inline Error io_error(const std::string& what) {
  return Error(ErrorKind::io, what);
}
inline Error analysis_error(const std::string& what) {
  return Error(ErrorKind::analysis, what);
}

}  // namespace gpuscale
