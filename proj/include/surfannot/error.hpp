// Copyright 2026 The surfannot Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace surfannot {

// Base class of every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Malformed .ply input. offset is the byte position where decoding stopped.
class ParseError : public Error {
 public:
  ParseError(std::size_t offset, const std::string& reason)
      : Error("byte " + std::to_string(offset) + ": " + reason),
        offset_(offset),
        reason_(reason) {}

  std::size_t offset() const noexcept { return offset_; }
  const std::string& reason() const noexcept { return reason_; }

 private:
  std::size_t offset_;
  std::string reason_;
};

// A precondition on domain values was violated (index out of range, bad
// radius, stale pick, ...).
class DomainError : public Error {
 public:
  using Error::Error;
};

class NotFoundError : public Error {
 public:
  using Error::Error;
};

// Malformed marker or track CSV. line is 1-based and counts the header.
class CsvError : public Error {
 public:
  CsvError(std::size_t line, const std::string& reason)
      : Error("line " + std::to_string(line) + ": " + reason), line_(line) {}

  std::size_t line() const noexcept { return line_; }

 private:
  std::size_t line_;
};

class IoError : public Error {
 public:
  using Error::Error;
};

// Saved project files do not match their manifest.
class IntegrityError : public Error {
 public:
  using Error::Error;
};

// One entry per file that failed during a series load.
struct FileDiagnostic {
  std::string path;
  std::string message;
};

class SeriesLoadError : public Error {
 public:
  explicit SeriesLoadError(std::vector<FileDiagnostic> diagnostics)
      : Error(summarize(diagnostics)), diagnostics_(std::move(diagnostics)) {}
  SeriesLoadError(const std::string& message)
      : Error(message) {}

  const std::vector<FileDiagnostic>& diagnostics() const noexcept {
    return diagnostics_;
  }

 private:
  static std::string summarize(const std::vector<FileDiagnostic>& diags) {
    std::string out = "failed to load series:";
    for (const auto& d : diags) out += "\n  " + d.path + ": " + d.message;
    return out;
  }

  std::vector<FileDiagnostic> diagnostics_;
};

}  // namespace surfannot
