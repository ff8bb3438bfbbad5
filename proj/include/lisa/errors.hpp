// Copyright 2026 The lisa-match Authors
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <stdexcept>
#include <string>

namespace lisa {

// Every failure raised by the library derives from Error, so callers that do
// not care about the category can catch a single type.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Operand orders do not fit together (n > m, mismatched matching sizes, ...).
class DimensionError : public Error {
 public:
  using Error::Error;
};

// A value lies outside the operation's domain (negative weight, NaN, ...).
class DomainError : public Error {
 public:
  using Error::Error;
};

// The input has no usable structure (zero matrix, empty graph, < 3 points).
class DegenerateError : public Error {
 public:
  using Error::Error;
};

// An iteration hit a zero normalizer and cannot continue.
class BreakdownError : public Error {
 public:
  using Error::Error;
};

// A configured size cap would be exceeded.
class SizeLimitError : public Error {
 public:
  using Error::Error;
};

// Malformed text input. line() is 1-based, 0 when not tied to a line.
class ParseError : public Error {
 public:
  ParseError(const std::string& what, std::size_t line = 0)
      : Error(line == 0 ? what : "line " + std::to_string(line) + ": " + what),
        line_(line) {}
  std::size_t line() const noexcept { return line_; }

  /// Same error with `context` (typically a file name) prepended.
  ParseError with_context(const std::string& context) const {
    ParseError e(context + ": " + what());
    e.line_ = line_;
    return e;
  }

 private:
  std::size_t line_;
};

class IoError : public Error {
 public:
  using Error::Error;
};

}  // namespace lisa
