// Copyright 2026 The Inconsist Authors.
//
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

#ifndef INCONSIST_ERRORS_HPP_
#define INCONSIST_ERRORS_HPP_

#include <cstddef>
#include <stdexcept>
#include <string>

namespace inconsist {

// Base for everything this library throws.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class IoError : public Error {
 public:
  using Error::Error;
};

// Malformed input file (CSV header, mapping file, spec file).
class FormatError : public Error {
 public:
  using Error::Error;
};

// Template DSL error. line is 1-based and 0 when parsing a lone pattern.
class ParseError : public Error {
 public:
  ParseError(const std::string& what, std::size_t line, std::size_t column)
      : Error(format(what, line, column)), line_(line), column_(column) {}

  std::size_t line() const { return line_; }
  std::size_t column() const { return column_; }

 private:
  static std::string format(const std::string& what, std::size_t line,
                            std::size_t column) {
    std::string where = line > 0 ? "line " + std::to_string(line) + ", " : "";
    return where + "column " + std::to_string(column) + ": " + what;
  }

  std::size_t line_;
  std::size_t column_;
};

// A caller broke an operation's precondition.
class ContractError : public Error {
 public:
  using Error::Error;
};

class ArgumentError : public Error {
 public:
  using Error::Error;
};

// Endpoint unreachable, timed out or died.
class TransportError : public Error {
 public:
  TransportError(const std::string& what, bool retryable)
      : Error(what), retryable_(retryable) {}
  bool retryable() const { return retryable_; }

 private:
  bool retryable_;
};

// Reply could not be understood; carries the raw payload.
class ProtocolError : public Error {
 public:
  ProtocolError(const std::string& what, std::string payload)
      : Error(what + ": " + payload), payload_(std::move(payload)) {}
  const std::string& payload() const { return payload_; }

 private:
  std::string payload_;
};

// Report or checkpoint file is unreadable as a report.
class ReportError : public Error {
 public:
  using Error::Error;
};

}  // namespace inconsist

#endif  // INCONSIST_ERRORS_HPP_
