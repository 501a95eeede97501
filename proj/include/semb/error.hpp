// Copyright 2026 The semb Authors. All Rights Reserved.
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

#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>

namespace semb {

/// Root of every error thrown by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Bad invocation: unknown flag, invalid option value, violated precondition.
class UsageError : public Error {
 public:
  using Error::Error;
};

/// Anything wrong with input data: unreadable files, malformed records,
/// empty vocabularies, missing keys. Maps to exit code 2 in the CLI.
class DataError : public Error {
 public:
  using Error::Error;
};

class StreamError : public DataError {
 public:
  StreamError(std::string path, const std::string& what)
      : DataError(path + ": " + what), path_(std::move(path)) {}
  const std::string& path() const noexcept { return path_; }

 private:
  std::string path_;
};

/// Malformed record. `line` and `column` are 1-based; 0 means unknown.
class ParseError : public DataError {
 public:
  ParseError(const std::string& what, std::size_t line, std::size_t column = 0)
      : DataError(format(what, line, column)), line_(line), column_(column) {}
  std::size_t line() const noexcept { return line_; }
  std::size_t column() const noexcept { return column_; }

 private:
  static std::string format(const std::string& what, std::size_t line,
                            std::size_t column) {
    std::string msg = "line " + std::to_string(line);
    if (column != 0) msg += ", column " + std::to_string(column);
    return msg + ": " + what;
  }
  std::size_t line_;
  std::size_t column_;
};

class DecodeError : public DataError {
 public:
  explicit DecodeError(std::size_t byte_offset)
      : DataError("invalid encoding at byte offset " +
                  std::to_string(byte_offset)),
        offset_(byte_offset) {}
  std::size_t byte_offset() const noexcept { return offset_; }

 private:
  std::size_t offset_;
};

class EmptyVocabularyError : public DataError {
 public:
  EmptyVocabularyError() : DataError("empty vocabulary") {}
};

class KeyNotFoundError : public DataError {
 public:
  explicit KeyNotFoundError(std::string key)
      : DataError("key not found: " + key), key_(std::move(key)) {}
  const std::string& key() const noexcept { return key_; }

 private:
  std::string key_;
};

/// Non-finite values showed up during SGD. Maps to exit code 3.
class DivergedError : public Error {
 public:
  explicit DivergedError(std::uint64_t step)
      : Error("training diverged at step " + std::to_string(step)),
        step_(step) {}
  std::uint64_t step() const noexcept { return step_; }

 private:
  std::uint64_t step_;
};

}  // namespace semb
