// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace codesum {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// File could not be opened, read, or written.
class IoError : public Error {
 public:
  using Error::Error;
};

/// Input is well-formed on disk but violates a contract (bad config, id mismatch, ...).
class ValidationError : public Error {
 public:
  using Error::Error;
};

/// Error tied to a byte offset in Java source.
class SourceError : public Error {
 public:
  SourceError(const std::string& what, std::size_t offset)
      : Error(what + " at offset " + std::to_string(offset)), offset_(offset) {}
  std::size_t offset() const noexcept { return offset_; }

 private:
  std::size_t offset_;
};

class LexError : public SourceError {
 public:
  using SourceError::SourceError;
};

class ParseError : public SourceError {
 public:
  using SourceError::SourceError;
};

}  // namespace codesum
