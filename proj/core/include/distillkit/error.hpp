// distillkit/error.hpp

// Copyright 2026  DistillKit Authors

// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//  http://www.apache.org/licenses/LICENSE-2.0
//
// THIS CODE IS PROVIDED *AS IS* BASIS, WITHOUT WARRANTIES OR CONDITIONS OF ANY
// KIND, EITHER EXPRESS OR IMPLIED, INCLUDING WITHOUT LIMITATION ANY IMPLIED
// WARRANTIES OR CONDITIONS OF TITLE, FITNESS FOR A PARTICULAR PURPOSE,
// MERCHANTABLITY OR NON-INFRINGEMENT.
// See the Apache 2 License for the specific language governing permissions and
// limitations under the License.

#ifndef DISTILLKIT_ERROR_HPP_
#define DISTILLKIT_ERROR_HPP_

#include <cstddef>
#include <stdexcept>
#include <string>

namespace distillkit {

/// Base class for all toolkit errors.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Caller misuse: bad flags, invalid configuration, out-of-range arguments.
/// Maps to process exit code 1.
class UsageError : public Error {
 public:
  using Error::Error;
};

/// Bad input data: missing ids, degenerate vectors, empty corpora.
/// Maps to process exit code 2.
class DataError : public Error {
 public:
  using Error::Error;
};

/// Malformed on-disk artifact (FTR1/EMB1/NET1, trial lists, ...).
/// Carries the byte offset where parsing failed. Maps to exit code 2.
class FormatError : public DataError {
 public:
  FormatError(const std::string& msg, std::size_t byte_offset)
      : DataError(msg + " (byte offset " + std::to_string(byte_offset) + ")"),
        byte_offset_(byte_offset) {}

  std::size_t byte_offset() const { return byte_offset_; }

 private:
  std::size_t byte_offset_;
};

}  // namespace distillkit

#endif  // DISTILLKIT_ERROR_HPP_
