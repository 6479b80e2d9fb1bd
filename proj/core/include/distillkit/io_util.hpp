// distillkit/io_util.hpp

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

#ifndef DISTILLKIT_IO_UTIL_HPP_
#define DISTILLKIT_IO_UTIL_HPP_

#include <cstdint>
#include <filesystem>
#include <fstream>
#include <string>
#include <vector>

#include "distillkit/error.hpp"

namespace distillkit {

/// Buffered binary reader for the little-endian file formats (FTR1, EMB1,
/// NET1, WAV). Tracks the byte offset so FormatError can point at the exact
/// failure position.
class BinaryReader {
 public:
  explicit BinaryReader(const std::filesystem::path& path);

  std::size_t offset() const { return offset_; }
  std::size_t size() const { return data_.size(); }
  std::size_t remaining() const { return data_.size() - offset_; }
  bool at_end() const { return offset_ == data_.size(); }

  /// Advances past `n` bytes; throws FormatError on truncation.
  void skip(std::size_t n, const std::string& what) { read_bytes(n, what); }

  /// Reads `n` raw bytes; throws FormatError at the current offset on
  /// truncation. `what` names the field being read.
  const unsigned char* read_bytes(std::size_t n, const std::string& what);

  std::uint16_t read_u16(const std::string& what);
  std::uint32_t read_u32(const std::string& what);
  std::uint64_t read_u64(const std::string& what);
  float read_f32(const std::string& what);
  std::string read_string(std::size_t n, const std::string& what);

  /// Reads n consecutive float32 into out (resized).
  void read_f32_array(std::size_t n, std::vector<float>& out, const std::string& what);
  void read_f32_array(std::size_t n, float* out, const std::string& what);

 private:
  std::vector<unsigned char> data_;
  std::size_t offset_ = 0;
};

/// Accumulates little-endian bytes in memory, then commits atomically
/// (write to "<path>.tmp", rename over path). A partially written file never
/// becomes visible under the target name.
class AtomicFileWriter {
 public:
  explicit AtomicFileWriter(const std::filesystem::path& path);
  ~AtomicFileWriter();

  void write_bytes(const void* p, std::size_t n);
  void write_u16(std::uint16_t v);
  void write_u32(std::uint32_t v);
  void write_u64(std::uint64_t v);
  void write_f32(float v);
  void write_string(const std::string& s) { write_bytes(s.data(), s.size()); }
  void write_f32_array(const float* p, std::size_t n);

  /// Flushes and renames into place. Throws DataError on I/O failure.
  void commit();

 private:
  std::filesystem::path path_;
  std::filesystem::path tmp_path_;
  std::ofstream out_;
  bool committed_ = false;
};

/// Reads an entire text file; DataError if it cannot be opened.
std::string read_text_file(const std::filesystem::path& path);

/// Atomically writes a text file (same temp+rename scheme).
void write_text_file(const std::filesystem::path& path, const std::string& content);

}  // namespace distillkit

#endif  // DISTILLKIT_IO_UTIL_HPP_
