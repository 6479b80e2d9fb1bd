// distillkit/io_util.cpp

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

#include "distillkit/io_util.hpp"

#include <cstring>
#include <sstream>

namespace distillkit {

namespace fs = std::filesystem;

BinaryReader::BinaryReader(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DataError("cannot open file for reading: " + path.string());
  in.seekg(0, std::ios::end);
  const std::streamoff n = in.tellg();
  in.seekg(0, std::ios::beg);
  data_.resize(static_cast<std::size_t>(n));
  if (n > 0) in.read(reinterpret_cast<char*>(data_.data()), n);
  if (!in) throw DataError("read failed: " + path.string());
}

const unsigned char* BinaryReader::read_bytes(std::size_t n, const std::string& what) {
  if (offset_ + n > data_.size()) {
    throw FormatError("truncated file while reading " + what, offset_);
  }
  const unsigned char* p = data_.data() + offset_;
  offset_ += n;
  return p;
}

std::uint16_t BinaryReader::read_u16(const std::string& what) {
  const unsigned char* p = read_bytes(2, what);
  return static_cast<std::uint16_t>(p[0] | (std::uint16_t(p[1]) << 8));
}

std::uint32_t BinaryReader::read_u32(const std::string& what) {
  const unsigned char* p = read_bytes(4, what);
  return std::uint32_t(p[0]) | (std::uint32_t(p[1]) << 8) | (std::uint32_t(p[2]) << 16) |
         (std::uint32_t(p[3]) << 24);
}

std::uint64_t BinaryReader::read_u64(const std::string& what) {
  const unsigned char* p = read_bytes(8, what);
  std::uint64_t v = 0;
  for (int i = 7; i >= 0; --i) v = (v << 8) | p[i];
  return v;
}

float BinaryReader::read_f32(const std::string& what) {
  const std::uint32_t bits = read_u32(what);
  float f;
  std::memcpy(&f, &bits, sizeof(f));
  return f;
}

std::string BinaryReader::read_string(std::size_t n, const std::string& what) {
  const unsigned char* p = read_bytes(n, what);
  return std::string(reinterpret_cast<const char*>(p), n);
}

void BinaryReader::read_f32_array(std::size_t n, std::vector<float>& out, const std::string& what) {
  out.resize(n);
  read_f32_array(n, out.data(), what);
}

void BinaryReader::read_f32_array(std::size_t n, float* out, const std::string& what) {
  const unsigned char* p = read_bytes(4 * n, what);
  // Files are little-endian; so is every target we build for.
  std::memcpy(out, p, 4 * n);
}

AtomicFileWriter::AtomicFileWriter(const fs::path& path)
    : path_(path), tmp_path_(path.string() + ".tmp") {
  out_.open(tmp_path_, std::ios::binary | std::ios::trunc);
  if (!out_) throw DataError("cannot open file for writing: " + tmp_path_.string());
}

AtomicFileWriter::~AtomicFileWriter() {
  if (!committed_) {
    out_.close();
    std::error_code ec;
    fs::remove(tmp_path_, ec);
  }
}

void AtomicFileWriter::write_bytes(const void* p, std::size_t n) {
  out_.write(reinterpret_cast<const char*>(p), static_cast<std::streamsize>(n));
}

void AtomicFileWriter::write_u16(std::uint16_t v) {
  unsigned char b[2] = {static_cast<unsigned char>(v), static_cast<unsigned char>(v >> 8)};
  write_bytes(b, 2);
}

void AtomicFileWriter::write_u32(std::uint32_t v) {
  unsigned char b[4];
  for (int i = 0; i < 4; ++i) b[i] = static_cast<unsigned char>(v >> (8 * i));
  write_bytes(b, 4);
}

void AtomicFileWriter::write_u64(std::uint64_t v) {
  unsigned char b[8];
  for (int i = 0; i < 8; ++i) b[i] = static_cast<unsigned char>(v >> (8 * i));
  write_bytes(b, 8);
}

void AtomicFileWriter::write_f32(float v) {
  std::uint32_t bits;
  std::memcpy(&bits, &v, sizeof(bits));
  write_u32(bits);
}

void AtomicFileWriter::write_f32_array(const float* p, std::size_t n) {
  write_bytes(p, 4 * n);
}

void AtomicFileWriter::commit() {
  out_.flush();
  if (!out_) throw DataError("write failed: " + tmp_path_.string());
  out_.close();
  std::error_code ec;
  fs::rename(tmp_path_, path_, ec);
  if (ec) throw DataError("rename failed: " + tmp_path_.string() + " -> " + path_.string() + ": " + ec.message());
  committed_ = true;
}

std::string read_text_file(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DataError("cannot open file for reading: " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_text_file(const fs::path& path, const std::string& content) {
  AtomicFileWriter w(path);
  w.write_bytes(content.data(), content.size());
  w.commit();
}

}  // namespace distillkit
