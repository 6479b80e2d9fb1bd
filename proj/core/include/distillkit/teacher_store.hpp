// distillkit/teacher_store.hpp

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

#ifndef DISTILLKIT_TEACHER_STORE_HPP_
#define DISTILLKIT_TEACHER_STORE_HPP_

#include <string>
#include <unordered_map>
#include <vector>

#include "distillkit/types.hpp"

namespace distillkit {

/// Read-only map from utterance id to a fixed-dimension teacher embedding.
/// This is the only supervision signal the trainer sees; embeddings are
/// stored as produced by the teacher (not renormalized on load).
class TeacherStore {
 public:
  TeacherStore() = default;
  explicit TeacherStore(std::size_t dim) : dim_(dim) {}

  std::size_t dim() const { return dim_; }
  std::size_t size() const { return ids_.size(); }
  bool empty() const { return ids_.empty(); }
  const std::vector<std::string>& ids() const { return ids_; }

  /// Returns nullptr when the id is absent; callers count and skip misses.
  const EmbeddingVector* find(const std::string& id) const;

  /// Throws DataError on duplicate id or dimension mismatch. The first add
  /// fixes the dimension when the store was default-constructed.
  void add(std::string id, EmbeddingVector embedding);

 private:
  std::size_t dim_ = 0;
  std::vector<std::string> ids_;
  std::vector<EmbeddingVector> embeddings_;
  std::unordered_map<std::string, std::size_t> index_;
};

/// On-disk layout (little-endian): magic "EMB1", u32 dim, u32 record count,
/// then per record u16 id length, id bytes, u32 dim (must equal the header
/// dim), dim f32 values. Writes are atomic (temp file + rename).
void write_teacher_store(const std::string& path, const TeacherStore& store);

/// Throws FormatError with a byte offset on bad magic, truncation, trailing
/// bytes, or non-finite values; DataError on duplicate ids.
TeacherStore read_teacher_store(const std::string& path);

}  // namespace distillkit

#endif  // DISTILLKIT_TEACHER_STORE_HPP_
