// distillkit/teacher_store.cpp

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

#include "distillkit/teacher_store.hpp"

#include <cmath>
#include <cstdint>
#include <limits>

#include "distillkit/error.hpp"
#include "distillkit/io_util.hpp"

namespace distillkit {

namespace {
constexpr char kMagic[4] = {'E', 'M', 'B', '1'};
}

const EmbeddingVector* TeacherStore::find(const std::string& id) const {
  const auto it = index_.find(id);
  return it == index_.end() ? nullptr : &embeddings_[it->second];
}

void TeacherStore::add(std::string id, EmbeddingVector embedding) {
  if (embedding.empty()) throw DataError("empty embedding for utterance " + id);
  if (dim_ == 0) dim_ = embedding.size();
  if (embedding.size() != dim_)
    throw DataError("embedding for " + id + " has dimension " +
                    std::to_string(embedding.size()) + ", store holds " + std::to_string(dim_));
  if (index_.count(id)) throw DataError("duplicate utterance id: " + id);
  if (id.size() > std::numeric_limits<std::uint16_t>::max())
    throw DataError("utterance id exceeds 65535 bytes");
  index_.emplace(id, ids_.size());
  ids_.push_back(std::move(id));
  embeddings_.push_back(std::move(embedding));
}

void write_teacher_store(const std::string& path, const TeacherStore& store) {
  AtomicFileWriter writer(path);
  writer.write_bytes(kMagic, 4);
  writer.write_u32(static_cast<std::uint32_t>(store.dim()));
  writer.write_u32(static_cast<std::uint32_t>(store.size()));
  for (const std::string& id : store.ids()) {
    const EmbeddingVector& e = *store.find(id);
    writer.write_u16(static_cast<std::uint16_t>(id.size()));
    writer.write_string(id);
    writer.write_u32(static_cast<std::uint32_t>(e.size()));
    writer.write_f32_array(e.data(), e.size());
  }
  writer.commit();
}

TeacherStore read_teacher_store(const std::string& path) {
  BinaryReader reader(path);
  const std::string magic = reader.read_string(4, "magic");
  if (magic != std::string(kMagic, 4))
    throw FormatError("bad magic, expected EMB1", 0);
  const std::uint32_t dim = reader.read_u32("embedding dim");
  const std::uint32_t count = reader.read_u32("record count");
  if (dim == 0 && count > 0) throw FormatError("zero embedding dimension", 4);
  TeacherStore store(dim);
  for (std::uint32_t r = 0; r < count; ++r) {
    const std::uint16_t id_len = reader.read_u16("id length");
    std::string id = reader.read_string(id_len, "utterance id");
    const std::size_t dim_offset = reader.offset();
    const std::uint32_t record_dim = reader.read_u32("record dim");
    if (record_dim != dim)
      throw FormatError("record " + std::to_string(r) + " (" + id + ") has dimension " +
                            std::to_string(record_dim) + ", header says " + std::to_string(dim),
                        dim_offset);
    EmbeddingVector e(dim);
    const std::size_t block_offset = reader.offset();
    reader.read_f32_array(dim, e.data(), "embedding values");
    for (std::size_t k = 0; k < e.size(); ++k) {
      if (!std::isfinite(e[k]))
        throw FormatError(
            "non-finite embedding value in record " + std::to_string(r) + " (" + id + ")",
            block_offset + 4 * k);
    }
    store.add(std::move(id), std::move(e));
  }
  if (!reader.at_end())
    throw FormatError("trailing bytes after last record", reader.offset());
  return store;
}

}  // namespace distillkit
