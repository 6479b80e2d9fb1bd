// distillkit/feature_archive.cpp

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

#include "distillkit/feature_archive.hpp"

#include <cmath>
#include <cstdint>
#include <limits>

#include "distillkit/error.hpp"
#include "distillkit/io_util.hpp"

namespace distillkit {

namespace {
constexpr char kMagic[4] = {'F', 'T', 'R', '1'};
}

const FeatureMatrix* FeatureArchive::find(const std::string& id) const {
  const auto it = index_.find(id);
  return it == index_.end() ? nullptr : &features_[it->second];
}

void FeatureArchive::add(std::string id, FeatureMatrix feats) {
  if (index_.count(id)) throw DataError("duplicate utterance id: " + id);
  if (feats.num_frames() == 0 || feats.dim() == 0)
    throw DataError("empty feature matrix for utterance " + id);
  if (id.size() > std::numeric_limits<std::uint16_t>::max())
    throw DataError("utterance id exceeds 65535 bytes");
  index_.emplace(id, ids_.size());
  ids_.push_back(std::move(id));
  features_.push_back(std::move(feats));
}

void write_feature_archive(const std::string& path, const FeatureArchive& archive) {
  AtomicFileWriter writer(path);
  writer.write_bytes(kMagic, 4);
  writer.write_u32(static_cast<std::uint32_t>(archive.size()));
  for (std::size_t i = 0; i < archive.size(); ++i) {
    const std::string& id = archive.ids()[i];
    const FeatureMatrix& f = archive.features(i);
    writer.write_u16(static_cast<std::uint16_t>(id.size()));
    writer.write_string(id);
    writer.write_u32(static_cast<std::uint32_t>(f.num_frames()));
    writer.write_u32(static_cast<std::uint32_t>(f.dim()));
    writer.write_f32_array(f.frames.data(), f.num_frames() * f.dim());
  }
  writer.commit();
}

FeatureArchive read_feature_archive(const std::string& path, float frame_shift_s) {
  BinaryReader reader(path);
  const std::string magic = reader.read_string(4, "magic");
  if (magic != std::string(kMagic, 4))
    throw FormatError("bad magic, expected FTR1", 0);
  const std::uint32_t count = reader.read_u32("record count");
  FeatureArchive archive;
  for (std::uint32_t r = 0; r < count; ++r) {
    const std::uint16_t id_len = reader.read_u16("id length");
    std::string id = reader.read_string(id_len, "utterance id");
    const std::uint32_t n_frames = reader.read_u32("frame count");
    const std::uint32_t dim = reader.read_u32("feature dim");
    if (n_frames == 0 || dim == 0)
      throw FormatError("record " + std::to_string(r) + " (" + id + ") has empty shape",
                        reader.offset() - 8);
    FeatureMatrix f;
    f.frame_shift_s = frame_shift_s;
    f.frames = Matf(n_frames, dim);
    const std::size_t block_offset = reader.offset();
    reader.read_f32_array(static_cast<std::size_t>(n_frames) * dim, f.frames.data(),
                          "feature values");
    const float* p = f.frames.data();
    for (std::size_t k = 0; k < static_cast<std::size_t>(n_frames) * dim; ++k) {
      if (!std::isfinite(p[k]))
        throw FormatError("non-finite feature value in record " + std::to_string(r) + " (" + id +
                              ")",
                          block_offset + 4 * k);
    }
    archive.add(std::move(id), std::move(f));
  }
  if (!reader.at_end())
    throw FormatError("trailing bytes after last record", reader.offset());
  return archive;
}

}  // namespace distillkit
