// distillkit/feature_archive.hpp

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

#ifndef DISTILLKIT_FEATURE_ARCHIVE_HPP_
#define DISTILLKIT_FEATURE_ARCHIVE_HPP_

#include <string>
#include <unordered_map>
#include <vector>

#include "distillkit/types.hpp"

namespace distillkit {

/// In-memory collection of utterance features keyed by utterance id.
/// Insertion order is preserved and is the on-disk record order.
class FeatureArchive {
 public:
  std::size_t size() const { return ids_.size(); }
  bool empty() const { return ids_.empty(); }

  const std::vector<std::string>& ids() const { return ids_; }
  const FeatureMatrix& features(std::size_t i) const { return features_[i]; }

  /// Returns nullptr when the id is absent.
  const FeatureMatrix* find(const std::string& id) const;

  /// Throws DataError on duplicate id or empty feature matrix.
  void add(std::string id, FeatureMatrix feats);

 private:
  std::vector<std::string> ids_;
  std::vector<FeatureMatrix> features_;
  std::unordered_map<std::string, std::size_t> index_;
};

/// On-disk layout (all little-endian): magic "FTR1", u32 record count, then
/// per record u16 id length, id bytes, u32 frames, u32 dim, frames*dim f32
/// row-major. Writes go to "<path>.tmp" and are renamed on success.
void write_feature_archive(const std::string& path, const FeatureArchive& archive);

/// Throws FormatError (carrying the byte offset) on bad magic, truncation,
/// or non-finite values. `frame_shift_s` is not stored in the file and is
/// reattached here.
FeatureArchive read_feature_archive(const std::string& path, float frame_shift_s = 0.01f);

}  // namespace distillkit

#endif  // DISTILLKIT_FEATURE_ARCHIVE_HPP_
