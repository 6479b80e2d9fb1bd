// distillkit/types.hpp

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

#ifndef DISTILLKIT_TYPES_HPP_
#define DISTILLKIT_TYPES_HPP_

#include <string>
#include <vector>

#include "distillkit/mat.hpp"

namespace distillkit {

/// Mono audio signal. Samples are dimensionless amplitudes, nominally in
/// [-1, 1].
struct Waveform {
  std::vector<float> samples;
  int sample_rate = 16000;

  double duration_s() const {
    return static_cast<double>(samples.size()) / sample_rate;
  }
};

/// Per-utterance acoustic features: T frames by `dim` log-mel bins
/// (dim = 80 throughout this toolkit).
struct FeatureMatrix {
  Matf frames;
  float frame_shift_s = 0.01f;

  std::size_t num_frames() const { return frames.rows(); }
  std::size_t dim() const { return frames.cols(); }
};

/// Fixed-length speaker embedding (default 256-dim).
using EmbeddingVector = std::vector<float>;

/// One verification trial: compare `enroll_id` against `test_id`;
/// target = same speaker.
struct TrialPair {
  bool target = false;
  std::string enroll_id;
  std::string test_id;
};

struct ScoredTrial {
  TrialPair trial;
  double score = 0.0;  // cosine similarity in [-1, 1]
};

}  // namespace distillkit

#endif  // DISTILLKIT_TYPES_HPP_
