// distillkit/augment.hpp

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

#ifndef DISTILLKIT_AUGMENT_HPP_
#define DISTILLKIT_AUGMENT_HPP_

#include <cstdint>

#include "distillkit/mat.hpp"
#include "distillkit/rng.hpp"
#include "distillkit/types.hpp"

namespace distillkit {

/// Student-side input construction: random 2-3 s crops plus masking and time
/// warping of the log-mel input. The teacher path never sees any of this.
struct AugmentConfig {
  double crop_min_s = 2.0;
  double crop_max_s = 3.0;
  int n_freq_masks = 2;
  int max_freq_mask_bins = 10;
  int n_time_masks = 2;
  int max_time_mask_frames = 20;
  double time_mask_fraction = 0.05;  // additional per-utterance cap on mask width
  int max_warp_frames = 5;
  std::uint64_t rng_seed = 0;

  void validate() const;  // UsageError on violated bounds
};

/// Counters for augmentation decisions that are silent in the output.
struct AugmentStats {
  std::uint64_t warp_applied = 0;
  std::uint64_t warp_skipped_short = 0;  // input shorter than 2*max_warp + 2
};

/// Rows [start, start+len) taken cyclically: output row r is input row
/// (start + r) mod T. A crop that fits is a plain contiguous slice; a crop
/// longer than the input tiles it along time.
FeatureMatrix crop_rows(const FeatureMatrix& feats, std::size_t start, std::size_t len);

/// Draws the crop length L uniformly from [crop_min, crop_max] (converted to
/// frames via the feature frame shift) and the start uniformly from
/// [0, T-L]. When T < L the matrix is tiled from row 0 instead.
FeatureMatrix random_crop(const FeatureMatrix& feats, const AugmentConfig& cfg, Rng& rng);

/// Deterministic building blocks, exposed so behavior can be pinned down
/// without reverse-engineering the draw sequence.
void apply_freq_mask(Matf& frames, int start_bin, int width);
void apply_time_mask(Matf& frames, int start_frame, int width);

/// Piecewise-linear time warp: the pivot frame `pivot_src` moves to
/// `pivot_dst` and the two segments are resampled along time. Frame count
/// and the first and last frames are unchanged.
Matf time_warp(const Matf& frames, int pivot_src, int pivot_dst);

/// Applies, in order: time warp (pivot drawn from [max_warp, T-max_warp],
/// displacement from [-max_warp, +max_warp], both pulled inside the fixed
/// first/last frames); n_freq_masks random bands of
/// width <= max_freq_mask_bins; n_time_masks random spans of width <=
/// min(max_time_mask_frames, floor(time_mask_fraction * T)). Masked cells
/// become 0.0, which approximates the mean of CMN-normalized input. Shape is
/// preserved; warping is skipped (and counted) when T < 2*max_warp + 2.
FeatureMatrix spec_augment(const FeatureMatrix& feats, const AugmentConfig& cfg, Rng& rng,
                           AugmentStats* stats = nullptr);

}  // namespace distillkit

#endif  // DISTILLKIT_AUGMENT_HPP_
