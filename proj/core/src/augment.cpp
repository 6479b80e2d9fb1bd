// distillkit/augment.cpp

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

#include "distillkit/augment.hpp"

#include <algorithm>
#include <cmath>

#include "distillkit/error.hpp"

namespace distillkit {

void AugmentConfig::validate() const {
  if (!(crop_min_s > 0) || !(crop_min_s <= crop_max_s))
    throw UsageError("crop range must satisfy 0 < crop_min_s <= crop_max_s");
  if (n_freq_masks < 0 || n_time_masks < 0 || max_freq_mask_bins < 0 ||
      max_time_mask_frames < 0 || max_warp_frames < 0)
    throw UsageError("mask counts, mask widths and warp must be >= 0");
  if (time_mask_fraction < 0 || time_mask_fraction > 1)
    throw UsageError("time_mask_fraction must lie in [0, 1]");
}

FeatureMatrix crop_rows(const FeatureMatrix& feats, std::size_t start, std::size_t len) {
  const std::size_t n = feats.num_frames();
  if (n == 0) throw DataError("cannot crop an empty feature matrix");
  FeatureMatrix out;
  out.frame_shift_s = feats.frame_shift_s;
  out.frames = Matf(len, feats.dim());
  for (std::size_t r = 0; r < len; ++r) {
    const std::size_t src = (start + r) % n;
    std::copy(feats.frames.row(src).begin(), feats.frames.row(src).end(),
              out.frames.row(r).begin());
  }
  return out;
}

FeatureMatrix random_crop(const FeatureMatrix& feats, const AugmentConfig& cfg, Rng& rng) {
  cfg.validate();
  const std::size_t n = feats.num_frames();
  if (n == 0) throw DataError("cannot crop an empty feature matrix");
  const double shift = static_cast<double>(feats.frame_shift_s);
  const auto min_frames = static_cast<std::size_t>(
      std::max<long>(1, std::lround(cfg.crop_min_s / shift)));
  const auto max_frames = static_cast<std::size_t>(
      std::max<long>(1, std::lround(cfg.crop_max_s / shift)));
  const std::size_t len =
      static_cast<std::size_t>(rng.uniform_int(static_cast<std::int64_t>(min_frames),
                                               static_cast<std::int64_t>(max_frames)));
  if (n < len) return crop_rows(feats, 0, len);
  const std::size_t start = static_cast<std::size_t>(
      rng.uniform_int(0, static_cast<std::int64_t>(n - len)));
  return crop_rows(feats, start, len);
}

void apply_freq_mask(Matf& frames, int start_bin, int width) {
  const int dim = static_cast<int>(frames.cols());
  const int lo = std::clamp(start_bin, 0, dim);
  const int hi = std::clamp(start_bin + width, 0, dim);
  for (std::size_t t = 0; t < frames.rows(); ++t) {
    auto row = frames.row(t);
    for (int c = lo; c < hi; ++c) row[static_cast<std::size_t>(c)] = 0.0f;
  }
}

void apply_time_mask(Matf& frames, int start_frame, int width) {
  const int n = static_cast<int>(frames.rows());
  const int lo = std::clamp(start_frame, 0, n);
  const int hi = std::clamp(start_frame + width, 0, n);
  for (int t = lo; t < hi; ++t) {
    auto row = frames.row(static_cast<std::size_t>(t));
    std::fill(row.begin(), row.end(), 0.0f);
  }
}

Matf time_warp(const Matf& frames, int pivot_src, int pivot_dst) {
  const int n = static_cast<int>(frames.rows());
  const std::size_t dim = frames.cols();
  if (n < 2) return frames;
  if (pivot_src <= 0 || pivot_src >= n - 1 || pivot_dst <= 0 || pivot_dst >= n - 1)
    throw UsageError("warp pivot must lie strictly inside the utterance");

  Matf out(frames.rows(), dim);
  for (int t = 0; t < n; ++t) {
    double u;
    if (t <= pivot_dst)
      u = static_cast<double>(t) * pivot_src / pivot_dst;
    else
      u = pivot_src +
          static_cast<double>(t - pivot_dst) * (n - 1 - pivot_src) / (n - 1 - pivot_dst);
    const int i0 = std::min(static_cast<int>(u), n - 1);
    const int i1 = std::min(i0 + 1, n - 1);
    const float frac = static_cast<float>(u - i0);
    const auto a = frames.row(static_cast<std::size_t>(i0));
    const auto b = frames.row(static_cast<std::size_t>(i1));
    auto dst = out.row(static_cast<std::size_t>(t));
    for (std::size_t c = 0; c < dim; ++c) dst[c] = (1.0f - frac) * a[c] + frac * b[c];
  }
  return out;
}

FeatureMatrix spec_augment(const FeatureMatrix& feats, const AugmentConfig& cfg, Rng& rng,
                           AugmentStats* stats) {
  cfg.validate();
  FeatureMatrix out;
  out.frame_shift_s = feats.frame_shift_s;
  out.frames = feats.frames;
  const int n = static_cast<int>(out.frames.rows());
  const int dim = static_cast<int>(out.frames.cols());
  if (n == 0) return out;

  if (cfg.max_warp_frames > 0) {
    if (n >= 2 * cfg.max_warp_frames + 2) {
      const int pivot = static_cast<int>(
          rng.uniform_int(cfg.max_warp_frames, n - cfg.max_warp_frames));
      const int delta = static_cast<int>(
          rng.uniform_int(-cfg.max_warp_frames, cfg.max_warp_frames));
      // Boundary draws are pulled inside so the first and last frames stay
      // fixed and the two resample segments are never empty.
      const int src = std::clamp(pivot, 1, n - 2);
      const int dst = std::clamp(pivot + delta, 1, n - 2);
      if (src != dst) out.frames = time_warp(out.frames, src, dst);
      if (stats) ++stats->warp_applied;
    } else if (stats) {
      ++stats->warp_skipped_short;
    }
  }

  for (int m = 0; m < cfg.n_freq_masks; ++m) {
    const int cap = std::min(cfg.max_freq_mask_bins, dim);
    const int width = static_cast<int>(rng.uniform_int(0, cap));
    const int start = static_cast<int>(rng.uniform_int(0, dim - width));
    apply_freq_mask(out.frames, start, width);
  }

  const int frame_cap = std::min(
      cfg.max_time_mask_frames,
      static_cast<int>(cfg.time_mask_fraction * n));
  for (int m = 0; m < cfg.n_time_masks; ++m) {
    const int width = static_cast<int>(rng.uniform_int(0, std::max(0, frame_cap)));
    const int start = static_cast<int>(rng.uniform_int(0, n - width));
    apply_time_mask(out.frames, start, width);
  }
  return out;
}

}  // namespace distillkit
