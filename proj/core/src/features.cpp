// distillkit/features.cpp

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

#include "distillkit/features.hpp"

#include <algorithm>
#include <cmath>

#include "distillkit/error.hpp"

namespace distillkit {

std::vector<bool> vad_keep_mask(std::span<const float> log_energies, const VadConfig& cfg) {
  std::vector<bool> keep(log_energies.size(), false);
  if (log_energies.empty()) return keep;
  double max_e = log_energies[0];
  for (const float e : log_energies) max_e = std::max(max_e, static_cast<double>(e));
  const double threshold = std::max(cfg.absolute_floor, max_e - cfg.dynamic_range);
  for (std::size_t t = 0; t < log_energies.size(); ++t)
    keep[t] = static_cast<double>(log_energies[t]) > threshold;
  return keep;
}

FeatureMatrix apply_vad(const FeatureMatrix& feats, std::span<const float> log_energies,
                        const VadConfig& cfg) {
  if (log_energies.size() != feats.num_frames())
    throw DataError("VAD energy track has " + std::to_string(log_energies.size()) +
                    " frames but features have " + std::to_string(feats.num_frames()));
  const std::vector<bool> keep = vad_keep_mask(log_energies, cfg);
  const std::size_t n_kept =
      static_cast<std::size_t>(std::count(keep.begin(), keep.end(), true));
  if (n_kept == 0) throw DataError("VAD rejected every frame of the utterance");

  FeatureMatrix out;
  out.frame_shift_s = feats.frame_shift_s;
  out.frames = Matf(n_kept, feats.dim());
  std::size_t r = 0;
  for (std::size_t t = 0; t < feats.num_frames(); ++t) {
    if (!keep[t]) continue;
    std::copy(feats.frames.row(t).begin(), feats.frames.row(t).end(), out.frames.row(r).begin());
    ++r;
  }
  return out;
}

template <typename T>
Mat<T> sliding_cmn_matrix(const Mat<T>& feats, int window_frames) {
  if (window_frames <= 0) throw UsageError("CMN window must cover at least one frame");
  const std::size_t n = feats.rows();
  const std::size_t d = feats.cols();
  Mat<T> out(n, d);
  if (n == 0) return out;

  const std::size_t w = std::min<std::size_t>(static_cast<std::size_t>(window_frames), n);
  std::vector<double> mean(d, 0.0);
  std::size_t win_start = static_cast<std::size_t>(-1);
  for (std::size_t t = 0; t < n; ++t) {
    // clamp(t - (w - 1) / 2, 0, n - w); the subtraction is done in signed
    // arithmetic because the unclamped start is negative near the left edge.
    const std::ptrdiff_t raw =
        static_cast<std::ptrdiff_t>(t) - static_cast<std::ptrdiff_t>((w - 1) / 2);
    const std::size_t start = static_cast<std::size_t>(
        std::clamp<std::ptrdiff_t>(raw, 0, static_cast<std::ptrdiff_t>(n - w)));
    if (start != win_start) {
      // Recompute the mean fresh rather than updating incrementally: the
      // window only ever advances by one frame, but a full recompute keeps
      // the result independent of the traversal history. Cost is w*d per
      // window position, which is acceptable for the window sizes in use.
      std::fill(mean.begin(), mean.end(), 0.0);
      for (std::size_t i = start; i < start + w; ++i) {
        const auto row = feats.row(i);
        for (std::size_t c = 0; c < d; ++c) mean[c] += static_cast<double>(row[c]);
      }
      for (std::size_t c = 0; c < d; ++c) mean[c] /= static_cast<double>(w);
      win_start = start;
    }
    const auto row = feats.row(t);
    for (std::size_t c = 0; c < d; ++c)
      out(t, c) = static_cast<T>(static_cast<double>(row[c]) - mean[c]);
  }
  return out;
}

template Mat<float> sliding_cmn_matrix<float>(const Mat<float>&, int);
template Mat<double> sliding_cmn_matrix<double>(const Mat<double>&, int);

FeatureMatrix sliding_cmn(const FeatureMatrix& feats, double window_s) {
  const int window_frames =
      static_cast<int>(std::lround(window_s / static_cast<double>(feats.frame_shift_s)));
  FeatureMatrix out;
  out.frame_shift_s = feats.frame_shift_s;
  out.frames = sliding_cmn_matrix(feats.frames, window_frames);
  return out;
}

FeatureMatrix extract_features(const Waveform& wav, const FeaturePipelineConfig& cfg) {
  std::vector<float> energies;
  FeatureMatrix feats = compute_fbank_with_energy(wav, cfg.fbank, &energies);
  if (cfg.cmn_before_vad && cfg.cmn_enabled) feats = sliding_cmn(feats, cfg.cmn_window_s);
  if (cfg.vad_enabled) feats = apply_vad(feats, energies, cfg.vad);
  if (!cfg.cmn_before_vad && cfg.cmn_enabled) feats = sliding_cmn(feats, cfg.cmn_window_s);
  return feats;
}

}  // namespace distillkit
