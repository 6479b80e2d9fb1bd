// distillkit/features.hpp

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

#ifndef DISTILLKIT_FEATURES_HPP_
#define DISTILLKIT_FEATURES_HPP_

#include <span>
#include <vector>

#include "distillkit/fbank.hpp"
#include "distillkit/mat.hpp"
#include "distillkit/types.hpp"

namespace distillkit {

/// Energy-based voice activity detection. A frame is kept when its raw log
/// energy exceeds both an absolute floor and (max energy - dynamic range).
/// The default range of 9.21 nats is a factor of ~1e4 in power.
struct VadConfig {
  double absolute_floor = -15.0;
  double dynamic_range = 9.21;
};

/// Returns the keep decision per frame; empty input yields an empty mask.
std::vector<bool> vad_keep_mask(std::span<const float> log_energies, const VadConfig& cfg);

/// Drops frames rejected by the mask. Throws DataError when every frame is
/// rejected, since downstream stages cannot operate on an empty utterance.
FeatureMatrix apply_vad(const FeatureMatrix& feats, std::span<const float> log_energies,
                        const VadConfig& cfg);

/// Sliding-window cepstral mean subtraction with constant-width windows. For
/// frame t the window start is clamp(t - (w - 1) / 2, 0, T - w), so edge
/// frames reuse shifted full-width windows; when T <= w the global mean is
/// removed from every frame. `window_frames` must be positive.
template <typename T>
Mat<T> sliding_cmn_matrix(const Mat<T>& feats, int window_frames);

FeatureMatrix sliding_cmn(const FeatureMatrix& feats, double window_s);

/// Waveform to trainer-ready features: fbank, then VAD, then mean
/// normalization by default. `cmn_before_vad` reverses the last two stages
/// for pipelines that prefer normalizing over silence as well.
struct FeaturePipelineConfig {
  FbankConfig fbank;
  VadConfig vad;
  bool vad_enabled = true;
  bool cmn_enabled = true;
  bool cmn_before_vad = false;
  double cmn_window_s = 3.0;
};

FeatureMatrix extract_features(const Waveform& wav, const FeaturePipelineConfig& cfg);

}  // namespace distillkit

#endif  // DISTILLKIT_FEATURES_HPP_
