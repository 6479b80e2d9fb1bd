// distillkit/fbank.hpp

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

#ifndef DISTILLKIT_FBANK_HPP_
#define DISTILLKIT_FBANK_HPP_

#include <cstddef>
#include <span>
#include <vector>

#include "distillkit/mat.hpp"
#include "distillkit/types.hpp"

namespace distillkit {

/// Log-mel filterbank extraction parameters. Defaults: 25 ms Hamming window,
/// 10 ms shift, 80 mel bins over 20-7600 Hz, power spectrum, natural log
/// with an area-scaled floor, no dither, no pre-emphasis.
struct FbankConfig {
  double frame_length_ms = 25.0;
  double frame_shift_ms = 10.0;
  int num_bins = 80;
  double low_freq = 20.0;
  double high_freq = 7600.0;
  bool use_power = true;     // power spectrum; false -> magnitude
  double log_floor = 1e-10;  // mel energy b floored at log_floor * area(b)
  double preemphasis = 0.0;  // 0 disables; 0.97 is the conventional value

  int window_length(int sample_rate) const;
  int window_shift(int sample_rate) const;
  double frame_shift_s() const { return frame_shift_ms / 1000.0; }

  /// Throws UsageError on non-positive sample rate or inconsistent settings.
  void validate(int sample_rate) const;
};

/// Closed-form frame count: floor((n_samples - win) / hop) + 1, or 0 when the
/// signal is shorter than one window.
std::size_t fbank_num_frames(std::size_t n_samples, int window_length, int window_shift);

/// Triangular mel filters evaluated over FFT bins 0..n_fft/2. `area(b)` is
/// the sum of weights of filter b, used to scale the log floor so that an
/// all-zero signal maps to ln(log_floor * area(b)).
template <typename T>
struct MelBank {
  int n_fft = 0;
  std::vector<int> first_bin;            // first FFT bin with nonzero weight
  std::vector<std::vector<T>> weights;   // per mel bin
  std::vector<T> area;

  static MelBank build(int sample_rate, int n_fft, const FbankConfig& cfg);
};

/// Extraction core, templated so tests can run the identical algorithm in
/// 64-bit as an oracle for the 32-bit production path. Returns a (T, num_bins)
/// matrix of natural-log mel energies; if `log_energies` is non-null it
/// receives the per-frame raw log energy ln(max(sum x^2, 1e-10)) computed
/// before pre-emphasis and windowing (this is what VAD consumes).
template <typename T>
Mat<T> compute_fbank_matrix(std::span<const T> samples, int sample_rate, const FbankConfig& cfg,
                            std::vector<T>* log_energies = nullptr);

/// float32 production entry point. Throws DataError if the waveform is
/// shorter than one analysis window.
FeatureMatrix compute_fbank(const Waveform& wav, const FbankConfig& cfg);
FeatureMatrix compute_fbank_with_energy(const Waveform& wav, const FbankConfig& cfg,
                                        std::vector<float>* log_energies);

}  // namespace distillkit

#endif  // DISTILLKIT_FBANK_HPP_
