// distillkit/fbank.cpp

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

#include "distillkit/fbank.hpp"

#include <cmath>
#include <cstdint>
#include <numbers>

#include "distillkit/error.hpp"

namespace distillkit {

namespace {

constexpr double kEnergyFloor = 1e-10;

double mel_scale(double freq) { return 1127.0 * std::log1p(freq / 700.0); }

int next_power_of_two(int n) {
  int p = 1;
  while (p < n) p <<= 1;
  return p;
}

// In-place iterative radix-2 Cooley-Tukey FFT (decimation in time). `re` and
// `im` have length n (a power of two); the twiddle tables hold cos/sin of
// 2*pi*k/n for k in [0, n/2).
template <typename T>
void fft_radix2(std::vector<T>& re, std::vector<T>& im, const std::vector<T>& cos_tab,
                const std::vector<T>& sin_tab) {
  const std::size_t n = re.size();
  // Bit-reversal permutation.
  for (std::size_t i = 1, j = 0; i < n; ++i) {
    std::size_t bit = n >> 1;
    for (; j & bit; bit >>= 1) j ^= bit;
    j ^= bit;
    if (i < j) {
      std::swap(re[i], re[j]);
      std::swap(im[i], im[j]);
    }
  }
  for (std::size_t len = 2; len <= n; len <<= 1) {
    const std::size_t half = len >> 1;
    const std::size_t step = n / len;
    for (std::size_t base = 0; base < n; base += len) {
      for (std::size_t j = 0; j < half; ++j) {
        const std::size_t k = j * step;
        const T wr = cos_tab[k];
        const T wi = -sin_tab[k];
        const T vr = re[base + j + half] * wr - im[base + j + half] * wi;
        const T vi = re[base + j + half] * wi + im[base + j + half] * wr;
        const T ur = re[base + j];
        const T ui = im[base + j];
        re[base + j] = ur + vr;
        im[base + j] = ui + vi;
        re[base + j + half] = ur - vr;
        im[base + j + half] = ui - vi;
      }
    }
  }
}

}  // namespace

int FbankConfig::window_length(int sample_rate) const {
  return static_cast<int>(frame_length_ms * sample_rate / 1000.0);
}

int FbankConfig::window_shift(int sample_rate) const {
  return static_cast<int>(frame_shift_ms * sample_rate / 1000.0);
}

void FbankConfig::validate(int sample_rate) const {
  if (sample_rate <= 0)
    throw UsageError("sample rate must be positive, got " + std::to_string(sample_rate));
  if (frame_length_ms <= 0 || frame_shift_ms <= 0)
    throw UsageError("frame length and shift must be positive");
  if (num_bins < 3) throw UsageError("need at least 3 mel bins");
  if (low_freq < 0 || high_freq <= low_freq)
    throw UsageError("require 0 <= low_freq < high_freq");
  if (high_freq > sample_rate / 2.0)
    throw UsageError("high_freq exceeds the Nyquist frequency");
  if (log_floor <= 0) throw UsageError("log_floor must be positive");
  if (window_length(sample_rate) < 2) throw UsageError("analysis window is too short");
}

std::size_t fbank_num_frames(std::size_t n_samples, int window_length, int window_shift) {
  if (n_samples < static_cast<std::size_t>(window_length)) return 0;
  return (n_samples - static_cast<std::size_t>(window_length)) /
             static_cast<std::size_t>(window_shift) +
         1;
}

template <typename T>
MelBank<T> MelBank<T>::build(int sample_rate, int n_fft, const FbankConfig& cfg) {
  MelBank<T> bank;
  bank.n_fft = n_fft;
  const int n_bins = n_fft / 2 + 1;
  const double mel_low = mel_scale(cfg.low_freq);
  const double mel_high = mel_scale(cfg.high_freq);
  const double mel_delta = (mel_high - mel_low) / (cfg.num_bins + 1);
  const double bin_width = static_cast<double>(sample_rate) / n_fft;

  bank.first_bin.resize(cfg.num_bins);
  bank.weights.resize(cfg.num_bins);
  bank.area.resize(cfg.num_bins);
  for (int b = 0; b < cfg.num_bins; ++b) {
    const double left = mel_low + b * mel_delta;
    const double center = left + mel_delta;
    const double right = center + mel_delta;
    int first = -1;
    std::vector<T> w;
    double area = 0.0;
    for (int k = 0; k < n_bins; ++k) {
      const double mel_k = mel_scale(k * bin_width);
      double weight = 0.0;
      if (mel_k > left && mel_k < right)
        weight = mel_k <= center ? (mel_k - left) / mel_delta : (right - mel_k) / mel_delta;
      if (weight > 0.0) {
        if (first < 0) first = k;
        w.push_back(static_cast<T>(weight));
        area += weight;
      } else if (first >= 0) {
        break;  // Triangles are contiguous in frequency.
      }
    }
    if (first < 0)
      throw UsageError("mel bin " + std::to_string(b) +
                       " covers no FFT bins; reduce num_bins or widen the band");
    bank.first_bin[b] = first;
    bank.weights[b] = std::move(w);
    bank.area[b] = static_cast<T>(area);
  }
  return bank;
}

template <typename T>
Mat<T> compute_fbank_matrix(std::span<const T> samples, int sample_rate, const FbankConfig& cfg,
                            std::vector<T>* log_energies) {
  cfg.validate(sample_rate);
  const int win = cfg.window_length(sample_rate);
  const int hop = cfg.window_shift(sample_rate);
  const std::size_t n_frames = fbank_num_frames(samples.size(), win, hop);
  if (n_frames == 0)
    throw DataError("waveform too short for analysis: " + std::to_string(samples.size()) +
                    " samples < window of " + std::to_string(win));

  const int n_fft = next_power_of_two(win);
  const MelBank<T> bank = MelBank<T>::build(sample_rate, n_fft, cfg);

  // Hamming window and FFT twiddles, computed once per call in double and
  // narrowed, so the float and double paths agree on the constants.
  std::vector<T> window(static_cast<std::size_t>(win));
  for (int i = 0; i < win; ++i)
    window[static_cast<std::size_t>(i)] = static_cast<T>(
        0.54 - 0.46 * std::cos(2.0 * std::numbers::pi * i / (win - 1)));
  std::vector<T> cos_tab(static_cast<std::size_t>(n_fft / 2));
  std::vector<T> sin_tab(static_cast<std::size_t>(n_fft / 2));
  for (int k = 0; k < n_fft / 2; ++k) {
    const double angle = 2.0 * std::numbers::pi * k / n_fft;
    cos_tab[static_cast<std::size_t>(k)] = static_cast<T>(std::cos(angle));
    sin_tab[static_cast<std::size_t>(k)] = static_cast<T>(std::sin(angle));
  }

  Mat<T> out(n_frames, static_cast<std::size_t>(cfg.num_bins));
  if (log_energies) log_energies->assign(n_frames, T(0));

  std::vector<T> re(static_cast<std::size_t>(n_fft));
  std::vector<T> im(static_cast<std::size_t>(n_fft));
  std::vector<T> frame(static_cast<std::size_t>(win));
  for (std::size_t t = 0; t < n_frames; ++t) {
    const std::size_t start = t * static_cast<std::size_t>(hop);
    double energy = 0.0;
    for (int i = 0; i < win; ++i) {
      const T x = samples[start + static_cast<std::size_t>(i)];
      frame[static_cast<std::size_t>(i)] = x;
      energy += static_cast<double>(x) * static_cast<double>(x);
    }
    if (log_energies)
      (*log_energies)[t] = static_cast<T>(std::log(std::max(energy, kEnergyFloor)));

    if (cfg.preemphasis != 0.0) {
      for (int i = win - 1; i > 0; --i)
        frame[static_cast<std::size_t>(i)] -=
            static_cast<T>(cfg.preemphasis) * frame[static_cast<std::size_t>(i - 1)];
      frame[0] -= static_cast<T>(cfg.preemphasis) * frame[0];
    }

    for (int i = 0; i < win; ++i)
      re[static_cast<std::size_t>(i)] =
          frame[static_cast<std::size_t>(i)] * window[static_cast<std::size_t>(i)];
    std::fill(re.begin() + win, re.end(), T(0));
    std::fill(im.begin(), im.end(), T(0));
    fft_radix2(re, im, cos_tab, sin_tab);

    auto spectrum = [&](int k) {
      const T p = re[static_cast<std::size_t>(k)] * re[static_cast<std::size_t>(k)] +
                  im[static_cast<std::size_t>(k)] * im[static_cast<std::size_t>(k)];
      return cfg.use_power ? p : static_cast<T>(std::sqrt(static_cast<double>(p)));
    };
    for (int b = 0; b < cfg.num_bins; ++b) {
      double acc = 0.0;
      const auto& w = bank.weights[static_cast<std::size_t>(b)];
      const int first = bank.first_bin[static_cast<std::size_t>(b)];
      for (std::size_t j = 0; j < w.size(); ++j)
        acc += static_cast<double>(w[j]) * static_cast<double>(spectrum(first + static_cast<int>(j)));
      const double floor_b = cfg.log_floor * static_cast<double>(bank.area[static_cast<std::size_t>(b)]);
      out(t, static_cast<std::size_t>(b)) = static_cast<T>(std::log(std::max(acc, floor_b)));
    }
  }
  return out;
}

template struct MelBank<float>;
template struct MelBank<double>;
template Mat<float> compute_fbank_matrix<float>(std::span<const float>, int, const FbankConfig&,
                                                std::vector<float>*);
template Mat<double> compute_fbank_matrix<double>(std::span<const double>, int, const FbankConfig&,
                                                  std::vector<double>*);

FeatureMatrix compute_fbank(const Waveform& wav, const FbankConfig& cfg) {
  return compute_fbank_with_energy(wav, cfg, nullptr);
}

FeatureMatrix compute_fbank_with_energy(const Waveform& wav, const FbankConfig& cfg,
                                        std::vector<float>* log_energies) {
  FeatureMatrix feats;
  feats.frames = compute_fbank_matrix<float>(
      std::span<const float>(wav.samples.data(), wav.samples.size()), wav.sample_rate, cfg,
      log_energies);
  feats.frame_shift_s = static_cast<float>(cfg.frame_shift_s());
  return feats;
}

}  // namespace distillkit
