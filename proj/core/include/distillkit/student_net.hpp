// distillkit/student_net.hpp

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

#ifndef DISTILLKIT_STUDENT_NET_HPP_
#define DISTILLKIT_STUDENT_NET_HPP_

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "distillkit/mat.hpp"
#include "distillkit/rng.hpp"

namespace distillkit {

/// Statistics pooling concatenates per-channel mean and standard deviation
/// over time; global average pooling keeps the mean only.
enum class PoolingMode { kStats, kGap };

/// One dilated 1-D convolution over the time axis, no padding (valid), so a
/// layer with kernel k and dilation d shortens the sequence by (k-1)*d.
struct ConvSpec {
  int kernel = 1;
  int dilation = 1;
  int in_ch = 0;
  int out_ch = 0;
  bool relu = true;
};

/// Architecture description for the TDNN-style student. The flat parameter
/// vector is laid out layer by layer: conv weights indexed [tap][in][out]
/// followed by the bias, then the dense weights [in][out] and bias.
struct NetConfig {
  std::vector<ConvSpec> convs;
  PoolingMode pooling = PoolingMode::kStats;
  int input_dim = 80;
  int embedding_dim = 256;

  /// Known presets: "tdnn-small" (~0.9M params, the default student) and
  /// "tdnn-tiny" (~46k params, for fast end-to-end runs). UsageError on an
  /// unknown name.
  static NetConfig preset(const std::string& name);

  void validate() const;  // UsageError on broken channel chaining etc.

  /// Frames consumed before the first output frame appears:
  /// 1 + sum of (kernel-1)*dilation. Inputs shorter than this are rejected.
  int receptive_field() const;

  int pooled_dim() const;  // channels after pooling (2x for stats)
  std::size_t param_count() const;

  /// Canonical text form of the architecture; its FNV-1a digest is embedded
  /// in checkpoints so a file cannot be loaded into the wrong topology.
  std::string canonical_string() const;
  std::uint64_t digest() const;
};

/// Activations recorded by forward for the matching backward call. A tape
/// is consumed exactly once; reuse throws UsageError.
template <typename T>
struct ForwardTapeT {
  bool consumed = false;
  Mat<T> input;                    // features as given
  std::vector<Mat<T>> conv_out;    // per conv layer, after its ReLU if any
  std::vector<double> mean;        // pooling statistics, per channel
  std::vector<double> stddev;      // sqrt(var + 1e-16), unused in gap mode
  std::vector<T> pooled;           // dense-layer input
};

using ForwardTape = ForwardTapeT<float>;

/// The student embedding extractor. Parameters live in one flat vector so
/// the optimizer can treat the model as a plain point in R^n. Instances are
/// immutable during forward/backward; updates happen between steps.
template <typename T>
class StudentNetT {
 public:
  explicit StudentNetT(NetConfig cfg);  // all parameters zero
  StudentNetT(NetConfig cfg, Rng& rng);  // fan-in-scaled uniform init, zero biases

  const NetConfig& config() const { return cfg_; }
  std::size_t param_count() const { return params_.size(); }
  std::span<T> params() { return params_; }
  std::span<const T> params() const { return params_; }

  /// Embedding for one utterance; (T, input_dim) in, embedding_dim out.
  /// Records the tape when requested. Throws DataError when the input has
  /// fewer frames than the receptive field.
  std::vector<T> forward(const Mat<T>& feats, ForwardTapeT<T>* tape = nullptr) const;

  /// Gradient of <embedding, grad_embedding> with respect to every
  /// parameter, as a flat vector aligned with params(). Marks the tape
  /// consumed.
  std::vector<T> backward(ForwardTapeT<T>& tape, std::span<const T> grad_embedding) const;

  /// Checkpoint format "NET1" (little-endian): magic, u64 config digest,
  /// u64 param count, float32 parameters. Written atomically.
  void save(const std::string& path) const;

  /// Throws FormatError (with offset) on bad magic, digest mismatch against
  /// `cfg`, wrong count, truncation, or non-finite parameters.
  static StudentNetT load(const std::string& path, const NetConfig& cfg);

 private:
  NetConfig cfg_;
  std::vector<T> params_;
  // Flat-vector offsets, precomputed from cfg_.
  std::vector<std::size_t> conv_w_off_, conv_b_off_;
  std::size_t dense_w_off_ = 0, dense_b_off_ = 0;

  void init_offsets();
};

using StudentNet = StudentNetT<float>;

/// Parameter count plus real-time factor measured on a synthetic 10 s input:
/// median wall time of `runs` forwards after 2 warmups, divided by 10 s.
struct BenchResult {
  std::size_t param_count = 0;
  double seconds_per_forward = 0.0;
  double rtf = 0.0;
};

BenchResult measure_params_and_rtf(const StudentNetT<float>& net, int runs = 5,
                                   int sample_rate = 16000,
                                   double input_seconds = 10.0);

}  // namespace distillkit

#endif  // DISTILLKIT_STUDENT_NET_HPP_
