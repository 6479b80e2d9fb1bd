// distillkit/student_net.cpp

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

#include "distillkit/student_net.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <sstream>

#include "distillkit/error.hpp"
#include "distillkit/io_util.hpp"

namespace distillkit {

namespace {

constexpr char kMagic[4] = {'N', 'E', 'T', '1'};
constexpr double kVarianceEpsilon = 1e-16;  // floors std at 1e-8

std::uint64_t fnv1a64(const std::string& s) {
  std::uint64_t h = 1469598103934665603ULL;
  for (const unsigned char c : s) {
    h ^= c;
    h *= 1099511628211ULL;
  }
  return h;
}

}  // namespace

NetConfig NetConfig::preset(const std::string& name) {
  NetConfig cfg;
  if (name == "tdnn-small") {
    cfg.convs = {{5, 1, 80, 256, true},
                 {3, 2, 256, 256, true},
                 {3, 3, 256, 256, true},
                 {1, 1, 256, 512, false}};
  } else if (name == "tdnn-tiny") {
    cfg.convs = {{3, 1, 80, 32, true}, {3, 2, 32, 32, true}, {1, 1, 32, 64, false}};
  } else {
    throw UsageError("unknown student preset '" + name +
                     "' (known: tdnn-small, tdnn-tiny)");
  }
  cfg.pooling = PoolingMode::kStats;
  cfg.input_dim = 80;
  cfg.embedding_dim = 256;
  return cfg;
}

void NetConfig::validate() const {
  if (convs.empty()) throw UsageError("student net needs at least one conv layer");
  if (input_dim < 1 || embedding_dim < 1)
    throw UsageError("input and embedding dimensions must be positive");
  if (convs.front().in_ch != input_dim)
    throw UsageError("first conv expects " + std::to_string(convs.front().in_ch) +
                     " channels but input_dim is " + std::to_string(input_dim));
  for (std::size_t l = 0; l < convs.size(); ++l) {
    const ConvSpec& c = convs[l];
    if (c.kernel < 1 || c.dilation < 1 || c.in_ch < 1 || c.out_ch < 1)
      throw UsageError("conv layer " + std::to_string(l) + " has non-positive shape");
    if (l > 0 && convs[l - 1].out_ch != c.in_ch)
      throw UsageError("conv layer " + std::to_string(l) + " input channels do not chain");
  }
}

int NetConfig::receptive_field() const {
  int rf = 1;
  for (const ConvSpec& c : convs) rf += (c.kernel - 1) * c.dilation;
  return rf;
}

int NetConfig::pooled_dim() const {
  const int channels = convs.back().out_ch;
  return pooling == PoolingMode::kStats ? 2 * channels : channels;
}

std::size_t NetConfig::param_count() const {
  std::size_t n = 0;
  for (const ConvSpec& c : convs)
    n += static_cast<std::size_t>(c.kernel) * c.in_ch * c.out_ch + c.out_ch;
  n += static_cast<std::size_t>(pooled_dim()) * embedding_dim + embedding_dim;
  return n;
}

std::string NetConfig::canonical_string() const {
  std::ostringstream os;
  os << "in:" << input_dim;
  for (const ConvSpec& c : convs)
    os << "|conv:k=" << c.kernel << ",d=" << c.dilation << ",c=" << c.in_ch << ">" << c.out_ch
       << (c.relu ? ",relu" : ",linear");
  os << "|pool:" << (pooling == PoolingMode::kStats ? "stats" : "gap");
  os << "|emb:" << embedding_dim;
  return os.str();
}

std::uint64_t NetConfig::digest() const { return fnv1a64(canonical_string()); }

template <typename T>
void StudentNetT<T>::init_offsets() {
  cfg_.validate();
  std::size_t off = 0;
  conv_w_off_.clear();
  conv_b_off_.clear();
  for (const ConvSpec& c : cfg_.convs) {
    conv_w_off_.push_back(off);
    off += static_cast<std::size_t>(c.kernel) * c.in_ch * c.out_ch;
    conv_b_off_.push_back(off);
    off += static_cast<std::size_t>(c.out_ch);
  }
  dense_w_off_ = off;
  off += static_cast<std::size_t>(cfg_.pooled_dim()) * cfg_.embedding_dim;
  dense_b_off_ = off;
  off += static_cast<std::size_t>(cfg_.embedding_dim);
  params_.assign(off, T(0));
}

template <typename T>
StudentNetT<T>::StudentNetT(NetConfig cfg) : cfg_(std::move(cfg)) {
  init_offsets();
}

template <typename T>
StudentNetT<T>::StudentNetT(NetConfig cfg, Rng& rng) : cfg_(std::move(cfg)) {
  init_offsets();
  // Fan-in-scaled uniform weights, zero biases. Draw order is the flat
  // parameter order, so initialization is reproducible from the seed alone.
  for (std::size_t l = 0; l < cfg_.convs.size(); ++l) {
    const ConvSpec& c = cfg_.convs[l];
    const double fan_in = static_cast<double>(c.kernel) * c.in_ch;
    const double limit = std::sqrt(6.0 / fan_in);
    T* w = params_.data() + conv_w_off_[l];
    const std::size_t n = static_cast<std::size_t>(c.kernel) * c.in_ch * c.out_ch;
    for (std::size_t i = 0; i < n; ++i) w[i] = static_cast<T>(rng.uniform(-limit, limit));
  }
  const double limit = std::sqrt(6.0 / cfg_.pooled_dim());
  T* w = params_.data() + dense_w_off_;
  const std::size_t n = static_cast<std::size_t>(cfg_.pooled_dim()) * cfg_.embedding_dim;
  for (std::size_t i = 0; i < n; ++i) w[i] = static_cast<T>(rng.uniform(-limit, limit));
}

template <typename T>
std::vector<T> StudentNetT<T>::forward(const Mat<T>& feats, ForwardTapeT<T>* tape) const {
  if (feats.cols() != static_cast<std::size_t>(cfg_.input_dim))
    throw DataError("input has " + std::to_string(feats.cols()) + " channels, net expects " +
                    std::to_string(cfg_.input_dim));
  if (feats.rows() < static_cast<std::size_t>(cfg_.receptive_field()))
    throw DataError("input too short: " + std::to_string(feats.rows()) +
                    " frames < receptive field of " + std::to_string(cfg_.receptive_field()));

  std::vector<Mat<T>> outs;
  outs.reserve(cfg_.convs.size());
  const Mat<T>* cur = &feats;
  for (std::size_t l = 0; l < cfg_.convs.size(); ++l) {
    const ConvSpec& c = cfg_.convs[l];
    const std::size_t t_out = cur->rows() - static_cast<std::size_t>((c.kernel - 1) * c.dilation);
    Mat<T> y(t_out, static_cast<std::size_t>(c.out_ch));
    const T* w_base = params_.data() + conv_w_off_[l];
    const T* bias = params_.data() + conv_b_off_[l];
    const std::size_t oc = static_cast<std::size_t>(c.out_ch);
    for (std::size_t t = 0; t < t_out; ++t) {
      T* y_row = y.row(t).data();
      std::copy(bias, bias + oc, y_row);
      for (int tap = 0; tap < c.kernel; ++tap) {
        const T* x_row = cur->row(t + static_cast<std::size_t>(tap * c.dilation)).data();
        const T* w_tap = w_base + static_cast<std::size_t>(tap) * c.in_ch * oc;
        for (int ic = 0; ic < c.in_ch; ++ic) {
          const T a = x_row[ic];
          const T* w = w_tap + static_cast<std::size_t>(ic) * oc;
          for (std::size_t j = 0; j < oc; ++j) y_row[j] += a * w[j];
        }
      }
      if (c.relu)
        for (std::size_t j = 0; j < oc; ++j) y_row[j] = std::max(y_row[j], T(0));
    }
    outs.push_back(std::move(y));
    cur = &outs.back();
  }

  // Pooling statistics in double: the variance is a difference of large
  // quantities when activations sit far from zero.
  const Mat<T>& pool_in = outs.back();
  const std::size_t t_pool = pool_in.rows();
  const std::size_t channels = pool_in.cols();
  std::vector<double> mean(channels, 0.0), stddev(channels, 0.0);
  for (std::size_t t = 0; t < t_pool; ++t) {
    const T* row = pool_in.row(t).data();
    for (std::size_t c = 0; c < channels; ++c) mean[c] += static_cast<double>(row[c]);
  }
  for (std::size_t c = 0; c < channels; ++c) mean[c] /= static_cast<double>(t_pool);
  if (cfg_.pooling == PoolingMode::kStats) {
    for (std::size_t t = 0; t < t_pool; ++t) {
      const T* row = pool_in.row(t).data();
      for (std::size_t c = 0; c < channels; ++c) {
        const double d = static_cast<double>(row[c]) - mean[c];
        stddev[c] += d * d;
      }
    }
    for (std::size_t c = 0; c < channels; ++c)
      stddev[c] = std::sqrt(stddev[c] / static_cast<double>(t_pool) + kVarianceEpsilon);
  }

  std::vector<T> pooled(static_cast<std::size_t>(cfg_.pooled_dim()));
  for (std::size_t c = 0; c < channels; ++c) pooled[c] = static_cast<T>(mean[c]);
  if (cfg_.pooling == PoolingMode::kStats)
    for (std::size_t c = 0; c < channels; ++c) pooled[channels + c] = static_cast<T>(stddev[c]);

  std::vector<T> embedding(static_cast<std::size_t>(cfg_.embedding_dim));
  const T* wd = params_.data() + dense_w_off_;
  const T* bd = params_.data() + dense_b_off_;
  std::copy(bd, bd + embedding.size(), embedding.data());
  for (std::size_t i = 0; i < pooled.size(); ++i) {
    const T a = pooled[i];
    const T* w = wd + i * embedding.size();
    for (std::size_t j = 0; j < embedding.size(); ++j) embedding[j] += a * w[j];
  }

  if (tape) {
    tape->consumed = false;
    tape->input = feats;
    tape->conv_out = std::move(outs);
    tape->mean = std::move(mean);
    tape->stddev = std::move(stddev);
    tape->pooled = pooled;
  }
  return embedding;
}

template <typename T>
std::vector<T> StudentNetT<T>::backward(ForwardTapeT<T>& tape,
                                        std::span<const T> grad_embedding) const {
  if (tape.consumed) throw UsageError("forward tape already consumed by a backward call");
  tape.consumed = true;
  if (grad_embedding.size() != static_cast<std::size_t>(cfg_.embedding_dim))
    throw DataError("embedding gradient has wrong length");
  if (tape.conv_out.size() != cfg_.convs.size())
    throw UsageError("tape does not match this architecture");

  std::vector<T> grad(params_.size(), T(0));

  // Dense layer.
  const std::size_t emb = static_cast<std::size_t>(cfg_.embedding_dim);
  const std::size_t pd = tape.pooled.size();
  std::vector<T> d_pooled(pd, T(0));
  {
    const T* wd = params_.data() + dense_w_off_;
    T* gwd = grad.data() + dense_w_off_;
    T* gbd = grad.data() + dense_b_off_;
    for (std::size_t j = 0; j < emb; ++j) gbd[j] = grad_embedding[j];
    for (std::size_t i = 0; i < pd; ++i) {
      const T* w = wd + i * emb;
      T* gw = gwd + i * emb;
      const T a = tape.pooled[i];
      T acc = T(0);
      for (std::size_t j = 0; j < emb; ++j) {
        acc += w[j] * grad_embedding[j];
        gw[j] += a * grad_embedding[j];
      }
      d_pooled[i] = acc;
    }
  }

  // Pooling: mean contributes 1/T per frame; the std path adds the centered
  // value scaled by 1/(T*std), exact for std = sqrt(var + eps).
  const Mat<T>& pool_in = tape.conv_out.back();
  const std::size_t t_pool = pool_in.rows();
  const std::size_t channels = pool_in.cols();
  Mat<T> d_cur(t_pool, channels);
  const double inv_t = 1.0 / static_cast<double>(t_pool);
  for (std::size_t t = 0; t < t_pool; ++t) {
    const T* x = pool_in.row(t).data();
    T* g = d_cur.row(t).data();
    for (std::size_t c = 0; c < channels; ++c) {
      double v = static_cast<double>(d_pooled[c]) * inv_t;
      if (cfg_.pooling == PoolingMode::kStats) {
        const double centered = static_cast<double>(x[c]) - tape.mean[c];
        v += static_cast<double>(d_pooled[channels + c]) * centered * inv_t / tape.stddev[c];
      }
      g[c] = static_cast<T>(v);
    }
  }

  // Conv stack, last to first.
  for (std::size_t li = cfg_.convs.size(); li-- > 0;) {
    const ConvSpec& c = cfg_.convs[li];
    const Mat<T>& out = tape.conv_out[li];
    const Mat<T>& in = li == 0 ? tape.input : tape.conv_out[li - 1];
    const std::size_t t_out = out.rows();
    const std::size_t oc = static_cast<std::size_t>(c.out_ch);

    if (c.relu) {
      for (std::size_t t = 0; t < t_out; ++t) {
        const T* o = out.row(t).data();
        T* g = d_cur.row(t).data();
        for (std::size_t j = 0; j < oc; ++j)
          if (o[j] <= T(0)) g[j] = T(0);
      }
    }

    const T* w_base = params_.data() + conv_w_off_[li];
    T* gw_base = grad.data() + conv_w_off_[li];
    T* gb = grad.data() + conv_b_off_[li];
    Mat<T> d_in;
    if (li > 0) d_in = Mat<T>(in.rows(), in.cols());  // zero-initialized

    for (std::size_t t = 0; t < t_out; ++t) {
      const T* gy = d_cur.row(t).data();
      for (std::size_t j = 0; j < oc; ++j) gb[j] += gy[j];
      for (int tap = 0; tap < c.kernel; ++tap) {
        const std::size_t t_in = t + static_cast<std::size_t>(tap * c.dilation);
        const T* x_row = in.row(t_in).data();
        const T* w_tap = w_base + static_cast<std::size_t>(tap) * c.in_ch * oc;
        T* gw_tap = gw_base + static_cast<std::size_t>(tap) * c.in_ch * oc;
        T* gx_row = li > 0 ? d_in.row(t_in).data() : nullptr;
        for (int ic = 0; ic < c.in_ch; ++ic) {
          const T a = x_row[ic];
          const T* w = w_tap + static_cast<std::size_t>(ic) * oc;
          T* gw = gw_tap + static_cast<std::size_t>(ic) * oc;
          T acc = T(0);
          for (std::size_t j = 0; j < oc; ++j) {
            gw[j] += a * gy[j];
            acc += w[j] * gy[j];
          }
          if (gx_row) gx_row[ic] += acc;
        }
      }
    }
    if (li > 0) d_cur = std::move(d_in);
  }
  return grad;
}

template <typename T>
void StudentNetT<T>::save(const std::string& path) const {
  AtomicFileWriter writer(path);
  writer.write_bytes(kMagic, 4);
  writer.write_u64(cfg_.digest());
  writer.write_u64(static_cast<std::uint64_t>(params_.size()));
  for (const T v : params_) writer.write_f32(static_cast<float>(v));
  writer.commit();
}

template <typename T>
StudentNetT<T> StudentNetT<T>::load(const std::string& path, const NetConfig& cfg) {
  BinaryReader reader(path);
  const std::string magic = reader.read_string(4, "magic");
  if (magic != std::string(kMagic, 4))
    throw FormatError("bad magic, expected NET1", 0);
  const std::uint64_t digest = reader.read_u64("config digest");
  if (digest != cfg.digest())
    throw FormatError("checkpoint was written for a different architecture", 4);
  const std::uint64_t count = reader.read_u64("param count");
  StudentNetT net(cfg);
  if (count != net.param_count())
    throw FormatError("checkpoint holds " + std::to_string(count) + " params, architecture has " +
                          std::to_string(net.param_count()),
                      12);
  for (std::size_t i = 0; i < net.params_.size(); ++i) {
    const std::size_t off = reader.offset();
    const float v = reader.read_f32("parameter");
    if (!std::isfinite(v)) throw FormatError("non-finite parameter " + std::to_string(i), off);
    net.params_[i] = static_cast<T>(v);
  }
  if (!reader.at_end())
    throw FormatError("trailing bytes after parameters", reader.offset());
  return net;
}

template struct ForwardTapeT<float>;
template struct ForwardTapeT<double>;
template class StudentNetT<float>;
template class StudentNetT<double>;

BenchResult measure_params_and_rtf(const StudentNetT<float>& net, int runs, int sample_rate,
                                   double input_seconds) {
  if (!(input_seconds > 0.0)) throw UsageError("bench input duration must be positive");
  // Frame count of the input waveform under the default 25 ms / 10 ms framing.
  const int win = sample_rate / 40;
  const int hop = sample_rate / 100;
  const auto n_samples = static_cast<std::size_t>(input_seconds * sample_rate);
  if (n_samples < static_cast<std::size_t>(win)) {
    throw UsageError("bench input duration shorter than one frame");
  }
  const std::size_t n_frames = (n_samples - win) / hop + 1;

  Rng rng(0);
  Matf input(n_frames, static_cast<std::size_t>(net.config().input_dim));
  for (float& v : input.storage()) v = static_cast<float>(rng.uniform(-1.0, 1.0));

  BenchResult result;
  result.param_count = net.param_count();
  for (int i = 0; i < 2; ++i) (void)net.forward(input);
  std::vector<double> times;
  for (int i = 0; i < std::max(runs, 5); ++i) {
    const auto start = std::chrono::steady_clock::now();
    volatile float sink = net.forward(input)[0];
    (void)sink;
    const auto stop = std::chrono::steady_clock::now();
    times.push_back(std::chrono::duration<double>(stop - start).count());
  }
  std::nth_element(times.begin(), times.begin() + times.size() / 2, times.end());
  result.seconds_per_forward = times[times.size() / 2];
  result.rtf = result.seconds_per_forward / input_seconds;
  return result;
}

}  // namespace distillkit
