// distillkit/losses.cpp

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

#include "distillkit/losses.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>
#include <vector>

#include "distillkit/error.hpp"

namespace distillkit {

namespace {

constexpr double kNormFloor = 1e-12;

template <typename T>
double dot_d(std::span<const T> a, std::span<const T> b) {
  double acc = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i)
    acc += static_cast<double>(a[i]) * static_cast<double>(b[i]);
  return acc;
}

template <typename T>
double norm_d(std::span<const T> a) {
  return std::sqrt(dot_d(a, a));
}

/// Cross-entropy of a softmax over `z` against class `y`, computed as
/// (max - z_y) + log1p(sum of the non-max exponentials). Writing the sum
/// through log1p keeps full precision when the target logit dominates, where
/// the loss is far below float epsilon. Fills `p` with the probabilities.
double stable_cross_entropy(const std::vector<double>& z, std::size_t y,
                            std::vector<double>& p) {
  std::size_t k_max = 0;
  for (std::size_t j = 1; j < z.size(); ++j)
    if (z[j] > z[k_max]) k_max = j;
  const double m = z[k_max];
  double sum_rest = 0.0;
  p.resize(z.size());
  for (std::size_t j = 0; j < z.size(); ++j) {
    const double e = std::exp(z[j] - m);
    p[j] = e;
    if (j != k_max) sum_rest += e;
  }
  const double denom = 1.0 + sum_rest;
  for (double& v : p) v /= denom;
  return (m - z[y]) + std::log1p(sum_rest);
}

}  // namespace

template <typename T>
void EmbeddingBatchT<T>::validate(bool require_nonzero) const {
  if (teacher.rows() == 0 || teacher.cols() == 0)
    throw DataError("embedding batch is empty");
  if (teacher.rows() != student.rows() || teacher.cols() != student.cols())
    throw DataError("teacher batch is " + std::to_string(teacher.rows()) + "x" +
                    std::to_string(teacher.cols()) + " but student batch is " +
                    std::to_string(student.rows()) + "x" + std::to_string(student.cols()));
  if (!require_nonzero) return;
  for (std::size_t i = 0; i < teacher.rows(); ++i) {
    if (norm_d(teacher.row(i)) <= kNormFloor)
      throw DataError("teacher row " + std::to_string(i) + " has zero norm");
    if (norm_d(student.row(i)) <= kNormFloor)
      throw DataError("student row " + std::to_string(i) + " has zero norm");
  }
}

void ContrastiveConfig::validate() const {
  if (!(temperature > 0)) throw UsageError("temperature must be positive");
}

void AamConfig::validate() const {
  if (!(scale > 0)) throw UsageError("scale must be positive");
  if (margin < 0 || margin >= std::numbers::pi / 2)
    throw UsageError("margin must lie in [0, pi/2) radians");
  if (margin_warmup_epochs < 0) throw UsageError("margin warmup must be >= 0 epochs");
}

template <typename T>
ClassWeightsT<T>::ClassWeightsT(std::size_t num_classes, std::size_t dim, Rng& rng) {
  rows_ = Mat<T>(num_classes, dim);
  for (std::size_t i = 0; i < num_classes; ++i)
    for (std::size_t j = 0; j < dim; ++j) rows_(i, j) = static_cast<T>(rng.gaussian());
  renormalize();
}

template <typename T>
ClassWeightsT<T>::ClassWeightsT(Mat<T> rows) : rows_(std::move(rows)) {
  renormalize();
}

template <typename T>
void ClassWeightsT<T>::renormalize() {
  for (std::size_t i = 0; i < rows_.rows(); ++i) {
    auto row = rows_.row(i);
    const double n = norm_d(std::span<const T>(row.data(), row.size()));
    if (n <= kNormFloor)
      throw DataError("class weight row " + std::to_string(i) + " has zero norm");
    for (T& v : row) v = static_cast<T>(static_cast<double>(v) / n);
  }
}

template <typename T>
LossOutputT<T> mse_loss(const EmbeddingBatchT<T>& batch) {
  batch.validate(/*require_nonzero=*/false);
  const std::size_t n = batch.batch_size();
  const std::size_t d = batch.dim();
  LossOutputT<T> out;
  out.grad_student = Mat<T>(n, d);
  double value = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const auto t = batch.teacher.row(i);
    const auto s = batch.student.row(i);
    auto g = out.grad_student.row(i);
    for (std::size_t c = 0; c < d; ++c) {
      const double diff = static_cast<double>(s[c]) - static_cast<double>(t[c]);
      value += diff * diff;
      g[c] = static_cast<T>(2.0 * diff);
    }
  }
  out.value = value;
  return out;
}

template <typename T>
LossOutputT<T> cos_loss(const EmbeddingBatchT<T>& batch) {
  batch.validate(/*require_nonzero=*/true);
  const std::size_t n = batch.batch_size();
  const std::size_t d = batch.dim();
  LossOutputT<T> out;
  out.grad_student = Mat<T>(n, d);
  double value = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const auto t = batch.teacher.row(i);
    const auto s = batch.student.row(i);
    const double nt = norm_d(std::span<const T>(t.data(), t.size()));
    const double ns = norm_d(std::span<const T>(s.data(), s.size()));
    const double cos_ts = dot_d(std::span<const T>(t.data(), t.size()),
                                std::span<const T>(s.data(), s.size())) /
                          (nt * ns);
    value -= cos_ts;
    auto g = out.grad_student.row(i);
    for (std::size_t c = 0; c < d; ++c) {
      const double gi = -static_cast<double>(t[c]) / (nt * ns) +
                        cos_ts * static_cast<double>(s[c]) / (ns * ns);
      g[c] = static_cast<T>(gi);
    }
  }
  out.value = value;
  return out;
}

template <typename T>
LossOutputT<T> contrastive_loss(const EmbeddingBatchT<T>& batch, const ContrastiveConfig& cfg) {
  cfg.validate();
  batch.validate(/*require_nonzero=*/true);
  const std::size_t n = batch.batch_size();
  const std::size_t d = batch.dim();
  const double inv_tau = 1.0 / cfg.temperature;

  std::vector<double> norm_t(n), norm_s(n);
  for (std::size_t i = 0; i < n; ++i) {
    norm_t[i] = norm_d(std::span<const T>(batch.teacher.row(i).data(), d));
    norm_s[i] = norm_d(std::span<const T>(batch.student.row(i).data(), d));
  }

  // cosines[i][j] = cos(t_i, s_j); probs[i][j] = softmax_j(cosines[i]/tau).
  Matd cosines(n, n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j)
      cosines(i, j) = dot_d(std::span<const T>(batch.teacher.row(i).data(), d),
                            std::span<const T>(batch.student.row(j).data(), d)) /
                      (norm_t[i] * norm_s[j]);

  double value = 0.0;
  Matd dl_dcos(n, n);
  std::vector<double> z(n), p(n);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) z[j] = cosines(i, j) * inv_tau;
    value += stable_cross_entropy(z, i, p);
    for (std::size_t j = 0; j < n; ++j)
      dl_dcos(i, j) = (p[j] - (i == j ? 1.0 : 0.0)) * inv_tau;
  }

  // Each student row j feels all anchors: it is the positive of anchor j and
  // a negative of every other anchor i.
  LossOutputT<T> out;
  out.value = value;
  out.grad_student = Mat<T>(n, d);
  std::vector<double> acc(d);
  for (std::size_t j = 0; j < n; ++j) {
    std::fill(acc.begin(), acc.end(), 0.0);
    const auto s = batch.student.row(j);
    for (std::size_t i = 0; i < n; ++i) {
      const double g = dl_dcos(i, j);
      if (g == 0.0) continue;
      const auto t = batch.teacher.row(i);
      const double a = g / (norm_t[i] * norm_s[j]);
      const double b = g * cosines(i, j) / (norm_s[j] * norm_s[j]);
      for (std::size_t c = 0; c < d; ++c)
        acc[c] += a * static_cast<double>(t[c]) - b * static_cast<double>(s[c]);
    }
    auto g_row = out.grad_student.row(j);
    for (std::size_t c = 0; c < d; ++c) g_row[c] = static_cast<T>(acc[c]);
  }
  return out;
}

template <typename T>
LossOutputT<T> aam_softmax_loss(const Mat<T>& student, std::span<const int> labels,
                                const ClassWeightsT<T>& weights, const AamConfig& cfg,
                                int epoch) {
  cfg.validate();
  const std::size_t n = student.rows();
  const std::size_t d = student.cols();
  const std::size_t n_classes = weights.num_classes();
  if (n == 0 || d == 0) throw DataError("embedding batch is empty");
  if (labels.size() != n)
    throw DataError("batch has " + std::to_string(n) + " rows but " +
                    std::to_string(labels.size()) + " labels");
  if (weights.dim() != d)
    throw DataError("class weights have dimension " + std::to_string(weights.dim()) +
                    " but embeddings have " + std::to_string(d));
  for (std::size_t i = 0; i < n; ++i)
    if (labels[i] < 0 || static_cast<std::size_t>(labels[i]) >= n_classes)
      throw DataError("label " + std::to_string(labels[i]) + " out of range [0, " +
                      std::to_string(n_classes) + ")");

  const double m_eff = epoch >= cfg.margin_warmup_epochs ? cfg.margin : 0.0;
  const double cos_m = std::cos(m_eff);
  const double sin_m = std::sin(m_eff);

  // Stored rows are unit-norm by construction, but cosines are still taken
  // against explicitly normalized directions so the returned weight gradient
  // is exact for the matrix as given (it is then purely tangential).
  Matd w_hat(n_classes, d);
  std::vector<double> w_norm(n_classes);
  for (std::size_t j = 0; j < n_classes; ++j) {
    const auto w = weights.matrix().row(j);
    w_norm[j] = norm_d(std::span<const T>(w.data(), d));
    if (w_norm[j] <= kNormFloor)
      throw DataError("class weight row " + std::to_string(j) + " has zero norm");
    for (std::size_t c = 0; c < d; ++c)
      w_hat(j, c) = static_cast<double>(w[c]) / w_norm[j];
  }

  LossOutputT<T> out;
  out.grad_student = Mat<T>(n, d);
  Matd grad_w(n_classes, d);  // accumulated w.r.t. the unit directions
  double value = 0.0;
  std::vector<double> e(d), cosv(n_classes), z(n_classes), p(n_classes), g_c(n_classes), g_e(d);

  for (std::size_t i = 0; i < n; ++i) {
    const auto s = student.row(i);
    const double ns = norm_d(std::span<const T>(s.data(), d));
    if (ns <= kNormFloor) throw DataError("student row " + std::to_string(i) + " has zero norm");
    for (std::size_t c = 0; c < d; ++c) e[c] = static_cast<double>(s[c]) / ns;

    const auto y = static_cast<std::size_t>(labels[i]);
    for (std::size_t j = 0; j < n_classes; ++j) {
      double acc = 0.0;
      for (std::size_t c = 0; c < d; ++c) acc += e[c] * w_hat(j, c);
      cosv[j] = std::clamp(acc, -1.0, 1.0);
      z[j] = cfg.scale * cosv[j];
    }
    const double cos_y = cosv[y];
    const double sin_y = std::sqrt(std::max(0.0, 1.0 - cos_y * cos_y));
    z[y] = cfg.scale * (cos_y * cos_m - sin_y * sin_m);

    value += stable_cross_entropy(z, y, p);

    for (std::size_t j = 0; j < n_classes; ++j) {
      const double dce_dz = p[j] - (j == y ? 1.0 : 0.0);
      double dz_dcos = cfg.scale;
      if (j == y && m_eff != 0.0)
        dz_dcos = sin_y > kNormFloor
                      ? cfg.scale * (cos_m + sin_m * cos_y / sin_y)
                      : cfg.scale * cos_m;  // clamp boundary: sqrt term frozen
      g_c[j] = dce_dz * dz_dcos;
    }

    std::fill(g_e.begin(), g_e.end(), 0.0);
    for (std::size_t j = 0; j < n_classes; ++j) {
      if (g_c[j] == 0.0) continue;
      for (std::size_t c = 0; c < d; ++c) {
        g_e[c] += g_c[j] * w_hat(j, c);
        grad_w(j, c) += g_c[j] * e[c];
      }
    }
    // Through e = s/|s|: remove the radial component and divide by the norm.
    double radial = 0.0;
    for (std::size_t c = 0; c < d; ++c) radial += g_e[c] * e[c];
    auto g_row = out.grad_student.row(i);
    for (std::size_t c = 0; c < d; ++c)
      g_row[c] = static_cast<T>((g_e[c] - radial * e[c]) / ns / static_cast<double>(n));
  }

  out.value = value / static_cast<double>(n);
  out.grad_weights = Mat<T>(n_classes, d);
  for (std::size_t j = 0; j < n_classes; ++j) {
    double radial = 0.0;
    for (std::size_t c = 0; c < d; ++c) radial += grad_w(j, c) * w_hat(j, c);
    auto g_row = out.grad_weights.row(j);
    for (std::size_t c = 0; c < d; ++c)
      g_row[c] = static_cast<T>((grad_w(j, c) - radial * w_hat(j, c)) / w_norm[j] /
                                static_cast<double>(n));
  }
  return out;
}

template struct EmbeddingBatchT<float>;
template struct EmbeddingBatchT<double>;
template struct LossOutputT<float>;
template struct LossOutputT<double>;
template class ClassWeightsT<float>;
template class ClassWeightsT<double>;
template LossOutputT<float> mse_loss<float>(const EmbeddingBatchT<float>&);
template LossOutputT<double> mse_loss<double>(const EmbeddingBatchT<double>&);
template LossOutputT<float> cos_loss<float>(const EmbeddingBatchT<float>&);
template LossOutputT<double> cos_loss<double>(const EmbeddingBatchT<double>&);
template LossOutputT<float> contrastive_loss<float>(const EmbeddingBatchT<float>&,
                                                    const ContrastiveConfig&);
template LossOutputT<double> contrastive_loss<double>(const EmbeddingBatchT<double>&,
                                                      const ContrastiveConfig&);
template LossOutputT<float> aam_softmax_loss<float>(const Mat<float>&, std::span<const int>,
                                                    const ClassWeightsT<float>&, const AamConfig&,
                                                    int);
template LossOutputT<double> aam_softmax_loss<double>(const Mat<double>&, std::span<const int>,
                                                      const ClassWeightsT<double>&,
                                                      const AamConfig&, int);

}  // namespace distillkit
