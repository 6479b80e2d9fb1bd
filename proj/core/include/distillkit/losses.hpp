// distillkit/losses.hpp

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

#ifndef DISTILLKIT_LOSSES_HPP_
#define DISTILLKIT_LOSSES_HPP_

#include <span>

#include "distillkit/mat.hpp"
#include "distillkit/rng.hpp"

namespace distillkit {

/// Paired teacher/student embeddings for one minibatch, one row per
/// utterance. Teacher rows are constants: no loss propagates into them.
template <typename T>
struct EmbeddingBatchT {
  Mat<T> teacher;  // N x D
  Mat<T> student;  // N x D

  std::size_t batch_size() const { return teacher.rows(); }
  std::size_t dim() const { return teacher.cols(); }

  /// Throws DataError on shape mismatch or empty batch; when
  /// `require_nonzero` also rejects rows with norm <= 1e-12, which would
  /// make cosines undefined.
  void validate(bool require_nonzero) const;
};

using EmbeddingBatch = EmbeddingBatchT<float>;

/// Scalar loss plus exact gradients. `value` is kept in double regardless of
/// T; several useful regimes (well-trained batches) sit below float epsilon.
template <typename T>
struct LossOutputT {
  double value = 0.0;
  Mat<T> grad_student;  // N x D
  Mat<T> grad_weights;  // C x D; empty except for the class-weight loss
};

using LossOutput = LossOutputT<float>;

struct ContrastiveConfig {
  double temperature = 0.1;
  void validate() const;  // UsageError unless temperature > 0
};

struct AamConfig {
  double scale = 30.0;
  double margin = 0.3;          // radians
  int margin_warmup_epochs = 30;  // margin is 0 for epochs before this
  void validate() const;  // UsageError unless scale > 0 and 0 <= margin < pi/2
};

/// One unit-norm row per speaker class. Rows are re-normalized after every
/// gradient step so only the angular part of the weights ever matters.
template <typename T>
class ClassWeightsT {
 public:
  ClassWeightsT() = default;
  /// Random directions, one per class, drawn from `rng` and normalized.
  ClassWeightsT(std::size_t num_classes, std::size_t dim, Rng& rng);
  explicit ClassWeightsT(Mat<T> rows);  // normalizes; DataError on zero rows

  std::size_t num_classes() const { return rows_.rows(); }
  std::size_t dim() const { return rows_.cols(); }
  const Mat<T>& matrix() const { return rows_; }
  Mat<T>& mutable_matrix() { return rows_; }

  void renormalize();

 private:
  Mat<T> rows_;
};

using ClassWeights = ClassWeightsT<float>;

/// Sum over the batch of squared distance ||t_i - s_i||^2;
/// grad_student[i] = 2 (s_i - t_i).
template <typename T>
LossOutputT<T> mse_loss(const EmbeddingBatchT<T>& batch);

/// Negative sum of pairwise cosines, -sum_i cos(t_i, s_i). Minimized at -N
/// when every pair is positively collinear; invariant to row scale.
template <typename T>
LossOutputT<T> cos_loss(const EmbeddingBatchT<T>& batch);

/// Batch-level InfoNCE over cosine similarities: each teacher row t_i is an
/// anchor whose positive is s_i and whose negatives are the other student
/// rows of the same batch,
///   value = -sum_i ln( exp(cos(t_i,s_i)/tau) / sum_j exp(cos(t_i,s_j)/tau) ).
/// The normalization runs over student rows j (including j = i). Stabilized
/// with max subtraction; with N=1 the value is exactly 0.
template <typename T>
LossOutputT<T> contrastive_loss(const EmbeddingBatchT<T>& batch, const ContrastiveConfig& cfg);

/// Additive-angular-margin softmax over speaker classes: cosines between the
/// normalized embedding and each class direction become logits scaled by
/// `scale`, with the target-class angle penalized by `margin` (applied as
/// cos(theta + m) = cos theta cos m - sin theta sin m). The margin is active
/// only once `epoch >= margin_warmup_epochs`. Value is the batch mean of the
/// cross-entropies; gradients cover both embeddings and class weights (the
/// weight gradient is tangential, i.e. orthogonal to each class direction).
template <typename T>
LossOutputT<T> aam_softmax_loss(const Mat<T>& student, std::span<const int> labels,
                                const ClassWeightsT<T>& weights, const AamConfig& cfg, int epoch);

}  // namespace distillkit

#endif  // DISTILLKIT_LOSSES_HPP_
