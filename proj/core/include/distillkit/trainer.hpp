// distillkit/trainer.hpp

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

#ifndef DISTILLKIT_TRAINER_HPP_
#define DISTILLKIT_TRAINER_HPP_

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "distillkit/augment.hpp"
#include "distillkit/feature_archive.hpp"
#include "distillkit/losses.hpp"
#include "distillkit/student_net.hpp"
#include "distillkit/teacher_store.hpp"

namespace distillkit {

enum class LossKind { kMse, kCos, kContrastive, kAam };

LossKind loss_kind_from_string(const std::string& name);  // UsageError on unknown
std::string to_string(LossKind kind);

struct TrainConfig {
  LossKind loss = LossKind::kContrastive;
  int batch_size = 64;
  int epochs = 15;
  double lr_start = 0.1;
  double lr_end = 0.01;
  double momentum = 0.9;
  double epoch_subset_fraction = 1.0;  // fraction of utterances sampled per epoch
  std::uint64_t seed = 7;
  bool augment_enabled = true;  // student-side crop + masking; teacher unaffected
  AugmentConfig augment;
  ContrastiveConfig contrastive;
  AamConfig aam;
  int n_workers = 1;           // parallel forward/backward; results are
                               // byte-identical for any worker count
  std::string out_dir = "ckpt";

  void validate() const;
};

struct EpochRecord {
  int epoch = 0;
  double lr = 0.0;
  double mean_loss = 0.0;        // per-sample mean over the processed set
  std::uint64_t processed = 0;
  std::uint64_t skipped = 0;     // utterances without a teacher embedding
  double wall_s = 0.0;           // in-memory only, never serialized
};

struct TrainReport {
  std::string loss_name;
  std::size_t param_count = 0;
  std::vector<EpochRecord> epochs;
  int best_epoch = -1;
  double best_loss = 0.0;
  std::string last_checkpoint;  // "<out_dir>/last.net1"
  std::string best_checkpoint;  // "<out_dir>/best.net1"

  /// JSON-lines: a header record echoing the run configuration, one record
  /// per epoch, and a final summary record. Wall-clock time is deliberately
  /// excluded so identical runs produce identical bytes.
  std::string to_jsonl(const TrainConfig& cfg) const;
};

/// lr(e) = lr_start * (lr_end/lr_start)^(e/(E-1)): exact endpoints at the
/// first and last epoch, geometric in between; constant when E = 1 or the
/// endpoints coincide (including the all-zero no-op schedule). UsageError on
/// epoch outside [0, E).
double lr_schedule(const TrainConfig& cfg, int epoch);

/// Label-free distillation: for each epoch a seeded subset of `utt_ids` is
/// drawn and shuffled; per sample the student sees a random crop plus
/// masking of the stored features while the target stays the clean teacher
/// embedding; the selected loss is evaluated per batch and SGD with momentum
/// updates the flat parameter vector (batch-mean gradient convention for
/// every loss kind). Utterances without a teacher embedding are skipped and
/// counted. Checkpoints last.net1 / best.net1 and report.jsonl land in
/// cfg.out_dir. Throws DataError on an empty id list or a fully skipped
/// epoch. Loss kind must be mse, cos, or contrastive.
TrainReport train_distill(const FeatureArchive& features, std::span<const std::string> utt_ids,
                          const TeacherStore& teacher, StudentNet& net, const TrainConfig& cfg);

/// Supervised pass with the class-weight loss (loss kind must be aam):
/// speaker names are mapped to dense class ids (sorted order), class weights
/// are seeded, re-normalized after every step, and trained jointly with the
/// net. `labels` holds (utterance id, speaker name) pairs; every id must
/// exist in the archive. The net may start from a distillation checkpoint.
TrainReport finetune_supervised(const FeatureArchive& features,
                                std::span<const std::pair<std::string, std::string>> labels,
                                StudentNet& net, const TrainConfig& cfg);

}  // namespace distillkit

#endif  // DISTILLKIT_TRAINER_HPP_
