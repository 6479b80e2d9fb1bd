// distillkit/trainer.cpp

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

#include "distillkit/trainer.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <filesystem>
#include <limits>
#include <map>
#include <numeric>
#include <sstream>

#include <json.hpp>

#include "distillkit/error.hpp"
#include "distillkit/io_util.hpp"
#include "distillkit/log.hpp"
#include "distillkit/thread_pool.hpp"

namespace distillkit {

namespace {

// Gradients from parallel backward passes land in a fixed number of slots
// (sample i of a batch goes to slot i mod kGradSlots, samples within a slot
// run in order, slots are reduced in index order). Floating-point summation
// order is therefore a function of the batch alone, making training results
// byte-identical for any worker count.
constexpr std::size_t kGradSlots = 8;

struct EpochItem {
  const FeatureMatrix* feats = nullptr;
  const EmbeddingVector* teacher = nullptr;  // distillation target, if any
  int label = -1;                            // class id, if supervised
};

std::string json_dump(const nlohmann::ordered_json& j) { return j.dump(); }

void check_all_in_archive(const FeatureArchive& features, std::span<const std::string> ids) {
  std::vector<std::string> missing;
  for (const std::string& id : ids)
    if (!features.find(id)) missing.push_back(id);
  if (missing.empty()) return;
  std::ostringstream os;
  os << missing.size() << " utterance ids missing from the feature archive:";
  const std::size_t shown = std::min<std::size_t>(missing.size(), 10);
  for (std::size_t i = 0; i < shown; ++i) os << " " << missing[i];
  if (missing.size() > shown) os << " (and " << missing.size() - shown << " more)";
  throw DataError(os.str());
}

/// The epoch/batch/update loop shared by distillation and fine-tuning. When
/// `teacher` is set the loss pairs student embeddings with stored teacher
/// rows; when `class_weights` is set the class-weight loss drives both the
/// net and the weight matrix.
TrainReport run_training(const FeatureArchive& features,
                         std::span<const std::string> candidate_ids,
                         std::span<const int> candidate_labels, const TeacherStore* teacher,
                         ClassWeights* class_weights, StudentNet& net, const TrainConfig& cfg) {
  cfg.validate();
  if (candidate_ids.empty()) throw DataError("training corpus is empty");
  check_all_in_archive(features, candidate_ids);
  if (teacher && teacher->dim() != static_cast<std::size_t>(net.config().embedding_dim))
    throw DataError("teacher embeddings have dimension " + std::to_string(teacher->dim()) +
                    " but the student emits " + std::to_string(net.config().embedding_dim));

  std::filesystem::create_directories(cfg.out_dir);
  const std::string last_path = (std::filesystem::path(cfg.out_dir) / "last.net1").string();
  const std::string best_path = (std::filesystem::path(cfg.out_dir) / "best.net1").string();

  ThreadPool pool(cfg.n_workers);
  const std::size_t n_params = net.param_count();
  const std::size_t emb_dim = static_cast<std::size_t>(net.config().embedding_dim);
  std::vector<float> velocity(n_params, 0.0f);
  std::vector<std::vector<float>> slot_grads(kGradSlots, std::vector<float>(n_params, 0.0f));
  std::vector<float> grad(n_params, 0.0f);
  Matf w_velocity;
  if (class_weights)
    w_velocity = Matf(class_weights->num_classes(), class_weights->dim());

  TrainReport report;
  report.loss_name = to_string(cfg.loss);
  report.param_count = n_params;
  report.last_checkpoint = last_path;
  report.best_checkpoint = best_path;
  double best_loss = std::numeric_limits<double>::infinity();

  const std::size_t n_candidates = candidate_ids.size();
  const auto subset_size = static_cast<std::size_t>(std::max<long>(
      1, std::lround(cfg.epoch_subset_fraction * static_cast<double>(n_candidates))));

  for (int epoch = 0; epoch < cfg.epochs; ++epoch) {
    const auto epoch_start = std::chrono::steady_clock::now();
    const double lr = lr_schedule(cfg, epoch);

    std::vector<std::size_t> order(n_candidates);
    std::iota(order.begin(), order.end(), 0);
    Rng shuffle_rng =
        Rng::derive(cfg.seed, {rng_stream::kEpochShuffle, static_cast<std::uint64_t>(epoch)});
    shuffle_rng.shuffle(order);
    order.resize(std::min(subset_size, n_candidates));

    std::vector<EpochItem> items;
    items.reserve(order.size());
    std::uint64_t skipped = 0;
    for (const std::size_t i : order) {
      EpochItem item;
      item.feats = features.find(candidate_ids[i]);
      if (teacher) {
        item.teacher = teacher->find(candidate_ids[i]);
        if (!item.teacher) {
          ++skipped;
          continue;
        }
      }
      if (!candidate_labels.empty()) item.label = candidate_labels[i];
      items.push_back(item);
    }
    if (items.empty())
      throw DataError("epoch " + std::to_string(epoch) + ": all " +
                      std::to_string(order.size()) +
                      " sampled utterances lack teacher embeddings");

    double loss_sum = 0.0;
    for (std::size_t batch_start = 0; batch_start < items.size();
         batch_start += static_cast<std::size_t>(cfg.batch_size)) {
      const std::size_t bn = std::min<std::size_t>(static_cast<std::size_t>(cfg.batch_size),
                                                   items.size() - batch_start);

      // Forward passes in parallel; each sample owns its row and tape, and
      // draws augmentation noise from a stream derived from (epoch, index).
      Matf student_rows(bn, emb_dim);
      std::vector<ForwardTape> tapes(bn);
      pool.parallel_for(bn, [&](std::size_t i) {
        const EpochItem& item = items[batch_start + i];
        std::vector<float> emb;
        if (cfg.augment_enabled) {
          Rng rng = Rng::derive(cfg.seed,
                                {rng_stream::kAugment, static_cast<std::uint64_t>(epoch),
                                 static_cast<std::uint64_t>(batch_start + i)});
          FeatureMatrix cropped = random_crop(*item.feats, cfg.augment, rng);
          const FeatureMatrix augmented = spec_augment(cropped, cfg.augment, rng);
          emb = net.forward(augmented.frames, &tapes[i]);
        } else {
          emb = net.forward(item.feats->frames, &tapes[i]);
        }
        std::copy(emb.begin(), emb.end(), student_rows.row(i).begin());
      });

      // Batch loss and the per-row embedding gradients, under the batch-mean
      // convention for every loss kind.
      Matf grad_student;
      Matf grad_weights;
      double batch_loss_sum = 0.0;
      if (cfg.loss == LossKind::kAam) {
        std::vector<int> labels(bn);
        for (std::size_t i = 0; i < bn; ++i) labels[i] = items[batch_start + i].label;
        LossOutput lo =
            aam_softmax_loss<float>(student_rows, labels, *class_weights, cfg.aam, epoch);
        batch_loss_sum = lo.value * static_cast<double>(bn);
        grad_student = std::move(lo.grad_student);
        grad_weights = std::move(lo.grad_weights);
      } else {
        EmbeddingBatch batch;
        batch.student = std::move(student_rows);
        batch.teacher = Matf(bn, emb_dim);
        for (std::size_t i = 0; i < bn; ++i) {
          const EmbeddingVector& t = *items[batch_start + i].teacher;
          std::copy(t.begin(), t.end(), batch.teacher.row(i).begin());
        }
        LossOutput lo;
        switch (cfg.loss) {
          case LossKind::kMse:
            lo = mse_loss(batch);
            break;
          case LossKind::kCos:
            lo = cos_loss(batch);
            break;
          default:
            lo = contrastive_loss(batch, cfg.contrastive);
            break;
        }
        batch_loss_sum = lo.value;
        grad_student = std::move(lo.grad_student);
        const float inv_bn = 1.0f / static_cast<float>(bn);
        for (float& g : grad_student.storage()) g *= inv_bn;
      }
      loss_sum += batch_loss_sum;

      // Backward passes land in fixed slots; see kGradSlots above.
      for (auto& sg : slot_grads) std::fill(sg.begin(), sg.end(), 0.0f);
      pool.parallel_for(kGradSlots, [&](std::size_t slot) {
        for (std::size_t i = slot; i < bn; i += kGradSlots) {
          const std::vector<float> g = net.backward(tapes[i], grad_student.row(i));
          float* acc = slot_grads[slot].data();
          for (std::size_t p = 0; p < n_params; ++p) acc[p] += g[p];
        }
      });
      std::fill(grad.begin(), grad.end(), 0.0f);
      for (const auto& sg : slot_grads)
        for (std::size_t p = 0; p < n_params; ++p) grad[p] += sg[p];

      float* params = net.params().data();
      const auto mu = static_cast<float>(cfg.momentum);
      const auto lr_f = static_cast<float>(lr);
      for (std::size_t p = 0; p < n_params; ++p) {
        velocity[p] = mu * velocity[p] + grad[p];
        params[p] -= lr_f * velocity[p];
      }
      if (class_weights) {
        float* w = class_weights->mutable_matrix().data();
        float* wv = w_velocity.data();
        const float* gw = grad_weights.data();
        const std::size_t nw = w_velocity.rows() * w_velocity.cols();
        for (std::size_t p = 0; p < nw; ++p) {
          wv[p] = mu * wv[p] + gw[p];
          w[p] -= lr_f * wv[p];
        }
        class_weights->renormalize();
      }
    }

    EpochRecord rec;
    rec.epoch = epoch;
    rec.lr = lr;
    rec.mean_loss = loss_sum / static_cast<double>(items.size());
    rec.processed = items.size();
    rec.skipped = skipped;
    rec.wall_s =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - epoch_start).count();
    report.epochs.push_back(rec);
    log_info("epoch " + std::to_string(epoch) + ": loss " + std::to_string(rec.mean_loss) +
             ", lr " + std::to_string(lr) + ", " + std::to_string(rec.processed) + " samples (" +
             std::to_string(rec.skipped) + " skipped), " + std::to_string(rec.wall_s) + " s");

    net.save(last_path);
    if (rec.mean_loss < best_loss) {
      best_loss = rec.mean_loss;
      report.best_epoch = epoch;
      report.best_loss = best_loss;
      net.save(best_path);
    }
  }

  write_text_file(std::filesystem::path(cfg.out_dir) / "report.jsonl", report.to_jsonl(cfg));
  return report;
}

}  // namespace

LossKind loss_kind_from_string(const std::string& name) {
  if (name == "mse") return LossKind::kMse;
  if (name == "cos") return LossKind::kCos;
  if (name == "contrastive") return LossKind::kContrastive;
  if (name == "aam") return LossKind::kAam;
  throw UsageError("unknown loss '" + name + "' (known: mse, cos, contrastive, aam)");
}

std::string to_string(LossKind kind) {
  switch (kind) {
    case LossKind::kMse:
      return "mse";
    case LossKind::kCos:
      return "cos";
    case LossKind::kContrastive:
      return "contrastive";
    case LossKind::kAam:
      return "aam";
  }
  return "unknown";
}

void TrainConfig::validate() const {
  if (epochs < 1) throw UsageError("need at least one epoch");
  if (batch_size < 1) throw UsageError("batch size must be >= 1");
  if (momentum < 0 || momentum >= 1) throw UsageError("momentum must lie in [0, 1)");
  if (!(epoch_subset_fraction > 0) || epoch_subset_fraction > 1)
    throw UsageError("epoch_subset_fraction must lie in (0, 1]");
  if (n_workers < 1) throw UsageError("need at least one worker");
  const bool both_zero = lr_start == 0.0 && lr_end == 0.0;
  if (!both_zero && !(lr_end > 0 && lr_end <= lr_start))
    throw UsageError("learning rates must satisfy 0 < lr_end <= lr_start "
                     "(or both zero for a no-op run)");
  if (augment_enabled) augment.validate();
}

double lr_schedule(const TrainConfig& cfg, int epoch) {
  if (epoch < 0 || epoch >= cfg.epochs)
    throw UsageError("epoch " + std::to_string(epoch) + " outside [0, " +
                     std::to_string(cfg.epochs) + ")");
  if (cfg.epochs == 1 || cfg.lr_start == cfg.lr_end) return cfg.lr_start;
  // The endpoints are returned directly: rounding in pow must not be able to
  // nudge the first or last epoch off the configured rates.
  if (epoch == 0) return cfg.lr_start;
  if (epoch == cfg.epochs - 1) return cfg.lr_end;
  const double exponent = static_cast<double>(epoch) / static_cast<double>(cfg.epochs - 1);
  return cfg.lr_start * std::pow(cfg.lr_end / cfg.lr_start, exponent);
}

std::string TrainReport::to_jsonl(const TrainConfig& cfg) const {
  std::string out;
  nlohmann::ordered_json header{{"type", "header"},
                                {"loss", loss_name},
                                {"grad_scale", "mean"},
                                {"batch_size", cfg.batch_size},
                                {"epochs", cfg.epochs},
                                {"lr_start", cfg.lr_start},
                                {"lr_end", cfg.lr_end},
                                {"momentum", cfg.momentum},
                                {"epoch_subset_fraction", cfg.epoch_subset_fraction},
                                {"seed", cfg.seed},
                                {"augment", cfg.augment_enabled},
                                {"param_count", param_count}};
  if (cfg.loss == LossKind::kContrastive) header["temperature"] = cfg.contrastive.temperature;
  if (cfg.loss == LossKind::kAam) {
    header["aam_scale"] = cfg.aam.scale;
    header["aam_margin"] = cfg.aam.margin;
    header["aam_margin_warmup_epochs"] = cfg.aam.margin_warmup_epochs;
  }
  out += json_dump(header);
  out += '\n';
  for (const EpochRecord& rec : epochs) {
    const nlohmann::ordered_json line{{"type", "epoch"},       {"epoch", rec.epoch},
                                      {"lr", rec.lr},          {"mean_loss", rec.mean_loss},
                                      {"processed", rec.processed}, {"skipped", rec.skipped}};
    out += json_dump(line);
    out += '\n';
  }
  // Checkpoints are reported by file name only: the serialized report must
  // not depend on where the run happened to write, or identical runs into
  // different directories would stop being byte-identical.
  const auto basename = [](const std::string& path) {
    const std::size_t slash = path.find_last_of('/');
    return slash == std::string::npos ? path : path.substr(slash + 1);
  };
  const nlohmann::ordered_json final_line{{"type", "final"},
                                          {"best_epoch", best_epoch},
                                          {"best_loss", best_loss},
                                          {"last_checkpoint", basename(last_checkpoint)},
                                          {"best_checkpoint", basename(best_checkpoint)}};
  out += json_dump(final_line);
  out += '\n';
  return out;
}

TrainReport train_distill(const FeatureArchive& features, std::span<const std::string> utt_ids,
                          const TeacherStore& teacher, StudentNet& net, const TrainConfig& cfg) {
  if (cfg.loss == LossKind::kAam)
    throw UsageError("distillation requires a label-free loss (mse, cos, or contrastive)");
  return run_training(features, utt_ids, {}, &teacher, nullptr, net, cfg);
}

TrainReport finetune_supervised(const FeatureArchive& features,
                                std::span<const std::pair<std::string, std::string>> labels,
                                StudentNet& net, const TrainConfig& cfg) {
  if (cfg.loss != LossKind::kAam)
    throw UsageError("fine-tuning uses the aam loss");
  if (labels.empty()) throw DataError("label list is empty");

  // Speaker names map to dense class ids in sorted order, so the class
  // layout does not depend on file ordering.
  std::map<std::string, int> class_of;
  for (const auto& [utt, spk] : labels) class_of.emplace(spk, 0);
  int next_id = 0;
  for (auto& [spk, id] : class_of) id = next_id++;

  std::vector<std::string> ids;
  std::vector<int> class_ids;
  ids.reserve(labels.size());
  class_ids.reserve(labels.size());
  for (const auto& [utt, spk] : labels) {
    ids.push_back(utt);
    class_ids.push_back(class_of.at(spk));
  }

  Rng weight_rng = Rng::derive(cfg.seed, {rng_stream::kClassWeights});
  ClassWeights weights(static_cast<std::size_t>(next_id),
                       static_cast<std::size_t>(net.config().embedding_dim), weight_rng);
  return run_training(features, ids, class_ids, nullptr, &weights, net, cfg);
}

}  // namespace distillkit
