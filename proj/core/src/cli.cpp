// distillkit/cli.cpp

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

#include "distillkit/cli.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <iostream>
#include <memory>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "distillkit/augment.hpp"
#include "distillkit/error.hpp"
#include "distillkit/eval.hpp"
#include "distillkit/feature_archive.hpp"
#include "distillkit/features.hpp"
#include "distillkit/io_util.hpp"
#include "distillkit/log.hpp"
#include "distillkit/rng.hpp"
#include "distillkit/student_net.hpp"
#include "distillkit/synth.hpp"
#include "distillkit/teacher_store.hpp"
#include "distillkit/thread_pool.hpp"
#include "distillkit/trainer.hpp"
#include "distillkit/wav.hpp"

namespace distillkit {
namespace {

namespace fs = std::filesystem;

NetConfig net_config_from_flags(const std::string& preset, const std::string& pooling,
                                int embedding_dim) {
  NetConfig cfg = NetConfig::preset(preset);
  if (pooling == "stats") {
    cfg.pooling = PoolingMode::kStats;
  } else if (pooling == "gap") {
    cfg.pooling = PoolingMode::kGap;
  } else {
    throw UsageError("unknown pooling '" + pooling + "' (known: stats, gap)");
  }
  if (embedding_dim > 0) cfg.embedding_dim = embedding_dim;
  cfg.validate();
  return cfg;
}

std::vector<std::string> read_id_list(const std::string& path) {
  std::istringstream in(read_text_file(path));
  std::vector<std::string> ids;
  std::string line;
  while (std::getline(in, line)) {
    while (!line.empty() && (line.back() == '\r' || line.back() == ' ')) line.pop_back();
    if (!line.empty()) ids.push_back(line);
  }
  if (ids.empty()) throw DataError("id list " + path + " is empty");
  return ids;
}

/// Registers --config on `sc`: a TOML-style file of "<long-option>=<value>"
/// lines (a [<subcommand>] section also matches; other sections are ignored
/// so one file can serve several subcommands). Values fill only options the
/// command line left untouched, so explicit flags always win. Must be
/// registered before the configurable options: option callbacks run in
/// registration order, and the injection has to happen first.
void add_config_option(CLI::App* sc) {
  sc->add_option_function<std::string>(
      "--config",
      [sc](const std::string& path) {
        const std::vector<CLI::ConfigItem> items = CLI::ConfigTOML().from_file(path);
        for (const CLI::ConfigItem& item : items) {
          if (!item.parents.empty() &&
              (item.parents.size() != 1 || item.parents.front() != sc->get_name())) {
            continue;
          }
          CLI::Option* opt = sc->get_option_no_throw("--" + item.name);
          if (opt == nullptr)
            throw UsageError("config key '" + item.name + "' is not an option of '" +
                             sc->get_name() + "'");
          if (opt->count() > 0) continue;
          for (const std::string& v : item.inputs) opt->add_result(v);
        }
      },
      "Key=value defaults for this subcommand; flags override the file");
}

/// Options shared by the two training subcommands.
struct TrainFlags {
  TrainConfig cfg;
  bool no_augment = false;
  std::string student = "tdnn-small";
  std::string pooling = "stats";
  int embedding_dim = 0;  // 0 keeps the preset value
  std::string loss_name;
  std::string features_path;
  std::string train_list;
};

void add_train_flags(CLI::App* sc, TrainFlags& f, const std::string& default_loss) {
  f.loss_name = default_loss;
  f.cfg.n_workers = ThreadPool::default_workers();
  sc->add_option("--features", f.features_path, "Input feature archive (.ftr1)")->required();
  sc->add_option("--out", f.cfg.out_dir, "Output directory for checkpoints and report.jsonl")
      ->required();
  sc->add_option("--loss", f.loss_name, "Training loss")->capture_default_str();
  sc->add_option("--student", f.student, "Student architecture preset")->capture_default_str();
  sc->add_option("--pooling", f.pooling, "Pooling mode: stats or gap")->capture_default_str();
  sc->add_option("--embedding-dim", f.embedding_dim,
                 "Override the preset embedding dimension (0 keeps it)");
  sc->add_option("--epochs", f.cfg.epochs, "Training epochs")->capture_default_str();
  sc->add_option("--batch", f.cfg.batch_size, "Batch size")->capture_default_str();
  sc->add_option("--lr-start", f.cfg.lr_start, "Learning rate at the first epoch")
      ->capture_default_str();
  sc->add_option("--lr-end", f.cfg.lr_end, "Learning rate at the last epoch")
      ->capture_default_str();
  sc->add_option("--momentum", f.cfg.momentum, "SGD momentum")->capture_default_str();
  sc->add_option("--subset-fraction", f.cfg.epoch_subset_fraction,
                 "Fraction of utterances sampled per epoch")
      ->capture_default_str();
  sc->add_option("--seed", f.cfg.seed, "Master seed for every random draw in the run")
      ->capture_default_str();
  sc->add_option("--workers", f.cfg.n_workers,
                 "Worker threads (results do not depend on this)")
      ->capture_default_str();
  sc->add_flag("--no-augment", f.no_augment, "Disable cropping and masking");
  sc->add_option("--crop-min-s", f.cfg.augment.crop_min_s, "Shortest training crop, seconds")
      ->capture_default_str();
  sc->add_option("--crop-max-s", f.cfg.augment.crop_max_s, "Longest training crop, seconds")
      ->capture_default_str();
  sc->add_option("--freq-masks", f.cfg.augment.n_freq_masks, "Frequency masks per sample")
      ->capture_default_str();
  sc->add_option("--max-freq-mask-bins", f.cfg.augment.max_freq_mask_bins,
                 "Widest frequency mask, bins")
      ->capture_default_str();
  sc->add_option("--time-masks", f.cfg.augment.n_time_masks, "Time masks per sample")
      ->capture_default_str();
  sc->add_option("--max-time-mask-frames", f.cfg.augment.max_time_mask_frames,
                 "Widest time mask, frames")
      ->capture_default_str();
  sc->add_option("--time-mask-fraction", f.cfg.augment.time_mask_fraction,
                 "Per-utterance cap on time-mask width as a fraction of its length")
      ->capture_default_str();
  sc->add_option("--max-warp-frames", f.cfg.augment.max_warp_frames,
                 "Largest time-warp displacement, frames")
      ->capture_default_str();
  sc->add_option("--train-list", f.train_list,
                 "File with one utterance id per line; defaults to the whole archive");
}

StudentNet make_student(const TrainFlags& f) {
  const NetConfig net_cfg = net_config_from_flags(f.student, f.pooling, f.embedding_dim);
  Rng init_rng = Rng::derive(f.cfg.seed, {rng_stream::kNetInit});
  return StudentNet(net_cfg, init_rng);
}

void print_train_summary(const char* verb, const TrainReport& report) {
  std::printf("%s: loss %s params %zu epochs %zu\n", verb, report.loss_name.c_str(),
              report.param_count, report.epochs.size());
  std::printf("%s: best epoch %d mean loss %.6f\n", verb, report.best_epoch, report.best_loss);
  std::printf("%s: wrote %s %s\n", verb, report.last_checkpoint.c_str(),
              report.best_checkpoint.c_str());
}

// ---------------------------------------------------------------------------
// synth

void setup_synth(CLI::App& app) {
  auto state = std::make_shared<std::pair<SynthSpec, std::string>>();
  CLI::App* sc = app.add_subcommand(
      "synth", "Generate a deterministic synthetic corpus with teacher embeddings");
  add_config_option(sc);
  SynthSpec& spec = state->first;
  sc->add_option("--out", state->second, "Output directory")->required();
  sc->add_option("--speakers", spec.n_speakers, "Number of speakers")->capture_default_str();
  sc->add_option("--utts-per-speaker", spec.utts_per_speaker, "Utterances per speaker")
      ->capture_default_str();
  sc->add_option("--teacher-dim", spec.teacher_dim, "Teacher embedding dimension")
      ->capture_default_str();
  sc->add_option("--sigma-teacher", spec.within_speaker_noise,
                 "Within-speaker spread of teacher embeddings")
      ->capture_default_str();
  sc->add_option("--sigma-feature", spec.feature_noise, "Per-cell feature noise")
      ->capture_default_str();
  sc->add_option("--feature-dim", spec.feature_dim, "Feature dimension")->capture_default_str();
  sc->add_option("--utt-min-s", spec.utt_min_s, "Shortest utterance, seconds")
      ->capture_default_str();
  sc->add_option("--utt-max-s", spec.utt_max_s, "Longest utterance, seconds")
      ->capture_default_str();
  sc->add_option("--held-out", spec.held_out_per_speaker,
                 "Utterances per speaker reserved for trials")
      ->capture_default_str();
  sc->add_option("--trials-per-class", spec.trials_per_class,
                 "Target and nontarget trials kept after balancing")
      ->capture_default_str();
  sc->add_option("--seed", spec.seed, "Master seed")->capture_default_str();
  sc->callback([state] {
    const SynthSpec& s = state->first;
    const std::string& out_dir = state->second;
    SynthCorpus corpus = generate_corpus(s);
    write_corpus(corpus, out_dir);
    std::string train_list;
    for (const auto& id : corpus.train_ids) train_list += id + "\n";
    write_text_file(fs::path(out_dir) / "train.list", train_list);
    std::string heldout_list;
    for (const auto& id : corpus.heldout_ids) heldout_list += id + "\n";
    write_text_file(fs::path(out_dir) / "heldout.list", heldout_list);
    std::printf("synth: %d speakers, %zu utterances (%zu train, %zu held out), %zu trials\n",
                s.n_speakers, corpus.features.ids().size(), corpus.train_ids.size(),
                corpus.heldout_ids.size(), corpus.trials.size());
    std::printf(
        "synth: wrote feats.ftr1 teacher.emb1 labels.tsv trials.txt train.list heldout.list "
        "in %s\n",
        out_dir.c_str());
  });
}

// ---------------------------------------------------------------------------
// features

struct FeaturesFlags {
  std::string wav_dir;
  std::string out;
  FeaturePipelineConfig pipe;
  bool no_vad = false;
  bool no_cmn = false;
  bool magnitude = false;
  int workers = ThreadPool::default_workers();
};

void setup_features(CLI::App& app) {
  auto f = std::make_shared<FeaturesFlags>();
  CLI::App* sc = app.add_subcommand(
      "features", "Extract log mel-filterbank features from a directory of wav files");
  add_config_option(sc);
  sc->add_option("--wav-dir", f->wav_dir, "Directory scanned for *.wav (id = file stem)")
      ->required();
  sc->add_option("--out", f->out, "Output feature archive (.ftr1)")->required();
  sc->add_option("--bins", f->pipe.fbank.num_bins, "Mel bins")->capture_default_str();
  sc->add_option("--frame-length-ms", f->pipe.fbank.frame_length_ms, "Frame length, ms")
      ->capture_default_str();
  sc->add_option("--frame-shift-ms", f->pipe.fbank.frame_shift_ms, "Frame shift, ms")
      ->capture_default_str();
  sc->add_option("--low-freq", f->pipe.fbank.low_freq, "Lowest mel-filter edge, Hz")
      ->capture_default_str();
  sc->add_option("--high-freq", f->pipe.fbank.high_freq, "Highest mel-filter edge, Hz")
      ->capture_default_str();
  sc->add_option("--preemphasis", f->pipe.fbank.preemphasis, "Pre-emphasis coefficient")
      ->capture_default_str();
  sc->add_flag("--magnitude", f->magnitude, "Use magnitude instead of power spectrum");
  sc->add_flag("--no-vad", f->no_vad, "Keep all frames");
  sc->add_flag("--no-cmn", f->no_cmn, "Skip sliding mean normalization");
  sc->add_flag("--cmn-before-vad", f->pipe.cmn_before_vad,
               "Normalize before dropping silence frames");
  sc->add_option("--cmn-window-s", f->pipe.cmn_window_s, "Mean-normalization window, seconds")
      ->capture_default_str();
  sc->add_option("--vad-floor", f->pipe.vad.absolute_floor, "Absolute log-energy floor")
      ->capture_default_str();
  sc->add_option("--vad-range", f->pipe.vad.dynamic_range,
                 "Log-energy range kept below the loudest frame")
      ->capture_default_str();
  sc->add_option("--workers", f->workers, "Worker threads (results do not depend on this)")
      ->capture_default_str();
  sc->callback([f] {
    f->pipe.vad_enabled = !f->no_vad;
    f->pipe.cmn_enabled = !f->no_cmn;
    f->pipe.fbank.use_power = !f->magnitude;
    f->pipe.fbank.validate(16000);
    std::vector<fs::path> paths;
    if (!fs::is_directory(f->wav_dir)) {
      throw DataError("wav directory " + f->wav_dir + " does not exist");
    }
    for (const auto& entry : fs::directory_iterator(f->wav_dir)) {
      if (entry.is_regular_file() && entry.path().extension() == ".wav") {
        paths.push_back(entry.path());
      }
    }
    if (paths.empty()) throw DataError("no .wav files found in " + f->wav_dir);
    std::sort(paths.begin(), paths.end());
    std::vector<FeatureMatrix> extracted(paths.size());
    ThreadPool pool(std::max(f->workers, 1));
    pool.parallel_for(paths.size(), [&](std::size_t i) {
      try {
        extracted[i] = extract_features(read_wav(paths[i].string()), f->pipe);
      } catch (const UsageError&) {
        throw;
      } catch (const Error& e) {
        throw DataError(paths[i].filename().string() + ": " + e.what());
      }
    });
    FeatureArchive archive;
    for (std::size_t i = 0; i < paths.size(); ++i) {
      archive.add(paths[i].stem().string(), std::move(extracted[i]));
    }
    write_feature_archive(f->out, archive);
    std::printf("features: wrote %zu utterances (dim %d) to %s\n", archive.ids().size(),
                f->pipe.fbank.num_bins, f->out.c_str());
  });
}

// ---------------------------------------------------------------------------
// import-embeddings

void setup_import(CLI::App& app) {
  auto state = std::make_shared<std::pair<std::string, std::string>>();
  CLI::App* sc = app.add_subcommand(
      "import-embeddings", "Convert a TSV of teacher embeddings into a .emb1 store");
  add_config_option(sc);
  sc->add_option("--tsv", state->first,
                 "Input file, one \"<id>\\t<v1>,...,<vD>\" line per utterance")
      ->required();
  sc->add_option("--out", state->second, "Output embedding store (.emb1)")->required();
  sc->callback([state] {
    std::istringstream in(read_text_file(state->first));
    TeacherStore store;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
      ++line_no;
      if (!line.empty() && line.back() == '\r') line.pop_back();
      if (line.empty()) continue;
      const std::size_t tab = line.find('\t');
      if (tab == std::string::npos || tab == 0) {
        throw DataError("line " + std::to_string(line_no) +
                        ": expected \"<id>\\t<v1>,...,<vD>\"");
      }
      const std::string id = line.substr(0, tab);
      std::vector<float> values;
      const char* p = line.c_str() + tab + 1;
      const char* end = line.c_str() + line.size();
      while (p < end) {
        char* after = nullptr;
        const double v = std::strtod(p, &after);
        if (after == p) {
          throw DataError("line " + std::to_string(line_no) + ": bad number near '" +
                          std::string(p, std::min<std::size_t>(8, end - p)) + "'");
        }
        if (!std::isfinite(v)) {
          throw DataError("line " + std::to_string(line_no) + ": non-finite value");
        }
        values.push_back(static_cast<float>(v));
        p = after;
        if (p < end) {
          if (*p != ',') {
            throw DataError("line " + std::to_string(line_no) + ": expected ',' between values");
          }
          ++p;
          if (p == end) {
            throw DataError("line " + std::to_string(line_no) + ": trailing ','");
          }
        }
      }
      if (values.empty()) {
        throw DataError("line " + std::to_string(line_no) + ": no values after the id");
      }
      try {
        store.add(id, std::move(values));
      } catch (const Error& e) {
        throw DataError("line " + std::to_string(line_no) + ": " + e.what());
      }
    }
    if (store.size() == 0) throw DataError(state->first + " contains no embeddings");
    write_teacher_store(state->second, store);
    std::printf("import-embeddings: wrote %zu embeddings (dim %zu) to %s\n", store.size(),
                store.dim(), state->second.c_str());
  });
}

// ---------------------------------------------------------------------------
// distill

void setup_distill(CLI::App& app) {
  struct State {
    TrainFlags f;
    std::string teacher_path;
  };
  auto st = std::make_shared<State>();
  CLI::App* sc = app.add_subcommand(
      "distill", "Train a student on stored teacher embeddings (no labels required)");
  add_config_option(sc);
  add_train_flags(sc, st->f, "contrastive");
  sc->add_option("--teacher", st->teacher_path, "Teacher embedding store (.emb1)")->required();
  sc->add_option("--temperature", st->f.cfg.contrastive.temperature,
                 "Contrastive softmax temperature")
      ->capture_default_str();
  sc->callback([st] {
    TrainFlags& f = st->f;
    f.cfg.loss = loss_kind_from_string(f.loss_name);
    f.cfg.augment_enabled = !f.no_augment;
    const FeatureArchive archive = read_feature_archive(f.features_path);
    const TeacherStore teacher = read_teacher_store(st->teacher_path);
    const std::vector<std::string> ids =
        f.train_list.empty() ? archive.ids() : read_id_list(f.train_list);
    StudentNet net = make_student(f);
    const TrainReport report = train_distill(archive, ids, teacher, net, f.cfg);
    print_train_summary("distill", report);
  });
}

// ---------------------------------------------------------------------------
// finetune

void setup_finetune(CLI::App& app) {
  struct State {
    TrainFlags f;
    std::string labels_path;
    std::string init_ckpt;
  };
  auto st = std::make_shared<State>();
  CLI::App* sc = app.add_subcommand(
      "finetune", "Train with speaker labels and the additive-angular-margin loss");
  add_config_option(sc);
  add_train_flags(sc, st->f, "aam");
  sc->add_option("--labels", st->labels_path, "TSV with \"<utterance-id>\\t<speaker>\" lines")
      ->required();
  sc->add_option("--init", st->init_ckpt, "Checkpoint (.net1) to start from; default fresh init");
  sc->add_option("--aam-scale", st->f.cfg.aam.scale, "Logit scale")->capture_default_str();
  sc->add_option("--aam-margin", st->f.cfg.aam.margin, "Angular margin, radians")
      ->capture_default_str();
  sc->add_option("--aam-warmup", st->f.cfg.aam.margin_warmup_epochs,
                 "Epochs trained before the margin turns on")
      ->capture_default_str();
  sc->callback([st] {
    TrainFlags& f = st->f;
    f.cfg.loss = loss_kind_from_string(f.loss_name);
    f.cfg.augment_enabled = !f.no_augment;
    const FeatureArchive archive = read_feature_archive(f.features_path);
    std::vector<std::pair<std::string, std::string>> labels = read_labels(st->labels_path);
    if (!f.train_list.empty()) {
      const std::vector<std::string> keep = read_id_list(f.train_list);
      const std::set<std::string> keep_set(keep.begin(), keep.end());
      std::erase_if(labels, [&](const auto& kv) { return !keep_set.contains(kv.first); });
      if (labels.empty()) throw DataError("no labeled utterances selected by " + f.train_list);
    }
    StudentNet net = [&] {
      if (st->init_ckpt.empty()) return make_student(f);
      const NetConfig net_cfg = net_config_from_flags(f.student, f.pooling, f.embedding_dim);
      return StudentNet::load(st->init_ckpt, net_cfg);
    }();
    const TrainReport report = finetune_supervised(archive, labels, net, f.cfg);
    print_train_summary("finetune", report);
  });
}

// ---------------------------------------------------------------------------
// evaluate

void setup_evaluate(CLI::App& app) {
  struct State {
    std::string trials_path;
    std::string scores_out;
    std::string ckpt;
    std::string features_path;
    std::string embeddings_path;
    std::string student = "tdnn-small";
    std::string pooling = "stats";
    int embedding_dim = 0;
    int workers = ThreadPool::default_workers();
  };
  auto st = std::make_shared<State>();
  CLI::App* sc = app.add_subcommand(
      "evaluate", "Score a trial list and report the equal error rate");
  add_config_option(sc);
  sc->add_option("--trials", st->trials_path, "Trial list: \"<0|1> <enroll-id> <test-id>\" lines")
      ->required();
  sc->add_option("--scores-out", st->scores_out, "Optional TSV of per-trial scores");
  sc->add_option("--ckpt", st->ckpt, "Student checkpoint (.net1); needs --features");
  sc->add_option("--features", st->features_path, "Feature archive for the checkpoint path");
  sc->add_option("--embeddings", st->embeddings_path,
                 "Embedding store (.emb1) to score directly instead of a checkpoint");
  sc->add_option("--student", st->student, "Architecture preset of the checkpoint")
      ->capture_default_str();
  sc->add_option("--pooling", st->pooling, "Pooling mode of the checkpoint")
      ->capture_default_str();
  sc->add_option("--embedding-dim", st->embedding_dim,
                 "Override the preset embedding dimension (0 keeps it)");
  sc->add_option("--workers", st->workers, "Worker threads (results do not depend on this)")
      ->capture_default_str();
  sc->callback([st] {
    // Flag consistency comes before any file is touched: a bad invocation is
    // a usage error even when the paths do not exist either.
    const bool from_net = !st->ckpt.empty();
    const bool from_store = !st->embeddings_path.empty();
    if (from_net == from_store) {
      throw UsageError("pass exactly one of --ckpt (with --features) or --embeddings");
    }
    if (from_net && st->features_path.empty()) throw UsageError("--ckpt requires --features");
    const std::vector<TrialPair> trials = read_trials(st->trials_path);
    TrialRunResult result;
    if (from_net) {
      const NetConfig net_cfg =
          net_config_from_flags(st->student, st->pooling, st->embedding_dim);
      const StudentNet net = StudentNet::load(st->ckpt, net_cfg);
      const FeatureArchive archive = read_feature_archive(st->features_path);
      ThreadPool pool(std::max(st->workers, 1));
      result = run_trials(net, archive, trials, &pool);
    } else {
      result = run_trials_on_store(read_teacher_store(st->embeddings_path), trials);
    }
    if (!st->scores_out.empty()) write_scores(st->scores_out, result.scores);
    std::printf("eer %.6f\n", result.eer.eer);
    std::printf("threshold %.6f\n", result.eer.threshold);
  });
}

// ---------------------------------------------------------------------------
// bench

void setup_bench(CLI::App& app) {
  struct State {
    std::string ckpt;
    std::string student = "tdnn-small";
    std::string pooling = "stats";
    int embedding_dim = 0;
    int runs = 5;
    double seconds = 10.0;
  };
  auto st = std::make_shared<State>();
  CLI::App* sc = app.add_subcommand(
      "bench", "Report parameter count and real-time factor of a student");
  add_config_option(sc);
  sc->add_option("--ckpt", st->ckpt, "Checkpoint (.net1); default zero-initialized preset");
  sc->add_option("--student", st->student, "Architecture preset")->capture_default_str();
  sc->add_option("--pooling", st->pooling, "Pooling mode")->capture_default_str();
  sc->add_option("--embedding-dim", st->embedding_dim,
                 "Override the preset embedding dimension (0 keeps it)");
  sc->add_option("--runs", st->runs, "Timed forward passes (median reported, minimum 5)")
      ->capture_default_str();
  sc->add_option("--seconds", st->seconds, "Simulated input duration, seconds")
      ->capture_default_str();
  sc->callback([st] {
    const NetConfig net_cfg = net_config_from_flags(st->student, st->pooling, st->embedding_dim);
    const StudentNet net =
        st->ckpt.empty() ? StudentNet(net_cfg) : StudentNet::load(st->ckpt, net_cfg);
    const BenchResult r = measure_params_and_rtf(net, st->runs, 16000, st->seconds);
    std::printf("params %zu\n", r.param_count);
    std::printf("seconds_per_forward %.6f\n", r.seconds_per_forward);
    std::printf("rtf %.6f\n", r.rtf);
  });
}

}  // namespace

int run_cli(int argc, const char* const* argv) {
  CLI::App app{"Light-weight speaker-embedding distillation toolkit"};
  app.name("distillkit");
  app.require_subcommand(1);
  app.set_version_flag("--version", "distillkit 0.1.0");
  setup_synth(app);
  setup_features(app);
  setup_import(app);
  setup_distill(app);
  setup_finetune(app);
  setup_evaluate(app);
  setup_bench(app);
  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 1;
  } catch (const UsageError& e) {
    std::cerr << "distillkit: " << e.what() << "\n";
    return 1;
  } catch (const Error& e) {
    std::cerr << "distillkit: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "distillkit: " << e.what() << "\n";
    return 2;
  }
  return 0;
}

}  // namespace distillkit
