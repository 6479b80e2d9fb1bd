// distillkit/test_trainer.cpp

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

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <json.hpp>

#include <cmath>
#include <cstddef>
#include <set>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "distillkit/error.hpp"
#include "distillkit/io_util.hpp"
#include "distillkit/rng.hpp"
#include "distillkit/synth.hpp"
#include "distillkit/trainer.hpp"
#include "test_util.hpp"

using namespace distillkit;
using testutil::TempDir;

namespace {

/// Corpus and net sized so a full training run takes well under a second.
struct TrainFixture {
  SynthCorpus corpus;
  NetConfig net_cfg;

  TrainFixture() {
    SynthSpec spec;
    spec.n_speakers = 6;
    spec.utts_per_speaker = 8;
    spec.teacher_dim = 16;
    spec.feature_dim = 12;
    spec.utt_min_s = 0.3;
    spec.utt_max_s = 0.5;
    spec.held_out_per_speaker = 2;
    spec.trials_per_class = 20;
    spec.seed = 9;
    corpus = generate_corpus(spec);

    net_cfg.input_dim = 12;
    net_cfg.embedding_dim = 16;
    net_cfg.convs = {{3, 1, 12, 16, true}, {1, 1, 16, 16, false}};
  }

  StudentNet make_net(std::uint64_t seed = 11) const {
    Rng rng = Rng::derive(seed, {rng_stream::kNetInit});
    return StudentNet(net_cfg, rng);
  }

  TrainConfig make_cfg(const std::string& out_dir) const {
    TrainConfig cfg;
    cfg.loss = LossKind::kMse;
    cfg.batch_size = 8;
    cfg.epochs = 2;
    cfg.lr_start = 0.02;
    cfg.lr_end = 0.01;
    cfg.seed = 5;
    cfg.augment.crop_min_s = 0.2;
    cfg.augment.crop_max_s = 0.3;
    cfg.out_dir = out_dir;
    return cfg;
  }

  std::vector<std::pair<std::string, std::string>> train_labels() const {
    std::vector<std::pair<std::string, std::string>> labels;
    for (const std::string& id : corpus.train_ids) labels.emplace_back(id, id.substr(0, 6));
    return labels;
  }
};

}  // namespace

TEST_CASE("loss kind names round-trip") {
  for (const char* name : {"mse", "cos", "contrastive", "aam"}) {
    CHECK(to_string(loss_kind_from_string(name)) == name);
  }
  try {
    (void)loss_kind_from_string("hinge");
    FAIL("expected UsageError");
  } catch (const UsageError& e) {
    const std::string msg = e.what();
    CHECK(msg.find("hinge") != std::string::npos);
    CHECK(msg.find("mse, cos, contrastive, aam") != std::string::npos);
  }
}

TEST_CASE("config validation rejects out-of-range settings") {
  TrainConfig good;
  good.validate();

  auto broken = [&](auto&& mutate) {
    TrainConfig cfg;
    mutate(cfg);
    CHECK_THROWS_AS(cfg.validate(), UsageError);
  };
  broken([](TrainConfig& c) { c.epochs = 0; });
  broken([](TrainConfig& c) { c.batch_size = 0; });
  broken([](TrainConfig& c) { c.momentum = 1.0; });
  broken([](TrainConfig& c) { c.momentum = -0.1; });
  broken([](TrainConfig& c) { c.epoch_subset_fraction = 0.0; });
  broken([](TrainConfig& c) { c.epoch_subset_fraction = 1.5; });
  broken([](TrainConfig& c) { c.n_workers = 0; });
  broken([](TrainConfig& c) { c.lr_end = 0.0; });          // half-zero
  broken([](TrainConfig& c) { c.lr_end = c.lr_start * 2; });  // increasing
  broken([](TrainConfig& c) { c.lr_start = -0.1; c.lr_end = -0.1; });
  broken([](TrainConfig& c) { c.augment.crop_min_s = -1.0; });

  TrainConfig no_op;  // both-zero rates are the sanctioned no-op run
  no_op.lr_start = 0.0;
  no_op.lr_end = 0.0;
  no_op.validate();
}

TEST_CASE("learning rate schedule hits its endpoints exactly") {
  TrainConfig cfg;
  cfg.epochs = 15;
  cfg.lr_start = 0.1;
  cfg.lr_end = 0.01;
  CHECK(lr_schedule(cfg, 0) == 0.1);
  CHECK(lr_schedule(cfg, 14) == 0.01);
  // Geometric in between: the midpoint is the geometric mean of the ends.
  CHECK(std::abs(lr_schedule(cfg, 7) - 0.1 * std::sqrt(0.1)) < 1e-15);
  for (int e = 1; e < 15; ++e) CHECK(lr_schedule(cfg, e) < lr_schedule(cfg, e - 1));
  CHECK_THROWS_AS(lr_schedule(cfg, -1), UsageError);
  CHECK_THROWS_AS(lr_schedule(cfg, 15), UsageError);

  // Awkward rate pairs keep exact endpoints too.
  cfg.lr_start = 0.3;
  cfg.lr_end = 0.007;
  cfg.epochs = 7;
  CHECK(lr_schedule(cfg, 0) == 0.3);
  CHECK(lr_schedule(cfg, 6) == 0.007);

  TrainConfig one;
  one.epochs = 1;
  CHECK(lr_schedule(one, 0) == one.lr_start);

  TrainConfig flat;
  flat.epochs = 5;
  flat.lr_start = 0.05;
  flat.lr_end = 0.05;
  for (int e = 0; e < 5; ++e) CHECK(lr_schedule(flat, e) == 0.05);

  TrainConfig zero;
  zero.epochs = 3;
  zero.lr_start = 0.0;
  zero.lr_end = 0.0;
  for (int e = 0; e < 3; ++e) CHECK(lr_schedule(zero, e) == 0.0);
}

TEST_CASE("zero learning rate leaves the parameters untouched") {
  TrainFixture fx;
  TempDir tmp;
  StudentNet net = fx.make_net();
  const std::vector<float> before(net.params().begin(), net.params().end());

  TrainConfig cfg = fx.make_cfg(tmp.file("ckpt"));
  cfg.lr_start = 0.0;
  cfg.lr_end = 0.0;
  const TrainReport report =
      train_distill(fx.corpus.features, fx.corpus.train_ids, fx.corpus.teacher, net, cfg);

  const std::vector<float> after(net.params().begin(), net.params().end());
  CHECK(before == after);  // bitwise
  REQUIRE(report.epochs.size() == 2);
  CHECK(report.epochs[0].lr == 0.0);
  CHECK(report.epochs[0].processed == fx.corpus.train_ids.size());
  CHECK(report.epochs[0].skipped == 0);

  // The checkpoint written under a zero rate is the initial net.
  const StudentNet loaded = StudentNet::load(tmp.file("ckpt") + "/last.net1", fx.net_cfg);
  const std::vector<float> loaded_params(loaded.params().begin(), loaded.params().end());
  CHECK(loaded_params == before);
}

TEST_CASE("training runs are byte-identical across reruns and worker counts") {
  TrainFixture fx;
  TempDir tmp;

  auto run = [&](const std::string& dir, int workers) {
    StudentNet net = fx.make_net();
    TrainConfig cfg = fx.make_cfg(tmp.file(dir));
    cfg.loss = LossKind::kContrastive;
    cfg.n_workers = workers;
    return train_distill(fx.corpus.features, fx.corpus.train_ids, fx.corpus.teacher, net, cfg);
  };
  run("a", 1);
  run("b", 1);
  run("c", 3);

  for (const char* name : {"last.net1", "best.net1", "report.jsonl"}) {
    const auto a = testutil::read_binary(tmp.file("a") + "/" + name);
    const auto b = testutil::read_binary(tmp.file("b") + "/" + name);
    const auto c = testutil::read_binary(tmp.file("c") + "/" + name);
    CHECK(a == b);
    CHECK(a == c);
  }

  // A different seed must actually change the outcome.
  StudentNet net = fx.make_net();
  TrainConfig cfg = fx.make_cfg(tmp.file("d"));
  cfg.loss = LossKind::kContrastive;
  cfg.seed = 6;
  train_distill(fx.corpus.features, fx.corpus.train_ids, fx.corpus.teacher, net, cfg);
  CHECK(testutil::read_binary(tmp.file("a") + "/last.net1") !=
        testutil::read_binary(tmp.file("d") + "/last.net1"));
}

TEST_CASE("utterances without a teacher embedding are skipped and counted") {
  TrainFixture fx;
  TempDir tmp;

  TeacherStore partial(16);
  std::set<std::string> dropped(fx.corpus.train_ids.begin(), fx.corpus.train_ids.begin() + 5);
  for (const std::string& id : fx.corpus.train_ids) {
    if (!dropped.count(id)) partial.add(id, *fx.corpus.teacher.find(id));
  }

  StudentNet net = fx.make_net();
  const TrainConfig cfg = fx.make_cfg(tmp.file("ckpt"));
  const TrainReport report =
      train_distill(fx.corpus.features, fx.corpus.train_ids, partial, net, cfg);
  for (const EpochRecord& rec : report.epochs) {
    CHECK(rec.skipped == 5);
    CHECK(rec.processed == fx.corpus.train_ids.size() - 5);
  }
}

TEST_CASE("training aborts when no sampled utterance has supervision") {
  TrainFixture fx;
  TempDir tmp;
  const TeacherStore empty(16);
  StudentNet net = fx.make_net();
  const TrainConfig cfg = fx.make_cfg(tmp.file("ckpt"));
  try {
    train_distill(fx.corpus.features, fx.corpus.train_ids, empty, net, cfg);
    FAIL("expected DataError");
  } catch (const DataError& e) {
    CHECK(std::string(e.what()).find("lack teacher embeddings") != std::string::npos);
  }
}

TEST_CASE("training rejects ids absent from the feature archive") {
  TrainFixture fx;
  TempDir tmp;
  std::vector<std::string> ids = fx.corpus.train_ids;
  ids.push_back("ghost");
  StudentNet net = fx.make_net();
  const TrainConfig cfg = fx.make_cfg(tmp.file("ckpt"));
  try {
    train_distill(fx.corpus.features, ids, fx.corpus.teacher, net, cfg);
    FAIL("expected DataError");
  } catch (const DataError& e) {
    CHECK(std::string(e.what()).find("ghost") != std::string::npos);
  }
}

TEST_CASE("training rejects an empty id list and mismatched teacher width") {
  TrainFixture fx;
  TempDir tmp;
  StudentNet net = fx.make_net();
  const TrainConfig cfg = fx.make_cfg(tmp.file("ckpt"));
  const std::vector<std::string> none;
  CHECK_THROWS_AS(train_distill(fx.corpus.features, none, fx.corpus.teacher, net, cfg),
                  DataError);

  TeacherStore wrong(8);
  wrong.add(fx.corpus.train_ids[0], EmbeddingVector(8, 0.5f));
  CHECK_THROWS_AS(
      train_distill(fx.corpus.features, fx.corpus.train_ids, wrong, net, cfg), DataError);
}

TEST_CASE("loss kinds are fenced to their training mode") {
  TrainFixture fx;
  TempDir tmp;
  StudentNet net = fx.make_net();
  TrainConfig cfg = fx.make_cfg(tmp.file("ckpt"));
  cfg.loss = LossKind::kAam;
  CHECK_THROWS_AS(
      train_distill(fx.corpus.features, fx.corpus.train_ids, fx.corpus.teacher, net, cfg),
      UsageError);
  cfg.loss = LossKind::kCos;
  CHECK_THROWS_AS(finetune_supervised(fx.corpus.features, fx.train_labels(), net, cfg),
                  UsageError);
}

TEST_CASE("distillation loss falls on the synthetic corpus") {
  TrainFixture fx;
  TempDir tmp;
  StudentNet net = fx.make_net();
  TrainConfig cfg = fx.make_cfg(tmp.file("ckpt"));
  cfg.epochs = 5;
  const TrainReport report =
      train_distill(fx.corpus.features, fx.corpus.train_ids, fx.corpus.teacher, net, cfg);
  REQUIRE(report.epochs.size() == 5);
  CHECK(report.epochs.back().mean_loss < report.epochs.front().mean_loss);
  CHECK(report.best_epoch >= 0);
  CHECK(report.best_loss <= report.epochs.front().mean_loss);
}

TEST_CASE("supervised fine-tuning runs and reports the class-weight loss") {
  TrainFixture fx;
  TempDir tmp;
  StudentNet net = fx.make_net();
  TrainConfig cfg = fx.make_cfg(tmp.file("ckpt"));
  cfg.loss = LossKind::kAam;
  cfg.epochs = 3;
  const TrainReport report = finetune_supervised(fx.corpus.features, fx.train_labels(), net, cfg);
  REQUIRE(report.epochs.size() == 3);
  CHECK(report.loss_name == "aam");
  CHECK(report.epochs.back().mean_loss < report.epochs.front().mean_loss);

  const std::string jsonl = read_text_file(tmp.file("ckpt") + "/report.jsonl");
  CHECK(jsonl.find("aam_scale") != std::string::npos);
  CHECK(jsonl.find("aam_margin_warmup_epochs") != std::string::npos);

  CHECK_THROWS_AS(
      finetune_supervised(fx.corpus.features,
                          std::vector<std::pair<std::string, std::string>>{}, net, cfg),
      DataError);
}

TEST_CASE("the report is json-lines with a header, epochs, and a summary") {
  TrainFixture fx;
  TempDir tmp;
  StudentNet net = fx.make_net();
  TrainConfig cfg = fx.make_cfg(tmp.file("ckpt"));
  cfg.loss = LossKind::kContrastive;
  const TrainReport report =
      train_distill(fx.corpus.features, fx.corpus.train_ids, fx.corpus.teacher, net, cfg);

  const std::string jsonl = read_text_file(tmp.file("ckpt") + "/report.jsonl");
  std::istringstream lines(jsonl);
  std::string line;
  std::vector<nlohmann::json> records;
  while (std::getline(lines, line)) {
    if (!line.empty()) records.push_back(nlohmann::json::parse(line));
  }
  REQUIRE(records.size() == 2 + cfg.epochs);

  const nlohmann::json& header = records.front();
  CHECK(header.at("type") == "header");
  CHECK(header.at("loss") == "contrastive");
  CHECK(header.at("grad_scale") == "mean");
  CHECK(header.at("batch_size") == cfg.batch_size);
  CHECK(header.at("temperature").get<double>() == doctest::Approx(0.1));
  CHECK(header.at("param_count") == report.param_count);

  for (int e = 0; e < cfg.epochs; ++e) {
    const nlohmann::json& rec = records[1 + static_cast<std::size_t>(e)];
    CHECK(rec.at("type") == "epoch");
    CHECK(rec.at("epoch") == e);
    CHECK(rec.at("lr").get<double>() ==
          doctest::Approx(report.epochs[static_cast<std::size_t>(e)].lr));
    CHECK(rec.at("processed") == report.epochs[static_cast<std::size_t>(e)].processed);
    CHECK(rec.contains("mean_loss"));
    CHECK(rec.contains("skipped"));
  }

  const nlohmann::json& final_line = records.back();
  CHECK(final_line.at("type") == "final");
  CHECK(final_line.at("best_epoch") == report.best_epoch);
  // File name only: the serialized report must not depend on the out dir.
  CHECK(final_line.at("last_checkpoint") == "last.net1");
  CHECK(report.last_checkpoint.find("last.net1") != std::string::npos);

  // Timing must never leak into the bytes, or reruns stop being identical.
  CHECK(jsonl.find("wall") == std::string::npos);
  for (const EpochRecord& rec : report.epochs) CHECK(rec.wall_s >= 0.0);
}

TEST_CASE("epoch subsets sample the configured fraction") {
  TrainFixture fx;
  TempDir tmp;
  StudentNet net = fx.make_net();
  TrainConfig cfg = fx.make_cfg(tmp.file("ckpt"));
  cfg.epoch_subset_fraction = 0.5;
  const TrainReport report =
      train_distill(fx.corpus.features, fx.corpus.train_ids, fx.corpus.teacher, net, cfg);
  const auto expected = static_cast<std::uint64_t>(
      std::lround(0.5 * static_cast<double>(fx.corpus.train_ids.size())));
  for (const EpochRecord& rec : report.epochs) CHECK(rec.processed == expected);
}
