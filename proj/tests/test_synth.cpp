// distillkit/test_synth.cpp

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

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <map>
#include <set>
#include <string>
#include <vector>

#include "distillkit/error.hpp"
#include "distillkit/eval.hpp"
#include "distillkit/io_util.hpp"
#include "distillkit/synth.hpp"
#include "test_util.hpp"

using namespace distillkit;
using testutil::TempDir;

namespace {

/// Small corpus that keeps every test below well under a second.
SynthSpec small_spec() {
  SynthSpec spec;
  spec.n_speakers = 6;
  spec.utts_per_speaker = 8;
  spec.teacher_dim = 32;
  spec.feature_dim = 12;
  spec.utt_min_s = 0.3;
  spec.utt_max_s = 0.5;
  spec.held_out_per_speaker = 3;
  spec.trials_per_class = 60;
  spec.seed = 7;
  return spec;
}

}  // namespace

TEST_CASE("spec validation rejects out-of-range settings") {
  const SynthSpec good = small_spec();
  good.validate();

  auto broken = [&](auto&& mutate) {
    SynthSpec s = good;
    mutate(s);
    CHECK_THROWS_AS(s.validate(), UsageError);
  };
  broken([](SynthSpec& s) { s.n_speakers = 1; });
  broken([](SynthSpec& s) { s.utts_per_speaker = 1; });
  broken([](SynthSpec& s) { s.teacher_dim = 0; });
  broken([](SynthSpec& s) { s.feature_dim = 0; });
  broken([](SynthSpec& s) { s.within_speaker_noise = -0.1; });
  broken([](SynthSpec& s) { s.feature_noise = -1.0; });
  broken([](SynthSpec& s) { s.utt_min_s = 0.0; });
  broken([](SynthSpec& s) { s.utt_min_s = 0.6; });  // exceeds max
  broken([](SynthSpec& s) { s.frame_shift_s = 0.0; });
  broken([](SynthSpec& s) { s.held_out_per_speaker = 0; });
  broken([](SynthSpec& s) { s.held_out_per_speaker = s.utts_per_speaker; });
  broken([](SynthSpec& s) { s.trials_per_class = 0; });
}

TEST_CASE("corpus has the promised shape") {
  const SynthSpec spec = small_spec();
  const SynthCorpus c = generate_corpus(spec);
  const std::size_t n = static_cast<std::size_t>(spec.n_speakers * spec.utts_per_speaker);

  REQUIRE(c.features.size() == n);
  REQUIRE(c.teacher.size() == n);
  REQUIRE(c.speaker_of.size() == n);
  CHECK(c.teacher.dim() == static_cast<std::size_t>(spec.teacher_dim));
  CHECK(c.features.ids()[0] == "spk000_utt0000");
  CHECK(c.features.ids()[7] == "spk000_utt0007");
  CHECK(c.features.ids()[8] == "spk001_utt0000");
  CHECK(c.speaker_of[0] == "spk000");
  CHECK(c.speaker_of[8] == "spk001");

  // Each id starts with the speaker it is labeled with.
  for (std::size_t i = 0; i < n; ++i) {
    CHECK(c.features.ids()[i].rfind(c.speaker_of[i] + "_", 0) == 0);
  }

  const int kept = spec.utts_per_speaker - spec.held_out_per_speaker;
  CHECK(c.train_ids.size() == static_cast<std::size_t>(spec.n_speakers * kept));
  CHECK(c.heldout_ids.size() ==
        static_cast<std::size_t>(spec.n_speakers * spec.held_out_per_speaker));
  std::set<std::string> train(c.train_ids.begin(), c.train_ids.end());
  for (const std::string& id : c.heldout_ids) CHECK(train.count(id) == 0);
  CHECK(std::find(c.heldout_ids.begin(), c.heldout_ids.end(), "spk000_utt0005") !=
        c.heldout_ids.end());
  CHECK(std::find(c.train_ids.begin(), c.train_ids.end(), "spk000_utt0004") !=
        c.train_ids.end());
}

TEST_CASE("utterance features respect the length range and dimensions") {
  const SynthSpec spec = small_spec();
  const SynthCorpus c = generate_corpus(spec);
  const std::size_t t_min = 30, t_max = 50;  // 0.3 s..0.5 s at 10 ms shift
  std::set<std::size_t> seen_lengths;
  for (std::size_t i = 0; i < c.features.size(); ++i) {
    const FeatureMatrix& f = c.features.features(i);
    CHECK(f.dim() == static_cast<std::size_t>(spec.feature_dim));
    CHECK(f.num_frames() >= t_min);
    CHECK(f.num_frames() <= t_max);
    CHECK(f.frame_shift_s == doctest::Approx(0.01f));
    seen_lengths.insert(f.num_frames());
  }
  // The length is drawn per utterance, not fixed.
  CHECK(seen_lengths.size() > 1);
}

TEST_CASE("teacher embeddings are unit length") {
  const SynthCorpus c = generate_corpus(small_spec());
  for (const std::string& id : c.teacher.ids()) {
    const EmbeddingVector* e = c.teacher.find(id);
    REQUIRE(e != nullptr);
    double norm2 = 0.0;
    for (float v : *e) norm2 += static_cast<double>(v) * v;
    CHECK(std::abs(std::sqrt(norm2) - 1.0) < 1e-5);
  }
}

TEST_CASE("trial list is balanced, interleaved, and held-out only") {
  const SynthSpec spec = small_spec();
  const SynthCorpus c = generate_corpus(spec);

  // Available targets: 6 speakers x C(3,2) = 18 pairs, fewer than the 60
  // requested, so the per-class count saturates at 18.
  REQUIRE(c.trials.size() == 36);
  std::set<std::string> heldout(c.heldout_ids.begin(), c.heldout_ids.end());
  std::set<std::string> seen_pairs;
  std::size_t targets = 0;
  for (std::size_t i = 0; i < c.trials.size(); ++i) {
    const TrialPair& t = c.trials[i];
    CHECK(t.target == (i % 2 == 0));
    CHECK(t.enroll_id != t.test_id);
    CHECK(heldout.count(t.enroll_id) == 1);
    CHECK(heldout.count(t.test_id) == 1);
    const bool same_speaker = t.enroll_id.substr(0, 6) == t.test_id.substr(0, 6);
    CHECK(t.target == same_speaker);
    targets += t.target;
    CHECK(seen_pairs.insert(t.enroll_id + "|" + t.test_id + "|" + (t.target ? "1" : "0")).second);
  }
  CHECK(targets == c.trials.size() / 2);
}

TEST_CASE("generation is deterministic in the spec") {
  const SynthSpec spec = small_spec();
  const SynthCorpus a = generate_corpus(spec);
  const SynthCorpus b = generate_corpus(spec);

  REQUIRE(a.features.size() == b.features.size());
  for (std::size_t i = 0; i < a.features.size(); ++i) {
    const auto& fa = a.features.features(i).frames.storage();
    const auto& fb = b.features.features(i).frames.storage();
    CHECK(fa == fb);  // bitwise
  }
  for (const std::string& id : a.teacher.ids()) {
    CHECK(*a.teacher.find(id) == *b.teacher.find(id));
  }
  REQUIRE(a.trials.size() == b.trials.size());
  for (std::size_t i = 0; i < a.trials.size(); ++i) {
    CHECK(a.trials[i].enroll_id == b.trials[i].enroll_id);
    CHECK(a.trials[i].test_id == b.trials[i].test_id);
  }

  SynthSpec other = spec;
  other.seed = 8;
  const SynthCorpus d = generate_corpus(other);
  CHECK(a.features.features(0).frames.storage() != d.features.features(0).frames.storage());
}

TEST_CASE("written corpus round-trips through the readers") {
  TempDir tmp;
  const SynthSpec spec = small_spec();
  const SynthCorpus c = generate_corpus(spec);
  write_corpus(c, tmp.path());

  const FeatureArchive feats = read_feature_archive(tmp.file("feats.ftr1"));
  REQUIRE(feats.size() == c.features.size());
  CHECK(feats.ids() == c.features.ids());
  CHECK(feats.features(5).frames.storage() == c.features.features(5).frames.storage());

  const TeacherStore teacher = read_teacher_store(tmp.file("teacher.emb1"));
  REQUIRE(teacher.size() == c.teacher.size());
  CHECK(*teacher.find("spk002_utt0003") == *c.teacher.find("spk002_utt0003"));

  const auto labels = read_labels(tmp.file("labels.tsv"));
  REQUIRE(labels.size() == c.features.size());
  CHECK(labels[0].first == "spk000_utt0000");
  CHECK(labels[0].second == "spk000");
  for (std::size_t i = 0; i < labels.size(); ++i) {
    CHECK(labels[i].first == c.features.ids()[i]);
    CHECK(labels[i].second == c.speaker_of[i]);
  }

  const auto trials = read_trials(tmp.file("trials.txt"));
  REQUIRE(trials.size() == c.trials.size());
  for (std::size_t i = 0; i < trials.size(); ++i) {
    CHECK(trials[i].target == c.trials[i].target);
    CHECK(trials[i].enroll_id == c.trials[i].enroll_id);
    CHECK(trials[i].test_id == c.trials[i].test_id);
  }
}

TEST_CASE("two written copies are byte-identical") {
  TempDir tmp;
  const SynthSpec spec = small_spec();
  write_corpus(generate_corpus(spec), tmp.file("a"));
  write_corpus(generate_corpus(spec), tmp.file("b"));
  for (const char* name : {"feats.ftr1", "teacher.emb1", "labels.tsv", "trials.txt"}) {
    const auto a = testutil::read_binary(tmp.file("a") + "/" + name);
    const auto b = testutil::read_binary(tmp.file("b") + "/" + name);
    CHECK(a == b);
  }
}

TEST_CASE("label parsing reports malformed lines") {
  TempDir tmp;
  const std::string path = tmp.file("labels.tsv");

  SUBCASE("missing tab") {
    write_text_file(path, "utt1\tspk1\nutt2 spk2\n");
    try {
      (void)read_labels(path);
      FAIL("expected DataError");
    } catch (const DataError& e) {
      CHECK(std::string(e.what()).find("line 2") != std::string::npos);
    }
  }
  SUBCASE("empty speaker") {
    write_text_file(path, "utt1\t\n");
    CHECK_THROWS_AS((void)read_labels(path), DataError);
  }
  SUBCASE("empty id") {
    write_text_file(path, "\tspk1\n");
    CHECK_THROWS_AS((void)read_labels(path), DataError);
  }
  SUBCASE("blank lines are skipped") {
    write_text_file(path, "utt1\tspk1\n\nutt2\tspk2\n");
    CHECK(read_labels(path).size() == 2);
  }
}

TEST_CASE("teacher with no within-speaker noise verifies perfectly") {
  SynthSpec spec = small_spec();
  spec.within_speaker_noise = 0.0;
  const SynthCorpus c = generate_corpus(spec);
  const TrialRunResult r = run_trials_on_store(c.teacher, c.trials);
  CHECK(r.eer.eer == doctest::Approx(0.0));
}

TEST_CASE("teacher at the default noise level stays under one percent error") {
  SynthSpec spec = small_spec();
  spec.n_speakers = 10;
  spec.utts_per_speaker = 10;
  spec.held_out_per_speaker = 4;
  spec.trials_per_class = 60;
  spec.within_speaker_noise = 0.05;
  const SynthCorpus c = generate_corpus(spec);
  REQUIRE(c.trials.size() == 120);
  const TrialRunResult r = run_trials_on_store(c.teacher, c.trials);
  CHECK(r.eer.eer <= 0.01);
}

TEST_CASE("mean-pooled features separate the speakers") {
  const SynthSpec spec = small_spec();
  const SynthCorpus c = generate_corpus(spec);

  // Nearest-centroid speaker id from time-averaged features: train utterances
  // build the centroids, held-out utterances are classified.
  auto pooled = [&](const std::string& id) {
    const FeatureMatrix* f = c.features.find(id);
    REQUIRE(f != nullptr);
    std::vector<double> m(f->dim(), 0.0);
    for (std::size_t t = 0; t < f->num_frames(); ++t) {
      auto row = f->frames.row(t);
      for (std::size_t d = 0; d < m.size(); ++d) m[d] += row[d];
    }
    for (double& v : m) v /= static_cast<double>(f->num_frames());
    return m;
  };
  auto cosine = [](const std::vector<double>& a, const std::vector<double>& b) {
    double dot = 0, na = 0, nb = 0;
    for (std::size_t i = 0; i < a.size(); ++i) {
      dot += a[i] * b[i];
      na += a[i] * a[i];
      nb += b[i] * b[i];
    }
    return dot / std::sqrt(na * nb);
  };

  std::map<std::string, std::vector<double>> centroid;
  std::map<std::string, int> count;
  for (const std::string& id : c.train_ids) {
    const std::string spk = id.substr(0, 6);
    const std::vector<double> m = pooled(id);
    auto& acc = centroid[spk];
    if (acc.empty()) acc.assign(m.size(), 0.0);
    for (std::size_t d = 0; d < m.size(); ++d) acc[d] += m[d];
    ++count[spk];
  }
  for (auto& [spk, acc] : centroid)
    for (double& v : acc) v /= count[spk];

  std::size_t correct = 0;
  for (const std::string& id : c.heldout_ids) {
    const std::vector<double> m = pooled(id);
    std::string best;
    double best_cos = -2.0;
    for (const auto& [spk, acc] : centroid) {
      const double cs = cosine(m, acc);
      if (cs > best_cos) {
        best_cos = cs;
        best = spk;
      }
    }
    correct += (best == id.substr(0, 6));
  }
  CHECK(static_cast<double>(correct) >= 0.9 * static_cast<double>(c.heldout_ids.size()));
}

TEST_CASE("trial count saturates when a class runs out of pairs") {
  SynthSpec spec = small_spec();
  spec.trials_per_class = 5;  // fewer than available in either class
  const SynthCorpus c = generate_corpus(spec);
  CHECK(c.trials.size() == 10);
}
