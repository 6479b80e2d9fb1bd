// distillkit/synth.cpp

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

#include "distillkit/synth.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <numbers>
#include <sstream>

#include "distillkit/error.hpp"
#include "distillkit/io_util.hpp"
#include "distillkit/rng.hpp"

namespace distillkit {

namespace {

// Per-utterance loudness gain and sinusoidal amplitude modulation. The gain
// varies the feature scale while the teacher embedding stays unit-norm, and
// the modulation gives the std half of statistics pooling something to see.
constexpr double kGainMin = 0.8;
constexpr double kGainMax = 1.2;
constexpr double kModDepthMin = 0.05;
constexpr double kModDepthMax = 0.25;
constexpr double kModCyclesMin = 1.0;
constexpr double kModCyclesMax = 4.0;

std::string speaker_name(int k) {
  char buf[16];
  std::snprintf(buf, sizeof(buf), "spk%03d", k);
  return buf;
}

std::string utt_name(int k, int u) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "spk%03d_utt%04d", k, u);
  return buf;
}

EmbeddingVector unit_gaussian_vector(std::size_t dim, Rng& rng) {
  EmbeddingVector v(dim);
  double norm2 = 0.0;
  for (float& x : v) {
    const double g = rng.gaussian();
    x = static_cast<float>(g);
    norm2 += g * g;
  }
  const double inv = 1.0 / std::sqrt(norm2);
  for (float& x : v) x = static_cast<float>(static_cast<double>(x) * inv);
  return v;
}

}  // namespace

void SynthSpec::validate() const {
  if (n_speakers < 2) throw UsageError("need at least 2 speakers");
  if (utts_per_speaker < 2) throw UsageError("need at least 2 utterances per speaker");
  if (teacher_dim < 1 || feature_dim < 1) throw UsageError("dimensions must be positive");
  if (within_speaker_noise < 0 || feature_noise < 0)
    throw UsageError("noise levels must be >= 0");
  if (!(utt_min_s > 0) || !(utt_min_s <= utt_max_s))
    throw UsageError("utterance length range must satisfy 0 < min <= max");
  if (!(frame_shift_s > 0)) throw UsageError("frame shift must be positive");
  if (held_out_per_speaker < 1 || held_out_per_speaker >= utts_per_speaker)
    throw UsageError("held-out utterances per speaker must lie in [1, U)");
  if (trials_per_class < 1) throw UsageError("need at least one trial per class");
}

SynthCorpus generate_corpus(const SynthSpec& spec) {
  spec.validate();
  SynthCorpus corpus;
  corpus.teacher = TeacherStore(static_cast<std::size_t>(spec.teacher_dim));

  const int t_min = std::max(
      1, static_cast<int>(std::lround(spec.utt_min_s / spec.frame_shift_s)));
  const int t_max = std::max(
      t_min, static_cast<int>(std::lround(spec.utt_max_s / spec.frame_shift_s)));

  for (int k = 0; k < spec.n_speakers; ++k) {
    Rng spk_rng = Rng::derive(spec.seed, {rng_stream::kSynthSpeaker, static_cast<std::uint64_t>(k)});
    const EmbeddingVector centroid =
        unit_gaussian_vector(static_cast<std::size_t>(spec.teacher_dim), spk_rng);
    std::vector<double> tmpl(static_cast<std::size_t>(spec.feature_dim));
    for (double& v : tmpl) v = spk_rng.gaussian();

    for (int u = 0; u < spec.utts_per_speaker; ++u) {
      Rng rng = Rng::derive(spec.seed, {rng_stream::kSynthUtt, static_cast<std::uint64_t>(k),
                                        static_cast<std::uint64_t>(u)});
      // Draw order is part of the format: teacher perturbation, frame count,
      // gain, modulation, then frame noise.
      EmbeddingVector emb(centroid.size());
      double norm2 = 0.0;
      for (std::size_t i = 0; i < emb.size(); ++i) {
        const double v =
            static_cast<double>(centroid[i]) + spec.within_speaker_noise * rng.gaussian();
        emb[i] = static_cast<float>(v);
        norm2 += v * v;
      }
      const double inv = 1.0 / std::sqrt(norm2);
      for (float& v : emb) v = static_cast<float>(static_cast<double>(v) * inv);

      const int n_frames = static_cast<int>(rng.uniform_int(t_min, t_max));
      const double gain = rng.uniform(kGainMin, kGainMax);
      const double depth = rng.uniform(kModDepthMin, kModDepthMax);
      const double cycles = rng.uniform(kModCyclesMin, kModCyclesMax);
      const double phase = rng.uniform(0.0, 2.0 * std::numbers::pi);

      FeatureMatrix feats;
      feats.frame_shift_s = static_cast<float>(spec.frame_shift_s);
      feats.frames =
          Matf(static_cast<std::size_t>(n_frames), static_cast<std::size_t>(spec.feature_dim));
      for (int t = 0; t < n_frames; ++t) {
        const double a =
            gain * (1.0 + depth * std::sin(2.0 * std::numbers::pi * cycles * t / n_frames + phase));
        auto row = feats.frames.row(static_cast<std::size_t>(t));
        for (int c = 0; c < spec.feature_dim; ++c)
          row[static_cast<std::size_t>(c)] = static_cast<float>(
              a * tmpl[static_cast<std::size_t>(c)] + spec.feature_noise * rng.gaussian());
      }

      const std::string id = utt_name(k, u);
      corpus.features.add(id, std::move(feats));
      corpus.teacher.add(id, std::move(emb));
      corpus.speaker_of.push_back(speaker_name(k));
      if (u >= spec.utts_per_speaker - spec.held_out_per_speaker)
        corpus.heldout_ids.push_back(id);
      else
        corpus.train_ids.push_back(id);
    }
  }

  // Balanced trial list over the held-out split: enumerate every candidate
  // pair per class, shuffle, truncate. Deterministic and duplicate-free.
  const int h = spec.held_out_per_speaker;
  std::vector<TrialPair> targets, nontargets;
  auto heldout_id = [&](int k, int j) {
    return utt_name(k, spec.utts_per_speaker - h + j);
  };
  for (int k = 0; k < spec.n_speakers; ++k)
    for (int a = 0; a < h; ++a)
      for (int b = a + 1; b < h; ++b)
        targets.push_back({true, heldout_id(k, a), heldout_id(k, b)});
  for (int k1 = 0; k1 < spec.n_speakers; ++k1)
    for (int k2 = k1 + 1; k2 < spec.n_speakers; ++k2)
      for (int a = 0; a < h; ++a)
        for (int b = 0; b < h; ++b)
          nontargets.push_back({false, heldout_id(k1, a), heldout_id(k2, b)});

  Rng trial_rng = Rng::derive(spec.seed, {rng_stream::kSynthTrials});
  trial_rng.shuffle(targets);
  trial_rng.shuffle(nontargets);
  const std::size_t per_class =
      std::min({static_cast<std::size_t>(spec.trials_per_class), targets.size(),
                nontargets.size()});
  corpus.trials.reserve(2 * per_class);
  for (std::size_t i = 0; i < per_class; ++i) {
    corpus.trials.push_back(std::move(targets[i]));
    corpus.trials.push_back(std::move(nontargets[i]));
  }
  return corpus;
}

void write_corpus(const SynthCorpus& corpus, const std::string& out_dir) {
  std::filesystem::create_directories(out_dir);
  const std::filesystem::path dir(out_dir);
  write_feature_archive((dir / "feats.ftr1").string(), corpus.features);
  write_teacher_store((dir / "teacher.emb1").string(), corpus.teacher);

  std::string labels;
  for (std::size_t i = 0; i < corpus.features.size(); ++i) {
    labels += corpus.features.ids()[i];
    labels += '\t';
    labels += corpus.speaker_of[i];
    labels += '\n';
  }
  write_text_file(dir / "labels.tsv", labels);

  std::string trials;
  for (const TrialPair& t : corpus.trials) {
    trials += t.target ? '1' : '0';
    trials += ' ';
    trials += t.enroll_id;
    trials += ' ';
    trials += t.test_id;
    trials += '\n';
  }
  write_text_file(dir / "trials.txt", trials);
}

std::vector<std::pair<std::string, std::string>> read_labels(const std::string& path) {
  const std::string text = read_text_file(path);
  std::vector<std::pair<std::string, std::string>> labels;
  std::istringstream lines(text);
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(lines, line)) {
    ++line_no;
    if (line.empty()) continue;
    const std::size_t tab = line.find('\t');
    if (tab == std::string::npos || tab == 0 || tab + 1 >= line.size())
      throw DataError(path + " line " + std::to_string(line_no) +
                      ": expected '<utterance-id>\\t<speaker>'");
    labels.emplace_back(line.substr(0, tab), line.substr(tab + 1));
  }
  return labels;
}

}  // namespace distillkit
