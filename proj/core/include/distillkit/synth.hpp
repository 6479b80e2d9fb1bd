// distillkit/synth.hpp

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

#ifndef DISTILLKIT_SYNTH_HPP_
#define DISTILLKIT_SYNTH_HPP_

#include <cstdint>
#include <string>
#include <vector>

#include "distillkit/feature_archive.hpp"
#include "distillkit/teacher_store.hpp"
#include "distillkit/types.hpp"

namespace distillkit {

/// Synthetic corpus with known ground truth: each speaker is a unit teacher
/// centroid plus a spectral template, each utterance a noisy draw around
/// both. Separability is controlled entirely by the two noise knobs, so
/// end-to-end behavior of the training pipeline can be verified without any
/// real audio.
struct SynthSpec {
  int n_speakers = 40;                 // K
  int utts_per_speaker = 50;           // U
  int teacher_dim = 256;               // D
  double within_speaker_noise = 0.05;  // sigma_t, on the teacher sphere
  int feature_dim = 80;
  double utt_min_s = 2.0;
  double utt_max_s = 4.0;
  double feature_noise = 0.5;  // sigma_f, per feature cell
  double frame_shift_s = 0.01;
  int held_out_per_speaker = 10;  // utterances reserved for the trial list
  int trials_per_class = 1000;    // balanced target/nontarget counts
  std::uint64_t seed = 7;

  void validate() const;  // UsageError on violated bounds
};

struct SynthCorpus {
  FeatureArchive features;  // all utterances, train and held-out
  TeacherStore teacher;
  std::vector<std::string> speaker_of;  // aligned with features ids
  std::vector<std::string> train_ids;
  std::vector<std::string> heldout_ids;
  std::vector<TrialPair> trials;  // held-out ids only, balanced
};

/// Deterministic in `spec` alone: per-speaker and per-utterance randomness
/// comes from seed-derived streams, so the same spec reproduces the corpus
/// byte for byte. Speaker k draws a unit centroid c_k and an 80-dim spectral
/// template; utterance embeddings are normalize(c_k + sigma_t * gaussian)
/// and feature rows are gain-and-amplitude-modulated copies of the template
/// plus sigma_f gaussian noise, so time pooling recovers the speaker.
SynthCorpus generate_corpus(const SynthSpec& spec);

/// Writes feats.ftr1, teacher.emb1, labels.tsv (utterance-id TAB speaker),
/// and trials.txt into `out_dir`, creating it if needed.
void write_corpus(const SynthCorpus& corpus, const std::string& out_dir);

/// Reads a labels.tsv produced above; returns (utterance id, speaker) pairs
/// in file order. DataError (with line number) on malformed lines.
std::vector<std::pair<std::string, std::string>> read_labels(const std::string& path);

}  // namespace distillkit

#endif  // DISTILLKIT_SYNTH_HPP_
