// distillkit/eval.hpp

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

#ifndef DISTILLKIT_EVAL_HPP_
#define DISTILLKIT_EVAL_HPP_

#include <span>
#include <string>
#include <vector>

#include "distillkit/feature_archive.hpp"
#include "distillkit/student_net.hpp"
#include "distillkit/teacher_store.hpp"
#include "distillkit/thread_pool.hpp"
#include "distillkit/types.hpp"

namespace distillkit {

/// v / |v|; throws DataError when |v| <= 1e-12.
EmbeddingVector length_normalize(const EmbeddingVector& v);

/// Inner product over norms; symmetric in its arguments. Throws DataError
/// on (near-)zero input.
double cosine_score(std::span<const float> a, std::span<const float> b);

struct EerResult {
  double eer = 0.0;
  double threshold = 0.0;
};

/// Equal error rate of the scored trials. Every distinct score is a
/// candidate threshold t with FRR(t) = fraction of targets scoring < t and
/// FAR(t) = fraction of nontargets scoring >= t; the EER is read off the
/// crossing of the two piecewise-constant curves by linear interpolation
/// between the bracketing candidates. Throws DataError unless both classes
/// are represented.
EerResult compute_eer(std::span<const ScoredTrial> trials);

/// Text trial list, one trial per line: "<0|1> <enroll-id> <test-id>" with 1
/// marking a target (same-speaker) trial. Blank lines are ignored.
/// DataError (with the line number) on malformed lines.
std::vector<TrialPair> read_trials(const std::string& path);
void write_trials(const std::string& path, std::span<const TrialPair> trials);

/// Tab-separated score lines "<enroll-id>\t<test-id>\t<score>\t<0|1>", score
/// printed with six decimals so repeated runs are byte-identical.
void write_scores(const std::string& path, std::span<const ScoredTrial> trials);

struct TrialRunResult {
  EerResult eer;
  std::vector<ScoredTrial> scores;  // one per trial, in trial order
  std::size_t unique_ids = 0;
};

/// Full verification pass for a student checkpoint: one embedding per unique
/// trial id (full-length features, no crop or augmentation at test time),
/// length normalization, cosine scoring, EER. Missing ids raise DataError
/// naming the offenders. `pool` parallelizes extraction per unique id; the
/// result does not depend on worker count.
TrialRunResult run_trials(const StudentNet& net, const FeatureArchive& archive,
                          std::span<const TrialPair> trials, ThreadPool* pool = nullptr);

/// Same scoring path but over stored embeddings (e.g. scoring the teacher
/// itself to establish the quality ceiling the student distills toward).
TrialRunResult run_trials_on_store(const TeacherStore& store,
                                   std::span<const TrialPair> trials);

}  // namespace distillkit

#endif  // DISTILLKIT_EVAL_HPP_
