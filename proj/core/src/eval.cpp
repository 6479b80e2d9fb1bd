// distillkit/eval.cpp

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

#include "distillkit/eval.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <sstream>
#include <unordered_map>

#include "distillkit/error.hpp"
#include "distillkit/io_util.hpp"

namespace distillkit {

namespace {

double dot(std::span<const float> a, std::span<const float> b) {
  double acc = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i)
    acc += static_cast<double>(a[i]) * static_cast<double>(b[i]);
  return acc;
}

/// Unique ids in first-appearance order, so extraction order (and any error
/// message) is stable across runs.
std::vector<std::string> unique_trial_ids(std::span<const TrialPair> trials) {
  std::vector<std::string> ids;
  std::unordered_map<std::string, bool> seen;
  for (const TrialPair& t : trials) {
    if (seen.emplace(t.enroll_id, true).second) ids.push_back(t.enroll_id);
    if (seen.emplace(t.test_id, true).second) ids.push_back(t.test_id);
  }
  return ids;
}

TrialRunResult score_with_table(const std::unordered_map<std::string, EmbeddingVector>& table,
                                std::span<const TrialPair> trials) {
  TrialRunResult result;
  result.unique_ids = table.size();
  result.scores.reserve(trials.size());
  for (const TrialPair& t : trials) {
    const EmbeddingVector& a = table.at(t.enroll_id);
    const EmbeddingVector& b = table.at(t.test_id);
    // Rows are unit-norm already, so the cosine is a plain dot product.
    result.scores.push_back({t, dot(a, b)});
  }
  result.eer = compute_eer(result.scores);
  return result;
}

void check_ids_present(const std::vector<std::string>& ids,
                       const std::vector<std::string>& missing, const std::string& container) {
  if (missing.empty()) return;
  std::ostringstream os;
  os << missing.size() << " of " << ids.size() << " trial ids missing from " << container << ":";
  const std::size_t shown = std::min<std::size_t>(missing.size(), 10);
  for (std::size_t i = 0; i < shown; ++i) os << " " << missing[i];
  if (missing.size() > shown) os << " (and " << missing.size() - shown << " more)";
  throw DataError(os.str());
}

}  // namespace

EmbeddingVector length_normalize(const EmbeddingVector& v) {
  const double n = std::sqrt(dot(v, v));
  if (n <= 1e-12) throw DataError("cannot length-normalize a zero embedding");
  EmbeddingVector out(v.size());
  for (std::size_t i = 0; i < v.size(); ++i)
    out[i] = static_cast<float>(static_cast<double>(v[i]) / n);
  return out;
}

double cosine_score(std::span<const float> a, std::span<const float> b) {
  if (a.size() != b.size())
    throw DataError("cosine of embeddings with different dimensions " +
                    std::to_string(a.size()) + " and " + std::to_string(b.size()));
  const double na = std::sqrt(dot(a, a));
  const double nb = std::sqrt(dot(b, b));
  if (na <= 1e-12 || nb <= 1e-12) throw DataError("cosine of a zero embedding is undefined");
  return dot(a, b) / (na * nb);
}

EerResult compute_eer(std::span<const ScoredTrial> trials) {
  std::vector<double> targets, nontargets;
  for (const ScoredTrial& t : trials)
    (t.trial.target ? targets : nontargets).push_back(t.score);
  if (targets.empty() || nontargets.empty())
    throw DataError("EER needs at least one target and one nontarget trial");
  std::sort(targets.begin(), targets.end());
  std::sort(nontargets.begin(), nontargets.end());

  std::vector<double> thresholds;
  thresholds.reserve(targets.size() + nontargets.size());
  thresholds.insert(thresholds.end(), targets.begin(), targets.end());
  thresholds.insert(thresholds.end(), nontargets.begin(), nontargets.end());
  std::sort(thresholds.begin(), thresholds.end());
  thresholds.erase(std::unique(thresholds.begin(), thresholds.end()), thresholds.end());

  const double n_t = static_cast<double>(targets.size());
  const double n_n = static_cast<double>(nontargets.size());
  auto frr_at = [&](double t) {
    return static_cast<double>(std::lower_bound(targets.begin(), targets.end(), t) -
                               targets.begin()) /
           n_t;  // targets scoring < t
  };
  auto far_at = [&](double t) {
    return static_cast<double>(nontargets.end() -
                               std::lower_bound(nontargets.begin(), nontargets.end(), t)) /
           n_n;  // nontargets scoring >= t
  };

  // FAR - FRR starts at +1 at the lowest score and decreases; find the first
  // candidate where it turns negative and interpolate inside the bracket. A
  // virtual end point (everything rejected: FRR 1, FAR 0) closes the sweep
  // when the sign never flips among real candidates.
  double prev_t = thresholds.front();
  double prev_frr = frr_at(prev_t);
  double prev_far = far_at(prev_t);
  for (std::size_t k = 1; k <= thresholds.size(); ++k) {
    double t, frr, far;
    if (k < thresholds.size()) {
      t = thresholds[k];
      frr = frr_at(t);
      far = far_at(t);
    } else {
      t = thresholds.back();
      frr = 1.0;
      far = 0.0;
    }
    if (far - frr < 0.0) {
      const double denom = (frr - prev_frr) - (far - prev_far);
      const double lambda = denom == 0.0 ? 0.0 : (prev_far - prev_frr) / denom;
      EerResult r;
      r.eer = prev_frr + lambda * (frr - prev_frr);
      r.threshold = prev_t + lambda * (t - prev_t);
      return r;
    }
    prev_t = t;
    prev_frr = frr;
    prev_far = far;
  }
  // FAR - FRR never went negative even at the virtual end: both rates met at
  // the end point itself.
  return {prev_frr, prev_t};
}

std::vector<TrialPair> read_trials(const std::string& path) {
  const std::string text = read_text_file(path);
  std::vector<TrialPair> trials;
  std::istringstream lines(text);
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(lines, line)) {
    ++line_no;
    if (line.empty()) continue;
    std::istringstream fields(line);
    std::string label, enroll, test, extra;
    if (!(fields >> label >> enroll >> test) || (fields >> extra))
      throw DataError(path + " line " + std::to_string(line_no) +
                      ": expected '<0|1> <enroll-id> <test-id>'");
    if (label != "0" && label != "1")
      throw DataError(path + " line " + std::to_string(line_no) + ": label must be 0 or 1, got '" +
                      label + "'");
    trials.push_back({label == "1", std::move(enroll), std::move(test)});
  }
  return trials;
}

void write_trials(const std::string& path, std::span<const TrialPair> trials) {
  std::string out;
  for (const TrialPair& t : trials) {
    out += t.target ? '1' : '0';
    out += ' ';
    out += t.enroll_id;
    out += ' ';
    out += t.test_id;
    out += '\n';
  }
  write_text_file(path, out);
}

void write_scores(const std::string& path, std::span<const ScoredTrial> trials) {
  std::string out;
  char buf[64];
  for (const ScoredTrial& s : trials) {
    std::snprintf(buf, sizeof(buf), "%.6f", s.score);
    out += s.trial.enroll_id;
    out += '\t';
    out += s.trial.test_id;
    out += '\t';
    out += buf;
    out += '\t';
    out += s.trial.target ? '1' : '0';
    out += '\n';
  }
  write_text_file(path, out);
}

TrialRunResult run_trials(const StudentNet& net, const FeatureArchive& archive,
                          std::span<const TrialPair> trials, ThreadPool* pool) {
  if (trials.empty()) throw DataError("empty trial list");
  const std::vector<std::string> ids = unique_trial_ids(trials);
  std::vector<std::string> missing;
  for (const std::string& id : ids)
    if (!archive.find(id)) missing.push_back(id);
  check_ids_present(ids, missing, "the feature archive");

  std::vector<EmbeddingVector> embeddings(ids.size());
  auto extract = [&](std::size_t i) {
    const FeatureMatrix& f = *archive.find(ids[i]);
    embeddings[i] = length_normalize(net.forward(f.frames));
  };
  if (pool)
    pool->parallel_for(ids.size(), extract);
  else
    for (std::size_t i = 0; i < ids.size(); ++i) extract(i);

  std::unordered_map<std::string, EmbeddingVector> table;
  table.reserve(ids.size());
  for (std::size_t i = 0; i < ids.size(); ++i) table.emplace(ids[i], std::move(embeddings[i]));
  return score_with_table(table, trials);
}

TrialRunResult run_trials_on_store(const TeacherStore& store,
                                   std::span<const TrialPair> trials) {
  if (trials.empty()) throw DataError("empty trial list");
  const std::vector<std::string> ids = unique_trial_ids(trials);
  std::vector<std::string> missing;
  for (const std::string& id : ids)
    if (!store.find(id)) missing.push_back(id);
  check_ids_present(ids, missing, "the embedding store");

  std::unordered_map<std::string, EmbeddingVector> table;
  table.reserve(ids.size());
  for (const std::string& id : ids) table.emplace(id, length_normalize(*store.find(id)));
  return score_with_table(table, trials);
}

}  // namespace distillkit
