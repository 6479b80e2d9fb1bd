// distillkit/bench_main.cpp

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

#include <benchmark/benchmark.h>

#include <vector>

#include "distillkit/eval.hpp"
#include "distillkit/fbank.hpp"
#include "distillkit/losses.hpp"
#include "distillkit/rng.hpp"
#include "distillkit/student_net.hpp"
#include "distillkit/types.hpp"

namespace {

using namespace distillkit;

Waveform make_waveform(double seconds) {
  Rng rng(11);
  Waveform wav;
  wav.samples.resize(static_cast<std::size_t>(seconds * wav.sample_rate));
  for (float& s : wav.samples) s = static_cast<float>(rng.uniform(-0.5, 0.5));
  return wav;
}

Matf make_frames(std::size_t n_frames, std::size_t dim, std::uint64_t seed) {
  Rng rng(seed);
  Matf m(n_frames, dim);
  for (float& v : m.storage()) v = static_cast<float>(rng.uniform(-1.0, 1.0));
  return m;
}

void BM_Fbank10s(benchmark::State& state) {
  const Waveform wav = make_waveform(10.0);
  const FbankConfig cfg;
  for (auto _ : state) {
    benchmark::DoNotOptimize(compute_fbank(wav, cfg));
  }
}
BENCHMARK(BM_Fbank10s)->Unit(benchmark::kMillisecond);

void BM_StudentForward(benchmark::State& state, const char* preset) {
  Rng rng(3);
  StudentNet net(NetConfig::preset(preset), rng);
  const Matf input = make_frames(998, 80, 5);
  for (auto _ : state) {
    benchmark::DoNotOptimize(net.forward(input));
  }
}
BENCHMARK_CAPTURE(BM_StudentForward, tdnn_small, "tdnn-small")->Unit(benchmark::kMillisecond);
BENCHMARK_CAPTURE(BM_StudentForward, tdnn_tiny, "tdnn-tiny")->Unit(benchmark::kMillisecond);

void BM_StudentForwardBackward(benchmark::State& state, const char* preset) {
  Rng rng(3);
  StudentNet net(NetConfig::preset(preset), rng);
  const Matf input = make_frames(298, 80, 5);
  const std::vector<float> grad_out(net.config().embedding_dim, 0.01f);
  for (auto _ : state) {
    ForwardTape tape;
    benchmark::DoNotOptimize(net.forward(input, &tape));
    benchmark::DoNotOptimize(net.backward(tape, grad_out));
  }
}
BENCHMARK_CAPTURE(BM_StudentForwardBackward, tdnn_small, "tdnn-small")
    ->Unit(benchmark::kMillisecond);
BENCHMARK_CAPTURE(BM_StudentForwardBackward, tdnn_tiny, "tdnn-tiny")
    ->Unit(benchmark::kMillisecond);

void BM_ContrastiveLoss(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  EmbeddingBatchT<float> batch;
  batch.teacher = make_frames(n, 256, 21);
  batch.student = make_frames(n, 256, 22);
  const ContrastiveConfig cfg;
  for (auto _ : state) {
    benchmark::DoNotOptimize(contrastive_loss(batch, cfg));
  }
}
BENCHMARK(BM_ContrastiveLoss)->Arg(64)->Arg(256)->Unit(benchmark::kMicrosecond);

void BM_Eer(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  Rng rng(9);
  std::vector<ScoredTrial> trials(n);
  for (std::size_t i = 0; i < n; ++i) {
    trials[i].trial.target = (i % 2) == 0;
    trials[i].score = rng.uniform(-1.0, 1.0) + (trials[i].trial.target ? 0.3 : 0.0);
  }
  for (auto _ : state) {
    benchmark::DoNotOptimize(compute_eer(trials));
  }
}
BENCHMARK(BM_Eer)->Arg(2000)->Arg(20000)->Unit(benchmark::kMicrosecond);

}  // namespace

BENCHMARK_MAIN();
