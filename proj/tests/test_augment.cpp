// distillkit/test_augment.cpp

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

#include <cstddef>
#include <vector>

#include "distillkit/augment.hpp"
#include "distillkit/error.hpp"
#include "distillkit/rng.hpp"

using namespace distillkit;

namespace {

FeatureMatrix make_feats(std::size_t n, std::size_t dim, std::uint64_t seed = 1) {
  FeatureMatrix f;
  f.frames = Matf(n, dim);
  f.frame_shift_s = 0.01f;
  Rng rng(seed);
  for (float& v : f.frames.storage()) v = static_cast<float>(rng.uniform(-2.0, 2.0));
  return f;
}

/// Fills row t with the value t so provenance of each output row is visible.
FeatureMatrix make_indexed(std::size_t n, std::size_t dim) {
  FeatureMatrix f;
  f.frames = Matf(n, dim);
  f.frame_shift_s = 0.01f;
  for (std::size_t t = 0; t < n; ++t)
    for (std::size_t d = 0; d < dim; ++d) f.frames(t, d) = static_cast<float>(t);
  return f;
}

}  // namespace

TEST_CASE("crop_rows copies a contiguous window") {
  const FeatureMatrix f = make_indexed(10, 3);
  const FeatureMatrix c = crop_rows(f, 4, 5);
  REQUIRE(c.num_frames() == 5);
  CHECK(c.dim() == 3);
  for (std::size_t t = 0; t < 5; ++t) CHECK(c.frames(t, 0) == static_cast<float>(4 + t));
}

TEST_CASE("crop longer than the input tiles it cyclically") {
  const FeatureMatrix f = make_indexed(100, 2);
  const FeatureMatrix c = crop_rows(f, 0, 250);
  REQUIRE(c.num_frames() == 250);
  for (std::size_t t = 0; t < 250; ++t) {
    CHECK(c.frames(t, 0) == static_cast<float>(t % 100));
  }
}

TEST_CASE("cyclic tiling respects a nonzero start") {
  const FeatureMatrix f = make_indexed(7, 1);
  const FeatureMatrix c = crop_rows(f, 5, 10);
  for (std::size_t t = 0; t < 10; ++t) {
    CHECK(c.frames(t, 0) == static_cast<float>((5 + t) % 7));
  }
}

TEST_CASE("random_crop lands inside the configured length range") {
  AugmentConfig cfg;  // 2.0 - 3.0 s at 10 ms shift: 200 - 300 frames
  const FeatureMatrix f = make_feats(400, 4);
  Rng rng(5);
  for (int i = 0; i < 50; ++i) {
    const FeatureMatrix c = random_crop(f, cfg, rng);
    CHECK(c.num_frames() >= 200);
    CHECK(c.num_frames() <= 300);
    CHECK(c.dim() == 4);
  }
}

TEST_CASE("random_crop of a short utterance starts at frame zero and tiles") {
  AugmentConfig cfg;
  const FeatureMatrix f = make_indexed(150, 1);  // shorter than every crop
  Rng rng(6);
  const FeatureMatrix c = random_crop(f, cfg, rng);
  REQUIRE(c.num_frames() >= 200);
  for (std::size_t t = 0; t < c.num_frames(); ++t) {
    CHECK(c.frames(t, 0) == static_cast<float>(t % 150));
  }
}

TEST_CASE("freq mask zeroes exactly the addressed columns") {
  FeatureMatrix f = make_feats(6, 20);
  const Matf before = f.frames;
  apply_freq_mask(f.frames, 10, 5);
  for (std::size_t t = 0; t < 6; ++t) {
    for (std::size_t d = 0; d < 20; ++d) {
      if (d >= 10 && d <= 14) {
        CHECK(f.frames(t, d) == 0.0f);
      } else {
        CHECK(f.frames(t, d) == before(t, d));
      }
    }
  }
}

TEST_CASE("time mask zeroes exactly the addressed rows") {
  FeatureMatrix f = make_feats(10, 4);
  const Matf before = f.frames;
  apply_time_mask(f.frames, 3, 4);
  for (std::size_t t = 0; t < 10; ++t) {
    for (std::size_t d = 0; d < 4; ++d) {
      if (t >= 3 && t <= 6) {
        CHECK(f.frames(t, d) == 0.0f);
      } else {
        CHECK(f.frames(t, d) == before(t, d));
      }
    }
  }
}

TEST_CASE("mask helpers clip out-of-range requests instead of crashing") {
  FeatureMatrix f = make_feats(5, 8);
  apply_freq_mask(f.frames, 6, 50);   // runs off the right edge
  apply_freq_mask(f.frames, -3, 2);   // entirely left of the matrix
  apply_time_mask(f.frames, 4, 99);
  CHECK(f.frames(4, 7) == 0.0f);
  CHECK(f.frames(0, 6) == 0.0f);
}

TEST_CASE("zero-width masks change nothing") {
  FeatureMatrix f = make_feats(5, 8);
  const Matf before = f.frames;
  apply_freq_mask(f.frames, 3, 0);
  apply_time_mask(f.frames, 2, 0);
  CHECK(f.frames == before);
}

TEST_CASE("identity configuration returns the input bit-for-bit") {
  AugmentConfig cfg;
  cfg.n_freq_masks = 0;
  cfg.n_time_masks = 0;
  cfg.max_warp_frames = 0;
  const FeatureMatrix f = make_feats(50, 12);
  Rng rng(9);
  AugmentStats stats;
  const FeatureMatrix out = spec_augment(f, cfg, rng, &stats);
  CHECK(out.frames == f.frames);
  CHECK(stats.warp_applied == 0);
  CHECK(stats.warp_skipped_short == 0);
}

TEST_CASE("warp preserves shape and endpoints") {
  const FeatureMatrix f = make_feats(40, 6, 11);
  const Matf warped = time_warp(f.frames, 20, 23);
  REQUIRE(warped.rows() == 40);
  REQUIRE(warped.cols() == 6);
  for (std::size_t d = 0; d < 6; ++d) {
    CHECK(warped(0, d) == f.frames(0, d));
    CHECK(warped(39, d) == f.frames(39, d));
  }
  // The pivot destination holds the pivot source frame exactly.
  for (std::size_t d = 0; d < 6; ++d) CHECK(warped(23, d) == doctest::Approx(f.frames(20, d)));
}

TEST_CASE("warp on a monotone ramp stays monotone") {
  const FeatureMatrix f = make_indexed(30, 1);
  const Matf warped = time_warp(f.frames, 10, 15);
  for (std::size_t t = 1; t < 30; ++t) CHECK(warped(t, 0) >= warped(t - 1, 0));
}

TEST_CASE("warp rejects boundary pivots") {
  const FeatureMatrix f = make_feats(20, 2);
  CHECK_THROWS_AS(time_warp(f.frames, 0, 5), UsageError);
  CHECK_THROWS_AS(time_warp(f.frames, 5, 19), UsageError);
}

TEST_CASE("spec_augment keeps the input shape") {
  AugmentConfig cfg;
  const FeatureMatrix f = make_feats(64, 80);
  Rng rng(13);
  for (int i = 0; i < 20; ++i) {
    const FeatureMatrix out = spec_augment(f, cfg, rng);
    CHECK(out.num_frames() == 64);
    CHECK(out.dim() == 80);
  }
}

TEST_CASE("spec_augment skips the warp on short inputs but still masks") {
  AugmentConfig cfg;  // max_warp_frames 5 needs >= 12 frames
  const FeatureMatrix f = make_feats(8, 10);
  Rng rng(17);
  AugmentStats stats;
  const FeatureMatrix out = spec_augment(f, cfg, rng, &stats);
  CHECK(stats.warp_skipped_short == 1);
  CHECK(stats.warp_applied == 0);
  CHECK(out.num_frames() == 8);
}

TEST_CASE("spec_augment is reproducible for a fixed stream") {
  AugmentConfig cfg;
  const FeatureMatrix f = make_feats(60, 30, 21);
  Rng a = Rng::derive(7, {rng_stream::kAugment, 3, 41});
  Rng b = Rng::derive(7, {rng_stream::kAugment, 3, 41});
  const FeatureMatrix out_a = spec_augment(f, cfg, a);
  const FeatureMatrix out_b = spec_augment(f, cfg, b);
  CHECK(out_a.frames == out_b.frames);
  Rng c = Rng::derive(7, {rng_stream::kAugment, 3, 42});
  const FeatureMatrix out_c = spec_augment(f, cfg, c);
  CHECK(out_a.frames != out_c.frames);
}

TEST_CASE("time masks never exceed the per-utterance fraction cap") {
  AugmentConfig cfg;
  cfg.n_freq_masks = 0;
  cfg.max_warp_frames = 0;
  cfg.n_time_masks = 1;
  cfg.max_time_mask_frames = 1000;   // only the fraction cap binds
  cfg.time_mask_fraction = 0.10;
  FeatureMatrix f = make_feats(50, 3);
  for (float& v : f.frames.storage()) v = 1.0f;  // nonzero so masks are countable
  Rng rng(23);
  for (int i = 0; i < 40; ++i) {
    const FeatureMatrix out = spec_augment(f, cfg, rng);
    int masked = 0;
    for (std::size_t t = 0; t < out.num_frames(); ++t) {
      if (out.frames(t, 0) == 0.0f) ++masked;
    }
    CHECK(masked <= 5);  // floor(0.10 * 50)
  }
}

TEST_CASE("augment configuration bounds are enforced") {
  AugmentConfig cfg;
  cfg.crop_min_s = 3.0;
  cfg.crop_max_s = 2.0;
  CHECK_THROWS_AS(cfg.validate(), UsageError);
  cfg = AugmentConfig{};
  cfg.n_freq_masks = -1;
  CHECK_THROWS_AS(cfg.validate(), UsageError);
  cfg = AugmentConfig{};
  cfg.time_mask_fraction = 1.5;
  CHECK_THROWS_AS(cfg.validate(), UsageError);
}
