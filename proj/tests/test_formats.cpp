// distillkit/test_formats.cpp

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

#include <cmath>
#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "distillkit/error.hpp"
#include "distillkit/feature_archive.hpp"
#include "distillkit/rng.hpp"
#include "distillkit/teacher_store.hpp"
#include "distillkit/wav.hpp"
#include "test_util.hpp"

using namespace distillkit;
using testutil::TempDir;

namespace {

TeacherStore make_store() {
  TeacherStore store;
  Rng rng(17);
  const std::vector<std::string> ids = {"spk000_utt0000", "b", "utt_\xE6\x97\xA5\xE6\x9C\xAC"};
  for (const auto& id : ids) {
    EmbeddingVector e(8);
    for (float& v : e) v = static_cast<float>(rng.uniform(-1.0, 1.0));
    store.add(id, std::move(e));
  }
  return store;
}

FeatureArchive make_archive() {
  FeatureArchive archive;
  Rng rng(19);
  int t = 3;
  for (const std::string& id : {"utt_a", "utt_bb", "utt_ccc"}) {
    FeatureMatrix f;
    f.frames = Matf(t, 5);
    for (float& v : f.frames.storage()) v = static_cast<float>(rng.uniform(-4.0, 4.0));
    archive.add(id, std::move(f));
    t += 7;
  }
  return archive;
}

}  // namespace

TEST_CASE("embedding store round-trips bit-exactly") {
  TempDir tmp;
  const TeacherStore store = make_store();
  const std::string path = tmp.file("t.emb1");
  write_teacher_store(path, store);
  const TeacherStore back = read_teacher_store(path);
  REQUIRE(back.size() == store.size());
  CHECK(back.dim() == store.dim());
  CHECK(back.ids() == store.ids());
  for (const auto& id : store.ids()) {
    REQUIRE(back.find(id) != nullptr);
    CHECK(*back.find(id) == *store.find(id));  // exact float equality
  }
}

TEST_CASE("embedding store file size matches the layout") {
  TempDir tmp;
  const TeacherStore store = make_store();
  const std::string path = tmp.file("t.emb1");
  write_teacher_store(path, store);
  std::size_t expect = 4 + 4 + 4;
  for (const auto& id : store.ids()) expect += 2 + id.size() + 4 + 4 * store.dim();
  CHECK(std::filesystem::file_size(path) == expect);
}

TEST_CASE("embedding store writes are atomic: no tmp file left behind") {
  TempDir tmp;
  const std::string path = tmp.file("t.emb1");
  write_teacher_store(path, make_store());
  CHECK(std::filesystem::exists(path));
  std::size_t entries = 0;
  for (const auto& e : std::filesystem::directory_iterator(tmp.path())) {
    (void)e;
    ++entries;
  }
  CHECK(entries == 1);
}

TEST_CASE("embedding store rejects bad magic at offset 0") {
  TempDir tmp;
  const std::string path = tmp.file("t.emb1");
  write_teacher_store(path, make_store());
  testutil::corrupt_byte(path, 1, 'X');
  try {
    read_teacher_store(path);
    FAIL("expected FormatError");
  } catch (const FormatError& e) {
    CHECK(e.byte_offset() == 0);
    CHECK(std::string(e.what()).find("magic") != std::string::npos);
  }
}

TEST_CASE("embedding store reports truncation inside a record") {
  TempDir tmp;
  const std::string path = tmp.file("t.emb1");
  write_teacher_store(path, make_store());
  const auto full = std::filesystem::file_size(path);
  testutil::truncate_file(path, full - 5);
  try {
    read_teacher_store(path);
    FAIL("expected FormatError");
  } catch (const FormatError& e) {
    CHECK(e.byte_offset() <= full - 5);
    CHECK(std::string(e.what()).find("byte offset") != std::string::npos);
  }
}

TEST_CASE("embedding store rejects a record whose dim disagrees with the header") {
  TempDir tmp;
  const std::string path = tmp.file("t.emb1");
  const TeacherStore store = make_store();
  write_teacher_store(path, store);
  // First record: header(12) + idlen(2) + id, then the record dim field.
  const std::size_t dim_off = 12 + 2 + store.ids()[0].size();
  testutil::corrupt_byte(path, dim_off, 9);
  try {
    read_teacher_store(path);
    FAIL("expected FormatError");
  } catch (const FormatError& e) {
    CHECK(e.byte_offset() == dim_off);
    CHECK(std::string(e.what()).find("dimension") != std::string::npos);
  }
}

TEST_CASE("embedding store rejects non-finite values at the exact position") {
  TempDir tmp;
  const std::string path = tmp.file("t.emb1");
  const TeacherStore store = make_store();
  write_teacher_store(path, store);
  // Third value of the first record; 0x7FC00000 is a quiet NaN.
  const std::size_t value_off = 12 + 2 + store.ids()[0].size() + 4 + 2 * 4;
  auto bytes = testutil::read_binary(path);
  bytes[value_off + 0] = 0x00;
  bytes[value_off + 1] = 0x00;
  bytes[value_off + 2] = 0xC0;
  bytes[value_off + 3] = 0x7F;
  testutil::write_binary(path, bytes);
  try {
    read_teacher_store(path);
    FAIL("expected FormatError");
  } catch (const FormatError& e) {
    CHECK(e.byte_offset() == value_off);
    CHECK(std::string(e.what()).find("non-finite") != std::string::npos);
  }
}

TEST_CASE("embedding store rejects trailing bytes") {
  TempDir tmp;
  const std::string path = tmp.file("t.emb1");
  write_teacher_store(path, make_store());
  auto bytes = testutil::read_binary(path);
  const std::size_t end = bytes.size();
  bytes.push_back(0xAB);
  testutil::write_binary(path, bytes);
  try {
    read_teacher_store(path);
    FAIL("expected FormatError");
  } catch (const FormatError& e) {
    CHECK(e.byte_offset() == end);
  }
}

TEST_CASE("embedding store add() rejects duplicates and dimension changes") {
  TeacherStore store;
  store.add("a", {1.0f, 2.0f});
  CHECK_THROWS_AS(store.add("a", {3.0f, 4.0f}), DataError);
  CHECK_THROWS_AS(store.add("b", {1.0f, 2.0f, 3.0f}), DataError);
  CHECK_THROWS_AS(store.add("c", {}), DataError);
}

TEST_CASE("empty embedding store round-trips") {
  TempDir tmp;
  const std::string path = tmp.file("empty.emb1");
  write_teacher_store(path, TeacherStore());
  const TeacherStore back = read_teacher_store(path);
  CHECK(back.size() == 0);
}

TEST_CASE("feature archive round-trips bit-exactly") {
  TempDir tmp;
  const FeatureArchive archive = make_archive();
  const std::string path = tmp.file("f.ftr1");
  write_feature_archive(path, archive);
  const FeatureArchive back = read_feature_archive(path);
  REQUIRE(back.size() == archive.size());
  CHECK(back.ids() == archive.ids());
  for (std::size_t i = 0; i < archive.size(); ++i) {
    CHECK(back.features(i).frames == archive.features(i).frames);
  }
}

TEST_CASE("feature archive file size matches the layout") {
  TempDir tmp;
  const FeatureArchive archive = make_archive();
  const std::string path = tmp.file("f.ftr1");
  write_feature_archive(path, archive);
  std::size_t expect = 4 + 4;
  for (std::size_t i = 0; i < archive.size(); ++i) {
    expect += 2 + archive.ids()[i].size() + 4 + 4 +
              4 * archive.features(i).num_frames() * archive.features(i).dim();
  }
  CHECK(std::filesystem::file_size(path) == expect);
}

TEST_CASE("feature archive rejects bad magic, truncation, and trailing bytes") {
  TempDir tmp;
  const std::string path = tmp.file("f.ftr1");
  write_feature_archive(path, make_archive());

  SUBCASE("magic") {
    testutil::corrupt_byte(path, 0, 'Z');
    try {
      read_feature_archive(path);
      FAIL("expected FormatError");
    } catch (const FormatError& e) {
      CHECK(e.byte_offset() == 0);
    }
  }
  SUBCASE("truncation") {
    testutil::truncate_file(path, std::filesystem::file_size(path) - 3);
    CHECK_THROWS_AS(read_feature_archive(path), FormatError);
  }
  SUBCASE("trailing") {
    auto bytes = testutil::read_binary(path);
    bytes.push_back(0x01);
    testutil::write_binary(path, bytes);
    CHECK_THROWS_AS(read_feature_archive(path), FormatError);
  }
}

TEST_CASE("feature archive rejects non-finite values with the value offset") {
  TempDir tmp;
  const FeatureArchive archive = make_archive();
  const std::string path = tmp.file("f.ftr1");
  write_feature_archive(path, archive);
  // Second value of the first record: header(8) + idlen(2) + id + T(4) + D(4).
  const std::size_t value_off = 8 + 2 + archive.ids()[0].size() + 4 + 4 + 1 * 4;
  auto bytes = testutil::read_binary(path);
  bytes[value_off + 0] = 0x00;
  bytes[value_off + 1] = 0x00;
  bytes[value_off + 2] = 0x80;
  bytes[value_off + 3] = 0x7F;  // +inf
  testutil::write_binary(path, bytes);
  try {
    read_feature_archive(path);
    FAIL("expected FormatError");
  } catch (const FormatError& e) {
    CHECK(e.byte_offset() == value_off);
  }
}

TEST_CASE("feature archive guards duplicate ids and missing files") {
  FeatureArchive archive;
  FeatureMatrix f;
  f.frames = Matf(2, 2);
  archive.add("x", f);
  CHECK_THROWS_AS(archive.add("x", f), DataError);
  CHECK(archive.find("nope") == nullptr);
  CHECK_THROWS_AS(read_feature_archive("/nonexistent/path.ftr1"), Error);
}

TEST_CASE("wav round-trips 16-bit PCM within quantization error") {
  TempDir tmp;
  Waveform wav;
  wav.sample_rate = 16000;
  Rng rng(23);
  wav.samples.resize(1600);
  for (float& s : wav.samples) s = static_cast<float>(rng.uniform(-0.9, 0.9));
  const std::string path = tmp.file("a.wav");
  write_wav(path, wav);
  const Waveform back = read_wav(path);
  REQUIRE(back.samples.size() == wav.samples.size());
  CHECK(back.sample_rate == wav.sample_rate);
  for (std::size_t i = 0; i < wav.samples.size(); ++i) {
    CHECK(std::abs(back.samples[i] - wav.samples[i]) <= 1.0f / 32767.0f + 1e-7f);
  }
}

TEST_CASE("wav reader rejects missing data chunk and non-riff input") {
  TempDir tmp;
  const std::string path = tmp.file("bad.wav");
  testutil::write_binary(path, {'R', 'I', 'F', 'X', 0, 0, 0, 0});
  CHECK_THROWS_AS(read_wav(path), FormatError);
}
